"""Normal-ordered differential operators in three commuting coordinates.

An operator is a finite sum of ``c * x^a d^b`` with all coordinates to the
left of all derivatives. Coefficients may come from any commutative ring
that supports ``+``, ``*`` and truthiness (Gaussian rationals, theta series,
plain complex numbers for numeric work).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Mapping

from .scalars import GaussianRational, ThetaSeries, format_term, join_terms
from .textparse import evaluate

__all__ = [
    "DiffOp",
    "CoordPoly",
    "stirling2",
    "power_of_M",
    "m_polynomial_to_op",
    "apply_to_monomial",
    "COORDS",
    "DERIVS",
]

COORDS = ("x1", "x2", "x3")
DERIVS = ("d1", "d2", "d3")

Mono = tuple[int, int, int, int, int, int]


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def _reorder_weights(b: int, a: int) -> tuple[tuple[int, int], ...]:
    # d^b x^a = sum_j C(a,j) C(b,j) j! x^(a-j) d^(b-j)
    return tuple(
        (j, math.comb(a, j) * math.comb(b, j) * math.factorial(j))
        for j in range(min(a, b) + 1)
    )


def _mono_key(m: Mono):
    return (sum(m), tuple(-e for e in m))


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def _mono_factors(m: Mono) -> list[str]:
    names = COORDS + DERIVS
    return [_power(n, e) for n, e in zip(names, m) if e]


def _coef_texts(c, suffix: list[str]) -> list[str]:
    if hasattr(c, "term_texts"):
        return c.term_texts(suffix=suffix)
    if isinstance(c, (int, Fraction, GaussianRational)):
        return [format_term(GaussianRational.coerce(c), suffix)]
    body = "*".join(suffix)
    return [f"({c!r})" + ("*" + body if body else "")]


class DiffOp:
    """Normal-ordered differential operator ``sum c * x^a d^b``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Mono, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != 6 or any(e < 0 for e in m):
                raise ValueError(f"bad monomial {m}")
            if c:
                clean[tuple(m)] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def scalar(cls, c) -> DiffOp:
        return cls({(0,) * 6: c})

    @classmethod
    def identity(cls, one=None) -> DiffOp:
        return cls.scalar(GaussianRational(1) if one is None else one)

    @classmethod
    def coordinate(cls, j: int, one=None) -> DiffOp:
        m = [0] * 6
        m[j - 1] = 1
        return cls({tuple(m): GaussianRational(1) if one is None else one})

    @classmethod
    def derivative(cls, j: int, one=None) -> DiffOp:
        m = [0] * 6
        m[3 + j - 1] = 1
        return cls({tuple(m): GaussianRational(1) if one is None else one})

    @classmethod
    def monomial(cls, a: tuple[int, int, int], b: tuple[int, int, int], coef=None) -> DiffOp:
        return cls({tuple(a) + tuple(b): GaussianRational(1) if coef is None else coef})

    @property
    def terms(self) -> Mapping[Mono, object]:
        return self._terms

    def items(self) -> Iterator[tuple[Mono, object]]:
        return iter(sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0])))

    def coefficient(self, a=(0, 0, 0), b=(0, 0, 0), default=None):
        return self._terms.get(tuple(a) + tuple(b), default)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._terms.keys() == other._terms.keys() and all(
            self._terms[m] == other._terms[m] for m in self._terms
        )

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # additive structure ---------------------------------------------------------
    def _as_op(self, other):
        if isinstance(other, DiffOp):
            return other
        return DiffOp.scalar(other)

    def __add__(self, other):
        other = self._as_op(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return DiffOp(terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._as_op(other))

    def __rsub__(self, other):
        return self._as_op(other) - self

    def scale(self, c) -> DiffOp:
        return DiffOp({m: v * c for m, v in self._terms.items()})

    # composition -----------------------------------------------------------------
    def compose(self, other: DiffOp) -> DiffOp:
        """Normal-ordered product ``self o other`` (``other`` acts first)."""
        acc: dict[Mono, object] = {}
        for m1, c1 in self._terms.items():
            a1, b1 = m1[:3], m1[3:]
            for m2, c2 in other._terms.items():
                a2, b2 = m2[:3], m2[3:]
                c12 = c1 * c2
                per_coord = [_reorder_weights(b1[k], a2[k]) for k in range(3)]
                for j1, w1 in per_coord[0]:
                    for j2, w2 in per_coord[1]:
                        for j3, w3 in per_coord[2]:
                            js = (j1, j2, j3)
                            m = tuple(a1[k] + a2[k] - js[k] for k in range(3)) + tuple(
                                b1[k] - js[k] + b2[k] for k in range(3)
                            )
                            w = w1 * w2 * w3
                            t = c12 * w if w != 1 else c12
                            acc[m] = acc[m] + t if m in acc else t
        return DiffOp(acc)

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return self.compose(other)
        return self.scale(other)

    def __rmul__(self, other):
        return DiffOp({m: other * v for m, v in self._terms.items()})

    def __pow__(self, n: int) -> DiffOp:
        if n < 0:
            raise ValueError("negative operator powers are undefined")
        one = next(iter(self._terms.values()), GaussianRational(1))
        result = DiffOp.identity(_one_like(one))
        for _ in range(n):
            result = result.compose(self)
        return result

    # coefficient maps --------------------------------------------------------------
    def map_coefficients(self, fn: Callable) -> DiffOp:
        return DiffOp({m: fn(c) for m, c in self._terms.items()})

    def truncate(self, order: int) -> DiffOp:
        return self.map_coefficients(lambda c: c.truncate(order))

    def numeric(self, theta: complex, **params) -> DiffOp:
        """Substitute numbers for theta and the parameters."""

        def ev(c):
            if isinstance(c, ThetaSeries):
                return c.evaluate(theta, **params)
            if hasattr(c, "evaluate"):
                return c.evaluate(**params)
            return complex(c)

        return self.map_coefficients(ev)

    # action on polynomials -----------------------------------------------------------
    def apply(self, poly: CoordPoly) -> CoordPoly:
        out: dict[tuple[int, int, int], object] = {}
        for m, c in self._terms.items():
            a, b = m[:3], m[3:]
            for (p, q, r), v in poly.terms.items():
                exps = (p, q, r)
                if any(b[k] > exps[k] for k in range(3)):
                    continue
                w = 1
                for k in range(3):
                    w *= math.perm(exps[k], b[k])
                new = tuple(exps[k] - b[k] + a[k] for k in range(3))
                t = c * v * w
                out[new] = out[new] + t if new in out else t
        return CoordPoly(out)

    # text ------------------------------------------------------------------------------
    def term_texts(self) -> list[str]:
        out = []
        for m, c in self.items():
            out.extend(_coef_texts(c, _mono_factors(m)))
        return out

    def __str__(self):
        return join_terms(self.term_texts())

    def __repr__(self):
        return f"DiffOp({str(self)!r})"

    @classmethod
    def parse(cls, text: str, order: int | None = None, ring=None) -> DiffOp:
        """Parse the canonical text form.

        With ``order`` the coefficients are theta series of that order over
        ``ring`` (``ParamPoly`` by default); otherwise Gaussian rationals.
        """
        if order is None:
            one = GaussianRational(1)
            lift = lambda x: DiffOp.scalar(GaussianRational(x))  # noqa: E731
            scalars = {"i": DiffOp.scalar(GaussianRational(0, 1))}
        else:
            from .scalars import ParamPoly

            ring = ring or ParamPoly
            one = ThetaSeries.const(ring.one(), order)
            lift = lambda x: DiffOp.scalar(ThetaSeries.const(ring.const(x), order))  # noqa: E731
            scalars = {
                name: DiffOp.scalar(ThetaSeries.const(v, order))
                for name, v in ring.symbols().items()
            }
            theta = ThetaSeries.theta(order, ring.one()) if order else ThetaSeries.const(ring.zero(), order)
            scalars["theta"] = DiffOp.scalar(theta)
        symbols = dict(scalars)
        for j in (1, 2, 3):
            symbols[f"x{j}"] = DiffOp.coordinate(j, one)
            symbols[f"d{j}"] = DiffOp.derivative(j, one)
        return evaluate(text, symbols, lift)


def _one_like(c):
    if isinstance(c, ThetaSeries):
        return ThetaSeries.one(c.order)
    if isinstance(c, complex):
        return 1 + 0j
    if isinstance(c, float):
        return 1.0
    return GaussianRational(1)


class CoordPoly:
    """Polynomial in ``x1, x2, x3`` with coefficients from any ring."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                clean[tuple(m)] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CoordPoly is immutable")

    @classmethod
    def monomial(cls, p: int = 0, q: int = 0, r: int = 0, coef=None) -> CoordPoly:
        return cls({(p, q, r): GaussianRational(1) if coef is None else coef})

    @classmethod
    def constant(cls, c) -> CoordPoly:
        return cls({(0, 0, 0): c})

    @property
    def terms(self):
        return self._terms

    def items(self):
        return iter(sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0]))))

    def coefficient(self, p=0, q=0, r=0, default=None):
        return self._terms.get((p, q, r), default)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, CoordPoly):
            return NotImplemented
        return self._terms.keys() == other._terms.keys() and all(
            self._terms[m] == other._terms[m] for m in self._terms
        )

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, CoordPoly):
            other = CoordPoly.constant(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return CoordPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return CoordPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CoordPoly):
            other = CoordPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return CoordPoly.constant(other) - self

    def __mul__(self, other):
        if isinstance(other, CoordPoly):
            out: dict = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                    t = c1 * c2
                    out[m] = out[m] + t if m in out else t
            return CoordPoly(out)
        return CoordPoly({m: c * other for m, c in self._terms.items()})

    def __rmul__(self, other):
        return CoordPoly({m: other * c for m, c in self._terms.items()})

    def diff(self, j: int) -> CoordPoly:
        """Partial derivative in coordinate ``j`` (1-based)."""
        k = j - 1
        out = {}
        for m, c in self._terms.items():
            if m[k]:
                new = list(m)
                new[k] -= 1
                out[tuple(new)] = c * m[k]
        return CoordPoly(out)

    def map_coefficients(self, fn) -> CoordPoly:
        return CoordPoly({m: fn(c) for m, c in self._terms.items()})

    def truncate(self, order: int) -> CoordPoly:
        return self.map_coefficients(lambda c: c.truncate(order))

    def evaluate(self, point: tuple[float, float, float], coef_eval=None) -> complex:
        total = 0j
        for (p, q, r), c in self._terms.items():
            v = coef_eval(c) if coef_eval is not None else complex(c)
            total += v * point[0] ** p * point[1] ** q * point[2] ** r
        return total

    def term_texts(self) -> list[str]:
        out = []
        for m, c in self.items():
            factors = [_power(n, e) for n, e in zip(COORDS, m) if e]
            out.extend(_coef_texts(c, factors))
        return out

    def __str__(self):
        return join_terms(self.term_texts())

    def __repr__(self):
        return f"CoordPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str, order: int, ring=None) -> CoordPoly:
        op = DiffOp.parse(text, order=order, ring=ring)
        if any(any(m[3:]) for m in op.terms):
            raise ValueError("derivatives are not allowed in a coordinate polynomial")
        return cls({m[:3]: c for m, c in op.terms.items()})


def power_of_M(j: int, n: int, one=None) -> DiffOp:
    """Normal-ordered ``(x_j d_j)^n = sum_k S(n,k) x_j^k d_j^k``."""
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    one = GaussianRational(1) if one is None else one
    terms = {}
    for k in range(n + 1):
        s = stirling2(n, k)
        if s:
            m = [0] * 6
            m[j - 1] = k
            m[3 + j - 1] = k
            terms[tuple(m)] = one * s
    return DiffOp(terms)


def m_polynomial_to_op(j: int, coeffs: Mapping[int, object]) -> DiffOp:
    """Convert ``sum_n c_n M_j^n`` to normal-ordered form."""
    terms: dict[Mono, object] = {}
    for n, c in coeffs.items():
        if not c:
            continue
        for k in range(n + 1):
            s = stirling2(n, k)
            if s:
                m = [0] * 6
                m[j - 1] = k
                m[3 + j - 1] = k
                key = tuple(m)
                t = c * s
                terms[key] = terms[key] + t if key in terms else t
    return DiffOp(terms)


def apply_to_monomial(op: DiffOp, p: int = 0, q: int = 0, r: int = 0) -> CoordPoly:
    return op.apply(CoordPoly.monomial(p, q, r))
