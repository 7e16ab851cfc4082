"""Exact coefficient rings.

Four rings live here:

* :class:`GaussianRational` -- ``a + b i`` with ``a, b`` rational.
* :class:`ParamPoly` -- polynomials in the physical parameters
  ``k1, k2, k3, hbar, m, omega, alpha``.
* :class:`LaurentQ` -- Laurent polynomials in ``q`` (with nonnegative powers
  of ``alpha``), the coefficients of the abstract algebra.
* :class:`ThetaSeries` -- power series in ``theta`` truncated at a fixed
  order ``D``; the coefficients come from one of the rings above.

Everything is immutable and exact. Text forms are canonical and parse back
with :func:`parse_scalar`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

from .textparse import evaluate

__all__ = [
    "GaussianRational",
    "SparsePoly",
    "ParamPoly",
    "LaurentQ",
    "ThetaSeries",
    "I",
    "NonInvertibleError",
    "NormalizationError",
    "OrderMismatchError",
    "theta_inverse",
    "theta_sqrt",
    "theta_exp",
    "format_term",
    "join_terms",
    "to_gaussian",
]


class OrderMismatchError(ValueError):
    """Two theta series with different truncation orders were combined."""


class NonInvertibleError(ZeroDivisionError):
    pass


class NormalizationError(ValueError):
    pass


# --------------------------------------------------------------------------
# Gaussian rationals
# --------------------------------------------------------------------------


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re: Rational | int | str = 0, im: Rational | int | str = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if n == 0:
            raise NonInvertibleError("zero has no inverse")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_term(self, [])


I = GaussianRational(0, 1)


def to_gaussian(value) -> GaussianRational:
    return GaussianRational.coerce(value)


# --------------------------------------------------------------------------
# text helpers
# --------------------------------------------------------------------------


def _frac_text(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"({x.numerator}/{x.denominator})"


def _coef_text(c: GaussianRational) -> tuple[str, bool]:
    """Return the coefficient text and whether it is a plain unit (+1)."""
    if c.im == 0:
        if c.re == 1:
            return "", True
        if c.re == -1:
            return "-", True
        return _frac_text(c.re), False
    if c.re == 0:
        if c.im == 1:
            return "i", False
        if c.im == -1:
            return "-i", False
        return _frac_text(c.im) + "*i", False
    im = c.im
    sign = "+" if im > 0 else "-"
    im_text = "i" if abs(im) == 1 else _frac_text(abs(im)) + "*i"
    return f"({_frac_text(c.re)} {sign} {im_text})", False


def format_term(coef: GaussianRational, factors: list[str]) -> str:
    """Canonical text of ``coef * factor_1 * factor_2 ...``.

    Negative fractions keep their sign inside the parentheses, e.g.
    ``(-3/8)*theta^2*k1*hbar``.
    """
    coef = GaussianRational.coerce(coef)
    text, unit = _coef_text(coef)
    if not factors:
        if unit:
            return "1" if text == "" else "-1"
        return text
    body = "*".join(factors)
    if unit:
        return text + body
    if text == "-i":
        return "-i*" + body
    return text + "*" + body


def join_terms(terms: Iterable[str]) -> str:
    out = ""
    for t in terms:
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out or "0"


def _power_text(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


# --------------------------------------------------------------------------
# sparse polynomials with a fixed variable order
# --------------------------------------------------------------------------


class SparsePoly:
    """Sparse polynomial over Gaussian rationals in a fixed set of variables.

    Subclasses set ``variables`` and ``laurent`` (indices of variables that
    may carry negative exponents). Zero coefficients are never stored.
    """

    variables: tuple[str, ...] = ()
    laurent: frozenset[int] = frozenset()
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], GaussianRational] = {}
        nvar = len(self.variables)
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvar:
                raise ValueError(f"monomial {mono} has wrong arity for {self.variables}")
            for idx, e in enumerate(mono):
                if e < 0 and idx not in self.laurent:
                    raise ValueError(f"negative exponent for {self.variables[idx]}")
            c = GaussianRational.coerce(c)
            if c:
                clean[mono] = clean.get(mono, GaussianRational()) + c
                if not clean[mono]:
                    del clean[mono]
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls.const(1)

    @classmethod
    def const(cls, c):
        return cls({(0,) * len(cls.variables): c})

    @classmethod
    def var(cls, name: str, power: int = 1):
        mono = [0] * len(cls.variables)
        mono[cls.variables.index(name)] = power
        return cls({tuple(mono): 1})

    @classmethod
    def monomial(cls, coef=1, **powers):
        mono = [0] * len(cls.variables)
        for name, e in powers.items():
            mono[cls.variables.index(name)] = e
        return cls({tuple(mono): coef})

    # access -----------------------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple[int, ...], GaussianRational]:
        return self._terms

    def items(self) -> Iterator[tuple[tuple[int, ...], GaussianRational]]:
        return iter(sorted(self._terms.items(), key=lambda kv: self._sort_key(kv[0])))

    @staticmethod
    def _sort_key(mono: tuple[int, ...]):
        return (-sum(mono), tuple(-e for e in mono))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * len(self.variables), GaussianRational())

    def coefficient(self, **powers) -> GaussianRational:
        mono = [0] * len(self.variables)
        for name, e in powers.items():
            mono[self.variables.index(name)] = e
        return self._terms.get(tuple(mono), GaussianRational())

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(m) for m in self._terms)
        idx = self.variables.index(name)
        return max(m[idx] for m in self._terms)

    def __len__(self):
        return len(self._terms)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if type(other) is type(self):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return type(self).const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, GaussianRational()) + c
        return type(self)(terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.coerce(other)
            return type(self)({m: c * v for m, v in self._terms.items()})
        if type(other) is not type(self):
            return NotImplemented
        terms: dict[tuple[int, ...], GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, GaussianRational()) + c1 * c2
        return type(self)(terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise NonInvertibleError("only monomials have inverse powers")
            ((mono, c),) = self._terms.items()
            inv = type(self)({tuple(-e for e in mono): c.inverse()})
            return inv ** (-n)
        result = type(self).one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = type(self).const(other)
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                h = hash(self.constant_term())
            else:
                h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return self._hash

    # evaluation -------------------------------------------------------------
    def substitute(self, **values):
        """Substitute exact values (Gaussian rationals) for some variables."""
        terms: dict[tuple[int, ...], GaussianRational] = {}
        idx = {self.variables.index(k): GaussianRational.coerce(v) for k, v in values.items()}
        for mono, c in self._terms.items():
            coef = c
            new = list(mono)
            for i, v in idx.items():
                coef = coef * v ** mono[i]
                new[i] = 0
            new = tuple(new)
            terms[new] = terms.get(new, GaussianRational()) + coef
        return type(self)(terms)

    def evaluate(self, **values) -> complex:
        total = 0j
        for mono, c in self._terms.items():
            v = complex(c)
            for name, e in zip(self.variables, mono):
                if e:
                    v *= complex(values[name]) ** e
            total += v
        return total

    def map_coefficients(self, fn):
        return type(self)({m: fn(c) for m, c in self._terms.items()})

    def real_part(self):
        """Real part assuming every variable is real."""
        return self.map_coefficients(lambda c: GaussianRational(c.re))

    def imag_part(self):
        return self.map_coefficients(lambda c: GaussianRational(c.im))

    # text ---------------------------------------------------------------------
    def factors(self, mono: tuple[int, ...]) -> list[str]:
        return [_power_text(n, e) for n, e in zip(self.variables, mono) if e]

    def term_texts(self, prefix: list[str] | None = None, suffix: list[str] | None = None) -> list[str]:
        return [
            format_term(c, (prefix or []) + self.factors(m) + (suffix or []))
            for m, c in self.items()
        ]

    def __str__(self):
        return join_terms(self.term_texts())

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    @classmethod
    def symbols(cls) -> dict[str, object]:
        table: dict[str, object] = {name: cls.var(name) for name in cls.variables}
        table["i"] = cls.const(I)
        return table

    @classmethod
    def parse(cls, text: str):
        return evaluate(text, cls.symbols(), cls.const)


class ParamPoly(SparsePoly):
    """Polynomial in the fixed physical parameter set."""

    variables = ("k1", "k2", "k3", "hbar", "m", "omega", "alpha")
    __slots__ = ()


class LaurentQ(SparsePoly):
    """Laurent polynomial in ``q`` with polynomial dependence on ``alpha``."""

    variables = ("q", "alpha")
    laurent = frozenset({0})
    __slots__ = ()

    @classmethod
    def q(cls, power: int = 1) -> LaurentQ:
        return cls({(power, 0): 1})

    @classmethod
    def alpha(cls, power: int = 1) -> LaurentQ:
        return cls({(0, power): 1})

    def specialize_q(self, value) -> LaurentQ:
        return self.substitute(q=value)


# --------------------------------------------------------------------------
# truncated theta series
# --------------------------------------------------------------------------


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction, GaussianRational, SparsePoly))


class ThetaSeries:
    """Power series ``c_0 + c_1 theta + ... + c_D theta^D`` modulo theta^(D+1).

    ``order`` is the truncation order ``D``; combining two series with a
    different ``order`` raises :class:`OrderMismatchError`.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        cs = list(coeffs)[: order + 1]
        zero = _zero_like(cs[0]) if cs else GaussianRational()
        while len(cs) < order + 1:
            cs.append(zero)
        cs = [GaussianRational.coerce(c) if isinstance(c, (int, Fraction)) else c for c in cs]
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ThetaSeries is immutable")

    @classmethod
    def const(cls, c, order: int) -> ThetaSeries:
        return cls([c], order)

    @classmethod
    def one(cls, order: int) -> ThetaSeries:
        return cls([GaussianRational(1)], order)

    @classmethod
    def zero(cls, order: int) -> ThetaSeries:
        return cls([GaussianRational()], order)

    @classmethod
    def theta(cls, order: int, coef=1) -> ThetaSeries:
        return cls([GaussianRational(), coef], order)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def _check(self, other: ThetaSeries) -> None:
        if other.order != self.order:
            raise OrderMismatchError(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def _coerce(self, other):
        if isinstance(other, ThetaSeries):
            self._check(other)
            return other
        if _is_scalar(other):
            return ThetaSeries.const(other, self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ThetaSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return ThetaSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ThetaSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return ThetaSeries([c * other for c in self.coeffs], self.order)
        if not isinstance(other, ThetaSeries):
            return NotImplemented
        self._check(other)
        d = self.order
        a, b = self.coeffs, other.coeffs
        nz_a = [n for n in range(d + 1) if a[n]]
        nz_b = [n for n in range(d + 1) if b[n]]
        out = [None] * (d + 1)
        for i in nz_a:
            for j in nz_b:
                if i + j > d:
                    break
                prod = a[i] * b[j]
                out[i + j] = prod if out[i + j] is None else out[i + j] + prod
        zero = _zero_like(a[0] * b[0])
        return ThetaSeries([zero if c is None else c for c in out], d)

    def __rmul__(self, other):
        if _is_scalar(other):
            return ThetaSeries([other * c for c in self.coeffs], self.order)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return theta_inverse(self) ** (-n)
        result = ThetaSeries.one(self.order)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other):
        if isinstance(other, ThetaSeries):
            return self * theta_inverse(other)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self * GaussianRational.coerce(other).inverse()
        return NotImplemented

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        if _is_scalar(other):
            other = ThetaSeries.const(other, self.order)
        if not isinstance(other, ThetaSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.order, self.coeffs)))
        return self._hash

    # order bookkeeping ---------------------------------------------------------
    def truncate(self, order: int) -> ThetaSeries:
        """Explicitly drop to a lower order (never raises the order)."""
        if order > self.order:
            raise OrderMismatchError("cannot raise truncation order")
        return ThetaSeries(self.coeffs[: order + 1], order)

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def map_coefficients(self, fn) -> ThetaSeries:
        return ThetaSeries([fn(c) for c in self.coeffs], self.order)

    def evaluate(self, theta: complex, **params) -> complex:
        total = 0j
        for n, c in enumerate(self.coeffs):
            if isinstance(c, SparsePoly):
                v = c.evaluate(**params)
            else:
                v = complex(c)
            total += v * theta**n
        return total

    # text -----------------------------------------------------------------------
    def term_texts(self, suffix: list[str] | None = None) -> list[str]:
        out = []
        for n, c in enumerate(self.coeffs):
            tfac = [] if n == 0 else [_power_text("theta", n)]
            if isinstance(c, SparsePoly):
                out.extend(c.term_texts(tfac, suffix))
            elif c:
                out.append(format_term(c, tfac + (suffix or [])))
        return out

    def __str__(self):
        return join_terms(self.term_texts())

    def to_text(self) -> str:
        """Canonical text including the truncation marker."""
        return f"{self} + O(theta^{self.order + 1})"

    def __repr__(self):
        return f"ThetaSeries({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, order: int | None = None, ring=ParamPoly) -> ThetaSeries:
        """Parse canonical text; ``O(theta^n)`` sets the order if present."""
        body, marker = _split_order_marker(text)
        if marker is not None:
            if order is not None and order != marker - 1:
                raise OrderMismatchError("text order disagrees with requested order")
            order = marker - 1
        if order is None:
            raise ValueError("truncation order missing")
        symbols: dict[str, object] = {}
        if ring is not None:
            for name, value in ring.symbols().items():
                symbols[name] = ThetaSeries.const(value, order)
            lift = lambda x: ThetaSeries.const(ring.const(x), order)  # noqa: E731
        else:
            symbols["i"] = ThetaSeries.const(I, order)
            lift = lambda x: ThetaSeries.const(GaussianRational(x), order)  # noqa: E731
        symbols["theta"] = ThetaSeries.theta(
            order, ring.one() if ring is not None else GaussianRational(1)
        ) if order >= 1 else ThetaSeries.zero(order)
        return evaluate(body, symbols, lift)


def _split_order_marker(text: str) -> tuple[str, int | None]:
    import re

    m = re.search(r"\+\s*O\(\s*theta\s*\^\s*(\d+)\s*\)\s*$", text)
    if m is None:
        m2 = re.fullmatch(r"\s*O\(\s*theta\s*\^\s*(\d+)\s*\)\s*", text)
        if m2:
            return "0", int(m2.group(1))
        return text, None
    return text[: m.start()], int(m.group(1))


def _zero_like(c):
    if isinstance(c, SparsePoly):
        return type(c).zero()
    return GaussianRational()


def _invert_constant(c) -> GaussianRational:
    if isinstance(c, SparsePoly):
        if not c.is_constant():
            raise NonInvertibleError("constant term depends on parameters")
        c = c.constant_term()
    c = GaussianRational.coerce(c)
    if not c:
        raise NonInvertibleError("constant term is zero")
    return c.inverse()


def theta_inverse(s: ThetaSeries) -> ThetaSeries:
    """Multiplicative inverse modulo theta^(D+1)."""
    inv0 = _invert_constant(s.coeffs[0])
    out = [_zero_like(s.coeffs[0]) + inv0]
    for n in range(1, s.order + 1):
        acc = None
        for k in range(1, n + 1):
            if s.coeffs[k]:
                t = s.coeffs[k] * out[n - k]
                acc = t if acc is None else acc + t
        out.append(_zero_like(s.coeffs[0]) if acc is None else -(acc * inv0))
    return ThetaSeries(out, s.order)


def theta_sqrt(s: ThetaSeries) -> ThetaSeries:
    """Square root with constant term 1; the input must have constant term 1."""
    c0 = s.coeffs[0]
    if not (c0 == 1):
        raise NormalizationError("theta_sqrt needs constant term 1; factor it out first")
    half = GaussianRational(Fraction(1, 2))
    out = [s.coeffs[0]]
    for n in range(1, s.order + 1):
        acc = s.coeffs[n]
        for k in range(1, n):
            acc = acc - out[k] * out[n - k]
        out.append(acc * half)
    return ThetaSeries(out, s.order)


def theta_exp(s: ThetaSeries) -> ThetaSeries:
    """exp of a series without constant term."""
    if s.coeffs[0]:
        raise NormalizationError("theta_exp needs a vanishing constant term")
    result = ThetaSeries.one(s.order)
    power = ThetaSeries.one(s.order)
    for n in range(1, s.order + 1):
        power = power * s
        result = result + power * GaussianRational(Fraction(1, math.factorial(n)))
    return result


def parse_scalar(text: str, ring: str = "gaussian"):
    """Parse canonical text for one of ``gaussian``, ``param``, ``laurent``."""
    if ring == "gaussian":
        return evaluate(text, {"i": I}, GaussianRational)
    if ring == "param":
        return ParamPoly.parse(text)
    if ring == "laurent":
        return LaurentQ.parse(text)
    raise ValueError(f"unknown ring {ring!r}")
