"""The abstract quantum Weyl algebra A_q(N) over Laurent polynomials in q.

Generators are numbered ``0..N-1`` for ``X_1..X_N`` and ``N..2N-1`` for
``d_1..d_N``; this numbering is also the PBW order (X's before d's, each
group ascending). Any word reduces to a unique combination of ordered
words by orienting the defining relations:

    X_j X_i -> q^-1 X_i X_j                              (i < j)
    d_j d_i -> q d_i d_j                                 (i < j)
    d_i X_j -> q X_j d_i                                 (i != j)
    d_i X_i -> 1 + q^2 X_i d_i + (q^2 - 1) sum_{j>i} X_j d_j
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import GaussianRational, LaurentQ, join_terms
from .textparse import evaluate

__all__ = [
    "N",
    "AqElement",
    "rewrite_rule",
    "normal_form",
    "rewrite_word",
    "generator",
    "X",
    "D",
    "word_to_key",
    "key_to_word",
    "generator_name",
]

N = 3

_Q = LaurentQ.q(1)
_QINV = LaurentQ.q(-1)
_Q2 = LaurentQ.q(2)
_ONE = LaurentQ.one()


def generator_name(g: int, n: int = N) -> str:
    return f"X{g + 1}" if g < n else f"d{g - n + 1}"


def rewrite_rule(a: int, b: int, n: int = N) -> list[tuple[LaurentQ, tuple[int, ...]]]:
    """Replacement for the out-of-order pair ``a b`` (requires ``a > b``)."""
    if a <= b:
        raise ValueError("pair already ordered")
    a_is_d, b_is_d = a >= n, b >= n
    if not a_is_d and not b_is_d:
        return [(_QINV, (b, a))]
    if a_is_d and b_is_d:
        return [(_Q, (b, a))]
    # a = d_i, b = X_j
    i, j = a - n, b
    if i != j:
        return [(_Q, (b, a))]
    out: list[tuple[LaurentQ, tuple[int, ...]]] = [(_ONE, ()), (_Q2, (b, a))]
    for k in range(i + 1, n):
        out.append((_Q2 - 1, (k, n + k)))
    return out


# ---------------------------------------------------------------------------
# keys: exponent vectors of ordered words
# ---------------------------------------------------------------------------


def word_to_key(word: Sequence[int], n: int = N) -> tuple[int, ...]:
    key = [0] * (2 * n)
    for g in word:
        key[g] += 1
    return tuple(key)


def key_to_word(key: Sequence[int]) -> tuple[int, ...]:
    word: list[int] = []
    for g, e in enumerate(key):
        word.extend([g] * e)
    return tuple(word)


def _add_into(acc: dict, key, coef: LaurentQ) -> None:
    if key in acc:
        s = acc[key] + coef
        if s:
            acc[key] = s
        else:
            del acc[key]
    elif coef:
        acc[key] = coef


class _Reducer:
    """Memoized right-multiplication of ordered monomials by generators."""

    def __init__(self, n: int):
        self.n = n
        self.cache: dict[tuple[tuple[int, ...], int], dict[tuple[int, ...], LaurentQ]] = {}

    def times_generator(self, key: tuple[int, ...], g: int) -> dict[tuple[int, ...], LaurentQ]:
        cached = self.cache.get((key, g))
        if cached is not None:
            return cached
        last = max((h for h, e in enumerate(key) if e), default=-1)
        if last <= g:
            new = list(key)
            new[g] += 1
            result = {tuple(new): _ONE}
        else:
            prefix = list(key)
            prefix[last] -= 1
            prefix = tuple(prefix)
            result: dict[tuple[int, ...], LaurentQ] = {}
            for coef, repl in rewrite_rule(last, g, self.n):
                part = {prefix: coef}
                for h in repl:
                    part = self.times_generator_elem(part, h)
                for k, c in part.items():
                    _add_into(result, k, c)
        self.cache[(key, g)] = result
        return result

    def times_generator_elem(self, elem: Mapping, g: int) -> dict:
        out: dict = {}
        for key, coef in elem.items():
            for k, c in self.times_generator(key, g).items():
                _add_into(out, k, coef * c)
        return out

    def times_word(self, elem: Mapping, word: Iterable[int]) -> dict:
        for g in word:
            elem = self.times_generator_elem(elem, g)
        return elem


_REDUCERS: dict[int, _Reducer] = {}


def _reducer(n: int) -> _Reducer:
    if n not in _REDUCERS:
        _REDUCERS[n] = _Reducer(n)
    return _REDUCERS[n]


def normal_form(word: Sequence[int], n: int = N) -> dict[tuple[int, ...], LaurentQ]:
    """PBW normal form of a generator word (production path)."""
    return _reducer(n).times_word({(0,) * (2 * n): _ONE}, word)


def rewrite_word(word: Sequence[int], strategy: str = "leftmost", n: int = N) -> dict[tuple[int, ...], LaurentQ]:
    """Normal form by plain word rewriting.

    Each step rewrites one adjacent out-of-order pair, chosen leftmost or
    rightmost; used to test that the result does not depend on the strategy.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    pending: dict[tuple[int, ...], LaurentQ] = {tuple(word): _ONE}
    done: dict[tuple[int, ...], LaurentQ] = {}
    while pending:
        w, coef = pending.popitem()
        descents = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
        if not descents:
            _add_into(done, word_to_key(w, n), coef)
            continue
        p = descents[0] if strategy == "leftmost" else descents[-1]
        for c, repl in rewrite_rule(w[p], w[p + 1], n):
            _add_into(pending, w[:p] + repl + w[p + 2 :], coef * c)
    return done


class AqElement:
    """Element of A_q(N) in PBW normal form with LaurentQ coefficients."""

    __slots__ = ("_terms", "n")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, n: int = N):
        clean = {}
        for k, c in (terms or {}).items():
            if len(k) != 2 * n:
                raise ValueError("key has wrong length")
            if not isinstance(c, LaurentQ):
                c = LaurentQ.const(c)
            if c:
                clean[tuple(k)] = c
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("AqElement is immutable")

    @classmethod
    def scalar(cls, c, n: int = N) -> AqElement:
        return cls({(0,) * (2 * n): c}, n)

    @classmethod
    def one(cls, n: int = N) -> AqElement:
        return cls.scalar(1, n)

    @classmethod
    def from_word(cls, word: Sequence[int], n: int = N) -> AqElement:
        return cls(normal_form(word, n), n)

    @property
    def terms(self) -> Mapping[tuple[int, ...], LaurentQ]:
        return self._terms

    def items(self) -> Iterator[tuple[tuple[int, ...], LaurentQ]]:
        return iter(
            sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))
        )

    def coefficient(self, key) -> LaurentQ:
        return self._terms.get(tuple(key), LaurentQ.zero())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, LaurentQ)):
            other = AqElement.scalar(other, self.n)
        if not isinstance(other, AqElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def _lift(self, other) -> AqElement | None:
        if isinstance(other, AqElement):
            return other
        if isinstance(other, (int, LaurentQ, GaussianRational)):
            return AqElement.scalar(other, self.n)
        from fractions import Fraction

        if isinstance(other, Fraction):
            return AqElement.scalar(other, self.n)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for k, c in other._terms.items():
            _add_into(terms, k, c)
        return AqElement(terms, self.n)

    __radd__ = __add__

    def __neg__(self):
        return AqElement({k: -c for k, c in self._terms.items()}, self.n)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AqElement):
            return self.multiply(other)
        other_lift = self._lift(other)
        if other_lift is None:
            return NotImplemented
        return self.multiply(other_lift)

    def __rmul__(self, other):
        # scalars are central
        return self * other

    def __pow__(self, e: int) -> AqElement:
        if e < 0:
            zero_key = (0,) * (2 * self.n)
            if set(self._terms) != {zero_key}:
                raise ValueError("only scalar monomials have inverse powers")
            return AqElement.scalar(self._terms[zero_key] ** e, self.n)
        result = AqElement.one(self.n)
        for _ in range(e):
            result = result * self
        return result

    def multiply(self, other: AqElement) -> AqElement:
        red = _reducer(self.n)
        out: dict = {}
        for k2, c2 in other._terms.items():
            word = key_to_word(k2)
            prod = red.times_word(dict(self._terms), word)
            for k, c in prod.items():
                _add_into(out, k, c * c2)
        return AqElement(out, self.n)

    def map_coefficients(self, fn) -> AqElement:
        return AqElement({k: fn(c) for k, c in self._terms.items()}, self.n)

    def specialize(self, q=None, alpha=None) -> AqElement:
        values = {}
        if q is not None:
            values["q"] = q
        if alpha is not None:
            values["alpha"] = alpha
        return self.map_coefficients(lambda c: c.substitute(**values))

    # text -------------------------------------------------------------------------
    def monomial_text(self, key) -> str:
        parts = []
        for g, e in enumerate(key):
            if e:
                name = generator_name(g, self.n)
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def term_texts(self) -> list[str]:
        out = []
        for key, c in self.items():
            mono = self.monomial_text(key)
            if len(c) == 1:
                texts = c.term_texts(suffix=[mono] if mono else [])
                out.extend(texts)
            else:
                inner = str(c)
                out.append(f"({inner})" + (f"*{mono}" if mono else ""))
        return out

    def __str__(self):
        return join_terms(self.term_texts())

    def __repr__(self):
        return f"AqElement({str(self)!r})"

    @classmethod
    def parse(cls, text: str, n: int = N) -> AqElement:
        symbols: dict[str, object] = {
            name: AqElement.scalar(v, n) for name, v in LaurentQ.symbols().items()
        }
        for g in range(2 * n):
            symbols[generator_name(g, n)] = generator(g, n)
        return evaluate(text, symbols, lambda x: AqElement.scalar(x, n))

    # LaurentQ needs q^-1 etc. through the scalar path
    def __truediv__(self, other):
        raise TypeError("AqElement does not support division")


def generator(g: int, n: int = N) -> AqElement:
    key = [0] * (2 * n)
    key[g] = 1
    return AqElement({tuple(key): 1}, n)


def X(j: int, n: int = N) -> AqElement:
    return generator(j - 1, n)


def D(j: int, n: int = N) -> AqElement:
    return generator(n + j - 1, n)
