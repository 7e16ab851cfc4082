"""Sp_q(6) covariance of A_q(3).

The R-matrix is the standard FRT symplectic one for N = 2n = 6:

    R^{ij}_{mn} = q^(delta_ij - delta_ij') delta_im delta_jn
                  + (q - q^-1) [i > m] (delta_jm delta_in
                                        - eps_i eps_m q^(rho_i - rho_m) delta_ij' delta_mn')

with ``i' = 7 - i``, ``rho = (3, 2, 1, -1, -2, -3)``, ``eps_i = +1`` for
``i <= 3`` and ``-1`` otherwise, and ``Rhat^{ij}_{kl} = R^{ji}_{kl}``. The
metric is ``C^i_j = eps_j q^(rho_j) delta_ij'``. With the generator
assignment ``y = (alpha q d3, alpha q^2 d2, alpha q^3 d1, X1, X2, X3)``
every entry of

    sum_kl Rhat^{ij}_{kl} y_k y_l - q y_i y_j - alpha q^-3 C^i_j

reduces to zero in A_q(3). The braid relation and the cubic
characteristic identity of Rhat are checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .aq import AqElement, D, X
from .scalars import LaurentQ

__all__ = [
    "SIZE",
    "RHO",
    "EPS",
    "conjugate_index",
    "r_matrix",
    "metric",
    "y_generators",
    "proposition_residual",
    "all_residuals",
    "braid_defect",
    "characteristic_defect",
    "mutated",
    "reduced_relation_residual",
    "PairResult",
]

SIZE = 6
_HALF = 3
RHO = {1: 3, 2: 2, 3: 1, 4: -1, 5: -2, 6: -3}
EPS = {i: (1 if i <= _HALF else -1) for i in range(1, SIZE + 1)}

RKey = tuple[int, int, int, int]


def conjugate_index(i: int) -> int:
    return SIZE + 1 - i


def _q(e: int) -> LaurentQ:
    return LaurentQ.q(e)


@lru_cache(maxsize=None)
def _r_matrix_cached() -> tuple[tuple[RKey, LaurentQ], ...]:
    r: dict[RKey, LaurentQ] = {}

    def add(key, v):
        total = r.get(key, LaurentQ.zero()) + v
        if total:
            r[key] = total
        else:
            r.pop(key, None)

    qq = _q(1) - _q(-1)
    for i in range(1, SIZE + 1):
        for j in range(1, SIZE + 1):
            e = (1 if i == j else 0) - (1 if i == conjugate_index(j) else 0)
            add((i, j, i, j), _q(e))
    for i in range(1, SIZE + 1):
        for m in range(1, i):
            add((i, m, m, i), qq)
            sign = EPS[i] * EPS[m]
            add((i, conjugate_index(i), m, conjugate_index(m)), -qq * _q(RHO[i] - RHO[m]) * sign)
    # Rhat = P R
    rhat = {(j, i, k, l): v for (i, j, k, l), v in r.items()}
    return tuple(sorted(rhat.items()))


def r_matrix() -> dict[RKey, LaurentQ]:
    """Nonzero entries ``Rhat^{ij}_{kl}`` keyed by 1-based ``(i, j, k, l)``."""
    return dict(_r_matrix_cached())


def metric() -> dict[tuple[int, int], LaurentQ]:
    """Nonzero entries of ``C^i_j``."""
    return {
        (conjugate_index(j), j): _q(RHO[j]) * EPS[j]
        for j in range(1, SIZE + 1)
    }


def y_generators(alpha: LaurentQ | None = None) -> dict[int, AqElement]:
    a = LaurentQ.alpha() if alpha is None else alpha
    return {
        1: D(3) * (a * _q(1)),
        2: D(2) * (a * _q(2)),
        3: D(1) * (a * _q(3)),
        4: X(1),
        5: X(2),
        6: X(3),
    }


@lru_cache(maxsize=None)
def _products(alpha: LaurentQ | None) -> dict[tuple[int, int], AqElement]:
    y = y_generators(alpha)
    return {(k, l): y[k] * y[l] for k in y for l in y}


def proposition_residual(
    i: int,
    j: int,
    rmatrix: Mapping[RKey, LaurentQ] | None = None,
    alpha: LaurentQ | None = None,
) -> AqElement:
    """``sum_kl Rhat^{ij}_{kl} y_k y_l - q y_i y_j - alpha q^-3 C^i_j`` normal-ordered."""
    rm = r_matrix() if rmatrix is None else rmatrix
    a = LaurentQ.alpha() if alpha is None else alpha
    yy = _products(alpha)
    acc = AqElement()
    for (ii, jj, k, l), v in rm.items():
        if ii == i and jj == j:
            acc = acc + yy[(k, l)] * v
    acc = acc - yy[(i, j)] * _q(1)
    c = metric().get((i, j))
    if c is not None:
        acc = acc - AqElement.scalar(a * _q(-3) * c)
    return acc


@dataclass
class PairResult:
    i: int
    j: int
    residual: AqElement

    @property
    def passed(self) -> bool:
        return not self.residual

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "residual_terms": len(self.residual),
            "residual": str(self.residual),
            "pass": self.passed,
        }


def all_residuals(rmatrix=None, alpha=None) -> list[PairResult]:
    return [
        PairResult(i, j, proposition_residual(i, j, rmatrix, alpha))
        for i in range(1, SIZE + 1)
        for j in range(1, SIZE + 1)
    ]


# ---------------------------------------------------------------------------
# internal consistency of Rhat
# ---------------------------------------------------------------------------


def _matmul(a: Mapping, b: Mapping) -> dict:
    rows: dict = {}
    for (r, c), v in b.items():
        rows.setdefault(r, []).append((c, v))
    out: dict = {}
    for (r, c), v in a.items():
        for c2, w in rows.get(c, ()):
            key = (r, c2)
            s = out.get(key, LaurentQ.zero()) + v * w
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _as_matrix(rm: Mapping[RKey, LaurentQ]) -> dict:
    return {((i, j), (k, l)): v for (i, j, k, l), v in rm.items()}


def _sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for key, v in b.items():
        s = out.get(key, LaurentQ.zero()) - v
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def braid_defect(rmatrix=None) -> dict:
    """Nonzero entries of ``R12 R23 R12 - R23 R12 R23`` on the triple tensor space."""
    m = _as_matrix(r_matrix() if rmatrix is None else rmatrix)
    r12 = {}
    r23 = {}
    for ((i, j), (k, l)), v in m.items():
        for s in range(1, SIZE + 1):
            r12[((i, j, s), (k, l, s))] = v
            r23[((s, i, j), (s, k, l))] = v
    lhs = _matmul(_matmul(r12, r23), r12)
    rhs = _matmul(_matmul(r23, r12), r23)
    return _sub(lhs, rhs)


def characteristic_defect(rmatrix=None) -> dict:
    """Nonzero entries of ``(Rhat - q)(Rhat + q^-1)(Rhat + q^-7)``."""
    m = _as_matrix(r_matrix() if rmatrix is None else rmatrix)
    idx = [(i, j) for i in range(1, SIZE + 1) for j in range(1, SIZE + 1)]

    def shifted(c: LaurentQ) -> dict:
        return _sub(m, {(a, a): c for a in idx})

    return _matmul(_matmul(shifted(_q(1)), shifted(-_q(-1))), shifted(-_q(-SIZE - 1)))


def mutated(key: RKey, delta: LaurentQ | None = None, rmatrix=None) -> dict[RKey, LaurentQ]:
    """Copy of Rhat with ``delta`` (default 1) added to one entry."""
    rm = dict(r_matrix() if rmatrix is None else rmatrix)
    d = LaurentQ.one() if delta is None else delta
    v = rm.get(key, LaurentQ.zero()) + d
    if v:
        rm[key] = v
    else:
        rm.pop(key, None)
    return rm


# ---------------------------------------------------------------------------
# the reduced (pairwise) form
# ---------------------------------------------------------------------------


def reduced_relation_residual(j: int, conjugate_base: int = 7, alpha=None) -> AqElement:
    """lhs - rhs of

        y_{c-j} y_j - q^-2 y_j y_{c-j}
            = -q^-j alpha (q^-2 - 1) sum_{k<j} q^(k-j) y_k y_{c-k}

    with ``c = conjugate_base`` (4 as printed, 7 for the pairing of the
    generator assignment). Terms whose index falls outside 1..6 are dropped.
    """
    if conjugate_base not in (4, 7):
        raise ValueError("conjugate_base must be 4 or 7")
    if not 1 <= conjugate_base - j <= SIZE or not 1 <= j <= SIZE:
        raise ValueError(f"index {j} out of range for conjugate base {conjugate_base}")
    a = LaurentQ.alpha() if alpha is None else alpha
    y = y_generators(alpha)
    c = conjugate_base - j
    lhs = y[c] * y[j] - y[j] * y[c] * _q(-2)
    acc = AqElement()
    for k in range(1, j):
        if 1 <= conjugate_base - k <= SIZE:
            acc = acc + y[k] * y[conjugate_base - k] * _q(k - j)
    rhs = acc * (-(_q(-j)) * a * (_q(-2) - 1))
    return lhs - rhs


def reduced_indices(conjugate_base: int) -> list[int]:
    return [j for j in range(1, SIZE + 1) if 1 <= conjugate_base - j <= SIZE]
