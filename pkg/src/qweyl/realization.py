"""Concrete realization of A_q(3) by q-deformed differential operators.

With ``q = exp(i theta)``, ``M_j = x_j d_j`` and

    beta_j = sqrt( (q^(2(M_j+1)) - 1) / ((q^2 - 1)(M_j + 1)) )

the generators are ``X_j = x_j beta_j q^(M_{k>j})`` and
``dX_j = q^(M_{k>j}) beta_j d_j``. This module provides

* the exact numeric action on monomials (every factor is diagonal there),
* the theta-series expansion of every factor to arbitrary order, and
* checks that both forms satisfy the defining relations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable

from .scalars import (
    GaussianRational,
    I,
    ParamPoly,
    SparsePoly,
    ThetaSeries,
    theta_inverse,
    theta_sqrt,
)
from .weyl import DiffOp, m_polynomial_to_op, power_of_M

__all__ = [
    "KINDS",
    "MPoly",
    "q_series",
    "beta_exact",
    "beta_value",
    "beta_m_series",
    "beta_series",
    "qpower_series",
    "build_realized",
    "exact_action",
    "apply_exact",
    "RelationResult",
    "relations",
    "verify_relations",
    "verify_relations_series",
    "verify_relations_numeric",
]

KINDS = ("X", "dX", "P")


class MPoly(SparsePoly):
    """Polynomial in a single number operator ``M``."""

    variables = ("M",)
    __slots__ = ()


# ---------------------------------------------------------------------------
# numeric side
# ---------------------------------------------------------------------------


def beta_value(n: int, theta: complex) -> complex:
    """beta on the M-eigenvalue ``n``; ``theta`` may be complex near 0.

    The ratio is evaluated as the finite geometric mean of ``q^(2k)``,
    k = 0..n, which equals the quotient wherever that is defined and gives
    the limit value 1 at the removable singularity ``q^2 = 1``.
    """
    if n < 0:
        raise ValueError("M eigenvalue must be nonnegative")
    if theta == 0:
        return 1.0 + 0j
    q2 = cmath.exp(2j * theta)
    ratio = sum(q2**k for k in range(n + 1)) / (n + 1)
    return cmath.sqrt(ratio)


def beta_exact(n: int, theta: float) -> complex:
    """Principal-branch beta for real ``theta``."""
    if isinstance(theta, complex):
        if theta.imag != 0:
            raise ValueError("theta must be real")
        theta = theta.real
    return beta_value(n, float(theta))


def _qpow(theta: complex, e: int) -> complex:
    return cmath.exp(1j * theta * e)


def exact_action(
    kind: str,
    j: int,
    exps: tuple[int, int, int],
    theta: complex,
    hbar: complex = 1.0,
) -> tuple[tuple[int, int, int], complex] | None:
    """Exact action of a realized generator on ``x^p y^q z^r``.

    Returns the shifted exponent triple and the scalar factor, or ``None``
    when the result is zero.
    """
    _check_kind(kind, j)
    k = j - 1
    shift = sum(exps[k + 1 :])
    if kind == "X":
        new = list(exps)
        new[k] += 1
        return tuple(new), beta_value(exps[k], theta) * _qpow(theta, shift)
    if exps[k] == 0:
        return None
    new = list(exps)
    new[k] -= 1
    # derivative acts first; beta and q^M read the lowered exponent
    val = exps[k] * beta_value(exps[k] - 1, theta) * _qpow(theta, shift)
    if kind == "P":
        val *= -1j * hbar
    return tuple(new), val


def apply_exact(kind: str, j: int, vec: dict, theta: complex, hbar: complex = 1.0) -> dict:
    """Apply a realized generator to a vector ``{exponents: complex}``."""
    out: dict[tuple[int, int, int], complex] = {}
    for exps, c in vec.items():
        res = exact_action(kind, j, exps, theta, hbar)
        if res is None:
            continue
        new, val = res
        out[new] = out.get(new, 0j) + c * val
    return out


def _check_kind(kind: str, j: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if j not in (1, 2, 3):
        raise ValueError(f"coordinate index must be 1, 2 or 3, got {j}")


# ---------------------------------------------------------------------------
# series side
# ---------------------------------------------------------------------------


def q_series(order: int, power: int = 1) -> ThetaSeries:
    """``q^power = exp(i power theta)`` as a truncated series."""
    coeffs = [GaussianRational(1)]
    term = GaussianRational(1)
    step = I * power
    for n in range(1, order + 1):
        term = term * step * GaussianRational(Fraction(1, n))
        coeffs.append(term)
    return ThetaSeries(coeffs, order)


def _exp_like(order: int, scale: MPoly) -> ThetaSeries:
    """sum_{n>=0} (2 i theta * scale)^n / (n+1)!  (the factored-out quotient)."""
    coeffs = []
    base = scale * (I * 2)
    power = MPoly.one()
    for n in range(order + 1):
        coeffs.append(power * GaussianRational(Fraction(1, math.factorial(n + 1))))
        power = power * base
    return ThetaSeries(coeffs, order)


@lru_cache(maxsize=None)
def beta_m_series(order: int, hand_truncated_denominator: bool = False) -> ThetaSeries:
    """beta as a theta series whose coefficients are polynomials in ``M``.

    The numerator ``q^(2(M+1)) - 1`` and denominator ``(q^2-1)(M+1)`` share
    the exact factor ``2 i theta (M+1)``; after cancelling it both become
    series with constant term 1, so the quotient and square root are
    ordinary series operations.

    ``hand_truncated_denominator`` keeps ``q^2 - 1`` only through theta^2
    before the cancellation, i.e. the residual denominator is ``1 + i theta``.
    That reproduces a common hand-derivation shortcut and exists for
    comparison only.
    """
    m1 = MPoly.var("M") + 1
    numerator = _exp_like(order, m1)
    denominator = _exp_like(order, MPoly.one())
    if hand_truncated_denominator:
        denominator = ThetaSeries(denominator.coeffs[:2], order)
    ratio = numerator * theta_inverse(denominator)
    return theta_sqrt(ratio)


def _series_op_from_m(j: int, series: ThetaSeries) -> DiffOp:
    """Turn a theta series over ``MPoly`` into a normal-ordered operator in M_j."""
    order = series.order
    by_power: dict[int, list] = {}
    for n, c in enumerate(series.coeffs):
        for (e,), v in c.terms.items():
            by_power.setdefault(e, [GaussianRational()] * (order + 1))
            by_power[e][n] = by_power[e][n] + v
    coeffs = {e: ThetaSeries(cs, order) for e, cs in by_power.items()}
    op = m_polynomial_to_op(j, coeffs)
    if not op:
        return DiffOp()
    return op


def beta_series(j: int, order: int, hand_truncated_denominator: bool = False) -> DiffOp:
    """Normal-ordered beta_j to order theta^D."""
    _check_kind("X", j)
    if order < 0:
        raise ValueError("order must be nonnegative")
    return _series_op_from_m(j, beta_m_series(order, hand_truncated_denominator))


def qpower_series(indices: Iterable[int], order: int) -> DiffOp:
    """``q^(sum_{k in S} M_k) = sum_n (i theta)^n M_S^n / n!`` truncated."""
    idx = sorted(set(indices))
    if any(k not in (1, 2, 3) for k in idx):
        raise ValueError("indices must be coordinate numbers 1..3")
    if order < 0:
        raise ValueError("order must be nonnegative")
    one = ThetaSeries.one(order)
    result = DiffOp.identity(one)
    if not idx:
        return result
    m_s = DiffOp()
    for k in idx:
        m_s = m_s + power_of_M(k, 1)
    power = DiffOp.identity()
    coef = GaussianRational(1)
    for n in range(1, order + 1):
        power = power.compose(m_s)
        coef = coef * I * GaussianRational(Fraction(1, n))
        unit = ThetaSeries([GaussianRational()] * n + [coef], order)
        result = result + power.map_coefficients(lambda c, u=unit: u * c)
    return result


@lru_cache(maxsize=None)
def build_realized(kind: str, j: int, order: int) -> DiffOp:
    """Truncated series form of ``X_j``, ``dX_j`` or ``P_j = -i hbar dX_j``."""
    _check_kind(kind, j)
    if order < 0:
        raise ValueError("order must be nonnegative")
    one = ThetaSeries.one(order)
    qm = qpower_series(range(j + 1, 4), order)
    beta = beta_series(j, order)
    if kind == "X":
        return DiffOp.coordinate(j, one).compose(beta).compose(qm)
    d_x = qm.compose(beta).compose(DiffOp.derivative(j, one))
    if kind == "dX":
        return d_x
    return d_x.scale(ParamPoly.const(-I) * ParamPoly.var("hbar"))


# ---------------------------------------------------------------------------
# relation checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """``lhs = rhs`` as lists of (q-power, scalar, word) terms.

    Words are tuples of (kind, index); a q-power ``e`` means ``q^e``.
    """

    name: str
    family: str
    lhs: tuple
    rhs: tuple


def relations() -> list[Relation]:
    """The defining relations of A_q(3) written as lhs - rhs = 0 terms."""
    out = []
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i < j:
                out.append(Relation(
                    f"X{i}X{j} = q X{j}X{i}", "XX",
                    ((0, 1, (("X", i), ("X", j))),),
                    ((1, 1, (("X", j), ("X", i))),),
                ))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i < j:
                out.append(Relation(
                    f"d{i}d{j} = q^-1 d{j}d{i}", "dd",
                    ((0, 1, (("dX", i), ("dX", j))),),
                    ((-1, 1, (("dX", j), ("dX", i))),),
                ))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                out.append(Relation(
                    f"d{i}X{j} = q X{j}d{i}", "dX",
                    ((0, 1, (("dX", i), ("X", j))),),
                    ((1, 1, (("X", j), ("dX", i))),),
                ))
    for i in (1, 2, 3):
        rhs = [(0, 1, ())]
        for j in range(i + 1, 4):
            rhs.append((2, 1, (("X", j), ("dX", j))))
            rhs.append((0, -1, (("X", j), ("dX", j))))
        out.append(Relation(
            f"d{i}X{i} - q^2 X{i}d{i} = 1 + (q^2-1) sum_(j>{i}) X_j d_j", "dX_diag",
            ((0, 1, (("dX", i), ("X", i))), (2, -1, (("X", i), ("dX", i)))),
            tuple(rhs),
        ))
    return out


@dataclass
class RelationResult:
    name: str
    family: str
    mode: str
    passed: bool
    residual: str
    max_abs: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "family": self.family,
            "mode": self.mode,
            "residual": self.residual,
            "pass": self.passed,
        }
        if self.mode == "numeric":
            out["max_abs"] = self.max_abs
        out.update(self.details)
        return out


def _series_side(terms, order: int) -> DiffOp:
    total = DiffOp()
    qpows: dict[int, ThetaSeries] = {}
    for e, s, word in terms:
        if e not in qpows:
            qpows[e] = q_series(order, 1) ** e if e >= 0 else theta_inverse(q_series(order, 1)) ** (-e)
        op = DiffOp.identity(ThetaSeries.one(order))
        for kind, idx in word:
            op = op.compose(build_realized(kind, idx, order))
        total = total + op.scale(qpows[e] * s)
    return total


def verify_relations_series(order: int) -> list[RelationResult]:
    results = []
    for rel in relations():
        residual = _series_side(rel.lhs, order) - _series_side(rel.rhs, order)
        results.append(RelationResult(
            rel.name, rel.family, "series", not residual,
            str(residual), details={"order": order},
        ))
    return results


def _numeric_side(terms, exps, theta: float) -> dict:
    total: dict = {}
    for e, s, word in terms:
        vec = {exps: complex(s) * _qpow(theta, e)}
        # rightmost generator acts first
        for kind, idx in reversed(word):
            vec = apply_exact(kind, idx, vec, theta)
        for k, v in vec.items():
            total[k] = total.get(k, 0j) + v
    return total


def verify_relations_numeric(theta: float, cutoff: int = 5, tol: float = 1e-10) -> list[RelationResult]:
    if isinstance(theta, complex) or not math.isfinite(theta):
        raise ValueError("theta must be a finite real number")
    results = []
    for rel in relations():
        worst_abs = 0.0
        worst_rel = 0.0
        for exps in product(range(cutoff + 1), repeat=3):
            lhs = _numeric_side(rel.lhs, exps, theta)
            rhs = _numeric_side(rel.rhs, exps, theta)
            keys = set(lhs) | set(rhs)
            for key in keys:
                diff = abs(lhs.get(key, 0j) - rhs.get(key, 0j))
                scale = max(abs(lhs.get(key, 0j)), abs(rhs.get(key, 0j)), 1.0)
                worst_abs = max(worst_abs, diff)
                worst_rel = max(worst_rel, diff / scale)
        results.append(RelationResult(
            rel.name, rel.family, "numeric", worst_rel < tol,
            f"{worst_rel:.3e}", max_abs=worst_abs,
            details={"theta": theta, "cutoff": cutoff, "tol": tol, "max_rel": worst_rel},
        ))
    return results


def verify_relations(mode: str = "series", *, order: int = 2, theta: float = 0.3,
                     cutoff: int = 5, tol: float = 1e-10) -> list[RelationResult]:
    if mode == "series":
        return verify_relations_series(order)
    if mode == "numeric":
        return verify_relations_numeric(theta, cutoff, tol)
    raise ValueError(f"unknown mode {mode!r}")
