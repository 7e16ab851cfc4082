"""Floating-point cross-checks of the exact symbolic pipeline.

Nothing here reuses the series machinery. Taylor coefficients in theta are
extracted from the exact realization by sampling on a small circle in the
complex theta plane and taking a discrete Fourier transform; spatial
derivatives come from finite differences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .realization import KINDS, beta_value, build_realized, exact_action
from .weyl import CoordPoly

__all__ = [
    "taylor_coefficients",
    "truncated_value",
    "exact_momentum_ratio",
    "convergence_table",
    "fit_slope",
    "ConvergenceRow",
    "NumericContext",
    "DEFAULT_CONTEXT",
    "chain_check",
]

_RADIUS = 0.02
_NODES = 32


def taylor_coefficients(f, order: int, radius: float = _RADIUS, nodes: int = _NODES) -> list[complex]:
    """Taylor coefficients ``c_0..c_order`` of an analytic ``f`` at 0."""
    ks = np.arange(nodes)
    zs = radius * np.exp(2j * np.pi * ks / nodes)
    vals = np.array([f(complex(z)) for z in zs])
    coeffs = np.fft.fft(vals) / nodes
    return [complex(coeffs[d]) / radius**d for d in range(order + 1)]


def truncated_value(coeffs: list[complex], theta: float) -> complex:
    return sum(c * theta**d for d, c in enumerate(coeffs))


def exact_momentum_ratio(j: int, theta: complex, k, hbar: float, point, nmax: int = 40) -> complex:
    """``(P_j Psi) / Psi`` for the exact realization and ``Psi = exp(i k.r)``.

    The coordinate ``x_j`` contributes ``sum_n (i k_j x_j)^n / n! * i k_j beta(n)``
    (derivative first, then beta on the lowered exponent); each coordinate
    after ``j`` picks up ``q^p`` on ``x^p``, i.e. ``exp(i k x q)``.
    """
    kj = k[j - 1]
    xj = point[j - 1]
    s = 0j
    term = 1 + 0j
    for n in range(nmax):
        if n:
            term *= 1j * kj * xj / n
        s += term * beta_value(n, theta)
    s *= 1j * kj
    q = cmath.exp(1j * theta)
    phase = 0j
    for c in range(j + 1, 4):
        phase += 1j * k[c - 1] * point[c - 1] * (q - 1)
    return -1j * hbar * s * cmath.exp(phase) * cmath.exp(-1j * kj * xj)


# ---------------------------------------------------------------------------
# convergence of the truncated operators
# ---------------------------------------------------------------------------


@dataclass
class ConvergenceRow:
    operator: str
    order: int
    theta: float
    max_abs_error: float

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "order": self.order,
            "theta": self.theta,
            "max_abs_error": self.max_abs_error,
        }


def _series_action_error(kind: str, j: int, order: int, theta: float, max_exp: int) -> float:
    op = build_realized(kind, j, order).numeric(theta, hbar=1.0)
    worst = 0.0
    for exps in product(range(max_exp + 1), repeat=3):
        got = op.apply(CoordPoly.monomial(*exps, coef=1 + 0j))
        res = exact_action(kind, j, exps, theta)
        want = {} if res is None else {res[0]: res[1]}
        for key in set(got.terms) | set(want):
            worst = max(worst, abs(got.terms.get(key, 0j) - want.get(key, 0j)))
    return worst


def fit_slope(thetas, errors) -> float:
    x = np.log10(np.asarray(thetas, dtype=float))
    y = np.log10(np.asarray(errors, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def convergence_table(orders=(1, 2, 3), thetas=(1e-1, 1e-2, 1e-3), kinds=KINDS, max_exp: int = 4):
    """Errors of the truncated operators against the exact action, and fitted slopes."""
    if len(thetas) < 2:
        raise ValueError("need at least two theta samples")
    if any(t <= 0 for t in thetas):
        raise ValueError("theta samples must be positive")
    rows = []
    slopes = []
    for kind in kinds:
        for j in (1, 2, 3):
            for order in orders:
                errs = []
                for theta in thetas:
                    err = _series_action_error(kind, j, order, theta, max_exp)
                    rows.append(ConvergenceRow(f"{kind}{j}", order, theta, err))
                    errs.append(err)
                slope = fit_slope(thetas, errs)
                slopes.append({
                    "operator": f"{kind}{j}",
                    "order": order,
                    "slope": slope,
                    "expected": order + 1,
                    "pass": abs(slope - (order + 1)) <= 0.1,
                })
    return rows, slopes


# ---------------------------------------------------------------------------
# step-by-step numeric re-check of the free-particle derivation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericContext:
    theta: float = 0.05
    k: tuple[float, float, float] = (0.7, -1.1, 0.9)
    hbar: float = 1.3
    points: tuple[tuple[float, float, float], ...] = (
        (0.3, -0.2, 0.5),
        (-0.4, 0.1, 0.2),
        (0.15, 0.35, -0.25),
    )
    step: float = 0.25
    tol: float = 1e-8

    def params(self) -> dict:
        return {"k1": self.k[0], "k2": self.k[1], "k3": self.k[2], "hbar": self.hbar,
                "m": 1.0, "omega": 1.0, "alpha": 1.0}


DEFAULT_CONTEXT = NumericContext()


def _eval_poly(poly: CoordPoly, ctx: NumericContext, point, theta: float | None = None) -> complex:
    th = ctx.theta if theta is None else theta
    params = ctx.params()
    return poly.evaluate(point, coef_eval=lambda c: c.evaluate(th, **params))


def _numeric_gauge_coeffs(j: int, order: int, ctx: NumericContext, point) -> list[complex]:
    def f(theta):
        return ctx.hbar * ctx.k[j - 1] - exact_momentum_ratio(j, theta, ctx.k, ctx.hbar, point)

    return taylor_coefficients(f, order)


def _fd_derivative(fn, point, axis: int, h: float):
    # five-point stencil, exact for polynomials of degree <= 4
    def at(s):
        p = list(point)
        p[axis] += s * h
        return fn(tuple(p))

    return [(a - 8 * b + 8 * c - d) / (12 * h) for a, b, c, d in zip(at(-2), at(-1), at(1), at(2))]


def _numeric_curl_coeffs(order: int, ctx: NumericContext, point) -> list[list[complex]]:
    """Taylor coefficients of B_i at ``point`` from finite differences of A."""
    comps = {}

    def a_coeffs(jj):
        return lambda p: _numeric_gauge_coeffs(jj, order, ctx, p)

    for j in (1, 2, 3):
        for axis in (0, 1, 2):
            if axis != j - 1:
                comps[(axis, j)] = _fd_derivative(a_coeffs(j), point, axis, ctx.step)
    b = []
    # B_1 = d2 A3 - d3 A2, B_2 = d3 A1 - d1 A3, B_3 = d1 A2 - d2 A1
    for (ax1, c1), (ax2, c2) in (((1, 3), (2, 2)), ((2, 1), (0, 3)), ((0, 2), (1, 1))):
        b.append([u - v for u, v in zip(comps[(ax1, c1)], comps[(ax2, c2)])])
    return b


def chain_check(order: int = 2, ctx: NumericContext = DEFAULT_CONTEXT, symbolic=None) -> list[dict]:
    """Re-check each symbolic stage numerically; returns one record per stage."""
    from .freeparticle import curl, decompose, gauge_potential, momentum_amplitudes

    if symbolic is None:
        amps = momentum_amplitudes(order)
        pot = gauge_potential(order)
        field = curl(pot)
        dec = decompose(field, order)
    else:
        amps, pot, field, dec = symbolic
    steps = []

    # operator: series operators on monomials vs Taylor data of the exact action
    worst = 0.0
    for kind in KINDS:
        for j in (1, 2, 3):
            op = build_realized(kind, j, order).numeric(ctx.theta, hbar=ctx.hbar)
            for exps in product(range(4), repeat=3):
                got = op.apply(CoordPoly.monomial(*exps, coef=1 + 0j))
                res = exact_action(kind, j, exps, 0.0, ctx.hbar)
                if res is None:
                    worst = max([worst] + [abs(v) for v in got.terms.values()])
                    continue
                coeffs = taylor_coefficients(
                    lambda t, e=exps: exact_action(kind, j, e, t, ctx.hbar)[1], order
                )
                want = truncated_value(coeffs, ctx.theta)
                for key, v in got.terms.items():
                    target = want if key == res[0] else 0j
                    worst = max(worst, abs(v - target))
                if res[0] not in got.terms:
                    worst = max(worst, abs(want))
    steps.append(_step("operator", worst, ctx))

    worst_m = worst_a = worst_b = worst_d = 0.0
    for point in ctx.points:
        for j in (1, 2, 3):
            coeffs = taylor_coefficients(
                lambda t: exact_momentum_ratio(j, t, ctx.k, ctx.hbar, point), order
            )
            worst_m = max(worst_m, abs(_eval_poly(amps[j - 1], ctx, point) - truncated_value(coeffs, ctx.theta)))
            a_num = truncated_value(_numeric_gauge_coeffs(j, order, ctx, point), ctx.theta)
            worst_a = max(worst_a, abs(_eval_poly(pot[j - 1], ctx, point) - a_num))
        b_coeffs = _numeric_curl_coeffs(order, ctx, point)
        for i in range(3):
            b_num = truncated_value(b_coeffs[i], ctx.theta)
            worst_b = max(worst_b, abs(_eval_poly(field[i], ctx, point) - b_num))
            for n in range(1, order + 1):
                part = b_coeffs[i][n] * ctx.theta**n
                re_sym = _eval_poly(dec.by_order[n]["real"][i], ctx, point)
                im_sym = _eval_poly(dec.by_order[n]["imag"][i], ctx, point)
                worst_d = max(worst_d, abs(re_sym - part.real), abs(im_sym - 1j * part.imag))
            recon = _eval_poly(dec.structured[i], ctx, point) + _eval_poly(dec.remainder[i], ctx, point)
            worst_d = max(worst_d, abs(recon - b_num))
    steps.append(_step("momentum", worst_m, ctx))
    steps.append(_step("gauge", worst_a, ctx))
    steps.append(_step("curl", worst_b, ctx))
    steps.append(_step("decompose", worst_d, ctx))
    return steps


def _step(name: str, err: float, ctx: NumericContext) -> dict:
    return {"step": name, "theta": ctx.theta, "max_abs_error": err, "tol": ctx.tol,
            "pass": bool(err < ctx.tol) and math.isfinite(err)}
