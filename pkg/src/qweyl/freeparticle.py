"""Deformed momenta acting on a plane wave, the induced gauge potential and field.

Coefficients throughout are theta series over :class:`ParamPoly`, so the
wave vector ``k1, k2, k3`` and ``hbar`` stay symbolic. The plane-wave phase
``exp(i(k.r - omega t))`` is carried implicitly: a state is just its
polynomial amplitude, and a derivative acts as ``d_j + i k_j`` on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .realization import build_realized
from .scalars import GaussianRational, I, ParamPoly, ThetaSeries
from .weyl import CoordPoly, DiffOp

__all__ = [
    "PlaneWaveState",
    "apply_to_plane_wave",
    "apply_momentum",
    "momentum_amplitudes",
    "gauge_potential",
    "curl",
    "divergence",
    "decompose",
    "FieldDecomposition",
    "LEVI_CIVITA",
]

_MINUS_HALF_I = GaussianRational(0, Fraction(-1, 2))

LEVI_CIVITA = {
    (1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
    (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1,
}


def _const(order: int, poly: ParamPoly) -> ThetaSeries:
    return ThetaSeries.const(poly, order)


def _k(j: int) -> ParamPoly:
    return ParamPoly.var(f"k{j}")


@dataclass(frozen=True)
class PlaneWaveState:
    """``amplitude * exp(i(k.r - omega t))`` with the phase left implicit."""

    amplitude: CoordPoly
    order: int

    @classmethod
    def plane_wave(cls, order: int) -> PlaneWaveState:
        return cls(CoordPoly.constant(_const(order, ParamPoly.one())), order)

    def __str__(self):
        return f"({self.amplitude}) * exp(i*(k1*x1 + k2*x2 + k3*x3 - omega*t))"


def _shifted_derivative(poly: CoordPoly, j: int, order: int) -> CoordPoly:
    # d_j (f e^{ik.r}) = (d_j f + i k_j f) e^{ik.r}
    ik = _const(order, ParamPoly.const(I) * _k(j))
    return poly.diff(j) + poly * ik


def apply_to_plane_wave(op: DiffOp, state: PlaneWaveState) -> PlaneWaveState:
    """Apply a normal-ordered operator to ``amplitude * phase``."""
    order = state.order
    out = CoordPoly()
    cache: dict[tuple[int, int, int], CoordPoly] = {}
    for mono, c in op.terms.items():
        a, b = mono[:3], mono[3:]
        if b not in cache:
            f = state.amplitude
            for j in (1, 2, 3):
                for _ in range(b[j - 1]):
                    f = _shifted_derivative(f, j, order)
            cache[b] = f
        f = cache[b] * CoordPoly.monomial(*a, coef=ThetaSeries.one(order))
        out = out + f.map_coefficients(lambda v, c=c: c * v)
    return PlaneWaveState(out, order)


def apply_momentum(j: int, order: int, state: PlaneWaveState | None = None) -> PlaneWaveState:
    """``P_{X_j}`` truncated at theta^order applied to ``state`` (plane wave by default)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if state is None:
        state = PlaneWaveState.plane_wave(order)
    elif state.order != order:
        raise ValueError("state order differs from requested order")
    return apply_to_plane_wave(build_realized("P", j, order), state)


def momentum_amplitudes(order: int) -> list[CoordPoly]:
    return [apply_momentum(j, order).amplitude for j in (1, 2, 3)]


def gauge_potential(order: int) -> list[CoordPoly]:
    """``A_j = hbar k_j - (P_j Psi)/Psi`` for the unit-amplitude plane wave.

    The constant pieces are kept; they do not contribute to the curl.
    """
    out = []
    for j, amp in enumerate(momentum_amplitudes(order), start=1):
        classical = _const(order, ParamPoly.var("hbar") * _k(j))
        out.append(CoordPoly.constant(classical) - amp)
    return out


def curl(a: list[CoordPoly]) -> list[CoordPoly]:
    out = []
    for i in (1, 2, 3):
        comp = CoordPoly()
        for (ii, j, k), sign in LEVI_CIVITA.items():
            if ii == i:
                d = a[k - 1].diff(j)
                comp = comp + (d if sign > 0 else -d)
        out.append(comp)
    return out


def divergence(b: list[CoordPoly]) -> CoordPoly:
    total = CoordPoly()
    for j in (1, 2, 3):
        total = total + b[j - 1].diff(j)
    return total


# ---------------------------------------------------------------------------
# decomposition of the field
# ---------------------------------------------------------------------------


def _order_part(poly: CoordPoly, n: int) -> CoordPoly:
    def pick(c: ThetaSeries) -> ThetaSeries:
        cs = [v if m == n else v - v for m, v in enumerate(c.coeffs)]
        return ThetaSeries(cs, c.order)

    return poly.map_coefficients(pick)


def _real_part(poly: CoordPoly) -> CoordPoly:
    return poly.map_coefficients(lambda c: c.map_coefficients(_re))


def _imag_part(poly: CoordPoly) -> CoordPoly:
    # i * Im(...), so that real + imaginary parts add back to the input
    return poly.map_coefficients(lambda c: c.map_coefficients(lambda v: _im(v) * I))


def _re(v):
    if isinstance(v, ParamPoly):
        return v.real_part()
    return GaussianRational(GaussianRational.coerce(v).re)


def _im(v):
    if isinstance(v, ParamPoly):
        return v.imag_part()
    return GaussianRational(GaussianRational.coerce(v).im)


def _constant_part(poly: CoordPoly) -> CoordPoly:
    c = poly.coefficient(0, 0, 0)
    return CoordPoly() if c is None else CoordPoly.constant(c)


@dataclass
class FieldDecomposition:
    """Magnetic field split by theta order, real/imaginary part and position dependence."""

    order: int
    field: list[CoordPoly]
    by_order: dict[int, dict[str, list[CoordPoly]]]
    first_order: list[CoordPoly]
    structured: list[CoordPoly]
    remainder: list[CoordPoly]
    imaginary_constant_second_order: list[CoordPoly]
    expected_imaginary_constant: list[CoordPoly]
    position_dependent: list[bool]
    notes: list[str] = field(default_factory=list)

    def reconstructs(self) -> bool:
        """The order/real/imaginary parts sum back to the field exactly."""
        for i in range(3):
            total = CoordPoly()
            for parts in self.by_order.values():
                total = total + parts["real"][i] + parts["imag"][i]
            const0 = _order_part(self.field[i], 0)
            if total + const0 != self.field[i]:
                return False
            if self.structured[i] + self.remainder[i] != self.field[i]:
                return False
        return True

    def structured_matches_imaginary_constant(self) -> bool:
        return all(
            a == b
            for a, b in zip(self.imaginary_constant_second_order, self.expected_imaginary_constant)
        )

    def to_dict(self) -> dict:
        def strs(polys):
            return [str(p) for p in polys]

        return {
            "order": self.order,
            "B": strs(self.field),
            "by_order": {
                str(n): {"real": strs(p["real"]), "imag": strs(p["imag"]),
                         "constant": strs(p["constant"]), "position_dependent": strs(p["position"])}
                for n, p in sorted(self.by_order.items())
            },
            "first_order_field": strs(self.first_order),
            "structured_term": strs(self.structured),
            "remainder": strs(self.remainder),
            "imaginary_constant_second_order": strs(self.imaginary_constant_second_order),
            "minus_i_theta_over_2_times_first_order": strs(self.expected_imaginary_constant),
            "imaginary_constant_is_structured": self.structured_matches_imaginary_constant(),
            "position_dependent": self.position_dependent,
            "parts_reconstruct_field": self.reconstructs(),
            "notes": self.notes,
        }


def decompose(b: list[CoordPoly], order: int) -> FieldDecomposition:
    """Split ``B`` and extract ``(1 - i theta / 2) B^(1)``.

    ``B^(1)`` is the theta^1 part of the field itself; the structured term is
    that field times ``1 - i theta / 2`` (truncated), and the remainder is
    everything else.
    """
    by_order: dict[int, dict[str, list[CoordPoly]]] = {}
    for n in range(1, order + 1):
        parts = [_order_part(comp, n) for comp in b]
        by_order[n] = {
            "real": [_real_part(p) for p in parts],
            "imag": [_imag_part(p) for p in parts],
            "constant": [_constant_part(p) for p in parts],
            "position": [p - _constant_part(p) for p in parts],
        }
    if order >= 1:
        first = [_order_part(comp, 1) for comp in b]
        factor = ThetaSeries([GaussianRational(1), _MINUS_HALF_I], order)
        structured = [p.map_coefficients(lambda c: c * factor) for p in first]
    else:
        first = [CoordPoly() for _ in b]
        structured = [CoordPoly() for _ in b]
    remainder = [bb - s for bb, s in zip(b, structured)]
    if order >= 2:
        imag_const = [_constant_part(by_order[2]["imag"][i]) for i in range(3)]
        shift = ThetaSeries([GaussianRational(), _MINUS_HALF_I], order)
        expected = [p.map_coefficients(lambda c: c * shift) for p in first]
    else:
        imag_const = [CoordPoly() for _ in b]
        expected = [CoordPoly() for _ in b]
    position = [bool(comp - _constant_part(comp)) for comp in b]
    notes = []
    if any(position):
        notes.append("field depends on position (anisotropic beyond first order)")
    else:
        notes.append("field is constant in position")
    return FieldDecomposition(order, b, by_order, first, structured, remainder,
                              imag_const, expected, position, notes)
