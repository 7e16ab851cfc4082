import pytest

from qweyl.freeparticle import (
    PlaneWaveState,
    apply_momentum,
    apply_to_plane_wave,
    curl,
    decompose,
    divergence,
    gauge_potential,
    momentum_amplitudes,
)
from qweyl.weyl import CoordPoly, DiffOp

P3_D2 = "k3*hbar + (-1/2)*theta*k3^2*hbar*x3 + (-3/8)*i*theta^2*k3^2*hbar*x3 + (5/24)*theta^2*k3^3*hbar*x3^2"
B_D2 = [
    "-theta*k2*k3*hbar + (-1/2)*i*theta^2*k2*k3*hbar + (1/2)*theta^2*k2^2*k3*hbar*x2"
    " + theta^2*k2*k3^2*hbar*x3",
    "theta*k1*k3*hbar + (1/2)*i*theta^2*k1*k3*hbar + (-1/2)*theta^2*k1^2*k3*hbar*x1"
    " - theta^2*k1*k2*k3*hbar*x2 - theta^2*k1*k3^2*hbar*x3",
    "-theta*k1*k2*hbar + (-1/2)*i*theta^2*k1*k2*hbar + (1/2)*theta^2*k1^2*k2*hbar*x1"
    " + theta^2*k1*k2^2*hbar*x2 + theta^2*k1*k2*k3*hbar*x3",
]


def strs(polys):
    return [str(p) for p in polys]


def poly(text, order):
    return CoordPoly.parse(text, order=order)


class TestMomentum:
    def test_classical(self):
        assert strs(momentum_amplitudes(0)) == ["k1*hbar", "k2*hbar", "k3*hbar"]

    def test_first_order_y(self):
        assert str(apply_momentum(2, 1).amplitude) == (
            "k2*hbar + (-1/2)*theta*k2^2*hbar*x2 - theta*k2*k3*hbar*x3"
        )

    def test_second_order_z(self):
        assert str(apply_momentum(3, 2).amplitude) == P3_D2

    def test_second_order_x_monomials(self):
        assert len(momentum_amplitudes(2)[0]) == 10

    def test_order_coherence(self):
        # the D = 1 result is the D = 2 result truncated
        for a1, a2 in zip(momentum_amplitudes(1), momentum_amplitudes(2)):
            assert a2.truncate(1) == a1

    def test_state_order_must_match(self):
        with pytest.raises(ValueError):
            apply_momentum(1, 2, PlaneWaveState.plane_wave(1))
        with pytest.raises(ValueError):
            apply_momentum(1, -1)

    def test_derivative_on_plane_wave(self):
        state = PlaneWaveState.plane_wave(1)
        got = apply_to_plane_wave(DiffOp.parse("d1^2", order=1), state).amplitude
        assert got == poly("-k1^2", 1)

    def test_polynomial_amplitude(self):
        state = PlaneWaveState(poly("x1", 1), 1)
        got = apply_to_plane_wave(DiffOp.parse("d1", order=1), state).amplitude
        assert got == poly("1 + i*k1*x1", 1)


class TestGaugeAndField:
    def test_first_order_potential(self):
        assert strs(gauge_potential(1)) == [
            "(1/2)*theta*k1^2*hbar*x1 + theta*k1*k2*hbar*x2 + theta*k1*k3*hbar*x3",
            "(1/2)*theta*k2^2*hbar*x2 + theta*k2*k3*hbar*x3",
            "(1/2)*theta*k3^2*hbar*x3",
        ]

    def test_classical_potential_vanishes(self):
        assert not any(gauge_potential(0))

    def test_first_order_field(self):
        assert strs(curl(gauge_potential(1))) == [
            "-theta*k2*k3*hbar",
            "theta*k1*k3*hbar",
            "-theta*k1*k2*hbar",
        ]

    def test_second_order_field(self):
        assert strs(curl(gauge_potential(2))) == B_D2

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_divergence_free(self, order):
        assert not divergence(curl(gauge_potential(order)))

    def test_curl_of_constant(self):
        c = poly("k1*hbar + theta", 1)
        assert not any(curl([c, c, c]))

    def test_curl_of_gradient(self):
        f = poly("x1^2*x2 + theta*x2*x3^3 + k1*x1*x3", 1)
        assert not any(curl([f.diff(1), f.diff(2), f.diff(3)]))


class TestDecompose:
    def test_first_order_is_constant(self):
        d = decompose(curl(gauge_potential(1)), 1)
        assert d.reconstructs()
        assert d.position_dependent == [False, False, False]

    def test_second_order_reconstructs(self):
        d = decompose(curl(gauge_potential(2)), 2)
        assert d.reconstructs()
        assert d.position_dependent == [True, True, True]

    def test_imaginary_constant_has_the_opposite_sign(self):
        # the second-order imaginary constant is +(i theta / 2) B^(1)
        d = decompose(curl(gauge_potential(2)), 2)
        assert strs(d.imaginary_constant_second_order) == [
            "(-1/2)*i*theta^2*k2*k3*hbar",
            "(1/2)*i*theta^2*k1*k3*hbar",
            "(-1/2)*i*theta^2*k1*k2*hbar",
        ]
        assert all(a == -b for a, b in zip(d.imaginary_constant_second_order, d.expected_imaginary_constant))
        assert not d.structured_matches_imaginary_constant()

    def test_structured_term(self):
        d = decompose(curl(gauge_potential(2)), 2)
        assert str(d.structured[2]) == "-theta*k1*k2*hbar + (1/2)*i*theta^2*k1*k2*hbar"

    def test_report_shape(self):
        d = decompose(curl(gauge_potential(2)), 2).to_dict()
        assert d["parts_reconstruct_field"] is True
        assert d["imaginary_constant_is_structured"] is False
        assert set(d["by_order"]) == {"1", "2"}


@pytest.mark.parametrize("order", [1, 2, 3])
def test_classical_limit(order):
    for j, amp in enumerate(momentum_amplitudes(order), start=1):
        assert str(amp.truncate(0)) == f"k{j}*hbar"
    assert not any(b.truncate(0) for b in curl(gauge_potential(order)))
