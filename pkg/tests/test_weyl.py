import pytest

from qweyl.scalars import GaussianRational, ThetaSeries
from qweyl.weyl import (
    CoordPoly,
    DiffOp,
    apply_to_monomial,
    m_polynomial_to_op,
    power_of_M,
    stirling2,
)


def op(text):
    return DiffOp.parse(text)


class TestCompose:
    def test_leibniz(self):
        assert op("d1") * op("x1") == op("x1*d1 + 1")

    def test_second_order(self):
        assert op("d1^2") * op("x1^2") == op("x1^2*d1^2 + 4*x1*d1 + 2")

    def test_m_squared(self):
        assert op("x1*d1") * op("x1*d1") == op("x1^2*d1^2 + x1*d1")

    def test_other_coordinates_commute(self):
        assert op("d2") * op("x1") == op("x1*d2")

    def test_mixed(self):
        assert op("d1*d3") * op("x1*x3") == op("x1*x3*d1*d3 + x1*d1 + x3*d3 + 1")

    def test_scalar_and_identity(self):
        a = op("x1*d2 + (1/2)*i*x3")
        assert DiffOp.identity() * a == a
        assert a * DiffOp.identity() == a
        assert (a * 2) == op("2*x1*d2 + i*x3")


class TestPowerOfM:
    def test_zero(self):
        assert power_of_M(2, 0) == DiffOp.identity()

    def test_two(self):
        assert power_of_M(1, 2) == op("x1^2*d1^2 + x1*d1")

    def test_three(self):
        assert power_of_M(3, 3) == op("x3^3*d3^3 + 3*x3^2*d3^2 + x3*d3")

    @pytest.mark.parametrize("n", range(7))
    def test_matches_repeated_compose(self, n):
        m = op("x2*d2")
        assert power_of_M(2, n) == m**n

    def test_negative(self):
        with pytest.raises(ValueError):
            power_of_M(1, -1)

    def test_stirling_table(self):
        assert [stirling2(5, k) for k in range(6)] == [0, 1, 15, 25, 10, 1]

    def test_m_polynomial_conversion(self):
        # 2 + M - M^2  ->  2 + x d - (x^2 d^2 + x d)
        got = m_polynomial_to_op(1, {0: GaussianRational(2), 1: GaussianRational(1), 2: GaussianRational(-1)})
        assert got == op("2 - x1^2*d1^2")


class TestApply:
    def test_eigen_action(self):
        assert apply_to_monomial(op("x1*d1"), 3, 0, 0) == CoordPoly({(3, 0, 0): 3})

    def test_derivative_of_constant(self):
        assert not apply_to_monomial(op("d1"), 0, 0, 0)

    def test_second_derivative(self):
        assert apply_to_monomial(op("x1^2*d1^2"), 2, 0, 0) == CoordPoly({(2, 0, 0): 2})

    def test_diagonal_action_exhaustive(self):
        for j in (1, 2, 3):
            for n in range(7):
                m_n = power_of_M(j, n)
                for p in range(7):
                    exps = [0, 0, 0]
                    exps[j - 1] = p
                    assert apply_to_monomial(m_n, *exps) == CoordPoly({tuple(exps): p**n})


class TestText:
    def test_canonical_form(self):
        a = op("d1*x1*(1/2)*i")
        assert str(a) == "(1/2)*i + (1/2)*i*x1*d1"

    def test_series_coefficients(self):
        a = DiffOp.parse("(1/2)*i*theta*x1*d1 - (3/8)*theta^2*hbar*x2", order=2)
        assert str(a) == "(-3/8)*theta^2*hbar*x2 + (1/2)*i*theta*x1*d1"
        assert DiffOp.parse(str(a), order=2) == a

    def test_coordinate_poly_rejects_derivatives(self):
        with pytest.raises(ValueError):
            CoordPoly.parse("x1*d1", order=1)


def test_numeric_specialization():
    a = DiffOp.parse("1 + i*theta*hbar*x1*d1", order=1)
    n = a.numeric(0.5, hbar=2.0)
    assert n.coefficient((1, 0, 0), (1, 0, 0)) == pytest.approx(1j)
    poly = n.apply(CoordPoly.monomial(2, 0, 0, coef=1 + 0j))
    assert poly.coefficient(2, 0, 0) == pytest.approx(1 + 2j)


def test_truncate():
    a = DiffOp.parse("1 + theta*x1 + theta^2*d1", order=2)
    assert a.truncate(1) == DiffOp.parse("1 + theta*x1", order=1)
    assert isinstance(a.truncate(1).coefficient((0, 0, 0), (0, 0, 0)), ThetaSeries)
