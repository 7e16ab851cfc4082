"""Randomized algebraic properties, 1000 cases per suite."""

import cmath

from hypothesis import given, settings
from hypothesis import strategies as st

from qweyl.aq import AqElement, rewrite_word
from qweyl.freeparticle import curl, divergence
from qweyl.realization import beta_exact, build_realized, exact_action
from qweyl.scalars import (
    GaussianRational,
    LaurentQ,
    ParamPoly,
    ThetaSeries,
    theta_inverse,
    theta_sqrt,
)
from qweyl.weyl import CoordPoly, DiffOp

from strategies import (
    aq_elements,
    coord_polys,
    diff_ops,
    gaussians,
    generator_words,
    laurent_polys,
    param_polys,
    theta_series,
)

CASES = settings(max_examples=1000)


def ring_axioms(a, b, c, zero, one, commutative=True):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + zero == a
    assert a - a == zero
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * one == a and one * a == a
    if commutative:
        assert a * b == b * a


class TestRingAxioms:
    @CASES
    @given(gaussians, gaussians, gaussians)
    def test_gaussian_rationals(self, a, b, c):
        ring_axioms(a, b, c, GaussianRational(), GaussianRational(1))

    @CASES
    @given(param_polys(), param_polys(), param_polys())
    def test_param_polys(self, a, b, c):
        ring_axioms(a, b, c, ParamPoly.zero(), ParamPoly.one())

    @CASES
    @given(laurent_polys(), laurent_polys(), laurent_polys())
    def test_laurent_polys(self, a, b, c):
        ring_axioms(a, b, c, LaurentQ.zero(), LaurentQ.one())

    @CASES
    @given(theta_series(2), theta_series(2), theta_series(2))
    def test_theta_series(self, a, b, c):
        ring_axioms(a, b, c, ThetaSeries.zero(2), ThetaSeries.one(2))

    @CASES
    @given(coord_polys(max_terms=3, max_exp=2), coord_polys(max_terms=3, max_exp=2),
           coord_polys(max_terms=3, max_exp=2))
    def test_coord_polys(self, a, b, c):
        one = CoordPoly({(0, 0, 0): GaussianRational(1)})
        ring_axioms(a, b, c, CoordPoly(), one)

    @CASES
    @given(diff_ops(), diff_ops(), diff_ops())
    def test_diff_ops(self, a, b, c):
        ring_axioms(a, b, c, DiffOp(), DiffOp.identity(), commutative=False)

    @CASES
    @given(aq_elements(max_terms=2), aq_elements(max_terms=2), aq_elements(max_terms=2))
    def test_aq_elements(self, a, b, c):
        ring_axioms(a, b, c, AqElement(), AqElement.one(), commutative=False)


class TestSeriesIdentities:
    @CASES
    @given(theta_series(3))
    def test_inverse(self, s):
        s = ThetaSeries([ParamPoly.one()] + list(s.coeffs[1:]), 3)
        inv = theta_inverse(s)
        assert s * inv == ThetaSeries.one(3)
        assert inv * s == ThetaSeries.one(3)

    @CASES
    @given(theta_series(3))
    def test_sqrt(self, s):
        s = ThetaSeries([ParamPoly.one()] + list(s.coeffs[1:]), 3)
        r = theta_sqrt(s)
        assert r * r == s
        assert r[0] == 1


class TestSerialization:
    @CASES
    @given(param_polys())
    def test_param_poly(self, p):
        assert ParamPoly.parse(str(p)) == p

    @CASES
    @given(laurent_polys())
    def test_laurent(self, p):
        assert LaurentQ.parse(str(p)) == p

    @CASES
    @given(theta_series(2))
    def test_theta_series(self, s):
        assert ThetaSeries.parse(s.to_text(), ring=ParamPoly) == s

    @CASES
    @given(diff_ops())
    def test_diff_op(self, a):
        assert DiffOp.parse(str(a)) == a

    @CASES
    @given(aq_elements())
    def test_aq_element(self, a):
        assert AqElement.parse(str(a)) == a


# ---------------------------------------------------------------------------
# composition against a naive word rewriter
# ---------------------------------------------------------------------------

# letters: ("x", j) and ("d", j); normal order puts x before d, ascending index
def _letters(mono):
    word = []
    for j in range(3):
        word += [("x", j)] * mono[j]
    for j in range(3):
        word += [("d", j)] * mono[3 + j]
    return word


def _out_of_order(a, b):
    if a[0] == "d" and b[0] == "x":
        return True
    return a[0] == b[0] and a[1] > b[1]


def _rewrite_once(word):
    """One step: the first out-of-order adjacent pair is swapped."""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if _out_of_order(a, b):
            swapped = word[:i] + [b, a] + word[i + 2:]
            if a[0] == "d" and b[0] == "x" and a[1] == b[1]:
                return [swapped, word[:i] + word[i + 2:]]
            return [swapped]
    return None


def _word_normal_form(word):
    out = {}
    stack = [word]
    while stack:
        w = stack.pop()
        nxt = _rewrite_once(w)
        if nxt is None:
            mono = [0] * 6
            for kind, j in w:
                mono[j + (3 if kind == "d" else 0)] += 1
            out[tuple(mono)] = out.get(tuple(mono), 0) + 1
        else:
            stack.extend(nxt)
    return DiffOp({m: GaussianRational(c) for m, c in out.items()})


monomials = st.tuples(*[st.integers(0, 2)] * 6)


class TestCompose:
    @CASES
    @given(diff_ops(), diff_ops(), diff_ops())
    def test_associative(self, a, b, c):
        assert a.compose(b).compose(c) == a.compose(b.compose(c))

    @CASES
    @given(monomials, monomials)
    def test_matches_single_step_rewriting(self, m1, m2):
        a = DiffOp({m1: GaussianRational(1)})
        b = DiffOp({m2: GaussianRational(1)})
        assert a.compose(b) == _word_normal_form(_letters(m1) + _letters(m2))

    @CASES
    @given(diff_ops(), diff_ops(), coord_polys())
    def test_matches_application(self, a, b, f):
        assert a.compose(b).apply(f) == a.apply(b.apply(f))


# ---------------------------------------------------------------------------
# the quantum Weyl algebra
# ---------------------------------------------------------------------------


class TestAq:
    @CASES
    @given(generator_words)
    def test_confluence(self, word):
        left = rewrite_word(word, "leftmost")
        assert rewrite_word(word, "rightmost") == left
        assert AqElement.from_word(word) == AqElement(left)

    @CASES
    @given(generator_words, generator_words)
    def test_words_multiply(self, u, v):
        assert AqElement.from_word(u) * AqElement.from_word(v) == AqElement.from_word(u + v)

    @CASES
    @given(aq_elements(max_terms=2), aq_elements(max_terms=2), aq_elements(max_terms=2))
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @CASES
    @given(generator_words)
    def test_classical_limit_is_the_weyl_algebra(self, word):
        # X_j -> x_j, d_j -> d_j at q = 1
        classical = AqElement.from_word(word).specialize(q=1)
        got = DiffOp({k: c.constant_term() for k, c in classical.terms.items()})
        want = DiffOp.identity()
        for g in word:
            mono = [0] * 6
            mono[g] = 1
            want = want.compose(DiffOp({tuple(mono): GaussianRational(1)}))
        assert got == want


# ---------------------------------------------------------------------------
# field and classical limits
# ---------------------------------------------------------------------------


class TestField:
    @CASES
    @given(coord_polys(), coord_polys(), coord_polys())
    def test_divergence_of_curl(self, a1, a2, a3):
        assert not divergence(curl([a1, a2, a3]))

    @CASES
    @given(coord_polys())
    def test_curl_of_gradient(self, f):
        assert not any(curl([f.diff(1), f.diff(2), f.diff(3)]))


class TestClassicalLimits:
    @CASES
    @given(st.sampled_from(["X", "dX", "P"]), st.integers(1, 3), st.integers(0, 3))
    def test_operators(self, kind, j, order):
        mono = [0] * 6
        mono[j - 1 if kind == "X" else 2 + j] = 1
        if kind == "P":
            classical = DiffOp.parse(f"-i*hbar*d{j}", order=order)
        else:
            classical = DiffOp({tuple(mono): GaussianRational(1)}).map_coefficients(
                lambda c: ThetaSeries.const(ParamPoly.const(c), order)
            )
        assert build_realized(kind, j, order).truncate(0) == classical.truncate(0)

    @CASES
    @given(st.integers(0, 30), st.floats(min_value=1e-9, max_value=1e-6))
    def test_beta(self, n, theta):
        assert abs(beta_exact(n, theta) - 1) < 10 * (n + 1) ** 2 * theta

    @CASES
    @given(st.sampled_from(["X", "dX"]), st.integers(1, 3), st.tuples(*[st.integers(0, 6)] * 3))
    def test_exact_action(self, kind, j, exps):
        res = exact_action(kind, j, exps, 0.0)
        e = list(exps)
        if kind == "X":
            e[j - 1] += 1
            assert res == (tuple(e), 1)
        elif exps[j - 1] == 0:
            assert res is None
        else:
            e[j - 1] -= 1
            assert res[0] == tuple(e)
            assert cmath.isclose(res[1], exps[j - 1])
