import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rfnt import specialfn as sf
from rfnt.sphere import gaussian_nodes


class TestGegenbauer:
    def test_degree_zero_is_one(self):
        assert sf.gegenbauer_eval(30, 0, 7.3) == 1.0

    def test_degree_one_is_t_over_d(self):
        assert sf.gegenbauer_eval(30, 1, 6.0) == pytest.approx(0.2, abs=1e-15)

    def test_degree_two_closed_form(self):
        # one recurrence step from Q_0, Q_1 gives Q_2(t) = (t^2 - d)/(d(d-1))
        d = 10
        for t0 in (-4.0, 0.3, 9.99):
            expect = (t0 * t0 - d) / (d * (d - 1))
            assert sf.gegenbauer_eval(d, 2, t0) == pytest.approx(expect, rel=1e-12)
        assert sf.gegenbauer_eval(d, 2, float(d)) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("d", [5, 10, 50, 100])
    def test_recurrence_residual(self, d):
        rng = np.random.default_rng(0)
        t = rng.uniform(-d, d, 200)
        table = sf.GegenbauerEvaluator(d, 11).table(t)
        for k in range(1, 11):
            s_k, t_k = sf.recurrence_coeffs(d, k)
            resid = (t / d) * table[k] - s_k * table[k - 1] - t_k * table[k + 1]
            bound = 1e-10 * np.maximum(1.0, np.abs(table[k]))
            assert np.all(np.abs(resid) <= bound)

    @settings(max_examples=50, deadline=None)
    @given(d=st.integers(2, 300), k=st.integers(0, 15))
    def test_normalization_at_endpoint(self, d, k):
        assert sf.gegenbauer_eval(d, k, float(d)) == pytest.approx(1.0, rel=1e-9)

    def test_domain_and_argument_errors(self):
        with pytest.raises(ValueError):
            sf.gegenbauer_eval(30, 2, 30.001)
        with pytest.raises(ValueError):
            sf.gegenbauer_eval(1, 2, 0.0)
        # within the 1e-12 slack is fine
        sf.gegenbauer_eval(30, 2, 30.0 * (1 + 5e-13))

    @pytest.mark.parametrize("d,k", [(d, k) for d in (5, 10, 30) for k in range(5)])
    def test_rodrigues_oracle(self, d, k):
        sympy = pytest.importorskip("sympy")
        t = sympy.symbols("t")
        base = (1 - t**2 / d**2) ** (sympy.Rational(2 * k + d - 3, 2))
        expr = (
            sympy.Rational(-1, 2) ** k * d**k
            * sympy.gamma(sympy.Rational(d - 1, 2))
            / sympy.gamma(k + sympy.Rational(d - 1, 2))
            * (1 - t**2 / d**2) ** (sympy.Rational(3 - d, 2))
            * sympy.diff(base, t, k)
        )
        fn = sympy.lambdify(t, sympy.simplify(expr), "numpy")
        pts = np.linspace(-0.95 * d, 0.95 * d, 20)
        got = sf.GegenbauerEvaluator(d, k).eval(k, pts)
        want = np.asarray(fn(pts), float) * np.ones_like(pts)
        assert np.allclose(got, want, rtol=1e-8, atol=1e-12)


class TestHermite:
    def test_low_degrees(self):
        x = 1.37
        assert sf.hermite_eval(0, 2.7) == 1.0
        assert sf.hermite_eval(1, x) == pytest.approx(x)
        assert sf.hermite_eval(2, x) == pytest.approx(x * x - 1)
        assert sf.hermite_eval(3, x) == pytest.approx(x**3 - 3 * x)

    def test_orthogonality_quadrature(self):
        K = 8
        x, w = gaussian_nodes()
        table = sf.HermiteEvaluator(K).table(x)
        from math import factorial
        for j in range(K + 1):
            for k in range(K + 1):
                val = float(np.dot(w, table[j] * table[k]))
                want = factorial(k) if j == k else 0.0
                assert val == pytest.approx(want, abs=1e-8 * max(1, want))

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            sf.hermite_eval(-1, 0.0)


class TestDimHarmonics:
    def test_known_values(self):
        assert sf.dim_harmonics(7, 0) == 1
        assert sf.dim_harmonics(17, 1) == 17
        assert sf.dim_harmonics(3, 2) == 5
        # B(3, k) = 2k + 1
        for k in range(10):
            assert sf.dim_harmonics(3, k) == 2 * k + 1

    def test_matches_ratio_formula(self):
        # (2k+d-2)/k * C(k+d-3, k-1), the display form, as an oracle
        from math import comb
        for d in (2, 3, 10, 57):
            for k in range(1, 12):
                want = (2 * k + d - 2) * comb(k + d - 3, k - 1) // k
                assert sf.dim_harmonics(d, k) == want

    def test_nondecreasing_in_k(self):
        for d in range(2, 201):
            vals = [sf.dim_harmonics(d, k) for k in range(21)]
            assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_large_arguments_exact(self):
        val = sf.dim_harmonics(1000, 20)
        assert isinstance(val, int)
        # cross-check by the difference-of-binomials identity computed big
        from math import comb
        assert val == comb(1019, 20) - comb(1017, 18)

    def test_invalid(self):
        with pytest.raises(ValueError):
            sf.dim_harmonics(1, 2)
        with pytest.raises(ValueError):
            sf.dim_harmonics(5, -1)


class TestHermiteLimit:
    def test_degree_zero_gap_vanishes(self):
        assert sf.gegenbauer_hermite_gap(37, 0) == 0.0

    def test_degree_one_exact_for_all_d(self):
        # Q_1(sqrt(d) x) = x/sqrt(d) and B(d,1) = d make it exact
        assert sf.gegenbauer_hermite_gap(320, 1) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("k", range(6))
    def test_gap_decreasing_in_d(self, k):
        gaps = [sf.gegenbauer_hermite_gap(d, k) for d in (20, 80, 320)]
        assert gaps[0] >= gaps[1] >= gaps[2]
        if k >= 2:
            assert gaps[0] > gaps[1] > gaps[2]

    def test_out_of_range_rejected(self):
        with pytest.raises(OverflowError):
            sf.gegenbauer_hermite_gap(100, 13)
        with pytest.raises(OverflowError):
            sf.gegenbauer_hermite_gap(2001, 3)
