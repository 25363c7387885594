from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from zetalab.bandfn import LogBandFunction, star_convolve
from zetalab.precision import HPMatrix
from zetalab.weil import (
    explicit_formula_profile,
    explicit_formula_residual,
    mellin_hat,
    pole_constraint_vectors,
    primes_up_to,
    w_arch,
    w_prime,
    weil_gram,
    weil_gram_complex,
    weil_gram_spectrum,
)
from zetalab.zerotable import bundled_zero_table


@pytest.fixture(scope="module")
def zeros():
    return bundled_zero_table()


class TestMellinHat:
    def test_constant_basis_at_zero(self):
        f = LogBandFunction(4, {0: 1})
        with mp.workprec(256):
            want = mp.sqrt(2 * mp.log(2))
            assert abs(mellin_hat(f, 0) - want) < mpf(10) ** -70

    def test_spot_values_vs_quadrature(self):
        f = LogBandFunction(9, {3: 1, -1: Fraction(1, 7)})
        with mp.workprec(256):
            L = f.log_halfwidth()
            for s in (mpf(2), mpf(-11) / 3):
                quad = mp.quad(lambda t: f.evaluate_log(t) * mp.expj(-s * t), [-L, L])
                assert abs(mellin_hat(f, s) - quad) < mpf(10) ** -30

    def test_real_for_symmetric(self):
        f = LogBandFunction.cosine_power(4, 2)
        with mp.workprec(200):
            assert abs(mp.im(mellin_hat(f, mpf(7) / 3))) < mpf(10) ** -50


class TestWPrime:
    def test_support_inside_prime_window_vanishes(self):
        # support in (1/2, 2) strictly: any lam2 < 4 band works for p = 2
        f = LogBandFunction(mpf(3.9), {0: 1, 1: Fraction(1, 3)})
        assert w_prime(2, f) == 0

    def test_single_term_value(self):
        # f(2) = f(1/2) = 1 with lambda in (2, 4): only m = 1 contributes
        with mp.workprec(300):
            f0 = LogBandFunction(9, {0: 1})
            c0 = f0.evaluate(1)
            f = LogBandFunction(9, {0: 1 / c0})
            got = w_prime(2, f, 256)
            want = mp.sqrt(2) * mp.log(2)
            assert abs(got - want) < mpf(10) ** -70

    def test_prime_above_band(self):
        f = LogBandFunction(4, {0: 1, 1: 1})
        assert w_prime(3, f) == 0

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            w_prime(6, LogBandFunction(4, {0: 1}))


class TestWArch:
    def test_zero_function(self):
        assert w_arch(LogBandFunction(4, {})) == 0

    def test_gaussian_in_log_two_rules(self):
        def gauss(x):
            return mp.exp(-mp.log(x) ** 2)

        v1 = w_arch(gauss, 180, method="tanh-sinh")
        v2 = w_arch(gauss, 180, method="gauss-legendre")
        assert abs(v1 - v2) < mpf(10) ** -45

    def test_band_path_matches_generic(self):
        f = LogBandFunction.cosine_power(4, 2, modulation=1)
        band_val = w_arch(f, 192)
        with mp.workprec(240):
            def generic(x):
                return f.evaluate(x)

            # the support edge is a kink in log coordinates
            gen_val = w_arch(generic, 160, breakpoints=[mp.log(2)])
            assert abs(band_val - gen_val) < mpf(10) ** -40

    def test_vanishing_at_one_truncates(self):
        # f(1) = 0: no distributional term, integral over the band only
        f = LogBandFunction(4, {1: 1, -1: -1})  # odd combination: f(1) = 0
        with mp.workprec(200):
            assert abs(f.value_at_one()) < mpf(10) ** -50
        v = w_arch(f, 160)
        assert mp.isfinite(v)


class TestExplicitFormula:
    def test_zero_function(self, zeros):
        chk = explicit_formula_residual(LogBandFunction(4, {}), zeros.truncated(10))
        assert chk.lhs == chk.rhs == chk.residual == 0

    def test_smooth_bump_small_residual(self, zeros):
        f = LogBandFunction.cosine_power(4, 4, modulation=1)
        chk = explicit_formula_residual(f, zeros, 256)
        assert abs(chk.residual) < mpf(10) ** -8

    def test_truncation_dominates_short_table(self, zeros):
        f = LogBandFunction.cosine_power(4, 4, modulation=1)
        profile = explicit_formula_profile(f, zeros, [10, 10000], 256)
        assert abs(profile[0].residual) > 1000 * abs(profile[1].residual)

    def test_rejects_bad_sizes(self, zeros):
        f = LogBandFunction.cosine_power(4, 4)
        with pytest.raises(ValueError):
            explicit_formula_profile(f, zeros, [100, 50], 128)


class TestWeilGram:
    def test_hermitian_lam2_5(self):
        G = weil_gram_complex(5, 16, 128)
        with mp.workprec(160):
            resid = max(
                abs(G[i][j] - mp.conj(G[j][i]))
                for i in range(33)
                for j in range(33)
            )
            assert resid < mpf(2) ** -100
        # and the real-basis matrix passes HPMatrix's Hermitianity gate
        m = weil_gram(5, 16, 128)
        assert m.dim == 33

    def test_no_prime_terms_below_sqrt2(self):
        from zetalab.weil import _prime_powers

        with mp.workprec(128):
            assert _prime_powers(mpf(1.9)) == []
            assert len(_prime_powers(mpf(4.1))) == 3  # 2, 3, 4

    def test_closed_form_matches_generic_route(self):
        # dual route: poles - W_R(h) - sum W_p(h) with h built by star_convolve
        prec = 160
        lam2, K = 5, 3
        G = weil_gram_complex(lam2, K, prec)
        with mp.workprec(prec + 48):
            for (j, k) in [(0, 0), (1, -2), (3, 3), (0, 2)]:
                h = star_convolve(
                    LogBandFunction(lam2, {k: 1}), LogBandFunction(lam2, {j: 1})
                )
                val = h.mellin(mpc(0, 0.5)) + h.mellin(mpc(0, -0.5))
                val -= w_arch(h, prec)
                S = h.log_halfwidth()
                for p in primes_up_to(int(mp.exp(S)) + 1):
                    if mp.log(p) <= S:
                        val -= w_prime(p, h, prec)
                assert abs(val - G[j + K][k + K]) < mpf(10) ** -40

    def test_primes_above_band_never_contribute(self):
        # assembling with a larger sieve bound cannot change the matrix:
        # the support truncation is exact
        from zetalab.weil import _prime_powers

        with mp.workprec(128):
            pp = _prime_powers(mpf(11))
            assert max(int(round(float(mp.exp(t)))) for t, _ in pp) < 11
            assert {int(round(float(mp.exp(t)))) for t, _ in pp} == {2, 3, 4, 5, 7, 8, 9}

    def test_positivity_at_small_lambda(self):
        spec = weil_gram_spectrum(2, 8, 160, project_poles=True)
        for lam, resid in zip(spec.eigenvalues, spec.residuals):
            assert lam > -resid

    def test_unprojected_gram_is_psd_too(self):
        # the zero-side form is PSD outright; poles only enter the prime-side
        # expression of it
        spec = weil_gram_spectrum(2, 6, 160)
        assert spec.eigenvalues[0] > -max(spec.residuals)

    def test_parity_blocks_decouple(self):
        m = weil_gram(5, 6, 128)
        K = 6
        with mp.workprec(128):
            for j in range(0, K + 1):
                for k in range(K + 1, 2 * K + 1):
                    assert abs(m[j, k]) < mpf(2) ** -60

    def test_pole_constraints_annihilate_projected_gram(self):
        cons = pole_constraint_vectors(2, 5, 160)
        assert len(cons) == 2 and len(cons[0]) == 11

    def test_spectrum_residuals_certified(self):
        spec = weil_gram_spectrum(5, 8, 192)
        assert max(spec.residuals) < mpf(2) ** -140
        assert spec.smallest_positive is not None
