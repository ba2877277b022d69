import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonefid.cloner import (
    CloneParams,
    alpha_sq,
    error_distribution,
    fidelity,
    info_fidelity,
    info_infidelity,
    reduced_diagonal,
    spectrum,
)
from clonefid.errors import DomainError

KAPPAS = (2, 3, 4, 8)


def alpha_sq_by_factorials(N, M, j):
    f = math.factorial
    return Fraction(N + 1, M + 1) * Fraction(f(M - N) * f(M - j), f(M - N - j) * f(M))


class TestParams:
    def test_kappa(self):
        assert CloneParams(3, 12).kappa == 4
        assert CloneParams(3, 7).kappa is None
        assert CloneParams.from_kappa(5, 8) == CloneParams(5, 40)

    @pytest.mark.parametrize("N,M", [(0, 3), (4, 3), (2.0, 4), (True, 3)])
    def test_invalid(self, N, M):
        with pytest.raises(DomainError):
            CloneParams(N, M)


class TestAlpha:
    def test_examples(self):
        p = CloneParams(1, 2)
        assert alpha_sq(p, 0, "exact") == Fraction(2, 3) == alpha_sq_by_factorials(1, 2, 0)
        assert alpha_sq(p, 1, "exact") == Fraction(1, 3) == alpha_sq_by_factorials(1, 2, 1)
        assert [alpha_sq(CloneParams(2, 4), j, "exact") for j in range(3)] == [
            Fraction(3, 5),
            Fraction(3, 10),
            Fraction(1, 10),
        ]
        assert alpha_sq(CloneParams(7, 7), 0, "exact") == 1

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            alpha_sq(CloneParams(2, 4), 3)
        with pytest.raises(DomainError):
            alpha_sq(CloneParams(2, 4), -1)

    @pytest.mark.parametrize("N,M", [(1, 2), (3, 11), (10, 80), (40, 320)])
    def test_matches_factorial_form(self, N, M):
        p = CloneParams(N, M)
        for j in range(M - N + 1):
            assert alpha_sq(p, j, "exact") == alpha_sq_by_factorials(N, M, j)
            assert alpha_sq(p, j, "log") == pytest.approx(float(alpha_sq_by_factorials(N, M, j)), rel=1e-11)

    def test_log_spectrum_matches_exact(self):
        p = CloneParams(17, 150)
        ex = spectrum(p, "exact").weights
        lg = spectrum(p, "log").weights
        np.testing.assert_allclose(lg, [float(w) for w in ex], rtol=1e-12, atol=1e-300)


def test_spectrum_normalized_exact():
    for N in range(1, 41, 3):
        for k in KAPPAS:
            assert spectrum(CloneParams.from_kappa(N, k), "exact").total() == 1


@pytest.mark.parametrize("N", [1000, 10_000])
@pytest.mark.parametrize("kappa", KAPPAS)
def test_spectrum_normalized_log(N, kappa):
    s = spectrum(CloneParams.from_kappa(N, kappa), "log")
    assert abs(s.total() - 1.0) <= 1e-9
    assert np.all(np.asarray(s.weights) >= 0)


class TestReducedDiagonal:
    def test_examples(self):
        assert reduced_diagonal(CloneParams(1, 2), 1, "exact").coeffs == [Fraction(5, 6), Fraction(1, 6)]
        assert reduced_diagonal(CloneParams(2, 4), 2, "exact").coeffs == [
            Fraction(23, 30),
            Fraction(13, 60),
            Fraction(1, 60),
        ]
        assert reduced_diagonal(CloneParams(4, 4), 4, "exact").coeffs == [1, 0, 0, 0, 0]

    def test_block_out_of_range(self):
        with pytest.raises(DomainError):
            reduced_diagonal(CloneParams(2, 4), 0)
        with pytest.raises(DomainError):
            reduced_diagonal(CloneParams(2, 4), 5)

    def test_trace_exact_all_blocks(self):
        for N, M in [(1, 2), (2, 9), (3, 12), (5, 20), (7, 60), (13, 60)]:
            p = CloneParams(N, M)
            for n in range(1, M + 1):
                d = reduced_diagonal(p, n, "exact")
                assert d.trace() == 1
                assert all(c >= 0 for c in d.coeffs)

    @pytest.mark.parametrize("N,M,n", [(3, 40, 1), (3, 40, 17), (3, 40, 40), (25, 100, 25), (25, 100, 80)])
    def test_log_matches_exact(self, N, M, n):
        p = CloneParams(N, M)
        ex = [float(c) for c in reduced_diagonal(p, n, "exact").coeffs]
        lg = reduced_diagonal(p, n, "log").coeffs
        np.testing.assert_allclose(lg, ex, rtol=1e-10, atol=1e-300)

    @pytest.mark.parametrize("kappa", [2, 8])
    def test_trace_log_figure_scale(self, kappa):
        p = CloneParams.from_kappa(1000, kappa)
        for n in (1, 500, 1000, p.M - 1, p.M):
            assert abs(reduced_diagonal(p, n, "log").trace() - 1.0) <= 1e-9

    def test_brute_force_sum_without_min_cutoff(self):
        # summing j past M-N with alpha_j := 0 must give the same coefficients
        N, M = 3, 10
        alphas = {j: alpha_sq_by_factorials(N, M, j) for j in range(M - N + 1)}
        for n in range(1, M + 1):
            brute = []
            for k in range(n + 1):
                s = Fraction(0)
                for j in range(0, M + 1):
                    if j in alphas and 0 <= j - k <= M - n:
                        s += alphas[j] * Fraction(math.comb(M - n, j - k) * math.comb(n, k), math.comb(M, j))
                brute.append(s)
            assert reduced_diagonal(CloneParams(N, M), n, "exact").coeffs == brute


class TestFidelity:
    def test_examples(self):
        assert fidelity(CloneParams(1, 2), "exact") == Fraction(5, 6)
        assert fidelity(CloneParams(2, 4), "exact") == Fraction(23, 30)
        assert fidelity(CloneParams(6, 6), "exact") == 1
        assert fidelity(CloneParams(6, 6), "log") == pytest.approx(1.0, abs=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 30), st.integers(0, 60))
    def test_two_paths_agree(self, N, extra):
        p = CloneParams(N, N + extra)
        f = fidelity(p, "exact")
        assert f == reduced_diagonal(p, N, "exact").coeffs[0]
        assert fidelity(p, "log") == pytest.approx(float(f), rel=1e-12)
        assert reduced_diagonal(p, N, "log").coeffs[0] == pytest.approx(float(f), rel=1e-12)

    def test_not_multiple_of_N(self):
        p = CloneParams(3, 7)
        assert p.kappa is None
        assert 0 < fidelity(p, "exact") < 1


class TestInfoFidelity:
    def test_examples(self):
        p = CloneParams(2, 4)
        assert info_fidelity(p, 1, "exact") == Fraction(59, 60)
        assert info_fidelity(p, 2, "exact") == 1
        assert info_fidelity(p, 0, "exact") == fidelity(p, "exact")
        assert info_fidelity(p, 1, "log") == pytest.approx(59 / 60, rel=1e-14)

    def test_err_domain(self):
        p = CloneParams(2, 4)
        with pytest.raises(DomainError):
            info_fidelity(p, 3)
        with pytest.raises(DomainError):
            info_fidelity(p, -1)

    def test_error_distribution_is_n_equals_N_block(self):
        p = CloneParams(5, 15)
        assert error_distribution(p, "exact") == reduced_diagonal(p, 5, "exact")

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 25), st.sampled_from(KAPPAS))
    def test_monotone_in_err_to_one(self, N, kappa):
        p = CloneParams.from_kappa(N, kappa)
        vals = [info_fidelity(p, e, "exact") for e in range(N + 1)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] == 1
        assert vals[0] == fidelity(p, "exact")

    def test_infidelity_tail(self):
        p = CloneParams.from_kappa(1000, 8)
        for e in (1, 6, 10):
            assert info_infidelity(p, e, "log") == pytest.approx(1 - info_fidelity(p, e, "log"), abs=1e-13)
        q = CloneParams(3, 9)
        assert info_infidelity(q, 1, "exact") == 1 - info_fidelity(q, 1, "exact")

    def test_decreasing_in_kappa_at_fixed_N_and_err(self):
        for N in (5, 30):
            for e in range(0, 4):
                vals = [info_fidelity(CloneParams.from_kappa(N, k), e, "exact") for k in (2, 3, 4, 8)]
                assert all(a > b for a, b in zip(vals, vals[1:]))
