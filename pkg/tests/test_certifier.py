import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperpd.certifier import (INCONCLUSIVE, NON_PD, NONNEGATIVE, PDVerdict, SignMap,
                               asymptotic_deviation, certify, find_zeros, sign_map,
                               sign_threshold, tail_integrability)
from hyperpd.geometry import Space
from hyperpd.kernels import EXACT_SHIFT, Gaussian, Sech, Wishart
from hyperpd.quadrature import DEFAULT_CONFIG
from hyperpd.transforms import SpectralSamples, closed_form_grid, forward_grid


class TestVerdict:

    def test_nonpd_must_be_robust(self):
        with pytest.raises(ValueError):
            PDVerdict(NON_PD, 1.0, value=-1e-13, err=1e-13, eps=1e-12)
        PDVerdict(NON_PD, 1.0, value=-1e-10, err=1e-13, eps=1e-12)

    def test_only_nonnegative_certifies(self):
        with pytest.raises(ValueError):
            PDVerdict(INCONCLUSIVE, reason="x", certified_pd=True)
        with pytest.raises(ValueError):
            PDVerdict("Maybe")

    @given(st.floats(0, 100), st.floats(-1e3, -1e-6), st.floats(0, 1e-9))
    def test_line_roundtrip(self, t, value, err):
        v = PDVerdict(NON_PD, t, value, err, 1e-12)
        assert PDVerdict.from_line(v.to_line()) == v

    def test_line_format(self):
        v = PDVerdict(NONNEGATIVE, t_max=30.0, tail_note="L2/Undetermined")
        assert v.to_line().startswith("status=SpectrallyNonnegative;t_max=30.0")
        assert PDVerdict.from_line(v.to_line()) == v
        w = PDVerdict(INCONCLUSIVE, reason="no decay")
        assert PDVerdict.from_line(w.to_line()) == w


def test_sign_threshold():
    assert sign_threshold(1.0, DEFAULT_CONFIG) == pytest.approx(1e-10)
    assert sign_threshold(1e-6, DEFAULT_CONFIG) == pytest.approx(1e-11)
    assert sign_threshold(1.0, DEFAULT_CONFIG, np.array([1.0, 1e-3])) == pytest.approx([1e-10, 1e-13])


class TestCertify:

    def test_gaussian_h3_lambda_1(self):
        v = certify(Space.H3, Gaussian(1.0), 20.0)
        assert v.status == NON_PD
        assert 2 * math.pi < v.witness_t < 4 * math.pi
        assert math.sin(v.witness_t / 2) < 0
        assert v.value + v.err < -v.eps

    @pytest.mark.parametrize("lam", [0.1, 0.25, 0.5, 2.0])
    def test_gaussian_h3_witness_in_negative_lobe(self, lam):
        v = certify(Space.H3, Gaussian(lam), max(30.0, 8 * math.pi * lam))
        assert v.status == NON_PD
        assert math.sin(v.witness_t / (2 * lam)) < 0

    @pytest.mark.parametrize("space,a", [(Space.H2, 2.0), (Space.H2, 0.6), (Space.H3, 3.0)])
    def test_sech_nonnegative(self, space, a):
        v = certify(space, Sech(a), 30.0)
        assert v.status == NONNEGATIVE
        assert v.certified_pd

    def test_wishart_nonpd(self):
        v = certify(Space.H2, Wishart(0.5), 30.0)
        assert v.status == NON_PD
        assert v.witness_t <= 30

    def test_neither_l1_nor_l2(self):
        v = certify(Space.H2, Sech(0.4), 10.0)
        assert v.status == INCONCLUSIVE

    def test_sources_agree(self):
        for space, p in ((Space.H3, Gaussian(1.0)), (Space.H2, Sech(1.0)), (Space.H2, Wishart(1.0))):
            a = certify(space, p, 30.0)
            b = certify(space, p, 30.0, source="closed_form")
            assert a.status == b.status
            if a.status == NON_PD:
                assert a.witness_t == pytest.approx(b.witness_t, abs=0.5)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            certify(Space.H2, Sech(2.0), 0.0)


class TestTail:

    def test_gaussian_h3_integrable(self):
        s = closed_form_grid(Space.H3, Gaussian(1.0), np.linspace(0, 12, 121))
        assert tail_integrability(s).integrable

    def test_sech_h2_integrable(self):
        s = closed_form_grid(Space.H2, Sech(2.0), np.linspace(0, 30, 121))
        rep = tail_integrability(s)
        assert rep.integrable
        assert rep.estimate > 0

    def test_constant_undetermined(self):
        t = np.linspace(0, 10, 50)
        s = SpectralSamples(Space.H2, t, np.ones_like(t), np.zeros_like(t), "const")
        assert not tail_integrability(s).integrable
        assert tail_integrability(s).note() == "Undetermined"

    def test_zero_integrable(self):
        t = np.linspace(0, 10, 50)
        s = SpectralSamples(Space.H2, t, np.zeros_like(t), np.zeros_like(t), "zero")
        assert tail_integrability(s).integrable


def test_find_zeros_gaussian_h3():
    for lam in (0.5, 1.0):
        zeros = find_zeros(Space.H3, Gaussian(lam), 1.0, 4 * math.pi * lam + 1.0)
        assert zeros[:2] == pytest.approx([2 * math.pi * lam, 4 * math.pi * lam], abs=1e-8)


def test_find_zeros_gaussian_h2_lambda_2():
    from scipy.optimize import brentq
    from hyperpd.transforms import forward
    zeros = find_zeros(Space.H2, Gaussian(2.0), 12.0, 16.0, n_grid=80)
    ref = brentq(lambda t: forward(Space.H2, Gaussian(2.0), t, method="direct").value, 14.0, 15.0,
                 xtol=1e-12)
    # |fhat| ~ 1e-12 here, so a 1e-17 value difference moves the root by ~1e-5
    assert zeros == pytest.approx([ref], abs=1e-4)
    # just past 10 sqrt(2): no negative cell exists on [0, 10 sqrt(lambda)] for lambda = 2
    assert zeros[0] > 10 * math.sqrt(2.0)


def test_find_zeros_ignores_noise():
    # for lambda = 5 the values past t ~ 25 are below the quadrature error
    assert find_zeros(Space.H2, Gaussian(5.0), 20.0, 45.0, n_grid=100) == []


class TestSignMap:

    def test_structure(self):
        m = sign_map(Space.H2, [0.3, 4.0], np.arange(0, 5.0001, 0.25))
        assert m.values.shape == (2, 21)
        assert "-" in m.row(0.3)
        assert np.all(m.row(4.0) == "+")
        csv = m.to_csv().splitlines()
        assert csv[0] == "lambda,t,value,sign"
        assert len(csv) == 1 + 2 * 21

    def test_large_lambda_positive(self):
        T = 3.0
        m = sign_map(Space.H2, [T * T / 4, 5.0], np.linspace(0, T, 13))
        assert np.all(m.signs == "+")

    def test_workers_do_not_change_result(self):
        t = np.linspace(0, 8, 17)
        a = sign_map(Space.H2, [0.3, 0.5, 1.0], t)
        b = sign_map(Space.H2, [0.3, 0.5, 1.0], t, workers=3)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.to_csv() == b.to_csv()

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            SignMap(np.array([1.0]), np.array([0.0, 1.0]), np.zeros((1, 1)), np.zeros((1, 1)),
                    np.zeros((1, 1)))

    def test_rejects_nonpositive_lambda(self):
        with pytest.raises(ValueError):
            sign_map(Space.H2, [0.0], [0.0, 1.0])

    def test_sign_consistent_with_eps(self):
        m = sign_map(Space.H3, [0.5], np.linspace(0, 10, 41))
        v, e, s = m.values[0], m.eps[0], m.signs[0]
        assert np.all((s == "+") == (v > e))
        assert np.all((s == "-") == (v < -e))


class TestAsymptoticDeviation:

    def test_published_constant(self):
        d50 = asymptotic_deviation(50, 3)
        d100 = asymptotic_deviation(100, 3)
        assert d50 <= 1e-2
        assert d100 < d50
        assert asymptotic_deviation(400, 1) <= 1e-3

    def test_exact_shift_converges_faster(self):
        d50 = asymptotic_deviation(50, 3, shift=EXACT_SHIFT)
        d100 = asymptotic_deviation(100, 3, shift=EXACT_SHIFT)
        # relative remainder is O(lambda^-2): doubling lambda cuts it about four-fold
        assert d100 < d50 / 3
        assert d50 < asymptotic_deviation(50, 3)
