import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_point, random_poly
from openroots import (
    Poly,
    critical_points,
    derivative,
    eval_poly,
    harmonic_eval,
    synthetic_div,
    taylor_shift,
)
from openroots.errors import DegreeZero
from openroots.polycore import eval_jet, eval_with_derivative


def naive_eval(p, z):
    return sum(c * z**k for k, c in enumerate(p.coeffs))


class TestPoly:
    def test_trailing_zeros_trimmed(self):
        p = Poly([1, 2, 0, 0])
        assert p.degree == 1
        assert p.coeffs == (1 + 0j, 2 + 0j)

    def test_zero_constant_kept(self):
        assert Poly([0]).degree == 0

    def test_monic(self):
        p = Poly([2, 0, 4])
        assert p.monic().coeffs == (0.5 + 0j, 0j, 1 + 0j)


class TestEval:
    def test_root_of_unity(self):
        assert eval_poly(Poly([1, 0, 1]), 1j) == 0

    def test_cubic_at_one(self):
        assert eval_poly(Poly([-1, 0, 0, 1]), 1) == 0

    def test_cubic_at_two(self):
        assert eval_poly(Poly([-1, 0, 0, 1]), 2) == 7

    def test_horner_matches_power_sum(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            p = random_poly(rng, int(rng.integers(0, 11)), monic=False)
            z = random_point(rng, 2.0)
            a = eval_poly(p, z)
            b = naive_eval(p, z)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))

    def test_derivative_pass_consistent(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            p = random_poly(rng, int(rng.integers(1, 9)), monic=False)
            z = random_point(rng)
            f, df = eval_with_derivative(p, z)
            f2, df2, d2f2 = eval_jet(p, z)
            assert f == eval_poly(p, z) and f2 == f
            assert abs(df - eval_poly(derivative(p), z)) <= 1e-12 * (1 + abs(df))
            assert abs(d2f2 - eval_poly(derivative(derivative(p)), z)) <= \
                1e-11 * (1 + abs(d2f2))


class TestDerivative:
    def test_cubic(self):
        assert derivative(Poly([-1, 0, 0, 1])).coeffs == (0j, 0j, 3 + 0j)

    def test_constant(self):
        assert derivative(Poly([5])).coeffs == (0j,)

    def test_quadratic(self):
        assert derivative(Poly([0, 1, 1])).coeffs == (1 + 0j, 2 + 0j)


class TestTaylorShift:
    def test_square_at_one(self):
        assert taylor_shift(Poly([0, 0, 1]), 1).coeffs == (1 + 0j, 2 + 0j, 1 + 0j)

    def test_zero_shift_is_identity(self):
        p = Poly([3, 1j, -2])
        assert taylor_shift(p, 0) is p

    def test_cubic_at_one_pointwise(self):
        p = Poly([-1, 0, 0, 1])
        q = taylor_shift(p, 1)
        assert q.coeffs == (0j, 3 + 0j, 3 + 0j, 1 + 0j)
        rng = np.random.default_rng(13)
        for _ in range(100):
            h = random_point(rng)
            lhs = eval_poly(q, h)
            rhs = eval_poly(p, 1 + h)
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))

    def test_constant_term_is_value(self):
        rng = np.random.default_rng(14)
        for _ in range(30):
            p = random_poly(rng, int(rng.integers(1, 8)), monic=False)
            v = random_point(rng)
            assert abs(taylor_shift(p, v).coeffs[0] - eval_poly(p, v)) <= \
                1e-11 * (1 + abs(eval_poly(p, v)))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False,
                                       allow_infinity=False),
                    min_size=1, max_size=8),
           st.complex_numbers(max_magnitude=2, allow_nan=False,
                              allow_infinity=False))
    def test_roundtrip(self, coeffs, v):
        p = Poly(coeffs)
        back = taylor_shift(taylor_shift(p, v), -v)
        scale = max(1.0, max(abs(c) for c in p.coeffs))
        assert len(back.coeffs) == len(p.coeffs)
        for a, b in zip(back.coeffs, p.coeffs):
            assert abs(a - b) <= 1e-10 * scale


class TestSyntheticDiv:
    def test_exact_factor(self):
        q, rem = synthetic_div(Poly([-1, 0, 0, 1]), 1)  # z^3-1 by (z-1)
        assert abs(rem) == 0
        assert q.coeffs == (1 + 0j, 1 + 0j, 1 + 0j)

    def test_remainder_is_value(self):
        p = Poly([2, -1, 3j])
        _, rem = synthetic_div(p, 1.5 + 0.5j)
        assert abs(rem - eval_poly(p, 1.5 + 0.5j)) < 1e-12


class TestHarmonicEval:
    def test_identity_map(self):
        he = harmonic_eval(Poly([0, 1]), 2.0, 3.0)
        assert (he.g, he.h, he.gx, he.gy, he.hx, he.hy) == (2, 3, 1, 0, 0, 1)

    def test_square(self):
        he = harmonic_eval(Poly([0, 0, 1]), 1.0, 1.0)
        assert (he.g, he.h) == (0, 2)
        assert (he.gx, he.gy) == (2, -2)

    def test_cubic_at_root(self):
        he = harmonic_eval(Poly([-1, 0, 0, 1]), 1.0, 0.0)
        assert (he.g, he.h, he.gx) == (0, 0, 3)

    def test_cauchy_riemann_exact(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            p = random_poly(rng, int(rng.integers(1, 9)), monic=False)
            z = random_point(rng)
            he = harmonic_eval(p, z.real, z.imag)
            assert he.gx == he.hy
            assert he.gy == -he.hx

    def test_partials_match_finite_differences(self):
        rng = np.random.default_rng(16)
        delta = 1e-6
        for _ in range(25):
            p = random_poly(rng, int(rng.integers(1, 7)))
            z = random_point(rng)
            he = harmonic_eval(p, z.real, z.imag)
            gx_fd = (harmonic_eval(p, z.real + delta, z.imag).g - he.g) / delta
            gy_fd = (harmonic_eval(p, z.real, z.imag + delta).g - he.g) / delta
            scale = max(1.0, abs(he.gx), abs(he.gy))
            assert abs(gx_fd - he.gx) <= 1e-4 * scale
            assert abs(gy_fd - he.gy) <= 1e-4 * scale


class TestCriticalPoints:
    def test_square(self):
        pts = critical_points(Poly([0, 0, 1]), 1e-9)
        assert len(pts) == 1 and abs(pts[0]) <= 1e-9

    def test_depressed_cubic(self):
        pts = sorted(critical_points(Poly([0, -3, 0, 1]), 1e-9),
                     key=lambda z: z.real)
        assert len(pts) == 2
        assert abs(pts[0] + 1) <= 1e-8 and abs(pts[1] - 1) <= 1e-8

    def test_quartic_plus_z(self):
        # p' = 4z^3 + 1: closed-form cube roots of -1/4 as the oracle
        pts = critical_points(Poly([0, 1, 0, 0, 1]), 1e-9)
        r = 0.25 ** (1.0 / 3.0)
        expect = [r * cmath.exp(1j * (math.pi + 2 * math.pi * k) / 3)
                  for k in range(3)]
        assert len(pts) == 3
        for w in expect:
            assert min(abs(z - w) for z in pts) <= 1e-8

    def test_linear_has_none(self):
        assert critical_points(Poly([4, 2]), 1e-9) == []

    def test_degree_zero_rejected(self):
        with pytest.raises(DegreeZero):
            critical_points(Poly([5]), 1e-9)

    def test_count_and_residual(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            p = random_poly(rng, int(rng.integers(2, 7)))
            pts = critical_points(p, 1e-9)
            assert len(pts) == p.degree - 1
            dp = derivative(p)
            for z in pts:
                assert abs(eval_poly(dp, z)) <= 1e-9
