"""Complex-power and root-finding primitives."""

import cmath
import math

import numpy as np
import pytest

from fracscatter import (Bracket, ConvergenceError, DomainValidationError,
                         SingularPointError, bracket_scan, polar_decompose,
                         principal_power, refine_root)

# cube root of 2, frozen from a 40-digit evaluation: 1.2599210498948731648...
CBRT2 = 1.2599210498948732


class TestPrincipalPower:
    def test_identity_cases(self):
        assert principal_power(1 + 0j, 0.5) == 1 + 0j
        assert cmath.isclose(principal_power(-1 + 0j, 0.5), 1j, abs_tol=1e-15)
        assert cmath.isclose(principal_power(1j, 2.0), -1 + 0j, abs_tol=1e-15)

    def test_exponent_one_and_zero(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if z == 0:
                continue
            assert cmath.isclose(principal_power(z, 1.0), z, rel_tol=1e-15)
            assert cmath.isclose(principal_power(z, 0.0), 1.0, rel_tol=1e-15)

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if z == 0 or (z.imag == 0 and z.real < 0):
                continue
            a = rng.uniform(-2, 2)
            left = principal_power(z.conjugate(), a)
            right = principal_power(z, a).conjugate()
            assert cmath.isclose(left, right, rel_tol=1e-13, abs_tol=1e-13)

    def test_zero_base(self):
        assert principal_power(0j, 0.5) == 0j
        with pytest.raises(DomainValidationError):
            principal_power(0j, -1.0)
        with pytest.raises(DomainValidationError):
            principal_power(0j, 0.0)


class TestPolarDecompose:
    def test_examples(self):
        p = polar_decompose(0.0, 0.0)
        assert p.r == pytest.approx(1.0, abs=1e-15)
        assert p.theta == pytest.approx(0.0, abs=1e-15)
        p = polar_decompose(1.0, 1.0)
        assert p.r == pytest.approx(1.0, abs=1e-15)
        assert p.theta == pytest.approx(math.pi / 2, abs=1e-15)
        # on the cut the convention is theta = pi (limit from sigma -> 0+)
        p = polar_decompose(2.0, 0.0)
        assert p.r == pytest.approx(1.0, abs=1e-15)
        assert p.theta == pytest.approx(math.pi, abs=1e-15)

    def test_singular_point(self):
        with pytest.raises(SingularPointError):
            polar_decompose(1.0, 0.0)

    def test_reconstruction(self):
        rng = np.random.default_rng(3)
        count = 0
        while count < 10_000:
            rho, sigma = rng.uniform(-4, 4), rng.uniform(-4, 4)
            if math.hypot(rho - 1.0, sigma) <= 1e-6:
                continue
            count += 1
            p = polar_decompose(rho, sigma)
            z = p.r * cmath.exp(-1j * p.theta)
            assert abs(z.real - (1.0 - rho)) <= 1e-14 * max(1.0, p.r)
            assert abs(z.imag - (-sigma)) <= 1e-14 * max(1.0, p.r)
        assert p.theta <= math.pi and p.theta > -math.pi


class TestBracketScan:
    def test_single_linear_root(self):
        brackets = bracket_scan(lambda x: x - 0.5, 0.0, 1.0, 10)
        assert len(brackets) == 1
        assert brackets[0].lo <= 0.5 <= brackets[0].hi

    def test_no_root(self):
        assert bracket_scan(lambda x: x * x + 1.0, -1.0, 1.0, 10) == []

    def test_sine_two_roots(self):
        brackets = bracket_scan(math.sin, 1.0, 7.0, 100)
        assert len(brackets) == 2
        assert brackets[0].lo <= math.pi <= brackets[0].hi
        assert brackets[1].lo <= 2 * math.pi <= brackets[1].hi

    def test_nonfinite_samples_skipped(self):
        def f(x):
            return math.nan if 0.4 < x < 0.6 else x - 0.5
        assert bracket_scan(f, 0.0, 1.0, 11) == []

    def test_bad_args(self):
        with pytest.raises(DomainValidationError):
            bracket_scan(math.sin, 1.0, 1.0, 10)
        with pytest.raises(DomainValidationError):
            bracket_scan(math.sin, 0.0, 1.0, 1)


class TestRefineRoot:
    def test_linear(self):
        b = bracket_scan(lambda x: x - 0.5, 0.0, 1.0, 10)[0]
        assert refine_root(lambda x: x - 0.5, b, 1e-12) == pytest.approx(0.5, abs=1e-12)

    def test_cube_root_of_two(self):
        f = lambda x: x ** 3 - 2.0
        root = refine_root(f, Bracket(1.0, 2.0, f(1.0), f(2.0)), 1e-12)
        assert root == pytest.approx(CBRT2, abs=1e-10)

    def test_cosine(self):
        root = refine_root(math.cos, Bracket(1.0, 2.0, math.cos(1.0), math.cos(2.0)), 1e-12)
        assert root == pytest.approx(math.pi / 2, abs=1e-10)

    def test_stays_in_bracket(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            shift = rng.uniform(-0.9, 0.9)
            f = lambda x, s=shift: math.tanh(3.0 * (x - s))
            b = Bracket(-1.0, 1.0, f(-1.0), f(1.0))
            root = refine_root(f, b, 1e-12)
            assert b.lo <= root <= b.hi

    def test_iteration_cap(self):
        # a sign step never evaluates to zero, forcing pure bisection, and
        # [0, 1e300] at denormal tolerance needs ~2000 halvings > the cap
        f = lambda x: 1.0 if x >= 1.0 / 3.0 else -1.0
        with pytest.raises(ConvergenceError):
            refine_root(f, Bracket(0.0, 1e300, -1.0, 1.0), 5e-324)

    def test_invalid_tolerance(self):
        with pytest.raises(DomainValidationError):
            refine_root(lambda x: x, Bracket(-1.0, 1.0, -1.0, 1.0), 0.0)


class TestBracketType:
    def test_rejects_same_sign(self):
        with pytest.raises(DomainValidationError):
            Bracket(0.0, 1.0, 1.0, 2.0)

    def test_rejects_inverted(self):
        with pytest.raises(DomainValidationError):
            Bracket(1.0, 0.0, -1.0, 1.0)
