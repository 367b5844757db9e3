import math
import warnings

import numpy as np
import pytest

from carleson_kit.errors import DomainError, ResolutionWarning
from carleson_kit.hardy import (
    BoundaryGrid,
    HardyFunction,
    garsia_sum,
    hankel_embedding_constant,
    herglotz_coefficients,
    outer_from_modulus,
    outer_log_at,
    poisson_extend,
    riesz_project,
)

TAU = 2 * math.pi


def unit_samples(size):
    return np.exp(1j * TAU * np.arange(size) / size)


class TestBoundaryGrid:
    def test_requires_power_of_two(self):
        with pytest.raises(DomainError):
            BoundaryGrid(np.ones(100))
        BoundaryGrid(np.ones(128))

    def test_coefficient_round_trip(self):
        rng = np.random.default_rng(2)
        vals = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        g = BoundaryGrid(vals)
        back = BoundaryGrid.from_coefficients(g.coefficients())
        assert np.allclose(back.values, vals)

    def test_monomial_coefficients(self):
        xi = unit_samples(32)
        g = BoundaryGrid(3.0 * xi**5)
        c = g.coefficients()
        assert c[5] == pytest.approx(3.0)
        c[5] = 0
        assert np.allclose(c, 0, atol=1e-12)

    def test_parseval_norm_and_inner(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        b = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        ga, gb = BoundaryGrid(a), BoundaryGrid(b)
        assert ga.norm() ** 2 == pytest.approx(np.mean(np.abs(a) ** 2))
        assert ga.inner(gb) == pytest.approx(np.mean(a * np.conj(b)))

    def test_analytic_detection(self):
        xi = unit_samples(64)
        assert BoundaryGrid(1 + xi + xi**2).is_analytic()
        g = BoundaryGrid(np.conj(xi))
        assert not g.is_analytic()
        assert g.negative_part_magnitude() == pytest.approx(1.0)


def test_riesz_projection_splits_frequencies():
    xi = unit_samples(64)
    f = np.conj(xi) ** 2 + 3.0 + 0.5 * xi
    g = BoundaryGrid(f)
    plus = riesz_project(g, "plus")
    minus = riesz_project(g, "minus")
    assert np.allclose(plus.values, 3.0 + 0.5 * xi, atol=1e-12)
    assert np.allclose(plus.values + minus.values, f, atol=1e-12)
    with pytest.raises(DomainError):
        riesz_project(g, "up")


def test_riesz_projection_is_norm_decreasing():
    rng = np.random.default_rng(6)
    for _ in range(10):
        vals = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        g = BoundaryGrid(vals)
        p = riesz_project(g, "plus")
        assert p.norm() <= g.norm() + 1e-12
        assert riesz_project(p, "plus").values == pytest.approx(p.values)


class TestPoisson:
    def test_harmonic_polynomial_reproduced(self):
        xi = unit_samples(512)
        lam = 0.4 - 0.3j
        got = poisson_extend((xi**3).real, lam)
        assert got == pytest.approx((lam**3).real, abs=1e-12)

    def test_known_quadratic_value(self):
        # |1 + xi|^2 = 2 + 2 cos t has harmonic extension 2 + 2 Re z
        xi = unit_samples(4096)
        val = poisson_extend(np.abs(1 + xi) ** 2, 0.3)
        assert val == pytest.approx(2.6, abs=1e-12)

    def test_resolution_warning_near_boundary(self):
        vals = np.ones(64)
        with pytest.warns(ResolutionWarning):
            poisson_extend(vals, 0.99)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            poisson_extend(vals, 0.5)

    def test_rejects_exterior_points(self):
        with pytest.raises(DomainError):
            poisson_extend(np.ones(64), 1.0)


def test_hardy_function_evaluation_and_norm():
    h = HardyFunction([1.0, 0.0, -2.0])
    assert h.degree == 2
    assert h(0.5j) == pytest.approx(1 - 2 * (0.5j) ** 2)
    assert h.norm() == pytest.approx(math.sqrt(5))
    grid = h.boundary(64)
    assert grid.norm() == pytest.approx(h.norm())
    back = HardyFunction.from_grid(grid)
    assert np.allclose(back.coeffs[:3], h.coeffs, atol=1e-12)
    assert np.allclose(back.coeffs[3:], 0.0, atol=1e-12)


def test_herglotz_completion_of_log_modulus():
    # log|1 + a xi| is the real part of log(1 + a z) = sum -(-a)^k z^k / k
    a = 0.5
    xi = unit_samples(1024)
    g = herglotz_coefficients(np.log(np.abs(1 + a * xi)))
    for k in range(1, 8):
        assert g[k] == pytest.approx(-((-a) ** k) / k, abs=1e-12)
    assert g [0] == pytest.approx(0.0, abs=1e-12)


class TestOuter:
    def test_modulus_reproduced_spectrally(self):
        xi = unit_samples(1024)
        target = np.abs(1 + 0.5 * xi)
        h = outer_from_modulus(target)
        vals = h.boundary(1024).values
        assert np.max(np.abs(np.abs(vals) - target)) < 1e-12
        assert h(0).imag == pytest.approx(0.0, abs=1e-12)
        assert h(0).real > 0

    def test_mean_value_property(self):
        # band-limited log modulus keeps the construction spectrally exact
        t = TAU * np.arange(256) / 256
        u = np.exp(0.3 * np.cos(t) + 0.1 * np.sin(2 * t))
        h = outer_from_modulus(u)
        assert math.log(h(0).real) == pytest.approx(np.mean(np.log(u)), abs=1e-9)
        # the Herglotz quadrature at the origin is exactly the mean
        rng = np.random.default_rng(9)
        rough = rng.standard_normal(256) * 0.3
        assert outer_log_at(rough, 0).real == pytest.approx(np.mean(rough), abs=1e-12)

    def test_boundary_zero_converges_slowly_but_surely(self):
        # |1 + xi| vanishes at xi = -1; grid accuracy is only polynomial
        xi = unit_samples(4096)
        target = np.abs(1 + xi)
        h = outer_from_modulus(target)
        vals = np.abs(h.boundary(4096).values)
        keep = target > 0.1
        assert np.max(np.abs(vals[keep] - target[keep])) < 5e-3

    def test_outer_log_at_matches_poisson(self):
        xi = unit_samples(512)
        logmod = np.log(np.abs(2 + xi))
        z = 0.3 + 0.2j
        got = outer_log_at(logmod, z)
        assert got.real == pytest.approx(poisson_extend(logmod, z), abs=1e-12)
        # exact value: log(2 + z) for this outer function
        assert got == pytest.approx(np.log(2 + z), abs=1e-10)

    def test_rejects_nonpositive_modulus(self):
        with pytest.raises(DomainError):
            outer_from_modulus(np.zeros(64))


def test_garsia_sum_single_monomial():
    # family {z} at lam = 0.5: (1 - |lam|^2) |f'(lam)|^2 summed Garsia-style
    val = garsia_sum([HardyFunction([0.0, 1.0])], 0.5)
    assert val == pytest.approx(0.75)


def test_garsia_sum_is_nonnegative_and_additive():
    rng = np.random.default_rng(13)
    fam = [HardyFunction(rng.standard_normal(4)) for _ in range(3)]
    lam = 0.2 + 0.3j
    total = garsia_sum(fam, lam)
    parts = sum(garsia_sum([f], lam) for f in fam)
    assert total == pytest.approx(parts, rel=1e-9)
    assert total >= 0


def test_hankel_embedding_constants():
    z = HardyFunction([0.0, 1.0])
    one = HardyFunction([1.0])
    assert hankel_embedding_constant([z], 32) == pytest.approx(1.0)
    assert hankel_embedding_constant([one], 32) == pytest.approx(0.0, abs=1e-12)
    assert hankel_embedding_constant([z, z], 32) == pytest.approx(2.0)
