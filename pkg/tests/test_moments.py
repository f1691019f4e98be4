"""Fourier-Stieltjes transforms: certified truncation, structural identities."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest

from gridfourier import (
    MarginalIFS,
    discrete_transform,
    discretize,
    marginal_transform,
    moment_table,
    moment_table_2d,
    project_marginal,
    quaternary_cantor,
    sierpinski_carpet,
    slice_measure,
    slice_transform,
    ternary_cantor,
    transform_2d,
    truncation_depth,
    weighted_triangle,
)
from tests.conftest import random_grid


def brute_digit_factor(weights, u):
    return sum(float(w) * cmath.exp(-2j * math.pi * u * d) for d, w in enumerate(weights))


# ------------------------------------------------------------ zero frequency


def test_zero_frequency_is_exact(rng):
    for _ in range(20):
        spec = random_grid(rng)
        mv = transform_2d(spec, 0, 0)
        assert mv.value == 1.0 + 0.0j
        assert mv.error_bound == 0.0
        marg = project_marginal(spec, "x")
        assert marginal_transform(marg, 0).value == 1.0 + 0.0j


# --------------------------------------------------------- truncation rule


def test_truncation_depth_certifies_eps():
    for base in (2, 3, 4, 7):
        for k in (1, 5, 100, -17):
            for eps in (1e-6, 1e-9, 1e-12):
                T = truncation_depth(base, k, eps)
                assert 2 * math.pi * abs(k) * base ** (-T) <= eps * (1 + 1e-12)
                if T > 1:
                    assert 2 * math.pi * abs(k) * base ** (-(T - 1)) > eps * (1 - 1e-9)


def test_error_bound_reported(rng):
    marg = ternary_cantor()
    for k in (1, 7, -3):
        mv = marginal_transform(marg, k, eps=1e-9)
        assert mv.error_bound <= 1e-9
        assert abs(mv.value) <= 1.0 + 1e-15


def test_depth_override_controls_truncation():
    marg = ternary_cantor()
    mv = marginal_transform(marg, 5, depth=4)
    assert mv.truncation_depth == 4
    assert mv.error_bound == pytest.approx(2 * math.pi * 5 * 3.0**-4, rel=1e-12)


# ----------------------------------------------------- structural identities


def test_truncated_product_is_discrete_transform(rng):
    # the depth-K truncated product IS the transform of the depth-K
    # discretization -- the central gram/quadrature consistency identity
    for _ in range(10):
        spec = random_grid(rng)
        marg = project_marginal(spec, "x")
        dm = discretize(marg, 8)
        for k in (1, 3, 7):
            product = marginal_transform(marg, k, depth=8).value
            direct = discrete_transform(dm, k)
            assert abs(product - direct) <= 1e-12


def test_truncated_product_identity_2d(rng):
    for _ in range(6):
        spec = random_grid(rng)
        dm = discretize(spec, 4)
        for kl in ((1, 0), (2, 1), (-1, 3)):
            product = transform_2d(spec, kl[0], kl[1], depth=4).value
            direct = discrete_transform(dm, kl)
            assert abs(product - direct) <= 1e-12


def test_conjugate_symmetry(rng):
    for _ in range(8):
        spec = random_grid(rng)
        marg = project_marginal(spec, "y")
        for k in (1, 4, 9):
            a = marginal_transform(marg, k, eps=1e-10).value
            b = marginal_transform(marg, -k, eps=1e-10).value
            assert abs(b - a.conjugate()) <= 1e-14


def test_2d_transform_restricts_to_marginals(rng):
    for _ in range(6):
        spec = random_grid(rng)
        for k in (1, 3):
            two_d = transform_2d(spec, k, 0, eps=1e-9).value
            one_d = marginal_transform(project_marginal(spec, "x"), k, eps=1e-9).value
            assert abs(two_d - one_d) <= 2e-9
        for l in (2, 5):
            two_d = transform_2d(spec, 0, l, eps=1e-9).value
            one_d = marginal_transform(project_marginal(spec, "y"), l, eps=1e-9).value
            assert abs(two_d - one_d) <= 2e-9


def test_first_digit_factor_matches_brute_force(rng):
    # depth-1 product = single digit factor, cross-checked independently
    for _ in range(6):
        base = rng.randint(2, 5)
        masses = [rng.randint(0, 5) for _ in range(base)]
        if sum(masses) == 0:
            masses[0] = 1
        weights = tuple(Fraction(v, sum(masses)) for v in masses)
        marg = MarginalIFS(base, weights)
        for k in (1, 2):
            got = marginal_transform(marg, k, depth=1).value
            want = brute_digit_factor(weights, k / base)
            assert abs(got - want) <= 1e-14


# ------------------------------------------------------------------ slices


def test_slice_transform_matches_discretization():
    spec = sierpinski_carpet()
    sl = slice_measure(spec, (1,))
    dm = discretize(sl, 6)
    for k in (1, 2, 5):
        assert abs(slice_transform(sl, k, depth=6).value - discrete_transform(dm, k)) <= 1e-12


def test_slice_transform_zero_frequency():
    sl = slice_measure(weighted_triangle(), (0,))
    mv = slice_transform(sl, 0)
    assert mv.value == 1.0 + 0.0j and mv.error_bound == 0.0


# ----------------------------------------------------------- orthogonality


def test_quaternary_cantor_spectral_orthogonality():
    marg = quaternary_cantor()
    lambdas = [0, 1, 4, 5, 16, 17, 20, 21]
    pairs = [(a, b) for i, a in enumerate(lambdas) for b in lambdas[i + 1 :]]
    assert len(pairs) == 28
    for a, b in pairs:
        mv = marginal_transform(marg, a - b, eps=1e-10)
        assert abs(mv.value) <= 1e-8


# ------------------------------------------------------------------ tables


def test_moment_table_gram_lookup():
    marg = ternary_cantor()
    table = moment_table(marg, -4, 4, eps=1e-10)
    direct = marginal_transform(marg, 3, eps=1e-10).value
    assert table.gram(0, 3) == pytest.approx(direct, abs=1e-12)
    assert table.gram(2, 5) == pytest.approx(direct, abs=1e-12)
    assert table.error_bound <= 1e-10
    assert "base 3" in table.descriptor or "3" in table.descriptor


def test_moment_table_2d_rectangle(rng):
    spec = random_grid(rng)
    table = moment_table_2d(spec, (-2, 2), (-1, 1), eps=1e-9)
    direct = transform_2d(spec, 1, -1, eps=1e-9).value
    assert table.values[(1, -1)] == pytest.approx(direct, abs=1e-12)
    assert len(table.values) == 5 * 3
