"""Marginals, classification, Kakutani, Frostman, digit streams, slices,
discretization."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from gridfourier import (
    BudgetError,
    DigitStream,
    FrostmanBound,
    GridSpec,
    InputError,
    MarginalIFS,
    MeasureReason,
    MeasureTag,
    classify_marginal,
    discretize,
    frostman_bound,
    kakutani_affinity,
    kakutani_product_curve,
    project_marginal,
    sierpinski_carpet,
    slice_measure,
    ternary_cantor,
    verify_frostman,
    weighted_carpet,
    weighted_triangle,
)
from tests.conftest import random_grid

THIRD = Fraction(1, 3)


# -------------------------------------------------------------- marginals


def test_carpet_marginals_exact():
    marg = project_marginal(sierpinski_carpet(), "x")
    assert marg.base == 3
    assert marg.digit_weights == (Fraction(3, 8), Fraction(2, 8), Fraction(3, 8))
    assert project_marginal(sierpinski_carpet(), "y").digit_weights == marg.digit_weights


def test_weighted_carpet_y_marginal_uniform():
    marg = project_marginal(weighted_carpet(), "y")
    assert marg.digit_weights == (THIRD, THIRD, THIRD)


def test_project_marginal_rejects_bad_axis():
    with pytest.raises(InputError):
        project_marginal(sierpinski_carpet(), "z")


def test_marginal_validation():
    with pytest.raises(InputError):
        MarginalIFS(2, (Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(InputError):
        MarginalIFS(2, (Fraction(3, 2), Fraction(-1, 2)))
    with pytest.raises(InputError):
        MarginalIFS(3, (Fraction(1, 2), Fraction(1, 2)))


# ----------------------------------------------------------- digit classes


def test_classify_marginal_cases():
    lebesgue = classify_marginal(MarginalIFS(3, (THIRD, THIRD, THIRD)))
    assert lebesgue.tag is MeasureTag.LEBESGUE
    assert lebesgue.reason is MeasureReason.UNIFORM_FULL_DIGITS

    missing = classify_marginal(MarginalIFS(3, (Fraction(1, 2), Fraction(0), Fraction(1, 2))))
    assert missing.tag is MeasureTag.SINGULAR
    assert missing.reason is MeasureReason.MISSING_DIGIT

    skew = classify_marginal(MarginalIFS(2, (Fraction(3, 4), Fraction(1, 4))))
    assert skew.tag is MeasureTag.SINGULAR
    assert skew.reason is MeasureReason.KAKUTANI_NONUNIFORM

    atom = classify_marginal(MarginalIFS(2, (Fraction(1), Fraction(0))))
    assert atom.tag is MeasureTag.ATOMIC
    assert atom.reason is MeasureReason.FULL_WEIGHT_DIGIT


def test_classification_invariant_under_digit_permutation(rng):
    for _ in range(20):
        base = rng.randint(2, 5)
        masses = [rng.choice([0, 1, 2, 3]) for _ in range(base)]
        if sum(masses) == 0:
            masses[0] = 1
        weights = tuple(Fraction(v, sum(masses)) for v in masses)
        tag = classify_marginal(MarginalIFS(base, weights)).tag
        perm = list(weights)
        rng.shuffle(perm)
        assert classify_marginal(MarginalIFS(base, tuple(perm))).tag is tag


# ---------------------------------------------------------------- kakutani


def test_affinity_carpet_vs_uniform():
    value = kakutani_affinity((Fraction(3, 8), Fraction(2, 8), Fraction(3, 8)), (THIRD, THIRD, THIRD))
    assert value == pytest.approx(0.9957819157813604, abs=1e-12)


def test_affinity_equal_vectors_is_one(rng):
    for _ in range(10):
        base = rng.randint(2, 5)
        masses = [rng.randint(1, 9) for _ in range(base)]
        w = tuple(Fraction(v, sum(masses)) for v in masses)
        assert abs(kakutani_affinity(w, w) - 1.0) <= 1e-15


def test_affinity_strictly_below_one_for_distinct(rng):
    for _ in range(10):
        base = rng.randint(2, 4)
        a = [rng.randint(1, 9) for _ in range(base)]
        b = [rng.randint(1, 9) for _ in range(base)]
        wa = tuple(Fraction(v, sum(a)) for v in a)
        wb = tuple(Fraction(v, sum(b)) for v in b)
        if wa == wb:
            continue
        assert kakutani_affinity(wa, wb) < 1.0


def test_affinity_support_violation():
    with pytest.raises(InputError):
        kakutani_affinity((Fraction(1, 2), Fraction(1, 2)), (Fraction(1), Fraction(0)))


def test_product_curve_is_powers():
    marg = project_marginal(sierpinski_carpet(), "x")
    uniform = MarginalIFS(3, (THIRD, THIRD, THIRD))
    curve = kakutani_product_curve(marg, uniform, 50)
    rho = kakutani_affinity(marg.digit_weights, uniform.digit_weights)
    assert len(curve) == 50
    for k, value in enumerate(curve, start=1):
        assert value == pytest.approx(rho**k, rel=1e-12)
    assert all(b <= a for a, b in zip(curve, curve[1:]))


def test_product_curve_base_mismatch():
    with pytest.raises(InputError):
        kakutani_product_curve(ternary_cantor(), MarginalIFS(2, (Fraction(1, 2), Fraction(1, 2))), 5)


# ---------------------------------------------------------------- frostman


def test_frostman_bound_cantor():
    bound = frostman_bound(ternary_cantor())
    assert bound.alpha == pytest.approx(math.log(2) / math.log(3), abs=1e-12)
    assert bound.C == 4.0
    assert not bound.atomic


def test_frostman_bound_atomic_flag():
    bound = frostman_bound(MarginalIFS(2, (Fraction(1), Fraction(0))))
    assert bound.atomic
    assert bound.alpha == 0.0


def test_verify_frostman_passes_certified_pair():
    check = verify_frostman(ternary_cantor(), frostman_bound(ternary_cantor()), trials=2000, max_depth=10, seed=0)
    assert check.passed
    assert check.violations == 0
    assert check.worst_margin <= 1.0


def test_verify_frostman_flags_wrong_pair():
    wrong = FrostmanBound(alpha=1.0, C=4.0, atomic=False)
    check = verify_frostman(ternary_cantor(), wrong, trials=2000, max_depth=10, seed=0)
    assert not check.passed
    assert check.violations > 0
    assert check.worst_margin > 1.0


def test_verify_frostman_deterministic():
    bound = frostman_bound(ternary_cantor())
    a = verify_frostman(ternary_cantor(), bound, trials=500, seed=3)
    b = verify_frostman(ternary_cantor(), bound, trials=500, seed=3)
    assert a == b


# ------------------------------------------------------------ digit streams


def stream_value(stream: DigitStream, base: int) -> Fraction:
    """Exact value of 0.d1 d2 d3 ... with the stream's eventual period."""
    pre = stream.preperiod
    per = stream.period
    head = sum((Fraction(d, base ** (k + 1)) for k, d in enumerate(pre)), Fraction(0))
    block = sum((Fraction(d, base ** (k + 1)) for k, d in enumerate(per)), Fraction(0))
    tail = block * Fraction(1, base ** len(pre)) / (1 - Fraction(1, base ** len(per)))
    return head + tail


def test_digit_stream_from_rational_roundtrip(rng):
    for _ in range(20):
        q = Fraction(rng.randint(0, 49), rng.randint(1, 50))
        if q >= 1:
            continue
        base = rng.randint(2, 5)
        stream = DigitStream.from_rational(q, base)
        assert stream_value(stream, base) == q


def test_digit_stream_known_expansions():
    third = DigitStream.from_rational(Fraction(1, 3), 2)
    assert [third.digit(k) for k in range(6)] == [0, 1, 0, 1, 0, 1]
    half = DigitStream.from_rational(Fraction(1, 2), 2)
    assert [half.digit(k) for k in range(4)] == [1, 0, 0, 0]


def test_digit_stream_from_word_zero_pads():
    stream = DigitStream.from_word((2, 1))
    assert [stream.digit(k) for k in range(5)] == [2, 1, 0, 0, 0]
    assert set(stream.digits_used()) == {2, 1, 0}


def test_digit_stream_validation():
    with pytest.raises(InputError):
        DigitStream(preperiod=(0,), period=())
    with pytest.raises(InputError):
        DigitStream.from_rational(Fraction(3, 2), 2)


# ---------------------------------------------------------------- slices


def test_carpet_slice_row_vectors():
    spec = sierpinski_carpet()
    sl = slice_measure(spec, (1,))
    # level 1 walks the middle row (1/8, 0, 1/8) -> normalized (1/2, 0, 1/2);
    # the zero-padded tail walks the bottom row -> uniform thirds
    assert sl.position_vector(0) == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
    assert sl.position_vector(1) == (THIRD, THIRD, THIRD)
    assert sl.position_vector(7) == (THIRD, THIRD, THIRD)


def test_slice_accepts_rational_height():
    spec = sierpinski_carpet()
    sl = slice_measure(spec, Fraction(1, 3))
    # 1/3 = 0.1000... base 3: first digit row 1, then row 0 forever
    assert sl.position_vector(0) == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
    assert sl.position_vector(3) == (THIRD, THIRD, THIRD)


def test_slice_rejects_weightless_row():
    # drop the whole middle row: y-digit 1 has no mass anywhere
    spec = GridSpec(
        m=3,
        n=3,
        cells=((1, 1, 1), (0, 0, 0), (1, 1, 1)),
        weights=(
            (Fraction(1, 6),) * 3,
            (Fraction(0),) * 3,
            (Fraction(1, 6),) * 3,
        ),
    )
    with pytest.raises(InputError):
        slice_measure(spec, (1,))


# ------------------------------------------------------------ discretization


def test_discretize_marginal_atoms():
    dm = discretize(ternary_cantor(), 2)
    assert dm.locations == (Fraction(0), Fraction(2, 9), Fraction(2, 3), Fraction(8, 9))
    assert all(w == Fraction(1, 4) for w in dm.weights)


def test_discretize_weights_always_sum_to_one(rng):
    for _ in range(10):
        spec = random_grid(rng)
        dm = discretize(spec, 2)
        assert sum(dm.weights, Fraction(0)) == 1
        marg = discretize(project_marginal(spec, "x"), 3)
        assert sum(marg.weights, Fraction(0)) == 1


def test_marginal_of_grid_discretization_matches(rng):
    # pushforward of the 2D atoms equals the discretized marginal, both axes
    for _ in range(6):
        spec = random_grid(rng)
        dm = discretize(spec, 3)
        for axis, pick in (("x", 0), ("y", 1)):
            acc: dict[Fraction, Fraction] = {}
            for loc, w in zip(dm.locations, dm.weights):
                key = loc[pick]
                acc[key] = acc.get(key, Fraction(0)) + w
            md = discretize(project_marginal(spec, axis), 3)
            assert dict(zip(md.locations, md.weights)) == acc


def test_conditional_fibers_match_slices(rng):
    # disintegration: conditional x-atoms on every y-word equal the
    # discretized slice, exactly (bottom row kept supported so the
    # zero-padded word addresses a valid slice)
    for _ in range(6):
        spec = random_grid(rng, ensure_bottom_row=True)
        depth = 2
        dm = discretize(spec, depth)
        row_weights = [sum(row, Fraction(0)) for row in spec.weights]
        support = [j for j in range(spec.m) if row_weights[j] > 0]
        words = [(a, b) for a in support for b in support]
        for word in words:
            y_loc = Fraction(word[0], spec.m) + Fraction(word[1], spec.m**2)
            cond: dict[Fraction, Fraction] = {}
            for (x, y), w in zip(dm.locations, dm.weights):
                if y == y_loc:
                    cond[x] = cond.get(x, Fraction(0)) + w
            mass = sum(cond.values(), Fraction(0))
            assert mass == row_weights[word[0]] * row_weights[word[1]]
            cond = {x: w / mass for x, w in cond.items()}
            sl = discretize(slice_measure(spec, word), depth)
            assert dict(zip(sl.locations, sl.weights)) == cond


def test_discretize_atom_budget():
    with pytest.raises(BudgetError):
        discretize(sierpinski_carpet(), 9)  # 8**9 atoms


def test_discrete_measure_csv_deterministic():
    dm = discretize(ternary_cantor(), 3)
    assert dm.to_csv() == discretize(ternary_cantor(), 3).to_csv()
    header = dm.to_csv().splitlines()[0]
    assert header.split(",")[0] in ("x", "location")


def test_discretize_grid_atom_order_is_y_major(rng):
    spec = random_grid(rng, ensure_bottom_row=True)
    dm = discretize(spec, 2)
    ys = [loc[1] for loc in dm.locations]
    assert ys == sorted(ys)
