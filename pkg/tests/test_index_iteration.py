import random
from fractions import Fraction

import pytest

from geodex import _iterkern_py
from geodex.exact_numbers import SurdSum, SurdTurn
from geodex.index_iteration import (
    GeodesicModel,
    beta_at,
    index_at,
    index_profile,
    iteration_table,
    mean_index,
    minimal_period,
    model_from_turns,
    nullity_at,
    parity_check,
)
from geodex.normal_forms import (
    Decomposition,
    IDENTITY_PAIR,
    N1_MINUS_PLUS,
    N1_PLUS_MINUS,
    hyperbolic,
    rotation,
)

SQRT2_HALF = SurdTurn(0, 1, 2, 2)
SQRT3_HALF = SurdTurn(0, 1, 2, 3)

TWO_ROT = model_from_turns(3, [Fraction(1, 2), Fraction(1, 3)], 2, "c")


def test_index_two_rotation_example():
    # m(i-2) + 2E(m/2) + 2E(m/3) - 2 at m = 6: 0 + 2*3 + 2*2 - 2 = 8
    assert index_at(TWO_ROT, 6) == 8


def test_index_collapses_at_m_equals_one():
    models = [
        TWO_ROT,
        model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "s"),
        GeodesicModel(Decomposition(3, [hyperbolic(4)]), 5, "h"),
        GeodesicModel(Decomposition(4, [IDENTITY_PAIR, N1_PLUS_MINUS,
                                        rotation(Fraction(2, 5))]), 3, "m"),
    ]
    for g in models:
        assert index_at(g, 1) == g.initial_index
        assert nullity_at(g, 1) == g.decomposition.nullity_at_one()


def test_identity_plus_jordan_family():
    # I_{2p0} <> N1(1,-1)^{p+}: i(g^m) = m(i + p0) - p0, nu constant
    for p0, pp in [(0, 2), (1, 1), (2, 0)]:
        blocks = [IDENTITY_PAIR] * p0 + [N1_PLUS_MINUS] * pp
        want_parity = p0 % 2
        i0 = 2 + want_parity
        g = GeodesicModel(Decomposition(3, blocks), i0, "f")
        assert parity_check(g) is None
        for m in (1, 2, 3, 7, 50):
            assert index_at(g, m) == m * (i0 + p0) - p0
            assert nullity_at(g, m) == 2 * p0 + pp


def test_nullity_examples():
    assert nullity_at(TWO_ROT, 6) == 4
    surd = model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "s")
    for m in (1, 2, 5, 11, 100):
        assert nullity_at(surd, m) == 0


def test_mean_index_examples():
    assert mean_index(TWO_ROT) == Fraction(5, 3)
    g = model_from_turns(3, [SQRT2_HALF, Fraction(1, 3)], 2, "x")
    assert mean_index(g) == SurdSum({1: Fraction(2, 3), 2: 1})
    h = GeodesicModel(Decomposition(3, [hyperbolic(4)]), 2, "h")
    assert mean_index(h) == 2


def test_parity_check_examples():
    assert parity_check(model_from_turns(3, [Fraction(1, 3), Fraction(2, 5)], 2, "")) is None
    g = GeodesicModel(Decomposition(3, [rotation(Fraction(1, 3)), N1_PLUS_MINUS]), 2, "")
    assert parity_check(g) is not None
    assert parity_check(GeodesicModel(Decomposition(3, [hyperbolic(4)]), 17, "")) is None


def test_minimal_period():
    assert minimal_period(TWO_ROT) == 6  # lcm(2,3); jumps over 6 are even
    surd = model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "s")
    assert minimal_period(surd) == 1
    g = GeodesicModel(Decomposition(3, [rotation(Fraction(1, 3)), N1_MINUS_PLUS]), 2, "")
    assert minimal_period(g) % 2 == 0  # -1 in the spectrum forces 2 | T


def test_minimal_period_doubles_on_odd_jumps():
    h = GeodesicModel(Decomposition(4, [hyperbolic(6)]), 3, "h")
    # all denominators trivial, T0 = 1, but jumps i(c^{m+1}) - i(c^m) = 3
    assert minimal_period(h) == 2


def test_period_invariants():
    for g in (TWO_ROT,
              model_from_turns(3, [Fraction(2, 5), Fraction(1, 4)], 4, "a"),
              GeodesicModel(Decomposition(3, [rotation(Fraction(1, 6)),
                                              N1_MINUS_PLUS]), 2, "b")):
        t = minimal_period(g)
        idx, nul = iteration_table(g, 4 * t)
        for p in range(1, 3 * t + 1):
            assert nul[p - 1 + t] == nul[p - 1]
            assert (idx[p - 1 + t] - idx[p - 1]) % 2 == 0


def test_index_profile_example():
    prof = index_profile(TWO_ROT, 6)
    assert [r[1] for r in prof.rows] == [2, 2, 4, 6, 8, 8]
    assert [r[2] for r in prof.rows] == [0, 2, 2, 2, 0, 4]
    assert prof.mean_index == Fraction(5, 3)
    assert prof.period == 6
    assert prof.elliptic_height == 4


def test_index_profile_hyperbolic():
    g = GeodesicModel(Decomposition(3, [hyperbolic(4)]), 2, "h")
    prof = index_profile(g, 10)
    assert [r[1] for r in prof.rows] == [2 * m for m in range(1, 11)]
    assert all(r[2] == 0 for r in prof.rows)


def test_index_profile_caps_mmax():
    with pytest.raises(ValueError):
        index_profile(TWO_ROT, 10 ** 7 + 1)


def test_cesaro_consistency():
    models = [
        TWO_ROT,
        model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "s"),
        model_from_turns(5, [Fraction(1, 7), Fraction(3, 5), Fraction(2, 3),
                             Fraction(1, 2)], 4, "big"),
    ]
    for g in models:
        ihat = mean_index(g)
        n = g.n
        for m in (1000, 10000):
            drift = SurdSum.from_value(index_at(g, m)) - ihat * m
            assert drift <= n - 1
            assert drift >= -(n - 1)


def test_iterate_monotonicity_under_index_bound():
    rng = random.Random(7)
    fracs = [Fraction(a, b) for b in range(2, 8) for a in range(1, b)]
    for _ in range(100):
        turns = [rng.choice(fracs), rng.choice(fracs)]
        g = model_from_turns(3, turns, 2, "g")
        e = g.decomposition.elliptic_height()
        assert g.initial_index >= e // 2
        idx, nul = iteration_table(g, 60)
        for m in range(1, 60):
            assert idx[m] - idx[m - 1] - nul[m - 1] >= g.initial_index - e // 2


def test_two_rotation_growth_and_descent():
    fracs = [Fraction(a, b) for b in range(2, 8) for a in range(1, b)]
    grid = [(t1, t2) for t1 in fracs for t2 in fracs
            if Fraction(2) * t1 + 2 * t2 > 2]
    for t1, t2 in grid[::7]:
        g = model_from_turns(3, [t1, t2], 2, "g")
        idx, nul = iteration_table(g, 80)
        for m in range(1, 60):
            for q in range(2, 11):
                assert idx[m + q - 1] >= idx[m - 1] + 2
        for m in range(1, 70):
            if nul[m - 1] == 4:
                for q in range(2, min(11, m)):
                    assert idx[m - q - 1] + nul[m - q - 1] <= idx[m - 1] - 2


def test_beta_sign():
    assert beta_at(TWO_ROT, 1) == 1
    # two-rotation even-index models never jump parity
    assert all(beta_at(TWO_ROT, m) == 1 for m in range(1, 15))


def test_kernel_and_python_backends_agree():
    from geodex import _kernels

    args = (200, -1, -3, -2, [1, 2], [2, 5], 1, 3, [2, 5, 7], [7])
    py = _iterkern_py.rational_iteration_table(*args)
    sel = _kernels.rational_iteration_table(*args)
    assert py == sel
    try:
        from geodex import _iterkern
    except ImportError:
        pytest.skip("compiled kernel not built")
    assert _iterkern.rational_iteration_table(*args) == py


def test_table_matches_pointwise_on_surd_models():
    g = model_from_turns(3, [SQRT2_HALF, Fraction(1, 3)], 2, "s")
    idx, nul = iteration_table(g, 40)
    for m in range(1, 41):
        assert idx[m - 1] == index_at(g, m)
        assert nul[m - 1] == nullity_at(g, m)


def test_model_json_round_trip():
    g = GeodesicModel(Decomposition(3, [rotation(SQRT2_HALF), N1_PLUS_MINUS]), 3, "c2")
    g2 = GeodesicModel.from_json(g.to_json())
    assert g2 == g
