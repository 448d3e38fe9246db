import random
from fractions import Fraction

import pytest

from geodex.exact_numbers import SurdTurn
from geodex.index_iteration import (
    GeodesicModel,
    index_at,
    mean_index,
    model_from_turns,
    nullity_at,
)
from geodex.index_jump import (
    choose_modulus,
    divisibility_stride,
    find_jump,
    verify_jump,
)
from geodex.normal_forms import Decomposition, N1_MINUS_PLUS, hyperbolic, rotation

SQRT2_HALF = SurdTurn(0, 1, 2, 2)
SQRT3_HALF = SurdTurn(0, 1, 2, 3)
SQRT2_QUARTER = SurdTurn(0, 1, 4, 2)


def test_choose_modulus_examples():
    g = model_from_turns(3, [Fraction(1, 3), Fraction(2, 5)], 2, "a")
    assert choose_modulus([g]) == 15
    s = model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "b")
    assert choose_modulus([s]) == 1
    h = model_from_turns(3, [Fraction(1, 2), Fraction(1, 2)], 2, "c")
    assert choose_modulus([h]) == 1
    q = model_from_turns(3, [Fraction(1, 4), Fraction(1, 4)], 2, "d")
    assert choose_modulus([q]) == 2


def test_divisibility_stride():
    assert divisibility_stride(3) == 1
    assert divisibility_stride(4) == 3     # 2NB integral and 3 | N
    assert divisibility_stride(5) == 2
    assert divisibility_stride(6) == 5


def test_find_jump_integer_mean_index():
    # hyperbolic model: ihat = 3, M = 1  ->  N = 3, m = 1, xi = 0
    g = GeodesicModel(Decomposition(3, [hyperbolic(4)]), 3, "h")
    cert = find_jump([g], 3)
    assert cert is not None
    assert cert.n_value == 3 and cert.modulus == 1
    assert cert.entries[0].m == 1 and cert.entries[0].xi == 0
    # e = 0 pinches the level: i(c^{2m}) = 2N exactly
    assert index_at(g, 2) == 2 * cert.n_value


def test_find_jump_fractional_mean_index():
    # two-rotation model with ihat = 5/3, M = 3: N must be a multiple of 5
    g = model_from_turns(3, [Fraction(1, 2), Fraction(1, 3)], 2, "c")
    assert mean_index(g) == Fraction(5, 3)
    cert = find_jump([g], 3)
    assert cert is not None
    assert cert.n_value % 5 == 0
    assert cert.n_value == 5
    rep = verify_jump([g], cert)
    assert rep["ok"]


def test_find_jump_surd_mean_index():
    g = model_from_turns(3, [SQRT2_QUARTER, SQRT2_QUARTER], 2, "s")
    assert mean_index(g).terms == {2: 1}   # ihat = sqrt(2)
    cert = find_jump([g], 3, eps=Fraction(1, 100))
    assert cert is not None
    rep = verify_jump([g], cert)
    assert rep["ok"], rep
    # frac(N / sqrt(2)) within eps of xi
    e = cert.entries[0]
    assert index_at(g, 2 * e.m + 1) == 2 * cert.n_value + 2


def test_find_jump_two_geodesics():
    c1 = model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "c1")
    c2 = model_from_turns(3, [Fraction(1, 3), Fraction(2, 5)], 2, "c2")
    cert = find_jump([c1, c2], 3, eps=Fraction(1, 8))
    assert cert is not None
    rep = verify_jump([c1, c2], cert)
    assert rep["ok"], rep
    m2 = cert.entry("c2").m
    assert index_at(c2, 2 * m2 + 1) == 2 * cert.n_value + 2
    assert nullity_at(c2, 2 * m2) == 4
    assert index_at(c2, 2 * m2) == 2 * cert.n_value - 2


def test_find_jump_budget_exhaustion():
    g = model_from_turns(3, [Fraction(1, 3), Fraction(2, 5)], 2, "a")
    assert find_jump([g], 3, n_bound=10) is None


def test_nonpositive_mean_index_rejected():
    g = GeodesicModel(Decomposition(3, [hyperbolic(4)]), 0, "z")
    with pytest.raises(ValueError):
        find_jump([g], 3)


def test_verify_detects_tampering():
    g = model_from_turns(3, [Fraction(1, 2), Fraction(1, 3)], 2, "c")
    cert = find_jump([g], 3)
    from geodex.index_jump import JumpCertificate, JumpEntry

    forged = JumpCertificate(cert.n_value, cert.modulus, cert.epsilon,
                             (JumpEntry("c", cert.entries[0].m + 1, 0),))
    rep = verify_jump([g], forged)
    assert not rep["ok"]


def test_round_trip_random_rational_configs():
    rng = random.Random(123)
    fracs = [Fraction(a, b) for b in (2, 3, 4, 5) for a in range(1, b)]
    done = 0
    for _ in range(60):
        p = rng.randint(1, 3)
        config = []
        for j in range(p):
            t1, t2 = rng.choice(fracs), rng.choice(fracs)
            config.append(model_from_turns(3, [t1, t2], 2, f"g{j}"))
        if any(mean_index(g) <= 0 for g in config):
            continue
        cert = find_jump(config, 3, n_bound=10 ** 6)
        if cert is None:
            continue
        done += 1
        rep = verify_jump(config, cert)
        assert rep["ok"], rep
        for g in config:
            e = cert.entry(g.label)
            assert index_at(g, 2 * e.m + 1) == 2 * cert.n_value + g.initial_index
    assert done >= 40


def test_jump_with_minus_one_spectrum():
    g = GeodesicModel(
        Decomposition(3, [rotation(Fraction(1, 3)), N1_MINUS_PLUS]), 2, "m")
    cert = find_jump([g], 3)
    assert cert is not None
    assert verify_jump([g], cert)["ok"]
    # M theta/pi integral for the rational angle
    assert (2 * Fraction(1, 3) * cert.modulus).denominator == 1


def test_jump_n4_divisibility():
    g = GeodesicModel(Decomposition(4, [hyperbolic(6)]), 3, "h4")
    cert = find_jump([g], 4)
    assert cert is not None
    assert cert.n_value % 3 == 0
    from geodex.loop_homology import constant_B

    assert (2 * cert.n_value * constant_B(4)).denominator == 1
