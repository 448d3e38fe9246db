from fractions import Fraction
from itertools import product

import pytest

from geodex.exact_numbers import SurdSum, SurdTurn
from geodex.index_iteration import GeodesicModel, index_at, model_from_turns
from geodex.morse_engine import (
    DressedGeodesic,
    TypeNumberError,
    admissibility_violations,
    average_euler,
    critical_dim,
    degenerate_classes,
    enumerate_admissible_types,
    euler_char,
    lemma75_bridge,
    mean_index_identity,
    morse_count,
    morse_inequalities,
    nondegenerate_dressed,
    type_tuple_at,
    validate_types,
)
from geodex.normal_forms import Decomposition, IDENTITY_PAIR, hyperbolic, rotation

SQRT2_HALF = SurdTurn(0, 1, 2, 2)
SQRT3_HALF = SurdTurn(0, 1, 2, 3)

# [R(1/2), R(1/3)], i=2: T=6, degenerate divisor classes 2, 3, 6
TWO_ROT = model_from_turns(3, [Fraction(1, 2), Fraction(1, 3)], 2, "c2")
TWO_ROT_TYPES = {2: (0, 0, 1), 3: (0, 0, 1), 6: (0, 0, 1, 0, 0)}

SURD_ROT = model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "c1")


def dressed_two_rot():
    return DressedGeodesic(TWO_ROT, TWO_ROT_TYPES)


def test_degenerate_classes():
    classes = degenerate_classes(TWO_ROT)
    assert set(classes) == {2, 3, 6}
    assert classes[6]["nu"] == 4
    assert classes[2]["beta"] == 1
    assert degenerate_classes(SURD_ROT) == {}


def test_validate_types_flags_problems():
    assert validate_types(dressed_two_rot()) == []
    missing = DressedGeodesic(TWO_ROT, {2: (0, 0, 1)})
    msgs = validate_types(missing)
    assert any("missing" in m for m in msgs)
    bad = DressedGeodesic(TWO_ROT, {**TWO_ROT_TYPES, 6: (1, 0, 1, 0, 0)})
    assert any("excludes" in m for m in msgs) or validate_types(bad)
    extra = DressedGeodesic(TWO_ROT, {**TWO_ROT_TYPES, 1: (1,)})
    assert any("nondegenerate" in m for m in validate_types(extra))


def test_validate_types_top_maximum_propagates_down():
    types = {2: (0, 1, 0), 3: (0, 0, 1), 6: (0, 0, 1, 0, 0)}
    # class 6 top entry is 0, so no constraint from it; class 2 interior is fine
    assert validate_types(DressedGeodesic(TWO_ROT, types)) == []
    types = {2: (1, 0, 0), 3: (0, 0, 1), 6: (0, 0, 0, 0, 1)}
    msgs = validate_types(DressedGeodesic(TWO_ROT, types))
    assert any("top local maximum" in m for m in msgs)


def test_type_tuple_resolution_via_gcd():
    dg = dressed_two_rot()
    assert type_tuple_at(dg, 4) == (0, 0, 1)      # gcd(4, 6) = 2
    assert type_tuple_at(dg, 9) == (0, 0, 1)      # gcd(9, 6) = 3
    assert type_tuple_at(dg, 12) == (0, 0, 1, 0, 0)
    assert type_tuple_at(dg, 5) == (1,)           # nondegenerate, even jump


def test_critical_dim():
    dg = nondegenerate_dressed(SURD_ROT)
    assert critical_dim(dg, 1, 2) == 1            # q = i(c), even jump
    assert critical_dim(dg, 1, 3) == 0
    assert critical_dim(dg, 2, index_at(SURD_ROT, 2)) == 1
    d2 = dressed_two_rot()
    # degenerate class 6: i(c^6) = 8, tuple (0,0,1,0,0) -> k_2 at q = 10
    assert critical_dim(d2, 6, 10) == 1
    assert critical_dim(d2, 6, 8) == 0
    assert critical_dim(d2, 6, 13) == 0


def test_critical_dim_requires_types():
    dg = DressedGeodesic(TWO_ROT, {})
    with pytest.raises(TypeNumberError):
        critical_dim(dg, 6, 10)


def test_euler_char():
    dg = nondegenerate_dressed(SURD_ROT)
    assert euler_char(dg, 1) == 1                  # even index, single k_0 = 1
    d2 = dressed_two_rot()
    # class 6 tuple (0, k1, k2, k3, 0) at even index: chi = k2 - k1 - k3
    d3 = DressedGeodesic(TWO_ROT, {**TWO_ROT_TYPES, 6: (0, 1, 2, 1, 0)})
    assert euler_char(d3, 6) == 2 - 1 - 1
    d4 = DressedGeodesic(TWO_ROT, {**TWO_ROT_TYPES, 6: (0, 0, 0, 0, 0)})
    assert euler_char(d4, 6) == 0
    assert euler_char(d2, 6) == 1


def test_average_euler():
    assert average_euler(nondegenerate_dressed(SURD_ROT)) == 1
    assert average_euler(dressed_two_rot()) == 1   # chi constant 1 over T = 6
    invisible = DressedGeodesic(
        GeodesicModel(Decomposition(3, [IDENTITY_PAIR, hyperbolic(2)]), 3, "z"),
        {1: (0, 0, 0)})
    assert average_euler(invisible) == 0


def test_average_euler_matches_direct_limit():
    dg = dressed_two_rot()
    t = 6
    big = 50 * t
    direct = Fraction(sum(euler_char(dg, m) for m in range(1, big + 1)), big)
    assert direct == average_euler(dg)


def test_mean_index_identity_holds_by_construction():
    quarter = model_from_turns(3, [Fraction(1, 4), Fraction(1, 4)], 2, "q")
    dg = DressedGeodesic(quarter, {4: (0, 0, 1, 0, 0)})
    assert validate_types(dg) == []
    rep = mean_index_identity([dg], 3)
    assert rep.holds
    assert rep.lhs == 1
    assert average_euler(dg) == 1


def test_mean_index_identity_two_small_terms_fail():
    c1 = nondegenerate_dressed(SURD_ROT)
    c1b = nondegenerate_dressed(
        model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "other"))
    rep = mean_index_identity([c1, c1b], 3)
    assert not rep.holds
    assert rep.lhs < 1
    # each ratio is below 1/2
    for _, ch, ih, ratio in rep.per_geodesic:
        assert ratio < Fraction(1, 2)


def test_mean_index_identity_override_and_errors():
    h = GeodesicModel(Decomposition(4, [hyperbolic(6)]), 1, "h")
    dg = DressedGeodesic(h, {})
    rep = mean_index_identity([dg], 4, chi_hat_override={"h": Fraction(-2, 3)})
    assert rep.holds                               # -2/3 over ihat = 1
    rep2 = mean_index_identity([dg], 4,
                               chi_hat_override={"h": Fraction(-2, 3) + Fraction(1, 10 ** 6)})
    assert not rep2.holds
    zero = GeodesicModel(Decomposition(4, [hyperbolic(6)]), 0, "z")
    with pytest.raises(ValueError):
        mean_index_identity([DressedGeodesic(zero, {})], 4)


def test_morse_count():
    dg = nondegenerate_dressed(SURD_ROT)
    assert morse_count([dg], 2, {"c1": 1}) == 1
    assert morse_count([dg], 2, {"c1": (1, 0)}) == 0
    assert morse_count([dg], index_at(SURD_ROT, 3), {"c1": 10}) >= 1


def test_morse_inequalities_rank_violation():
    g = model_from_turns(3, [SQRT2_HALF, SurdTurn(0, 1, 4, 2)], 2, "g")
    dg = nondegenerate_dressed(g)
    rep = morse_inequalities([dg], 3, 5, {"g": 6})
    assert not rep.ok
    assert rep.first_violation["q"] == 4
    assert rep.first_violation["M"] == 1 and rep.first_violation["b"] == 2


def test_morse_inequalities_alternating_violation():
    c1 = nondegenerate_dressed(SURD_ROT)
    c2 = nondegenerate_dressed(
        model_from_turns(3, [SQRT2_HALF, SQRT3_HALF], 2, "twin"))
    rep = morse_inequalities([c1, c2], 3, 3, {"c1": 2, "twin": 2})
    assert not rep.ok
    assert rep.first_violation == {"q": 3, "M": 0, "b": 0, "kind": "alternating",
                                   "alt_M": -2, "alt_b": -1}


def test_morse_inequalities_empty_config():
    rep = morse_inequalities([], 3, 1, {})
    assert rep.ok


def test_lemma75_bridge():
    b = [0, 0, 1, 0, 2, 0, 2]
    consistent = [0, 0, 1, 1, 3, 0, 2]       # differs by the pair t^3 + t^4
    res = lemma75_bridge(consistent, b, 6)
    assert res == (0, 0)
    skewed = [0, 0, 1, 0, 3, 0, 2]
    res2 = lemma75_bridge(skewed, b, 6)
    assert res2 is not None and res2[0] != 0
    assert lemma75_bridge([1, 2], [1, 1], 1) is None
    with pytest.raises(ValueError):
        lemma75_bridge([1], [1], 3)


def test_enumerate_admissible_types_nondegenerate():
    assert enumerate_admissible_types(0, 1) == [(1,)]
    assert enumerate_admissible_types(0, -1) == [(0,)]


def test_enumerate_admissible_types_nu2():
    got = set(enumerate_admissible_types(2, 1))
    assert got == {(0, 0, 0), (1, 0, 0), (0, 0, 1), (0, 1, 0), (0, 2, 0)}
    got_minus = set(enumerate_admissible_types(2, -1))
    assert (1, 0, 0) not in got_minus


def test_enumeration_matches_bruteforce_filter():
    for nu, beta in product((0, 1, 2, 3, 4), (1, -1)):
        listed = set(enumerate_admissible_types(nu, beta, interior_cap=2))
        brute = set()
        for tup in product(range(3), repeat=nu + 1):
            if not admissibility_violations(nu, beta, tup):
                if all(v <= 1 for v in (tup[0], tup[-1])):
                    brute.add(tup)
        assert listed == brute, (nu, beta)


def test_small_nullity_even_index_euler_bound():
    # admissible tuples at nu <= 2 on an even-index iterate contribute <= 1
    for nu in (0, 1, 2):
        for beta in (1, -1):
            for tup in enumerate_admissible_types(nu, beta):
                chi = sum((k if l % 2 == 0 else -k) for l, k in enumerate(tup))
                assert chi <= 1


def test_hingston_equality_family():
    from geodex.index_iteration import nullity_at

    for n in (3, 4, 5):
        for p0 in range(0, n):
            pp = n - 1 - p0
            i0 = 2 + (p0 % 2)
            from geodex.normal_forms import N1_PLUS_MINUS

            g = GeodesicModel(
                Decomposition(n, [IDENTITY_PAIR] * p0 + [N1_PLUS_MINUS] * pp),
                i0, "f")
            i1, nu1 = i0, nullity_at(g, 1)
            for m in (1, 2, 3, 10, 97):
                lhs = index_at(g, m) + nullity_at(g, m)
                assert lhs == m * (i1 + nu1) - (n - 1) * (m - 1)
