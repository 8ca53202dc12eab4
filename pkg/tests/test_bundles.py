import random

import pytest

from cmatlas.bundles import (FLAG_BOUNDARY, INFINITY, TRIVIAL, AtiyahBundle,
                             BundleError, BundleSum, CMClass, NotFull,
                             PicPoint, brute_force_full, cm_rank,
                             enumerate_cm, family_counts, format_enumeration,
                             h0, h1, instantiate, is_full,
                             is_indecomposable_cm, is_ggg,
                             predicted_full_indecomposable, split_trivial,
                             twist_I_dual)

P1 = PicPoint.generator("p1")
Q = PicPoint.generator("q")


def G(r, d, p=INFINITY):
    return AtiyahBundle(r, d, p)


# -- section counts ---------------------------------------------------------------

def test_h0_cases():
    assert h0(BundleSum.of(G(3, 5, P1))) == 5
    assert h0(BundleSum.of(G(2, 0, INFINITY))) == 1
    assert h0(BundleSum.of(G(1, -2, P1))) == 0
    assert h0(BundleSum.of(G(2, 0, P1))) == 0
    assert h0(BundleSum.of(G(3, 5, P1), G(2, 0, INFINITY))) == 6


def test_h1_cases():
    assert h1(BundleSum.of(G(3, 5, P1))) == 0
    assert h1(BundleSum.of(G(2, 0, INFINITY))) == 1
    assert h1(BundleSum.of(G(1, -3, P1))) == 3


def test_riemann_roch_property():
    rng = random.Random(0)
    points = [INFINITY, P1, Q]
    for _ in range(2000):
        f = BundleSum(G(rng.randint(1, 5), rng.randint(-6, 6),
                        rng.choice(points))
                      for _ in range(rng.randint(1, 4)))
        assert h0(f) - h1(f) == f.total_degree()
        assert h1(f) >= 0


# -- generation / twisting ------------------------------------------------------------

def test_is_ggg():
    assert is_ggg(BundleSum.of(G(2, 1, P1)))
    assert is_ggg(BundleSum.of(TRIVIAL))
    assert not is_ggg(BundleSum.of(G(2, 0, INFINITY)))
    assert not is_ggg(BundleSum.of(G(1, 0, P1)))
    assert not is_ggg(BundleSum.of(G(2, 1, P1), G(1, -1, Q)))


def test_twist():
    assert twist_I_dual(BundleSum.of(G(3, 5, P1))) == BundleSum.of(G(3, 2, P1))
    assert twist_I_dual(BundleSum.of(TRIVIAL)) == BundleSum.of(G(1, -1, INFINITY))
    assert h0(twist_I_dual(BundleSum.of(G(2, 2, INFINITY)))) == \
        h0(BundleSum.of(G(2, 0, INFINITY))) == 1


def test_twist_rank_degree_invariants():
    rng = random.Random(1)
    for _ in range(500):
        f = BundleSum(G(rng.randint(1, 5), rng.randint(-6, 6), Q)
                      for _ in range(rng.randint(1, 3)))
        twisted = twist_I_dual(f)
        assert twisted.total_rank() == f.total_rank()
        assert twisted.total_degree() == f.total_degree() - f.total_rank()


def test_split_trivial():
    g, m = split_trivial(BundleSum.of(G(2, 3, P1), TRIVIAL, TRIVIAL))
    assert g == BundleSum.of(G(2, 3, P1)) and m == 2
    g, m = split_trivial(BundleSum.of(TRIVIAL))
    assert g.is_empty and m == 1
    g, m = split_trivial(BundleSum.of(G(2, 2, INFINITY)))
    assert g == BundleSum.of(G(2, 2, INFINITY)) and m == 0


# -- fullness / indecomposability --------------------------------------------------------

def test_is_full_cases():
    assert not is_full(BundleSum.of(G(1, 1, INFINITY)))
    assert is_full(BundleSum.of(G(1, 1, INFINITY), TRIVIAL))
    assert not is_full(BundleSum.of(G(2, 0, INFINITY), *[TRIVIAL] * 5))
    assert is_full(BundleSum.of(TRIVIAL, TRIVIAL))


def test_is_indecomposable_cases():
    assert is_indecomposable_cm(BundleSum.of(G(3, 5, P1), TRIVIAL, TRIVIAL))
    assert is_indecomposable_cm(BundleSum.of(TRIVIAL))
    assert not is_indecomposable_cm(BundleSum.of(G(2, 1, P1), TRIVIAL))
    assert not is_indecomposable_cm(BundleSum.of(TRIVIAL, TRIVIAL))
    # two non-trivial summands always split the module
    assert not is_indecomposable_cm(BundleSum.of(G(1, 1, P1), G(1, 1, Q)))
    with pytest.raises(NotFull):
        is_indecomposable_cm(BundleSum.of(G(1, 1, INFINITY)))


def test_cm_rank_cases():
    assert cm_rank(BundleSum.of(G(3, 2, P1))) == 3
    assert cm_rank(BundleSum.of(G(2, 2, INFINITY), TRIVIAL)) == 3
    assert cm_rank(BundleSum.of(G(2, 5, P1), *[TRIVIAL] * 3)) == 5
    with pytest.raises(NotFull):
        cm_rank(BundleSum.of(G(1, -1, P1)))


def test_fullness_monotone_in_m():
    rng = random.Random(2)
    points = [INFINITY, P1, Q]
    for _ in range(300):
        g = BundleSum(G(rng.randint(1, 4), rng.randint(-3, 6),
                        rng.choice(points))
                      for _ in range(rng.randint(1, 3)))
        g, _ = split_trivial(g)
        if g.is_empty:
            continue
        m0 = h0(twist_I_dual(g))
        fulls = [m for m in range(m0 + 4)
                 if is_full(g + BundleSum([TRIVIAL] * m))]
        if fulls:
            assert fulls == list(range(min(fulls), m0 + 4))


def test_indecomposability_unique_in_m():
    rng = random.Random(3)
    points = [INFINITY, P1, Q]
    found_any = False
    for _ in range(300):
        g = BundleSum.of(G(rng.randint(1, 4), rng.randint(1, 6),
                           rng.choice(points)))
        m0 = h0(twist_I_dual(g))
        hits = []
        for m in range(m0 + 4):
            f = g + BundleSum([TRIVIAL] * m)
            if is_full(f) and is_indecomposable_cm(f):
                hits.append(m)
        assert hits == [m0]
        found_any = True
    assert found_any


# -- enumeration --------------------------------------------------------------------------

def test_family_counts_up_to_twelve():
    for n in range(1, 13):
        counts = family_counts(enumerate_cm(n))
        assert counts["Z"] == 2 * (n - 1)
        assert counts["Z-minus-infinity"] == 1
        assert counts["isolated"] == 1


def test_rank_one_classes():
    classes = enumerate_cm(1)
    assert [str(c.bundle) for c in classes] == ["G(1,0;inf)", "G(1,1;p)"]
    assert classes[0].parameter_space == "point"
    assert classes[1].parameter_space == "Z-minus-infinity"


def test_rank_three_classes():
    classes = enumerate_cm(3)
    bundles = [str(c.bundle) for c in classes]
    assert bundles == [
        "G(3,1;p)", "G(3,2;p)", "G(3,3;p)",
        "2*G(1,0;inf) + G(1,3;p)", "G(1,0;inf) + G(2,3;p)",
        "G(1,0;inf) + G(2,2;inf)",
    ]
    assert family_counts(classes) == {"Z": 4, "Z-minus-infinity": 1,
                                      "isolated": 1}


def test_boundary_class_flagged_only_at_rank_two():
    for n in range(1, 13):
        flagged = [c for c in enumerate_cm(n) if c.flags]
        if n == 2:
            assert len(flagged) == 1
            assert flagged[0].bundle == BundleSum.of(G(1, 1, INFINITY), TRIVIAL)
            assert FLAG_BOUNDARY in flagged[0].flags
        else:
            assert not flagged


def test_every_emitted_class_is_full_and_indecomposable():
    points = (INFINITY, Q)
    for n in range(1, 9):
        for cls in enumerate_cm(n):
            for bundle in instantiate(cls, points, PicPoint.generator("p")):
                assert is_full(bundle)
                assert is_indecomposable_cm(bundle)
                assert cm_rank(bundle) == n
                assert split_trivial(bundle)[1] == cls.m


def test_cmclass_invariant():
    with pytest.raises(BundleError):
        CMClass(BundleSum.of(G(2, 1, Q)), 3, "Z", "plain", m=0)


def test_format_enumeration_mentions_counts():
    text = format_enumeration(3, enumerate_cm(3))
    assert "Z-families: 4, punctured: 1, isolated: 1" in text


# -- brute-force oracle ----------------------------------------------------------------------

def test_brute_force_tiny():
    found = brute_force_full(1, 1)
    assert found == {BundleSum.of(TRIVIAL),
                     BundleSum.of(G(1, 1, PicPoint.generator("q")))}


def test_brute_force_never_emits_empty():
    for f in brute_force_full(2, 2):
        assert not f.is_empty


def test_brute_force_medium_matches_enumeration():
    generic = PicPoint.generator("q")
    found = brute_force_full(3, 4)
    predicted = predicted_full_indecomposable(
        3, 4, (INFINITY, generic), PicPoint.generator("p"))
    assert found == predicted


def test_bounds_guard():
    with pytest.raises(BundleError):
        brute_force_full(0, 3)


# -- points ------------------------------------------------------------------------------------

def test_pic_points():
    assert INFINITY.is_infinity
    p = PicPoint.generator("a")
    assert not p.is_infinity
    assert (p + (-p)).is_infinity
    assert -INFINITY == INFINITY
    assert PicPoint.of({"a": 1, "b": 0}) == p.__class__((("a", 1),))


def test_bundle_guards():
    with pytest.raises(BundleError):
        AtiyahBundle(0, 1, INFINITY)
    with pytest.raises(BundleError):
        is_full(BundleSum([]))
