from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpclie import rootsys as rs
from cpclie.rootsys import (
    InvalidRootSystem,
    NotARoot,
    NotMinimumLevel,
    RootSystemError,
    alpha_string,
    build_root_system,
    cartan_integer,
    level,
    pair_string_class,
    string_partition,
    string_pq,
    weyl_reflect,
)

from .oracles import A3_SIMPLE, B2_SIMPLE, C3_SIMPLE, G2_SIMPLE, weyl_closure_positive

SYSTEMS = [
    ("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3),
    ("D", 4), ("BC", 1), ("BC", 2), ("G2", 2),
]
_CACHE = {}


def system(family, rank):
    key = (family, rank)
    if key not in _CACHE:
        _CACHE[key] = build_root_system(family, rank)
    return _CACHE[key]


def coeffs(roots):
    return [r.coeffs for r in roots]


systems = st.sampled_from(SYSTEMS).map(lambda fr: system(*fr))


@st.composite
def root_pair(draw, zero=False):
    sysm = draw(systems)
    roots = list(sysm.roots)
    a = draw(st.sampled_from(roots))
    pool = roots + ([rs._vec((0,) * sysm.rank)] if zero else [])
    b = draw(st.sampled_from(pool))
    return sysm, a, sysm.canonical(b)


# ----- enumeration ---------------------------------------------------------


def test_a2_positive_roots():
    sysm = system("A", 2)
    assert coeffs(sysm.positive_roots) == [(1, 0), (0, 1), (1, 1)]
    assert all(r.length_sq == 2 for r in sysm.positive_roots)


def test_a1():
    sysm = system("A", 1)
    assert coeffs(sysm.positive_roots) == [(1,)]
    assert coeffs(sysm.reduced_simple) == [(1,)]


@pytest.mark.parametrize(
    "family,rank,simple",
    [("G2", 2, G2_SIMPLE), ("A", 3, A3_SIMPLE), ("C", 3, C3_SIMPLE), ("B", 2, B2_SIMPLE)],
)
def test_positive_roots_match_weyl_closure(family, rank, simple):
    sysm = system(family, rank)
    assert sorted(coeffs(sysm.positive_roots)) == sorted(weyl_closure_positive(simple))


def test_g2_has_six_roots_with_top_string():
    sysm = system("G2", 2)
    assert len(sysm.positive_roots) == 6
    assert (1, 3) in coeffs(sysm.positive_roots)
    # long alpha_0 normalized to length^2 6
    assert sysm.simple_roots[0].length_sq == 6
    assert sysm.simple_roots[1].length_sq == 2


@pytest.mark.parametrize("family,rank,count", [("A", 3, 6), ("B", 3, 9), ("C", 3, 9), ("D", 4, 12), ("BC", 2, 6)])
def test_root_counts(family, rank, count):
    assert len(system(family, rank).positive_roots) == count


def test_shortest_simple_root_has_length_two():
    for fr in SYSTEMS:
        sysm = system(*fr)
        assert min(a.length_sq for a in sysm.simple_roots) == 2


@pytest.mark.parametrize("family,rank", [("E", 6), ("G2", 3), ("C", 1), ("D", 2), ("A", 0), ("A", "2")])
def test_invalid_pairs_rejected(family, rank):
    with pytest.raises(InvalidRootSystem):
        build_root_system(family, rank)


def test_multiplicity_profile():
    sysm = build_root_system("B", 2, {2: 3, 4: 1})
    assert sysm.multiplicity(sysm.root((0, 1))) == 3
    assert sysm.multiplicity(sysm.root((1, 0))) == 1
    assert sysm.multiplicity(-sysm.root((1, 2))) == 1
    with pytest.raises(InvalidRootSystem):
        build_root_system("B", 2, {2: 3})
    with pytest.raises(InvalidRootSystem):
        build_root_system("A", 2, {2: 0})


def test_reduced_simple_roots():
    for fr in SYSTEMS:
        sysm = system(*fr)
        missing = len(sysm.simple_roots) - len(sysm.reduced_simple)
        assert missing == (1 if sysm.family == "BC" else 0)


def test_root_ordering_by_level_then_coefficients():
    sysm = system("C", 3)
    levels = [r.level for r in sysm.positive_roots]
    assert levels == sorted(levels)
    assert coeffs(sysm.positive_roots)[:3] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


# ----- Cartan integers, strings, reflections --------------------------------


def test_cartan_integer_examples():
    a2 = system("A", 2)
    a0, a1 = a2.simple_roots
    assert cartan_integer(a2, a0, a1) == -1
    assert cartan_integer(a2, a1, a0) == -1
    g2 = system("G2", 2)
    b0, b1 = g2.simple_roots
    assert cartan_integer(g2, b1, b0) == -3
    assert cartan_integer(g2, b0, b1) == -1
    for fr in SYSTEMS:
        sysm = system(*fr)
        for a in sysm.roots:
            assert cartan_integer(sysm, a, a) == 2


def test_cartan_integer_rejects_non_roots():
    a2 = system("A", 2)
    with pytest.raises(NotARoot):
        cartan_integer(a2, rs._vec((1, -1)), a2.simple_roots[0])
    with pytest.raises(NotARoot):
        cartan_integer(a2, a2.simple_roots[0], rs._vec((2, 0)))


def test_cartan_matrices():
    assert system("A", 3).cartan_matrix == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    assert system("G2", 2).cartan_matrix == ((2, -1), (-3, 2))


def test_strings_examples():
    g2 = system("G2", 2)
    a0, a1 = g2.simple_roots
    assert coeffs(alpha_string(g2, a1, a0)) == [(1, 0), (1, 1), (1, 2), (1, 3)]
    a2 = system("A", 2)
    b0, b1 = a2.simple_roots
    assert coeffs(alpha_string(a2, b1, b0)) == [(1, 0), (1, 1)]
    a3 = system("A", 3)
    c0, _, c2 = a3.simple_roots
    assert coeffs(alpha_string(a3, c2, c0)) == [(1, 0, 0)]
    assert string_pq(a3, c2, c0) == (0, 0)


def test_level_and_reflection_examples():
    a2 = system("A", 2)
    assert level(a2, a2.root((1, 1))) == 2
    with pytest.raises(NotARoot):
        level(a2, -a2.root((1, 1)))
    b2 = system("B", 2)
    long0, short1 = b2.simple_roots
    assert short1.length_sq == 2 and long0.length_sq == 4
    assert coeffs(alpha_string(b2, short1, long0)) == [(1, 0), (1, 1), (1, 2)]
    assert weyl_reflect(b2, short1, long0).coeffs == (1, 2)
    for fr in SYSTEMS:
        sysm = system(*fr)
        for a in sysm.roots:
            assert weyl_reflect(sysm, a, a).coeffs == (-a).coeffs


def _delta0(sysm):
    return {r.coeffs for r in sysm.roots} | {(0,) * sysm.rank}


@settings(max_examples=300, deadline=None)
@given(root_pair(zero=True))
def test_strings_are_gap_free_with_p_minus_q(data):
    sysm, a, lam = data
    got = coeffs(alpha_string(sysm, a, lam))
    d0 = _delta0(sysm)
    # independent scan of lam + n a over a generous window
    ns = [n for n in range(-6, 7) if tuple(x + n * y for x, y in zip(lam.coeffs, a.coeffs)) in d0]
    lo = hi = 0
    while lo - 1 in ns:
        lo -= 1
    while hi + 1 in ns:
        hi += 1
    want = [tuple(x + n * y for x, y in zip(lam.coeffs, a.coeffs)) for n in range(lo, hi + 1)]
    assert got == want
    p, q = string_pq(sysm, a, lam)
    assert p - q == cartan_integer(sysm, a, lam)
    proportional = lam.is_zero() or any(
        all(k * x == m * y for x, y in zip(lam.coeffs, a.coeffs)) for k, m in ((1, 2), (2, 1), (1, 1), (1, -1), (1, -2), (2, -1))
    )
    if not proportional:
        assert len(got) <= 4


@settings(max_examples=300, deadline=None)
@given(root_pair())
def test_cartan_integer_bounds(data):
    sysm, a, lam = data
    v = cartan_integer(sysm, a, lam)
    assert abs(v) <= 4
    if abs(v) == 4:
        assert sysm.family == "BC" and lam.coeffs in (a.scaled(2).coeffs, a.scaled(-2).coeffs)
    proportional = any(
        all(k * x == m * y for x, y in zip(lam.coeffs, a.coeffs)) for k, m in ((1, 2), (2, 1), (1, 1), (1, -1), (1, -2), (2, -1))
    )
    if not proportional and sysm.length_sq(lam) <= sysm.length_sq(a):
        assert v in (-1, 0, 1)


def test_sum_and_difference_rules_exhaustive():
    for fr in SYSTEMS:
        sysm = system(*fr)
        d0 = _delta0(sysm)
        for a in sysm.roots:
            for lam in sysm.roots:
                ip = sysm.inner(a, lam)
                if ip > 0:
                    assert (a - lam).coeffs in d0
                if ip < 0:
                    assert (a + lam).coeffs in d0


@settings(max_examples=300, deadline=None)
@given(root_pair())
def test_reflection_is_length_preserving_involution(data):
    sysm, a, lam = data
    r = weyl_reflect(sysm, a, lam)
    assert sysm.is_root(r)
    assert sysm.length_sq(r) == sysm.length_sq(lam)
    assert weyl_reflect(sysm, a, r).coeffs == lam.coeffs


def test_roots_are_sign_coherent():
    for fr in SYSTEMS:
        sysm = system(*fr)
        for r in sysm.positive_roots:
            assert all(c >= 0 for c in r.coeffs) and r.length_sq > 0
            assert sysm.is_root(-r)


# ----- (a0, a1)-classes ----------------------------------------------------


def test_len3_class_in_a3():
    a3 = system("A", 3)
    a0, a1, lam = a3.simple_roots
    # relabel so alpha_0 = e1 - e2, alpha_1 = e2 - e3, lam = e3 - e4
    cls = pair_string_class(a3, a0, a1, lam)
    assert cls.shape == "len3"
    assert coeffs(cls.members) == [(0, 0, 1), (0, 1, 1), (1, 1, 1)]


def test_singleton_class():
    a4 = system("A", 4)
    a0, a1, _, a3 = a4.simple_roots
    cls = pair_string_class(a4, a0, a1, a3)
    assert cls.shape == "singleton" and coeffs(cls.members) == [a3.coeffs]


def test_len6_class_in_c3():
    c3 = system("C", 3)
    a0, a1, lam = c3.simple_roots
    cls = pair_string_class(c3, a0, a1, lam)
    assert cls.shape == "len6"
    assert cls.members[-1].coeffs == (lam + a1.scaled(2) + a0.scaled(2)).coeffs
    assert sorted(coeffs(cls.members)) == sorted(
        [(0, 0, 1), (0, 1, 1), (1, 1, 1), (0, 2, 1), (1, 2, 1), (2, 2, 1)]
    )


def test_class_requires_minimum_level():
    a3 = system("A", 3)
    a0, a1, lam = a3.simple_roots
    with pytest.raises(NotMinimumLevel):
        pair_string_class(a3, a0, a1, a3.root((0, 1, 1)))
    with pytest.raises(RootSystemError):
        pair_string_class(a3, a0, lam, a1)  # not joined by an edge
    with pytest.raises(RootSystemError):
        pair_string_class(a3, a0, a1, a3.root((1, 1, 0)))  # inside the plane


def _a2_pairs(sysm):
    s = sysm.simple_roots
    return [
        (s[i], s[j]) for i in range(len(s)) for j in range(len(s))
        if i != j and cartan_integer(sysm, s[i], s[j]) == -1 and cartan_integer(sysm, s[j], s[i]) == -1
    ]


@pytest.mark.parametrize("fr", [fr for fr in SYSTEMS if _a2_pairs(system(*fr))])
def test_partition_covers_positive_roots_once(fr):
    sysm = system(*fr)
    for a0, a1 in _a2_pairs(sysm):
        classes = string_partition(sysm, a0, a1)
        seen = [m.coeffs for c in classes for m in c.members]
        assert sorted(seen) == sorted(coeffs(sysm.positive_roots))
        assert len(seen) == len(set(seen))
        for c in classes:
            size = {"singleton": 1, "len3": 3, "len6": 6, "a2": 3}[c.shape]
            assert len(c.members) == size
            for m in c.members:
                d = m - c.representative
                assert rs._in_lattice(d, a0, a1)


def test_inner_product_is_positive_definite_and_rational():
    for fr in SYSTEMS:
        sysm = system(*fr)
        g = sysm.gram
        assert all(isinstance(x, Fraction) for row in g for x in row)
        assert all(g[i][j] == g[j][i] for i in range(sysm.rank) for j in range(sysm.rank))
        for r in sysm.roots:
            assert sysm.length_sq(r) > 0


def test_debug_table_lists_every_root():
    sysm = system("B", 2)
    text = rs.debug_table(sysm)
    assert "cartan matrix: [[2, -1], [-2, 2]]" in text
    assert len(text.splitlines()) == 1 + len(sysm.positive_roots) + 2
