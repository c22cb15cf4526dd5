import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bikoszul.bipoly import Bidegree, PrimeField
from bikoszul.constructions import DiagonalSpec
from bikoszul.errors import EmptyDiagonal, GradingConflict, NotMember
from bikoszul.resolution import CertifiedKoszul, CertifiedNonKoszul, koszul_test
from bikoszul.semigroup import (AffineSemigroup, SimplicialComplex, cm_scan, divisor_poset,
                                interval_complex, is_cohen_macaulay, members_up_to,
                                reduced_homology, semigroup_diagonal, toric_presentation,
                                validate)

LINE = AffineSemigroup(1, ((1,),))
CONE = AffineSemigroup(2, ((2, 0), (1, 1), (0, 2)))
QUARTIC = AffineSemigroup(2, ((4, 0), (3, 1), (1, 3), (0, 4)))
# a bigraded example: K[x1, x2, y1] as a semigroup ring
FREE_21 = AffineSemigroup(3, ((1, 0, 0), (0, 1, 0)), ((0, 0, 1),))


def brute_members(L, total):
    """All sums of at most ``total`` generators with their bidegrees, by multiset enumeration."""
    gens = L.generators()
    out = {}
    for k in range(total + 1):
        for combo in itertools.combinations_with_replacement(range(len(gens)), k):
            v = tuple(sum(gens[i][0][c] for i in combo) for c in range(L.ambient_dim))
            d = Bidegree(sum(gens[i][1].p for i in combo), sum(gens[i][1].q for i in combo))
            out.setdefault(v, set()).add(d)
    return out


@pytest.mark.parametrize("L", [LINE, CONE, QUARTIC, FREE_21], ids=["line", "cone", "quartic", "free21"])
def test_members_match_enumeration(L):
    table = members_up_to(L, 3)
    brute = brute_members(L, 3)
    assert set(table) == set(brute)
    for v, d in table.items():
        assert brute[v] == {d}


def test_member_counts():
    assert sorted(members_up_to(LINE, 3)) == [(0,), (1,), (2,), (3,)]
    deg2 = [v for v, d in members_up_to(CONE, 2).items() if d == (2, 0)]
    assert len(deg2) == 5
    deg2 = [v for v, d in members_up_to(QUARTIC, 2).items() if d == (2, 0)]
    assert len(deg2) == 9


def test_validate():
    assert validate(LINE, 5)
    assert validate(CONE, 5)
    with pytest.raises(GradingConflict) as info:
        validate(AffineSemigroup(1, ((3,), (4,), (5,))), 4)
    # 4 + 5 = 3 + 3 + 3 is the first collision found by number of summands
    assert info.value.vector == (9,)
    assert set(info.value.bidegrees) == {Bidegree(2, 0), Bidegree(3, 0)}


def test_generators_are_checked():
    with pytest.raises(ValueError):
        AffineSemigroup(1, ((0,),))
    with pytest.raises(ValueError):
        AffineSemigroup(2, ((1, 0), (1, 0)))
    with pytest.raises(ValueError):
        AffineSemigroup(2, ((1, 0, 0),))


def test_reduced_homology_examples():
    point = SimplicialComplex.from_facets([(0,)])
    assert reduced_homology(point) == [0, 0]
    two = SimplicialComplex.from_facets([(0,), (1,)])
    assert reduced_homology(two) == [0, 1]
    triangle = SimplicialComplex.from_facets([(0, 1), (1, 2), (0, 2)])
    assert reduced_homology(triangle) == [0, 0, 1]
    empty = SimplicialComplex((), frozenset())
    assert reduced_homology(empty) == [1]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_sphere_homology(k):
    # boundary of the (k+1)-simplex is a k-sphere
    sphere = SimplicialComplex.from_facets(itertools.combinations(range(k + 2), k + 1))
    H = reduced_homology(sphere)
    assert H == [0] * (k + 1) + [1]
    assert is_cohen_macaulay(sphere)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 5), min_size=1, max_size=3), min_size=1, max_size=5))
def test_euler_characteristic(facets):
    K = SimplicialComplex.from_facets([tuple(sorted(f)) for f in facets])
    assert K.is_closed()
    H = reduced_homology(K)
    f = K.f_vector()
    assert sum((-1) ** i * h for i, h in enumerate(H)) == sum((-1) ** i * c for i, c in enumerate(f))


def test_cm_examples():
    simplex = SimplicialComplex.from_facets([(0, 1, 2)])
    assert is_cohen_macaulay(simplex)
    triangle = SimplicialComplex.from_facets([(0, 1), (1, 2), (0, 2)])
    assert is_cohen_macaulay(triangle)
    edges = SimplicialComplex.from_facets([(0, 1), (2, 3)])
    res = is_cohen_macaulay(edges)
    assert not res and res.witness == ((), 0)


def test_cone_over_cm_complex_stays_cm():
    base = SimplicialComplex.from_facets([(0, 1), (1, 2), (2, 3), (3, 0)])
    cone = SimplicialComplex.from_facets([f + (9,) for f in [(0, 1), (1, 2), (2, 3), (3, 0)]])
    assert is_cohen_macaulay(base) and is_cohen_macaulay(cone)
    # a hollow triangle glued to a filled one at a vertex is not CM, and neither is its cone
    bad = [(0, 1), (1, 2), (2, 0), (0, 3, 4)]
    assert not is_cohen_macaulay(SimplicialComplex.from_facets(bad))
    assert not is_cohen_macaulay(SimplicialComplex.from_facets([f + (9,) for f in bad]))


def test_interval_complexes():
    K = interval_complex(LINE, (3,))
    assert K.faces_of_dim(1) == [((1,), (2,))]
    assert interval_complex(LINE, (1,)).faces == {frozenset()}
    K = interval_complex(CONE, (2, 2))
    assert sorted(K.vertices) == [(0, 2), (1, 1), (2, 0)]
    assert K.dim == 0
    with pytest.raises(NotMember):
        interval_complex(CONE, (1, 0))


def test_divisor_poset_axioms():
    for lam in [(4, 4), (3, 3), (2, 4)]:
        assert divisor_poset(CONE, lam).check_axioms()
    assert divisor_poset(QUARTIC, (4, 4)).check_axioms()


def test_cm_scan_agrees_with_koszul_test():
    for L, koszul in [(LINE, True), (CONE, True), (QUARTIC, False)]:
        scan = cm_scan(L, 3)
        verdict = koszul_test(toric_presentation(L), 4)
        assert (scan.verdict == "AllCM") == koszul
        assert isinstance(verdict, CertifiedNonKoszul) != koszul
    scan = cm_scan(QUARTIC, 3)
    assert scan.witness[0] == (3, 9)
    assert scan.to_json()["witness"]["lambda"] == [3, 9]


def test_toric_presentations():
    cone = toric_presentation(CONE)
    assert len(cone.relations) == 1 and cone.relations[0].total_degree() == 2
    assert isinstance(koszul_test(cone), CertifiedKoszul)
    quartic = toric_presentation(QUARTIC)
    assert sorted(f.total_degree() for f in quartic.relations) == [2, 3, 3, 3]
    assert toric_presentation(FREE_21).relations == ()


def test_semigroup_diagonals():
    D = semigroup_diagonal(CONE, DiagonalSpec(2, 0))
    assert len(D.x_generators) == 5
    T = semigroup_diagonal(FREE_21, DiagonalSpec(1, 1, "DeltaTilde"))
    assert T.x_generators == ((0, 1, 0), (1, 0, 0)) and T.y_generators == ((0, 0, 1),)
    Seg = semigroup_diagonal(FREE_21, DiagonalSpec(1, 1))
    assert sorted(Seg.x_generators) == [(0, 1, 1), (1, 0, 1)]
    with pytest.raises(EmptyDiagonal):
        semigroup_diagonal(CONE, DiagonalSpec(0, 1))


def test_scan_is_deterministic():
    a = cm_scan(CONE, 3).to_json()
    b = cm_scan(CONE, 3).to_json()
    assert a == b
    assert cm_scan(CONE, 2, PrimeField(3)).modulus == 3
