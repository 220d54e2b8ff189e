import pytest
from hypothesis import given, strategies as st

import catalogs
from structval import catalog
from structval.errors import NotNormal, PreconditionViolated
from structval.groups import all_subgroups, coset_transversal, subgroup_closure
from structval.partitions import (Block, SpecialPartition, etale_separation, special_partition,
                                  strict_basis_set, validate_special_partition)

S3 = catalog.symmetric(3)
Z2 = catalog.cyclic(2)
SYL = catalog.s3_sylow2()
A3 = subgroup_closure(S3, [catalog.find_perm(S3, [[0, 1, 2]])])
ORDER2 = [H for H in all_subgroups(S3) if len(H) == 2]


def test_strict_basis_set_examples():
    H = ORDER2[0]
    assert strict_basis_set(S3, H, S3.whole) == all_subgroups(S3)
    assert strict_basis_set(S3, H, S3.trivial) == [H]
    assert strict_basis_set(S3, H, A3) == ORDER2 + [S3.whole]
    with pytest.raises(NotNormal):
        strict_basis_set(S3, H, H)


def test_etale_separation_examples():
    v = etale_separation(S3, ORDER2)
    assert v.hausdorff and len(v.separating) == 3
    v = etale_separation(S3, [S3.trivial, ORDER2[0]])
    assert not v.hausdorff and v.witness[2] == S3.trivial
    assert etale_separation(S3, [A3]).hausdorff


@given(st.sampled_from(catalog.small_groups(12)[:14]), st.data())
def test_etale_separation_consistent_with_intersections(G, data):
    subs = all_subgroups(G)
    fam = data.draw(st.lists(st.sampled_from(subs), min_size=1, max_size=4, unique=True))
    v = etale_separation(G, fam)
    if v.hausdorff and len(fam) >= 2:
        assert G.trivial not in fam
    pairwise_trivial = all(len(set(a.members) & set(b.members)) == 1
                           for i, a in enumerate(fam) for b in fam[i + 1:])
    if pairwise_trivial and G.trivial not in fam:
        assert v.hausdorff


def test_trivial_action_gives_one_block_per_point():
    S = catalog.disjoint_union([catalog.one_point(S3), catalog.one_point(S3)])
    P = special_partition(S)
    assert [b.points for b in P.blocks] == [(0,), (1,)]
    for b in P.blocks:
        assert list(b.reps) == coset_transversal(S3, b.subgroup, "right")
    assert validate_special_partition(S, P).ok


def test_sylow_partition_has_one_block_three_reps():
    P = special_partition(SYL)
    assert len(P.blocks) == 1
    b = P.blocks[0]
    assert b.points == (0,) and b.subgroup == SYL.delta[0] and len(b.reps) == 3
    assert validate_special_partition(SYL, P).ok


def test_regular_structure_with_full_local_subgroup():
    S = catalog.regular(Z2, Z2.whole)
    P = special_partition(S, local={0: (Z2.whole, frozenset({0, 1}))})
    assert len(P.blocks) == 1
    b = P.blocks[0]
    assert b.points == (0, 1) and b.subgroup == Z2.whole and b.reps == (0,)
    assert validate_special_partition(S, P).ok


def test_broken_partitions_are_reported():
    P = special_partition(SYL)
    b = P.blocks[0]
    not_invariant = SpecialPartition([Block(b.subgroup, (0, 1), b.reps, 0)])
    assert "2d" in validate_special_partition(SYL, not_invariant).clauses()
    missing = SpecialPartition([Block(b.subgroup, b.points, b.reps[:2], 0)])
    assert "2e" in validate_special_partition(SYL, missing).clauses()


def test_preconditions():
    with pytest.raises(PreconditionViolated):
        special_partition(SYL, local={0: (S3.trivial, frozenset({0}))})
    S = catalog.regular(Z2)
    with pytest.raises(PreconditionViolated):
        special_partition(S, pins=[0, 1])


@pytest.mark.parametrize("S", catalogs.structures(4), ids=lambda S: f"{S.group.name}-{S.npoints}")
def test_default_partition_validates(S):
    P = special_partition(S)
    rep = validate_special_partition(S, P)
    assert rep.ok, rep.violations
    for b in P.blocks:
        assert b.base in b.points


@given(st.sampled_from([S for S in catalogs.structures(4) if S.npoints]), st.data())
def test_admissible_local_data_validates(S, data):
    y = data.draw(st.sampled_from(list(S.points)))
    bigger = [H for H in all_subgroups(S.group) if S.delta[y] <= H]
    Gp = data.draw(st.sampled_from(bigger))
    orbit = {S.act(y, g) for g in Gp}
    extra = data.draw(st.sets(st.sampled_from(list(S.points))))
    P = special_partition(S, local={y: (Gp, frozenset(orbit | extra))})
    rep = validate_special_partition(S, P)
    assert rep.ok, rep.violations
    base = [b for b in P.blocks if b.base == y]
    for b in base:
        assert set(b.points) <= orbit | extra


@given(st.sampled_from([S for S in catalogs.structures(4) if S.npoints]), st.data())
def test_pins_become_base_points(S, data):
    reps = S.orbit_reps
    pins = data.draw(st.lists(st.sampled_from(reps), unique=True))
    pins = [S.act(x, data.draw(st.integers(0, S.group.order - 1))) for x in pins]
    P = special_partition(S, pins=pins)
    assert set(pins) <= {b.base for b in P.blocks}
    assert validate_special_partition(S, P).ok
