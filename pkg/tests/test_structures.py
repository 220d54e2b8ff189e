import numpy as np
import pytest
from hypothesis import given, strategies as st

import catalogs
from oracles import transfer_failures
from structval import catalog
from structval.errors import (InvalidStructure, NotAMorphism, NotClosed, NotCommuting, NotNormal,
                              ShapeMismatch, SubgroupTooSmall, TargetMismatch)
from structval.groups import GroupHom, enumerate_homs, intersection, normal_subgroups, subgroup_closure
from structval.structures import (GroupStructure, StructureMorphism, check_cartesian, classify_morphism,
                                  fiber_product, identity_morphism, image_of_stabilizer_equals,
                                  is_isomorphism, quotient_structure, sub_structure, validate_structure)

S3 = catalog.symmetric(3)
Z2, Z4 = catalog.cyclic(2), catalog.cyclic(4)
SYL = catalog.s3_sylow2()
A3 = subgroup_closure(S3, [catalog.find_perm(S3, [[0, 1, 2]])])


def test_sylow_structure_valid_and_proper():
    rep = validate_structure(SYL)
    assert rep.valid and rep.proper and rep.delta_injective and rep.stabilizers_equal


def test_regular_with_full_subgroups_is_valid_not_proper():
    S = catalog.regular(Z2, Z2.whole)
    rep = validate_structure(S)
    assert rep.valid and not rep.proper and not rep.delta_injective


def test_stabilizer_violation_has_witness():
    with pytest.raises(InvalidStructure) as err:
        GroupStructure(Z2, [[0, 0]], [Z2.trivial])
    rep = err.value.witness
    v = rep.violations[0]
    assert v.kind == "stabilizer" and v.witness["x"] == 0 and v.witness["g"] == 1


def test_equivariance_violation_reported():
    S = GroupStructure(Z2, [[0, 1], [1, 0]], [Z2.trivial, Z2.trivial], check=False)
    assert validate_structure(S).valid
    T = GroupStructure(S3, [[0] * 6], [subgroup_closure(S3, [1])], check=False)
    kinds = {v.kind for v in validate_structure(T).violations}
    assert "equivariance" in kinds or "stabilizer" in kinds


def test_non_action_reported():
    S = GroupStructure(Z4, [[0, 1, 1, 0], [1, 0, 0, 1]], [Z4.whole, Z4.whole], check=False)
    assert not validate_structure(S).valid


def test_shape_mismatch():
    S = GroupStructure(Z2, [[0, 1], [1, 0]], [Z2.trivial], check=False)
    with pytest.raises(ShapeMismatch):
        validate_structure(S)


def test_identity_morphism_is_cover():
    for S in catalogs.structures(2):
        c = classify_morphism(identity_morphism(S))
        assert c.is_morphism and c.is_epimorphism and c.is_rigid and c.is_cover


def test_sylow_quotient_by_a3_is_cover():
    Q, q = quotient_structure(SYL, A3)
    assert Q.group.order == 2 and Q.npoints == 1 and len(Q.delta[0]) == 2
    assert classify_morphism(q).is_cover


def test_quotient_by_trivial_is_isomorphism():
    for S in catalogs.structures(3)[::7]:
        Q, q = quotient_structure(S, S.group.trivial)
        assert is_isomorphism(q)


def test_regular_quotient_by_whole_group_is_epi_not_cover():
    S = catalog.regular(Z2, Z2.whole)
    Q, q = quotient_structure(S, Z2.whole)
    assert Q.group.order == 1 and Q.npoints == 1
    c = classify_morphism(q)
    assert c.is_epimorphism and not c.is_cover


def test_quotient_requires_normal():
    with pytest.raises(NotNormal):
        quotient_structure(SYL, subgroup_closure(S3, [1]))


def test_quotient_cover_criterion_exhaustive():
    for S in catalogs.structures(4):
        for N in normal_subgroups(S.group):
            _, q = quotient_structure(S, N)
            expect = all(intersection(S.delta[x], N).is_trivial() for x in S.points)
            c = classify_morphism(q)
            assert c.is_epimorphism
            assert c.is_cover == expect


def test_sub_structure_examples():
    T, inc = sub_structure(SYL, S3.whole, SYL.points)
    assert is_isomorphism(inc)
    P = SYL.delta[0]
    T, inc = sub_structure(SYL, P, [0])
    assert T.npoints == 1 and validate_structure(T).valid
    # P fixes its own point and swaps the other two, so {0, 1} is not P-stable
    with pytest.raises(NotClosed):
        sub_structure(SYL, P, [0, 1])
    # all three points are P-stable, but G_1 is not inside P
    with pytest.raises(SubgroupTooSmall):
        sub_structure(SYL, P, SYL.points)


def test_sub_structure_of_proper_is_proper():
    T, _ = sub_structure(SYL, SYL.delta[0], [0])
    assert validate_structure(T).proper


def _z4_square():
    A = catalog.one_point(Z2)
    B = catalog.one_point(Z4)
    G = catalog.one_point(Z2)
    alpha = StructureMorphism(B, A, GroupHom(Z4, Z2, [0, 1, 0, 1]), [0])
    phi = StructureMorphism(G, A, GroupHom(Z2, Z2, [0, 1]), [0])
    return alpha, phi


def test_fiber_product_z4_example():
    alpha, phi = _z4_square()
    fp = fiber_product(alpha, phi)
    H = fp.structure
    assert H.group.order == 4 and H.npoints == 1 and len(H.delta[0]) == 4
    assert sorted(H.group.element_orders.tolist()) == [1, 2, 4, 4]
    c = classify_morphism(fp.psi)
    assert c.is_epimorphism and not c.is_rigid


def test_fiber_product_over_trivial_is_product():
    T = catalog.one_point(catalog.trivial_group())
    B, G = SYL, catalog.regular(Z2)
    alpha = StructureMorphism(B, T, GroupHom(S3, T.group, [0] * 6), [0] * 3)
    phi = StructureMorphism(G, T, GroupHom(Z2, T.group, [0, 0]), [0, 0])
    fp = fiber_product(alpha, phi)
    assert fp.structure.group.order == 12 and fp.structure.npoints == 6


def test_fiber_product_along_identity():
    _, q = quotient_structure(SYL, A3)
    fp = fiber_product(q, identity_morphism(q.target))
    assert is_isomorphism(fp.beta)
    assert np.array_equal(fp.psi.hom.map, q.hom.map[fp.beta.hom.map])


def test_fiber_product_target_mismatch():
    alpha, _ = _z4_square()
    with pytest.raises(TargetMismatch):
        fiber_product(alpha, identity_morphism(SYL))


def test_square_commutes_and_is_cartesian():
    _, q = quotient_structure(SYL, A3)
    fp = fiber_product(q, q)
    assert np.array_equal(q.hom.map[fp.beta.hom.map], q.hom.map[fp.psi.hom.map])
    ok, eps = check_cartesian(q, q, fp.beta, fp.psi)
    assert ok and is_isomorphism(eps)


def test_missing_point_orbit_is_not_cartesian():
    D = catalog.disjoint_union([catalog.one_point(Z2), catalog.one_point(Z2)])
    q = identity_morphism(D)
    fp = fiber_product(q, q)
    H = fp.structure
    orbit = H.orbit(0)
    assert len(orbit) < H.npoints
    T, inc = sub_structure(H, H.group.whole, orbit)
    ok, _ = check_cartesian(q, q, fp.beta.compose(inc), fp.psi.compose(inc))
    assert not ok


def test_non_commuting_square_rejected():
    alpha, phi = _z4_square()
    fp = fiber_product(alpha, phi)
    psi_bad = StructureMorphism(fp.structure, phi.source,
                                GroupHom(fp.structure.group, Z2, [0] * 4), [0])
    with pytest.raises(NotCommuting):
        check_cartesian(alpha, phi, fp.beta, psi_bad)


def test_stabilizer_transfer_for_catalog_covers():
    for f, c in catalogs.morphisms(3):
        if c.is_cover:
            assert all(image_of_stabilizer_equals(f, x) for x in f.source.points)


def test_fiber_product_transfer_small_catalog():
    pairs = catalogs.morphisms(2)
    targets = catalogs.by_target(pairs)
    n = 0
    for group in targets.values():
        covers = [f for f, c in group if c.is_epimorphism]
        epis = [f for f, c in group if c.is_epimorphism][:12]
        for alpha in covers[:12]:
            for phi in epis:
                fp = fiber_product(alpha, phi)
                assert transfer_failures(alpha, phi, fp, classify_morphism) == []
                n += 1
    assert n > 500


@given(st.sampled_from(catalogs.structures(2)), st.sampled_from(catalogs.structures(2)), st.data())
def test_classification_flags_are_nested(S, T, data):
    homs = enumerate_homs(S.group, T.group)
    h = data.draw(st.sampled_from(homs))
    if T.npoints == 0 and S.npoints:
        return
    pm = [data.draw(st.integers(0, T.npoints - 1)) for _ in S.points]
    f = StructureMorphism(S, T, h, pm, check=False)
    c = classify_morphism(f)
    assert (not c.is_cover or c.is_rigid) and (not c.is_rigid or c.is_epimorphism)
    assert not c.is_epimorphism or c.is_morphism
    if not c.is_morphism:
        assert "morphism" in c.witnesses
        with pytest.raises(NotAMorphism):
            StructureMorphism(S, T, h, pm)
