import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import catalogs
from structval import catalog, fileio
from structval.covers import build_special_cover, extend_to_cover, properness_criterion
from structval.embedding import (UNSOLVABLE, EmbeddingProblem, find_cover_section, is_solution,
                                 solve_embedding)
from structval.errors import NoSection, NotACover, NotIsomorphicLift, PreconditionViolated
from structval.extension import complete_to_cartesian, extend_epimorphism, factor_morphism
from structval.groups import GroupHom, Subgroup, iter_homs, normal_subgroups, quotient_group, subgroup_closure
from structval.partitions import special_partition
from structval.structures import (StructureMorphism, check_cartesian, classify_morphism, iter_morphisms,
                                  subgroup_as_group, validate_structure)
from pathlib import Path

FIX = Path(__file__).parent / "fixtures"
S3 = catalog.symmetric(3)
Z2 = catalog.cyclic(2)
SYL = catalog.s3_sylow2()
A3 = subgroup_closure(S3, [3])


def _covers(max_kernel=4):
    return [f for f, c in catalogs.morphisms(4) if c.is_cover and len(f.hom.kernel) <= max_kernel]


def _same(f, g):
    return np.array_equal(f.hom.map, g.hom.map) and np.array_equal(f.pointmap, g.pointmap)


def test_sign_map_on_sylow():
    _, q = quotient_group(S3, A3)
    ext = extend_epimorphism(SYL, q)
    f = ext.morphism
    assert f.target.npoints == 1 and f.target.group.order == 2
    assert classify_morphism(f).is_epimorphism


def test_distinct_orbits_keeps_orbits_apart():
    S = catalog.disjoint_union([catalog.one_point(S3), catalog.one_point(S3)])
    _, q = quotient_group(S3, S3.whole)
    assert extend_epimorphism(S, q, distinct_orbits=[0, 1]).morphism.target.npoints == 2
    with pytest.raises(PreconditionViolated):
        extend_epimorphism(S, q, distinct_orbits=[0, 0])


def test_separate_blocks_must_be_invariant():
    _, q = quotient_group(S3, A3)
    with pytest.raises(PreconditionViolated):
        extend_epimorphism(SYL, q, separate_blocks=[[0, 1], [2]])


def test_non_surjective_rejected():
    h = GroupHom(Z2, S3, [0, 1])
    with pytest.raises(PreconditionViolated):
        extend_epimorphism(catalog.one_point(Z2), h)


@pytest.mark.parametrize("S", catalogs.structures(4), ids=lambda S: f"{S.group.name}-{S.npoints}")
def test_extension_over_every_quotient(S):
    for N in normal_subgroups(S.group):
        _, q = quotient_group(S.group, N)
        f = extend_epimorphism(S, q).morphism
        c = classify_morphism(f)
        assert c.is_epimorphism, c.witnesses
        assert np.array_equal(f.hom.map, q.map)
        for x in S.points:
            assert q.image(S.delta[x]) <= f.target.delta[f(x)]
        pins = S.orbit_reps
        f = extend_epimorphism(S, q, pins=pins).morphism
        for x in pins:
            assert q.image(S.delta[x]) == f.target.delta[f(x)]
        f = extend_epimorphism(S, q, distinct_orbits=pins).morphism
        assert len({int(f.target.orbit_labels[f(x)]) for x in pins}) == len(pins)


@settings(max_examples=300)
@given(st.data())
def test_factorization_recovers_morphism(data):
    f, _ = data.draw(st.sampled_from(catalogs.morphisms(4)))
    fac = factor_morphism(f)
    assert classify_morphism(fac.hat).is_epimorphism
    assert _same(fac.bar.compose(fac.hat), f)


def test_complete_to_cartesian_on_catalog_covers():
    for psi in _covers():
        sq = complete_to_cartesian(psi)
        assert classify_morphism(sq.alpha).is_cover
        ok, _ = check_cartesian(sq.alpha, sq.phi, sq.beta, sq.psi)
        assert ok


def test_complete_to_cartesian_rejects_non_cover():
    f = next(f for f, c in catalogs.morphisms(4) if c.is_morphism and not c.is_cover)
    with pytest.raises(NotACover):
        complete_to_cartesian(f)


def _brute_solvable(ep):
    return any(_same(ep.alpha.compose(g), ep.phi)
               for g in iter_morphisms(ep.phi.source, ep.alpha.source))


@settings(max_examples=150)
@given(st.data())
def test_solvers_match_brute_force(data):
    covers = catalogs.by_target([(f, c) for f, c in catalogs.morphisms(4) if c.is_cover])
    key = data.draw(st.sampled_from(sorted(covers)))
    alpha, _ = data.draw(st.sampled_from(covers[key]))
    into = [f for f, c in catalogs.morphisms(4) if f.target is alpha.target]
    phi = data.draw(st.sampled_from(into))
    ep = EmbeddingProblem(phi, alpha)
    expected = _brute_solvable(ep)
    for route in ("direct", "factored"):
        sol = solve_embedding(ep, route)
        assert bool(sol) == expected
        if sol:
            assert is_solution(ep, sol)


def test_unsolvable_fixture():
    ep = fileio.read_embedding_problem(FIX / "z4_over_z2.txt")
    assert solve_embedding(ep) is UNSOLVABLE
    assert solve_embedding(ep, "factored") is UNSOLVABLE
    with pytest.raises(NoSection):
        find_cover_section(ep.alpha)


def test_solvable_fixture():
    ep = fileio.read_embedding_problem(FIX / "regular_z2.txt")
    sol = solve_embedding(ep)
    assert sol and is_solution(ep, sol)


def test_diagonal_section():
    S = catalog.one_point(S3)
    G = catalog.direct_product(S3, Z2)
    pi = GroupHom(G, S3, [g // 2 for g in range(12)])
    lc = extend_to_cover(S, pi, {0: subgroup_closure(G, [2, 4])})
    sec = find_cover_section(lc.cover)
    assert sec.structure.group.order == 6
    assert sec.structure.npoints == 1


def test_extend_to_cover_examples():
    S = catalog.one_point(Z2)
    V = catalog.direct_product(Z2, Z2)
    alpha = GroupHom(V, Z2, [0, 0, 1, 1])
    lc = extend_to_cover(S, alpha, {0: subgroup_closure(V, [3])})
    assert lc.structure.npoints == 2
    assert classify_morphism(lc.cover).is_cover
    with pytest.raises(NotIsomorphicLift):
        extend_to_cover(S, alpha, {0: subgroup_closure(V, [1])})


@settings(max_examples=200)
@given(st.data())
def test_extend_to_cover_always_covers(data):
    S = data.draw(st.sampled_from([S for S in catalogs.structures(4) if S.npoints]))
    H = data.draw(st.sampled_from(catalogs.small_groups()[1:8]))
    G = catalog.direct_product(S.group, H)
    pi = GroupHom(G, S.group, [g // H.order for g in range(G.order)])
    lifts = {}
    for r in S.orbit_reps:
        lifts[r] = subgroup_closure(G, [g * H.order for g in S.delta[r]])
    lc = extend_to_cover(S, pi, lifts)
    assert validate_structure(lc.structure).valid
    assert classify_morphism(lc.cover).is_cover
    for i, j in lc.section.items():
        assert lc.cover(j) == i


def _check_special(S, pi, lifts):
    P = special_partition(S)
    sc = build_special_cover(S, P, pi, lifts)
    assert classify_morphism(sc.cover).is_cover
    for b, Y in zip(P.blocks, sc.sections):
        assert [sc.cover(y) for y in Y] == list(b.points)
        for y in Y:
            Hy = sc.structure.delta[y]
            assert pi.is_injective_on(Hy) and pi.image(Hy) == S.delta[sc.cover(y)]
    nontrivial = all(len(b.subgroup) > 1 for b in P.blocks)
    if sc.criterion and nontrivial and validate_structure(S).proper:
        assert sc.proper
    return sc


def test_special_cover_fixtures():
    P = special_partition(SYL)
    ident = GroupHom(S3, S3, list(range(6)))
    sc = _check_special(SYL, ident, [b.subgroup for b in P.blocks])
    assert sc.structure.npoints == 3 and sc.criterion == sc.proper
    V = catalog.direct_product(Z2, Z2)
    sc = _check_special(catalog.one_point(Z2), GroupHom(V, Z2, [0, 0, 1, 1]), [subgroup_closure(V, [3])])
    assert sc.sections == [[0]] and not sc.criterion and sc.criterion == sc.proper
    assert sc.structure.npoints == 2
    G = catalog.direct_product(S3, Z2)
    pi = GroupHom(G, S3, [g // 2 for g in range(12)])
    sc = _check_special(SYL, pi, [subgroup_closure(G, [3])])
    assert sc.structure.npoints == 6 and sc.criterion == sc.proper


@settings(max_examples=200)
@given(st.data())
def test_special_cover_criterion_matches_properness(data):
    S = data.draw(st.sampled_from([S for S in catalogs.structures(4) if S.npoints]))
    H = data.draw(st.sampled_from(catalogs.small_groups()[1:6]))
    G = catalog.direct_product(S.group, H)
    pi = GroupHom(G, S.group, [g // H.order for g in range(G.order)])
    P = special_partition(S)
    lifts = []
    for b in P.blocks:
        K, inc = subgroup_as_group(b.subgroup)
        chi = data.draw(st.sampled_from(list(iter_homs(K, H))))
        graph = {inc(k) * H.order + chi(k) for k in range(K.order)}
        lifts.append(Subgroup(G, tuple(sorted(graph))))
    _check_special(S, pi, lifts)


def test_trivial_block_breaks_properness_transfer():
    # the criterion holds vacuously, but equal trivial subgroups on two points
    # make the lifted assignment non-injective
    S = catalog.one_point(catalog.trivial_group())
    G = catalog.direct_product(S.group, Z2)
    pi = GroupHom(G, S.group, [0, 0])
    sc = build_special_cover(S, special_partition(S), pi, [G.trivial])
    assert validate_structure(S).proper
    assert sc.criterion and not sc.proper
