"""Constructions of covers: lifting a finite structure along a group epimorphism,
and the special cover attached to a special partition."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import LiftNotIso, NotIsomorphicLift, PreconditionViolated
from .groups import GroupHom, Subgroup, conjugate_subgroup, coset_transversal, intersection
from .partitions import SpecialPartition, require_valid
from .structures import GroupStructure, StructureMorphism, validate_structure


@dataclass
class LiftedCover:
    structure: GroupStructure
    cover: StructureMorphism
    section: dict           # i -> point of the new structure over i
    labels: list            # (i, coset representative) per point


def extend_to_cover(A: GroupStructure, alpha: GroupHom, lifts: Mapping[int, Subgroup]) -> LiftedCover:
    """Points (i, T_i b) with T_i = alpha^-1(S_i) ∩ B_i, B acting by right multiplication."""
    B = alpha.source
    if alpha.target != A.group:
        raise PreconditionViolated("alpha does not land in the structure's group")
    if not alpha.is_surjective():
        raise PreconditionViolated("alpha is not surjective")
    keys = sorted(int(i) for i in lifts)
    if sorted(int(A.orbit_labels[i]) for i in keys) != A.orbit_reps:
        raise PreconditionViolated("lift points are not a transversal of the orbits", witness=keys)
    for i in keys:
        Bi = lifts[i]
        if not alpha.is_injective_on(Bi) or alpha.image(Bi) != A.delta[i]:
            raise NotIsomorphicLift(f"B_{i} does not map isomorphically onto A_{i}", witness={"i": i})
    labels, delta, which = [], [], {}
    for i in keys:
        Bi = lifts[i]
        Ti = intersection(alpha.preimage(A.stabilizers[i]), Bi)
        mem = np.asarray(Ti.members, dtype=np.int64)
        for r in coset_transversal(B, Ti, "right"):
            for t in B.table[mem, r]:
                which[(i, int(t))] = len(labels)
            labels.append((i, r))
            delta.append(conjugate_subgroup(Bi, r))
    action = [[which[(i, int(B.table[r, b]))] for b in range(B.order)] for i, r in labels]
    J = GroupStructure(B, action, delta)
    pointmap = [A.act(i, alpha(r)) for i, r in labels]
    cover = StructureMorphism(J, A, alpha, pointmap)
    section = {i: which[(i, 0)] for i in keys}
    return LiftedCover(J, cover, section, labels)


@dataclass
class SpecialCover:
    structure: GroupStructure
    cover: StructureMorphism
    sections: list          # Y_i as lists of points, one per block
    criterion: bool         # H_i^k ∩ H_i = 1 for every nontrivial kernel element k
    proper: bool            # properness of the constructed structure


def properness_criterion(pi: GroupHom, lifts: Sequence[Subgroup]) -> bool:
    kernel = [k for k in pi.kernel if k != 0]
    return all(intersection(conjugate_subgroup(Hi, k), Hi).is_trivial() for Hi in lifts for k in kernel)


def build_special_cover(S: GroupStructure, P: SpecialPartition, pi: GroupHom,
                        lifts: Sequence[Subgroup]) -> SpecialCover:
    require_valid(S, P)
    G = S.group
    H = pi.source
    if pi.target != G or not pi.is_surjective():
        raise PreconditionViolated("pi must be a surjection onto the structure's group")
    if len(lifts) != len(P.blocks):
        raise LiftNotIso("one lift per block is required")
    for i, (b, Hi) in enumerate(zip(P.blocks, lifts)):
        if not pi.is_injective_on(Hi) or pi.image(Hi) != b.subgroup:
            raise LiftNotIso(f"H_{i} does not map isomorphically onto G_{i}", witness={"block": i})
    block_of = {x: i for i, b in enumerate(P.blocks) for x in b.points}
    coset_id = []
    for Hi in lifts:
        cid = np.empty(H.order, dtype=np.int64)
        mem = np.asarray(Hi.members, dtype=np.int64)
        for r in coset_transversal(H, Hi, "right"):
            cid[H.table[mem, r]] = r
        coset_id.append(cid)

    # (x1,h1) ~ (x2,h2) iff they share the key (block, H_i h, x^pi(h))
    def key(x, h):
        i = block_of[x]
        return (i, int(coset_id[i][h]), S.act(x, pi(h)))

    klass = {}
    reps = []
    for x in sorted(block_of):
        for h in range(H.order):
            k = key(x, h)
            if k not in klass:
                klass[k] = len(reps)
                reps.append((x, h))
    local = {}
    for x, i in block_of.items():
        local[x] = intersection(lifts[i], pi.preimage(S.delta[x]))
    action = [[klass[key(x, int(H.table[h, eta]))] for eta in range(H.order)] for x, h in reps]
    delta = [conjugate_subgroup(local[x], h) for x, h in reps]
    Y = GroupStructure(H, action, delta)
    cover = StructureMorphism(Y, S, pi, [S.act(x, pi(h)) for x, h in reps])
    sections = [[klass[key(x, 0)] for x in b.points] for b in P.blocks]
    crit = properness_criterion(pi, lifts)
    return SpecialCover(Y, cover, sections, crit, validate_structure(Y).proper)
