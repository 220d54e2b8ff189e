"""Extending group epimorphisms to structure epimorphisms, factoring morphisms,
and completing covers to cartesian squares."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NotACover, PreconditionViolated
from .groups import GroupHom, Subgroup, coset_transversal, conjugate_subgroup, normal_subgroups, product_set, quotient_group
from .partitions import SpecialPartition, build_blocks
from .structures import (GroupStructure, StructureMorphism, classify_morphism, induced_morphism,
                         quotient_structure)


@dataclass
class Extension:
    morphism: StructureMorphism
    partition: SpecialPartition
    labels: list            # (block index, rho) for each target point


def _check_blocks(S: GroupStructure, N: Subgroup, blocks: Sequence[Iterable[int]]) -> list[frozenset]:
    bl = [frozenset(int(v) for v in b) for b in blocks]
    if any(not b for b in bl):
        raise PreconditionViolated("empty block in separate_blocks")
    flat = [x for b in bl for x in b]
    if sorted(flat) != list(S.points):
        raise PreconditionViolated("separate_blocks is not a partition of the points")
    blockset = set(bl)
    for b in bl:
        for g in S.group.generators:
            if S.translate(b, g) not in blockset:
                raise PreconditionViolated("G does not permute separate_blocks", witness={"g": g})
        for n in N:
            if S.translate(b, n) != b:
                raise PreconditionViolated("kernel element moves a block", witness={"g": n})
    return bl


def extend_epimorphism(S: GroupStructure, phi: GroupHom, pins: Iterable[int] = (),
                       separate_blocks: Sequence[Iterable[int]] | None = None,
                       distinct_orbits: Iterable[int] = ()) -> Extension:
    """Extend a surjective hom G -> A to a structure epimorphism onto a finite A-structure."""
    G = S.group
    if phi.source != G:
        raise PreconditionViolated("phi does not start at the structure's group")
    if not phi.is_surjective():
        raise PreconditionViolated("phi is not surjective")
    N = phi.kernel
    labels = S.orbit_labels
    distinct = [int(x) for x in distinct_orbits]
    if len({int(labels[x]) for x in distinct}) != len(distinct):
        raise PreconditionViolated("distinct_orbits points share an orbit", witness={"points": distinct})
    forced = list(distinct)
    used = {int(labels[x]) for x in distinct}
    for x in pins:
        if int(labels[x]) not in used:
            used.add(int(labels[x]))
            forced.append(int(x))
    block_of = None
    if separate_blocks is not None:
        bl = _check_blocks(S, N, separate_blocks)
        block_of = {x: b for b in bl for x in b}

    Gp, V = {}, {}
    for y in S.points:
        SyN = Subgroup(G, tuple(sorted(product_set(S.stabilizers[y], N, G))))
        GyN = product_set(S.delta[y], N, G)
        Gp[y] = SyN
        Vy = {x for x in S.points
              if S.stabilizers[x].memberset <= SyN.memberset and S.delta[x].memberset <= GyN}
        if block_of is not None:
            Vy &= block_of[y]
        V[y] = frozenset(Vy)
    P = build_blocks(S, Gp, V, forced)

    A = phi.target
    # target points: the translates X_i^rho
    point_labels = [(i, r) for i, b in enumerate(P.blocks) for r in b.reps]
    pos = {lab: k for k, lab in enumerate(point_labels)}
    coset_of = []
    for b in P.blocks:
        which = np.empty(G.order, dtype=np.int64)
        mem = np.asarray(b.subgroup.members, dtype=np.int64)
        for r in b.reps:
            which[G.table[mem, r]] = r
        coset_of.append(which)
    lift = np.empty(A.order, dtype=np.int64)
    for g in range(G.order - 1, -1, -1):
        lift[phi.map[g]] = g
    action = []
    delta = []
    for i, r in point_labels:
        row = [pos[(i, int(coset_of[i][G.table[r, lift[a]]]))] for a in range(A.order)]
        action.append(row)
        delta.append(conjugate_subgroup(phi.image(S.delta[P.blocks[i].base]), phi(r)))
    T = GroupStructure(A, action, delta)
    pointmap = np.empty(S.npoints, dtype=np.int64)
    for i, b in enumerate(P.blocks):
        for x in b.points:
            for g in range(G.order):
                pointmap[S.act(x, g)] = pos[(i, int(coset_of[i][g]))]
    f = StructureMorphism(S, T, phi, pointmap)
    return Extension(f, P, point_labels)


@dataclass
class Factorization:
    hat: StructureMorphism      # epimorphism G -> Â
    bar: StructureMorphism      # Â -> A


def factor_morphism(phi: StructureMorphism) -> Factorization:
    """phi = bar o hat with hat an epimorphism onto a finite structure."""
    S = phi.source
    N = phi.hom.kernel
    Ahat, q = quotient_group(S.group, N)
    fibers = {}
    for x in S.points:
        fibers.setdefault(phi(x), []).append(x)
    ext = extend_epimorphism(S, q, separate_blocks=list(fibers.values()))
    hat = ext.morphism
    bar = induced_morphism(hat, phi)
    return Factorization(hat, bar)


@dataclass
class CartesianSquare:
    alpha: StructureMorphism    # B -> A, a cover
    phi: StructureMorphism      # G -> A
    beta: StructureMorphism     # H -> B
    psi: StructureMorphism      # H -> G
    N: Subgroup


def complete_to_cartesian(psi: StructureMorphism) -> CartesianSquare:
    cls = classify_morphism(psi)
    if not cls.is_cover:
        raise NotACover("psi is not a cover", witness=cls.witnesses)
    Hs = psi.source
    H = Hs.group
    K = psi.hom.kernel
    union = set()
    for d in Hs.delta:
        union |= d.memberset
    bad = K.memberset - {0}
    chosen = None
    for N in sorted(normal_subgroups(H), key=lambda M: (-len(M), M.members)):
        if not (product_set(union, N, H) & bad):
            chosen = N
            break
    B, bq = quotient_group(H, chosen)
    beta = extend_epimorphism(Hs, bq).morphism
    Bs = beta.target
    alpha_q = quotient_structure(Bs, bq.image(K))[1]
    phi = induced_morphism(psi, alpha_q.compose(beta))
    return CartesianSquare(alpha_q, phi, beta, psi, chosen)
