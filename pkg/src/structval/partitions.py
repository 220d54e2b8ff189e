"""Separation in subgroup families and special partitions of group structures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidPartition, NotNormal, PreconditionViolated
from .groups import (FiniteGroup, Subgroup, all_subgroups, coset_transversal, intersection, is_normal,
                     product_set)
from .structures import GroupStructure


def strict_basis_set(G: FiniteGroup, H: Subgroup, N: Subgroup) -> list[Subgroup]:
    """All subgroups A with AN = HN."""
    if not is_normal(N):
        raise NotNormal("N is not normal", witness=N)
    target = product_set(H, N, G)
    return [A for A in all_subgroups(G) if product_set(A, N, G) == target]


@dataclass
class SeparationVerdict:
    hausdorff: bool
    separating: list = field(default_factory=list)   # (H, K, U, V) with disjoint basic opens
    witness: tuple | None = None                      # (H, K, F): F lies in every open around both


def etale_separation(G: FiniteGroup, family: Sequence[Subgroup]) -> SeparationVerdict:
    """Decide whether ``family`` is Hausdorff for the topology generated by Subgr(U) ∩ family.

    The smallest open set around H is {F in family : F <= H}, so H and K
    separate exactly when no member lies in H ∩ K.
    """
    fam = list(family)
    if len(set(fam)) != len(fam):
        raise ValueError("family has duplicates")
    verdict = SeparationVerdict(True)
    for a in range(len(fam)):
        for b in range(a + 1, len(fam)):
            H, K = fam[a], fam[b]
            meet = intersection(H, K)
            common = [F for F in fam if F <= meet]
            if common:
                return SeparationVerdict(False, verdict.separating, (H, K, common[0]))
            verdict.separating.append((H, K, H, K))
    return verdict


@dataclass(frozen=True)
class Block:
    subgroup: Subgroup      # G_i
    points: tuple           # X_i
    reps: tuple             # R_i
    base: int | None = None  # y_i


@dataclass
class SpecialPartition:
    blocks: list

    def translates(self, S: GroupStructure):
        """(block index, rho, X_i^rho) for every block and coset representative."""
        for i, b in enumerate(self.blocks):
            for r in b.reps:
                yield i, r, S.translate(b.points, r)


def _meets_only_inside(S: GroupStructure, U: frozenset, H: Subgroup) -> bool:
    """{g : U^g ∩ U nonempty} ⊆ H, i.e. the coset translates of U are disjoint."""
    for g in range(S.group.order):
        if g in H:
            continue
        if any(S.act(u, g) in U for u in U):
            return False
    return True


def _shrink(S: GroupStructure, y: int, H: Subgroup, V: frozenset) -> frozenset:
    """Largest greedy H-invariant U with y^H ⊆ U ⊆ V whose coset translates are disjoint."""
    U = frozenset(S.act(y, h) for h in H)
    seen = set(U)
    for z in sorted(V):
        if z in seen:
            continue
        orb = frozenset(S.act(z, h) for h in H)
        seen |= orb
        if not orb <= V:
            continue
        cand = U | orb
        if _meets_only_inside(S, cand, H):
            U = cand
    return U


def build_blocks(S: GroupStructure, Gp: Mapping[int, Subgroup], V: Mapping[int, frozenset],
                 forced: Sequence[int]) -> SpecialPartition:
    """Blocks (G'_{y_i}, X_i, R_i) following the finite version of the construction.

    ``Gp`` and ``V`` give the local data for every point; ``forced`` points
    (already in distinct orbits) become base points.  Only S_y <= G'_y and
    y^{G'_y} ⊆ V_y are assumed here.
    """
    labels = S.orbit_labels
    rep_of = {}
    for y in forced:
        rep_of[int(labels[y])] = y
    for r in S.orbit_reps:
        rep_of.setdefault(r, r)
    reps = [rep_of[r] for r in S.orbit_reps]
    U = {y: _shrink(S, y, Gp[y], frozenset(V[y])) for y in reps}
    Ug = {y: frozenset(S.act(u, g) for u in U[y] for g in range(S.group.order)) for y in reps}

    # Part A: a finite family of base points whose G-saturations cover X
    chosen = list(dict.fromkeys(forced))
    covered = set()
    for y in chosen:
        covered |= Ug[y]
    for y in reps:
        if y not in chosen and y not in covered:
            chosen.append(y)
            covered |= Ug[y]
    chosen.sort()
    W = {y: frozenset(S.orbit(y)) for y in chosen}

    # Part B: remove the other orbits
    Vi = {}
    for y in chosen:
        other = frozenset().union(*[W[z] for z in chosen if z != y])
        Vi[y] = U[y] - other
    # Part C: separate
    blocks = []
    earlier = set()
    for y in chosen:
        Xi = Vi[y] - earlier
        earlier |= {S.act(v, g) for v in Vi[y] for g in range(S.group.order)}
        H = Gp[y]
        blocks.append(Block(H, tuple(sorted(Xi)), tuple(coset_transversal(S.group, H, "right")), y))
    blocks.sort(key=lambda b: b.points[0])
    return SpecialPartition(blocks)


def special_partition(S: GroupStructure, local: Mapping[int, tuple] | None = None,
                      pins: Iterable[int] = ()) -> SpecialPartition:
    """Special partition with base points containing ``pins``.

    ``local`` maps a point y to (G'_y, V_y); missing points default to
    (G_y, y^{G_y}).
    """
    local = dict(local or {})
    pins = [int(p) for p in pins]
    for p in pins:
        if not 0 <= p < S.npoints:
            raise PreconditionViolated(f"pin {p} is not a point", witness={"pin": p})
    seen = {}
    for p in pins:
        lab = int(S.orbit_labels[p])
        if lab in seen and seen[lab] != p:
            raise PreconditionViolated("pins share an orbit", witness={"pins": [seen[lab], p]})
        seen[lab] = p
    Gp, V = {}, {}
    for y in S.points:
        H, Vy = local.get(y, (S.delta[y], None))
        if not S.delta[y] <= H:
            raise PreconditionViolated(f"G'_{y} does not contain G_{y}", witness={"y": y})
        orbit = frozenset(S.act(y, h) for h in H)
        Vy = orbit if Vy is None else frozenset(int(v) for v in Vy)
        if not orbit <= Vy:
            raise PreconditionViolated(f"V_{y} misses part of y^G'_y", witness={"y": y})
        # keep only points whose subgroup fits inside G'_y
        Gp[y] = H
        V[y] = frozenset(x for x in Vy if S.delta[x] <= H)
    return build_blocks(S, Gp, V, list(dict.fromkeys(pins)))


@dataclass
class PartitionReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def clauses(self) -> set:
        return {v[0] for v in self.violations}


def validate_special_partition(S: GroupStructure, P: SpecialPartition) -> PartitionReport:
    rep = PartitionReport()
    G = S.group
    if S.npoints and not P.blocks:
        rep.violations.append(("2a", {"reason": "no blocks"}))
    for i, b in enumerate(P.blocks):
        pts = frozenset(b.points)
        if not pts:
            rep.violations.append(("2b", {"block": i}))
            continue
        if not pts <= set(S.points):
            rep.violations.append(("2b", {"block": i, "reason": "point out of range"}))
            continue
        for x in b.points:
            if not S.delta[x] <= b.subgroup:
                rep.violations.append(("2c", {"block": i, "x": x}))
                break
        stab = S.stabilizer_of_set(pts)
        if stab != b.subgroup:
            diff = sorted(stab.memberset ^ b.subgroup.memberset)
            rep.violations.append(("2d", {"block": i, "g": diff[0]}))
        covered = set()
        for r in b.reps:
            covered |= {int(G.table[h, r]) for h in b.subgroup}
        if len(covered) != G.order:
            rep.violations.append(("2e", {"block": i, "g": min(set(range(G.order)) - covered)}))
    if rep.violations:
        return rep
    covered = set()
    for _, _, T in P.translates(S):
        covered |= T
    if covered != set(S.points):
        rep.violations.append(("2f", {"x": min(set(S.points) - covered)}))
    for i, bi in enumerate(P.blocks):
        for sigma in range(G.order):
            moved = S.translate(bi.points, sigma)
            for j, bj in enumerate(P.blocks):
                if moved & set(bj.points) and (i != j or sigma not in bi.subgroup):
                    rep.violations.append(("2g", {"i": i, "j": j, "sigma": sigma}))
                    return rep
    return rep


def require_valid(S: GroupStructure, P: SpecialPartition) -> None:
    r = validate_special_partition(S, P)
    if not r.ok:
        raise InvalidPartition(f"special partition fails clause {r.violations[0][0]}", witness=r)
