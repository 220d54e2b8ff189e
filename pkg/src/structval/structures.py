"""Group structures: a finite group acting on the right on points 0..m-1,
with a subgroup attached to each point.

Conventions: ``action[x, g]`` is ``x^g``; ``delta[x]`` is the subgroup G_x;
``S_x`` is the stabilizer of x.  Conjugation is ``H^g = g^-1 H g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (InvalidStructure, NotAMorphism, NotClosed, NotCommuting, ShapeMismatch,
                     SubgroupTooSmall, TargetMismatch)
from .groups import (FiniteGroup, GroupHom, Subgroup, conjugate_subgroup, identity_hom, intersection,
                     iter_homs, quotient_group)

AUTOMATIC = ("continuity of the subgroup assignment", "openness of point sets")


@dataclass
class Violation:
    kind: str
    witness: dict

    def as_dict(self):
        return {"kind": self.kind, **self.witness}


@dataclass
class StructureReport:
    violations: list = field(default_factory=list)
    delta_injective: bool = False
    stabilizers_equal: bool = False
    automatic: tuple = AUTOMATIC

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def proper(self) -> bool:
        return self.valid and self.delta_injective and self.stabilizers_equal

    def as_dict(self):
        return {"valid": self.valid, "proper": self.proper,
                "delta_injective": self.delta_injective,
                "stabilizers_equal": self.stabilizers_equal,
                "violations": [v.as_dict() for v in self.violations],
                "automatic": list(self.automatic)}


class GroupStructure:
    def __init__(self, group: FiniteGroup, action, delta: Sequence, check: bool = True):
        self.group = group
        act = np.array(action, dtype=np.int64).reshape(-1, group.order) if len(action) else \
            np.zeros((0, group.order), dtype=np.int64)
        act.setflags(write=False)
        self.action = act
        self.delta = tuple(d if isinstance(d, Subgroup) else Subgroup(group, tuple(sorted(int(v) for v in d)))
                           for d in delta)
        if check:
            report = validate_structure(self)
            if not report.valid:
                raise InvalidStructure(f"not a group structure: {report.violations[0].kind}",
                                       witness=report)

    @property
    def npoints(self) -> int:
        return self.action.shape[0]

    @property
    def points(self) -> range:
        return range(self.npoints)

    def act(self, x: int, g: int) -> int:
        return int(self.action[x, g])

    def orbit(self, x: int) -> list[int]:
        return sorted({int(v) for v in self.action[x]})

    @cached_property
    def orbit_labels(self) -> np.ndarray:
        return np.asarray(kernels.orbit_labels(self.action), dtype=np.int64)

    @cached_property
    def orbit_reps(self) -> list[int]:
        return sorted({int(v) for v in self.orbit_labels})

    @cached_property
    def stabilizers(self) -> tuple:
        return tuple(Subgroup(self.group, tuple(int(g) for g in np.flatnonzero(self.action[x] == x)))
                     for x in self.points)

    @cached_property
    def transporter(self) -> np.ndarray:
        """transporter[x] = smallest g with rep(x)^g = x."""
        tr = np.empty(self.npoints, dtype=np.int64)
        for r in self.orbit_reps:
            row = self.action[r]
            for g in range(self.group.order - 1, -1, -1):
                tr[row[g]] = g
        return tr

    def stabilizer_of_set(self, pts) -> Subgroup:
        pts = frozenset(pts)
        idx = np.asarray(sorted(pts), dtype=np.int64)
        keep = [g for g in range(self.group.order) if frozenset(int(v) for v in self.action[idx, g]) == pts]
        return Subgroup(self.group, tuple(keep))

    def translate(self, pts, g: int) -> frozenset:
        return frozenset(int(self.action[x, g]) for x in pts)

    def __eq__(self, other):
        if not isinstance(other, GroupStructure):
            return NotImplemented
        return (self.group == other.group and np.array_equal(self.action, other.action)
                and self.delta == other.delta)

    def __hash__(self):
        return hash((self.group, self.action.tobytes(), self.delta))

    def __repr__(self):
        return f"GroupStructure({self.group.name}, points={self.npoints})"


def validate_structure(S: GroupStructure) -> StructureReport:
    G = S.group
    n, m = G.order, S.npoints
    if S.action.shape != (m, n) or len(S.delta) != m:
        raise ShapeMismatch(f"action shape {S.action.shape} / delta length {len(S.delta)} "
                            f"do not match {m} points and order {n}")
    report = StructureReport()
    if m and (S.action.min() < 0 or S.action.max() >= m):
        bad = np.argwhere((S.action < 0) | (S.action >= m))[0]
        report.violations.append(Violation("action-range", {"x": int(bad[0]), "g": int(bad[1])}))
        return report
    for x, d in enumerate(S.delta):
        if d.parent != G or not d.members or d.members[0] != 0 or \
                not all(int(G.table[a, b]) in d for a in d for b in d):
            report.violations.append(Violation("delta-not-subgroup", {"x": x}))
    if report.violations:
        return report
    ident = np.flatnonzero(S.action[:, 0] != np.arange(m)) if m else []
    for x in ident:
        report.violations.append(Violation("identity-action", {"x": int(x), "g": 0}))
    w = kernels.right_action_witness(S.action, G.table)
    if w[0] >= 0:
        report.violations.append(Violation("right-action", {"x": w[0], "g": w[1], "h": w[2]}))
    if report.violations:
        return report
    for x in S.points:
        for g in G.generators:
            y = S.act(x, g)
            if S.delta[y] != conjugate_subgroup(S.delta[x], g):
                report.violations.append(Violation("equivariance", {"x": x, "g": g}))
                break
    for x in S.points:
        extra = [g for g in S.stabilizers[x] if g not in S.delta[x]]
        if extra:
            report.violations.append(Violation("stabilizer", {"x": x, "g": extra[0]}))
    report.delta_injective = len(set(S.delta)) == m
    report.stabilizers_equal = all(S.stabilizers[x] == S.delta[x] for x in S.points)
    return report


def is_proper(S: GroupStructure) -> bool:
    return validate_structure(S).proper


class StructureMorphism:
    """A group hom together with a point map."""

    def __init__(self, source: GroupStructure, target: GroupStructure, hom: GroupHom, pointmap,
                 check: bool = True):
        self.source = source
        self.target = target
        self.hom = hom
        pm = np.array(pointmap, dtype=np.int64).reshape(-1)
        pm.setflags(write=False)
        self.pointmap = pm
        if check:
            w = morphism_witness(self)
            if w is not None:
                raise NotAMorphism(f"not a morphism: {w.kind}", witness=w)

    def __call__(self, x: int) -> int:
        return int(self.pointmap[x])

    def compose(self, first: "StructureMorphism") -> "StructureMorphism":
        """self after first."""
        return StructureMorphism(first.source, self.target, self.hom.compose(first.hom),
                                 self.pointmap[first.pointmap] if first.source.npoints else [],
                                 check=False)

    def __eq__(self, other):
        if not isinstance(other, StructureMorphism):
            return NotImplemented
        return (self.hom == other.hom and np.array_equal(self.pointmap, other.pointmap)
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash((self.hom, self.pointmap.tobytes()))

    def __repr__(self):
        return f"StructureMorphism(hom={self.hom.map.tolist()}, points={self.pointmap.tolist()})"


def identity_morphism(S: GroupStructure) -> StructureMorphism:
    return StructureMorphism(S, S, identity_hom(S.group), np.arange(S.npoints), check=False)


def morphism_witness(f: StructureMorphism) -> Violation | None:
    S, T, h = f.source, f.target, f.hom
    if h.source != S.group or h.target != T.group:
        return Violation("group-mismatch", {})
    if f.pointmap.shape != (S.npoints,):
        return Violation("pointmap-shape", {})
    if S.npoints and (f.pointmap.min() < 0 or f.pointmap.max() >= T.npoints):
        return Violation("pointmap-range", {})
    from .kernels import hom_witness
    a, b = hom_witness(h.map, S.group.table, T.group.table)
    if a >= 0:
        return Violation("hom", {"a": a, "b": b})
    if S.npoints:
        lhs = f.pointmap[S.action]                         # phi(x^g)
        rhs = T.action[f.pointmap[:, None], h.map[None, :]]  # phi(x)^phi(g)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return Violation("equivariance", {"x": int(bad[0, 0]), "g": int(bad[0, 1])})
    for x in S.points:
        img = h.image(S.delta[x])
        if not img <= T.delta[f(x)]:
            return Violation("subgroup-compatibility", {"x": x})
    return None


@dataclass
class MorphismClass:
    is_morphism: bool = False
    is_epimorphism: bool = False
    is_rigid: bool = False
    is_cover: bool = False
    witnesses: dict = field(default_factory=dict)

    def as_dict(self):
        return {"is_morphism": self.is_morphism, "is_epimorphism": self.is_epimorphism,
                "is_rigid": self.is_rigid, "is_cover": self.is_cover,
                "witnesses": {k: v for k, v in self.witnesses.items()}}


def classify_morphism(f: StructureMorphism) -> MorphismClass:
    out = MorphismClass()
    w = morphism_witness(f)
    if w is not None:
        out.witnesses["morphism"] = w.as_dict()
        return out
    out.is_morphism = True
    S, T, h = f.source, f.target, f.hom
    epi = True
    if not h.is_surjective():
        missing = sorted(set(range(T.group.order)) - {int(v) for v in h.map})
        out.witnesses["group-surjective"] = {"a": missing[0]}
        epi = False
    images = {}
    for x in S.points:
        images.setdefault(f(x), []).append(x)
    for y in T.points:
        pre = images.get(y)
        if not pre:
            out.witnesses.setdefault("point-surjective", {"y": y})
            epi = False
        elif not any(h.image(S.delta[x]) == T.delta[y] for x in pre):
            out.witnesses.setdefault("subgroup-onto", {"y": y})
            epi = False
    out.is_epimorphism = epi
    rigid = True
    for x in S.points:
        if not h.is_injective_on(S.delta[x]) or h.image(S.delta[x]) != T.delta[f(x)]:
            out.witnesses.setdefault("subgroup-iso", {"x": x})
            rigid = False
            break
    out.is_rigid = epi and rigid
    fiber_ok = True
    ker = h.kernel.members
    for x in S.points:
        korbit = {S.act(x, k) for k in ker}
        if korbit != set(images[f(x)]):
            other = min(set(images[f(x)]) - korbit)
            out.witnesses.setdefault("fiber", {"x": x, "x2": other})
            fiber_ok = False
            break
    out.is_cover = out.is_rigid and fiber_ok
    return out


def check_morphism(f: StructureMorphism) -> None:
    w = morphism_witness(f)
    if w is not None:
        raise NotAMorphism(f"not a morphism: {w.kind}", witness=w)


def is_isomorphism(f: StructureMorphism) -> bool:
    S, T = f.source, f.target
    if morphism_witness(f) is not None:
        return False
    if not (f.hom.is_injective() and f.hom.is_surjective()):
        return False
    if S.npoints != T.npoints or len(set(f.pointmap.tolist())) != S.npoints:
        return False
    return all(f.hom.image(S.delta[x]) == T.delta[f(x)] for x in S.points)


def quotient_structure(S: GroupStructure, N: Subgroup) -> tuple[GroupStructure, StructureMorphism]:
    """(G/N, X/N) with N-orbits labelled by their smallest point."""
    Q, pi = quotient_group(S.group, N)
    m = S.npoints
    label = np.empty(m, dtype=np.int64)
    reps = []
    if m:
        nm = np.asarray(N.members, dtype=np.int64)
        orbit_min = S.action[:, nm].min(axis=1)
        reps = sorted({int(v) for v in orbit_min})
        pos = {r: i for i, r in enumerate(reps)}
        label = np.array([pos[int(v)] for v in orbit_min], dtype=np.int64)
    # a coset representative for each element of Q
    qrep = np.empty(Q.order, dtype=np.int64)
    for g in range(S.group.order - 1, -1, -1):
        qrep[pi.map[g]] = g
    action = [[int(label[S.act(r, int(qrep[q]))]) for q in range(Q.order)] for r in reps]
    delta = [pi.image(S.delta[r]) for r in reps]
    Sq = GroupStructure(Q, action, delta)
    return Sq, StructureMorphism(S, Sq, pi, label, check=False)


def subgroup_as_group(H: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """H as a group on 0..|H|-1 (index i is H.members[i]) and its inclusion."""
    G = H.parent
    mem = np.asarray(H.members, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[mem] = np.arange(len(mem))
    table = pos[G.table[np.ix_(mem, mem)]]
    K = FiniteGroup(table, name=f"{G.name}[{len(mem)}]", check=False)
    return K, GroupHom(K, G, mem, check=False)


def sub_structure(S: GroupStructure, H: Subgroup, Y) -> tuple[GroupStructure, StructureMorphism]:
    """(H, Y, G_y) with Y relabelled in increasing order; also the inclusion."""
    Y = sorted({int(y) for y in Y})
    ys = set(Y)
    for y in Y:
        for h in H:
            if S.act(y, h) not in ys:
                raise NotClosed(f"point {y} moved outside Y by {h}", witness={"y": y, "h": h})
    for y in Y:
        if not S.delta[y] <= H:
            raise SubgroupTooSmall(f"G_{y} is not contained in H", witness={"y": y})
    K, inc = subgroup_as_group(H)
    pos = {y: i for i, y in enumerate(Y)}
    hpos = {g: i for i, g in enumerate(H.members)}
    action = [[pos[S.act(y, g)] for g in H.members] for y in Y]
    delta = [Subgroup(K, tuple(sorted(hpos[g] for g in S.delta[y]))) for y in Y]
    T = GroupStructure(K, action, delta)
    return T, StructureMorphism(T, S, inc, Y, check=False)


@dataclass
class FiberProduct:
    structure: GroupStructure
    beta: StructureMorphism
    psi: StructureMorphism
    elements: list          # (b, g) pairs
    points: list            # (j, x) pairs


def fiber_product(alpha: StructureMorphism, phi: StructureMorphism) -> FiberProduct:
    """B x_A G with lexicographically ordered elements and points."""
    if alpha.target != phi.target:
        raise TargetMismatch("alpha and phi have different targets")
    B, G = alpha.source, phi.source
    am, pm = alpha.hom.map, phi.hom.map
    elements = [(b, g) for b in range(B.group.order) for g in range(G.group.order) if am[b] == pm[g]]
    eidx = {e: i for i, e in enumerate(elements)}
    table = [[eidx[(int(B.group.table[b1, b2]), int(G.group.table[g1, g2]))] for (b2, g2) in elements]
             for (b1, g1) in elements]
    H = FiniteGroup(table, name=f"{B.group.name}x_A{G.group.name}", check=False)
    points = [(j, x) for j in B.points for x in G.points if alpha(j) == phi(x)]
    pidx = {p: i for i, p in enumerate(points)}
    action = [[pidx[(B.act(j, b), G.act(x, g))] for (b, g) in elements] for (j, x) in points]
    delta = []
    for j, x in points:
        bj, gx = B.delta[j], G.delta[x]
        delta.append(Subgroup(H, tuple(sorted(eidx[(b, g)] for b in bj for g in gx if am[b] == pm[g]))))
    Y = GroupStructure(H, action, delta)
    beta = StructureMorphism(Y, B, GroupHom(H, B.group, [b for b, _ in elements], check=False),
                             [j for j, _ in points])
    psi = StructureMorphism(Y, G, GroupHom(H, G.group, [g for _, g in elements], check=False),
                            [x for _, x in points])
    return FiberProduct(Y, beta, psi, elements, points)


def check_cartesian(alpha: StructureMorphism, phi: StructureMorphism, beta: StructureMorphism,
                    psi: StructureMorphism) -> tuple[bool, StructureMorphism]:
    """Is H (the common source of beta, psi) the fiber product?  Returns the mediator too."""
    H = beta.source
    if psi.source != H or beta.target != alpha.source or psi.target != phi.source or alpha.target != phi.target:
        raise NotCommuting("square does not fit together")
    if not np.array_equal(alpha.hom.map[beta.hom.map], phi.hom.map[psi.hom.map]):
        raise NotCommuting("group square does not commute")
    if H.npoints and not np.array_equal(alpha.pointmap[beta.pointmap], phi.pointmap[psi.pointmap]):
        raise NotCommuting("point square does not commute")
    fp = fiber_product(alpha, phi)
    eidx = {e: i for i, e in enumerate(fp.elements)}
    pidx = {p: i for i, p in enumerate(fp.points)}
    emap = [eidx[(beta.hom(h), psi.hom(h))] for h in range(H.group.order)]
    pmap = [pidx[(beta(y), psi(y))] for y in H.points]
    eps = StructureMorphism(H, fp.structure, GroupHom(H.group, fp.structure.group, emap, check=False), pmap)
    return is_isomorphism(eps), eps


def induced_morphism(p: StructureMorphism, q: StructureMorphism) -> StructureMorphism:
    """The morphism r with r o p = q, for p surjective on groups and points."""
    if p.source != q.source:
        raise NotAMorphism("p and q must share a source")
    T, U = p.target, q.target
    hmap = np.full(T.group.order, -1, dtype=np.int64)
    for g in range(p.source.group.order):
        t = p.hom(g)
        if hmap[t] < 0:
            hmap[t] = q.hom(g)
        elif hmap[t] != q.hom(g):
            raise NotAMorphism("kernel of p not inside kernel of q", witness={"g": g})
    pmap = np.full(T.npoints, -1, dtype=np.int64)
    for x in p.source.points:
        t = p(x)
        if pmap[t] < 0:
            pmap[t] = q(x)
        elif pmap[t] != q(x):
            raise NotAMorphism("point fibers of p not inside fibers of q", witness={"x": x})
    if (hmap < 0).any() or (pmap < 0).any():
        raise NotAMorphism("p is not surjective")
    return StructureMorphism(T, U, GroupHom(T.group, U.group, hmap), pmap)


def point_map_candidates(S: GroupStructure, T: GroupStructure, h: GroupHom, x: int) -> list[int]:
    """Targets y allowed for the orbit representative x under group hom h."""
    sx = h.image(S.stabilizers[x])
    gx = h.image(S.delta[x])
    return [y for y in T.points if sx <= T.stabilizers[y] and gx <= T.delta[y]]


def extend_point_map(S: GroupStructure, T: GroupStructure, h: GroupHom, rep_images: dict) -> np.ndarray:
    pm = np.empty(S.npoints, dtype=np.int64)
    for x in S.points:
        r = int(S.orbit_labels[x])
        pm[x] = T.act(rep_images[r], h(int(S.transporter[x])))
    return pm


def iter_morphisms(S: GroupStructure, T: GroupStructure, hom: GroupHom | None = None,
                   surjective: bool = False) -> Iterator[StructureMorphism]:
    """All morphisms S -> T (optionally with fixed group hom), lexicographically."""
    from itertools import product
    homs = [hom] if hom is not None else iter_homs(S.group, T.group, surjective=surjective)
    for h in homs:
        reps = S.orbit_reps
        cands = [point_map_candidates(S, T, h, r) for r in reps]
        for choice in product(*cands):
            pm = extend_point_map(S, T, h, dict(zip(reps, choice)))
            yield StructureMorphism(S, T, h, pm, check=False)


def image_of_stabilizer_equals(f: StructureMorphism, x: int) -> bool:
    return f.hom.image(f.source.stabilizers[x]) == f.target.stabilizers[f(x)]
