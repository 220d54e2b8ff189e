"""Small groups and the fixture structures used throughout the tests and CLI."""
from __future__ import annotations

from itertools import permutations, product
from typing import Callable, Hashable, Sequence

import numpy as np

from .groups import FiniteGroup, GroupHom, Subgroup, all_subgroups, subgroup_closure


def from_elements(elements: Sequence[Hashable], mul: Callable, name: str,
                  generators: Sequence[Hashable] | None = None) -> FiniteGroup:
    """Build a group from explicit elements; ``elements[0]`` must be the identity."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    gens = None if generators is None else [index[g] for g in generators]
    return FiniteGroup(table, name=name, generators=gens)


def cyclic(n: int) -> FiniteGroup:
    t = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(t, name=f"Z{n}", generators=[1] if n > 1 else [])


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Element (g, h) gets index g*|H| + h."""
    m = H.order
    gi = np.arange(G.order * m) // m
    hi = np.arange(G.order * m) % m
    t = G.table[np.ix_(gi, gi)] * m + H.table[np.ix_(hi, hi)]
    return FiniteGroup(t, name=name or f"{G.name}x{H.name}", check=False)


def product_projections(G: FiniteGroup, H: FiniteGroup, P: FiniteGroup) -> tuple[GroupHom, GroupHom]:
    m = H.order
    idx = np.arange(P.order)
    return GroupHom(P, G, idx // m, check=False), GroupHom(P, H, idx % m, check=False)


def perm_mul(a, b):
    """Left-to-right composition: first a, then b."""
    return tuple(b[i] for i in a)


def permutation_group(gens: Sequence[tuple], name: str) -> FiniteGroup:
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = perm_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elements = sorted(seen)          # identity is lexicographically first
    return from_elements(elements, perm_mul, name)


def symmetric(n: int) -> FiniteGroup:
    return from_elements(sorted(permutations(range(n))), perm_mul, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0
    return from_elements([p for p in sorted(permutations(range(n))) if even(p)], perm_mul, f"A{n}")



def dihedral(n: int) -> FiniteGroup:
    """Order 2n; (i, e) is r^i s^e."""
    elements = [(i, e) for e in range(2) for i in range(n)]

    def mul(a, b):
        i1, e1 = a
        i2, e2 = b
        return ((i1 + (-1) ** e1 * i2) % n, (e1 + e2) % 2)
    return from_elements(elements, mul, f"D{n}")


def quaternion() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1, i, j, k
    elements = [(s, u) for u in "1ijk" for s in (1, -1)]
    units = {("1", x): (1, x) for x in "1ijk"}
    units.update({(x, "1"): (1, x) for x in "1ijk"})
    units.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def mul(a, b):
        s, u = units[(a[1], b[1])]
        return (a[0] * b[0] * s, u)
    return from_elements(elements, mul, "Q8")


def dicyclic3() -> FiniteGroup:
    """Z3 semidirect Z4 with the generator of Z4 inverting Z3 (order 12)."""
    elements = [(i, j) for j in range(4) for i in range(3)]

    def mul(a, b):
        return ((a[0] + (-1) ** a[1] * b[0]) % 3, (a[1] + b[1]) % 4)
    return from_elements(elements, mul, "Dic3")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="1", generators=[])


def small_groups(max_order: int = 12) -> list[FiniteGroup]:
    """One representative of every isomorphism class of order <= 12."""
    builders = {
        1: [trivial_group],
        2: [lambda: cyclic(2)],
        3: [lambda: cyclic(3)],
        4: [lambda: cyclic(4), lambda: direct_product(cyclic(2), cyclic(2), "Z2xZ2")],
        5: [lambda: cyclic(5)],
        6: [lambda: cyclic(6), lambda: symmetric(3)],
        7: [lambda: cyclic(7)],
        8: [lambda: cyclic(8), lambda: direct_product(cyclic(4), cyclic(2), "Z4xZ2"),
            lambda: direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2), "Z2^3"),
            lambda: dihedral(4), quaternion],
        9: [lambda: cyclic(9), lambda: direct_product(cyclic(3), cyclic(3), "Z3xZ3")],
        10: [lambda: cyclic(10), lambda: dihedral(5)],
        11: [lambda: cyclic(11)],
        12: [lambda: cyclic(12), lambda: direct_product(cyclic(6), cyclic(2), "Z6xZ2"),
             lambda: alternating(4), lambda: dihedral(6), dicyclic3],
    }
    return [b() for n in range(1, max_order + 1) for b in builders[n]]


def find_perm(G: FiniteGroup, cycles: Sequence[Sequence[int]], n: int = 3) -> int:
    """Index of the permutation given in 0-based cycle notation inside symmetric(n)."""
    p = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a] = b
    elements = sorted(permutations(range(n)))
    return elements.index(tuple(p))


# ---------------------------------------------------------------- structures

def bare(G: FiniteGroup):
    """G acting on the empty set."""
    from .structures import GroupStructure
    return GroupStructure(G, [], [])


def one_point(G: FiniteGroup, H: Subgroup | None = None):
    from .structures import GroupStructure
    return GroupStructure(G, [[0] * G.order], [H if H is not None else G.whole])


def regular(G: FiniteGroup, delta: Subgroup | None = None):
    """G acting on itself by right multiplication, every point carrying ``delta`` (default G)."""
    from .structures import GroupStructure
    d = delta if delta is not None else G.whole
    return GroupStructure(G, G.table.copy(), [d] * G.order)


def coset_structure(G: FiniteGroup, S: Subgroup, D: Subgroup):
    """Right cosets S g with point S g carrying D^g.  Needs S <= D and D normalized by S."""
    from .groups import conjugate_subgroup, coset_transversal
    from .structures import GroupStructure
    reps = coset_transversal(G, S, "right")
    mem = np.asarray(S.members, dtype=np.int64)
    which = np.empty(G.order, dtype=np.int64)
    for i, r in enumerate(reps):
        which[G.table[mem, r]] = i
    action = [[int(which[G.table[r, g]]) for g in range(G.order)] for r in reps]
    delta = [conjugate_subgroup(D, r) for r in reps]
    return GroupStructure(G, action, delta)


def disjoint_union(parts):
    """Disjoint union of structures over the same group."""
    from .structures import GroupStructure
    G = parts[0].group
    action, delta, off = [], [], 0
    for P in parts:
        action.extend((P.action + off).tolist())
        delta.extend(P.delta)
        off += P.npoints
    return GroupStructure(G, action, delta)


def conjugation_structure(G: FiniteGroup, family):
    """G acting on a conjugation-closed family of subgroups, each point carrying itself."""
    from .groups import conjugate_subgroup
    from .structures import GroupStructure
    family = list(family)
    pos = {H: i for i, H in enumerate(family)}
    action = [[pos[conjugate_subgroup(H, g)] for g in range(G.order)] for H in family]
    return GroupStructure(G, action, family)


def s3_sylow2():
    """S3 acting by conjugation on its three subgroups of order 2."""
    from .groups import all_subgroups
    G = symmetric(3)
    return conjugation_structure(G, [H for H in all_subgroups(G) if len(H) == 2])


def transitive_types(G: FiniteGroup, max_points: int):
    """(S, D) pairs giving the transitive structures with at most ``max_points`` points.

    S runs over conjugacy-class representatives, D over subgroups containing S
    and normalized by it.
    """
    from .groups import all_subgroups, conjugate_subgroup
    subs = all_subgroups(G)
    seen = set()
    out = []
    for S in subs:
        if G.order // len(S) > max_points:
            continue
        cls = frozenset(conjugate_subgroup(S, g) for g in range(G.order))
        if cls in seen:
            continue
        seen.add(cls)
        for D in subs:
            if S <= D and all(conjugate_subgroup(D, s) == D for s in S):
                out.append((S, D))
    return out


def enumerate_structures(G: FiniteGroup, max_points: int, max_orbits: int = 2):
    """Structures on G with 1..max_points points built from transitive pieces."""
    from itertools import combinations_with_replacement
    types = transitive_types(G, max_points)
    sizes = [G.order // len(S) for S, _ in types]
    out = []
    for k in range(1, max_orbits + 1):
        for combo in combinations_with_replacement(range(len(types)), k):
            if sum(sizes[i] for i in combo) > max_points:
                continue
            out.append(disjoint_union([coset_structure(G, *types[i]) for i in combo]))
    return out


def structure_subcatalog():
    """The groups used for the exhaustive structure sweeps."""
    return [trivial_group(), cyclic(2), cyclic(3), cyclic(4),
            direct_product(cyclic(2), cyclic(2), "Z2xZ2"), symmetric(3)]
