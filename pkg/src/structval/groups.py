"""Finite groups given by multiplication tables.

Elements are the indices ``0 .. order-1`` and 0 is always the identity.
Products are read left to right: ``table[a, b]`` is ``a*b``, which matches
right actions ``x^(ab) = (x^a)^b`` used everywhere else.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import InvalidGroup, NotAHomomorphism, NotNormal


def _frozen(arr) -> np.ndarray:
    a = np.array(arr, dtype=np.int64)
    a.setflags(write=False)
    return a


class FiniteGroup:
    """A group stored as its full Cayley table."""

    def __init__(self, table, name: str = "G", generators: Sequence[int] | None = None,
                 check: bool = True):
        self.table = _frozen(table)
        self.name = name
        if self.table.ndim != 2 or self.table.shape[0] != self.table.shape[1] or self.table.shape[0] == 0:
            raise InvalidGroup("table must be a non-empty square array")
        if check:
            self._validate()
        inv = np.argmin(self.table, axis=1)          # a*b == 0 at the inverse
        self.inverse = _frozen(inv)
        if generators is None:
            generators = self._greedy_generators()
        else:
            generators = [int(g) for g in generators]
            for g in generators:
                self._check_index(g)
            if generators and len(subgroup_closure(self, generators)) != self.order:
                raise InvalidGroup("generators do not generate the group")
            if not generators and self.order > 1:
                raise InvalidGroup("generators do not generate the group")
        self.generators = tuple(generators)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def _check_index(self, g):
        if not 0 <= int(g) < self.order:
            raise IndexError(f"element {g} out of range for group of order {self.order}")

    def _validate(self):
        t, n = self.table, self.order
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup("table entry out of range")
        rng = np.arange(n)
        if not np.array_equal(t[0], rng) or not np.array_equal(t[:, 0], rng):
            raise InvalidGroup("index 0 is not a two-sided identity")
        srt_rows = np.sort(t, axis=1)
        srt_cols = np.sort(t, axis=0)
        if not (srt_rows == rng).all() or not (srt_cols == rng[:, None]).all():
            bad = np.argwhere(srt_rows != rng)
            row = int(bad[0, 0]) if bad.size else int(np.argwhere(srt_cols != rng[:, None])[0, 1])
            raise InvalidGroup("table is not a Latin square", witness=row)
        lhs = t[t]              # (ab)c
        rhs = t[:, t]           # a(bc)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            raise InvalidGroup("associativity fails", witness=tuple(int(v) for v in bad[0]))

    def _greedy_generators(self):
        gens: list[int] = []
        have = np.zeros(self.order, dtype=np.bool_)
        have[0] = True
        for g in range(self.order):
            if not have[g]:
                gens.append(g)
                seed = np.zeros(self.order, dtype=np.bool_)
                seed[gens] = True
                have = kernels.closure_mask(self.table, seed)
        return gens

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, h: int, g: int) -> int:
        """h^g = g^-1 h g."""
        return int(self.table[self.table[self.inverse[g], h], g])

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.table[x, a]
                k += 1
            orders[a] = k
        orders.setflags(write=False)
        return orders

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        """Subgroup with exactly these members (validated)."""
        mem = tuple(sorted({int(m) for m in members}))
        for m in mem:
            self._check_index(m)
        H = Subgroup(self, mem)
        if not is_subgroup_set(self, mem):
            raise InvalidGroup(f"{list(mem)} is not a subgroup of {self.name}")
        return H

    @cached_property
    def _hash(self):
        return hash(self.table.tobytes())

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.table, other.table)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple

    @cached_property
    def memberset(self) -> frozenset:
        return frozenset(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, g) -> bool:
        return g in self.memberset

    def __le__(self, other: "Subgroup") -> bool:
        return self.memberset <= other.memberset

    def __lt__(self, other: "Subgroup") -> bool:
        return self.memberset < other.memberset

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.members == other.members and (self.parent is other.parent or self.parent == other.parent)

    def __hash__(self):
        return hash(self.members)

    def sort_key(self):
        return (len(self.members), self.members)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def __repr__(self):
        return f"Subgroup({list(self.members)})"


def is_subgroup_set(G: FiniteGroup, members: Sequence[int]) -> bool:
    mem = np.asarray(sorted(set(members)), dtype=np.int64)
    if mem.size == 0 or mem[0] != 0:
        return False
    mask = np.zeros(G.order, dtype=np.bool_)
    mask[mem] = True
    return bool(mask[G.table[np.ix_(mem, mem)]].all())


def subgroup_closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    seed = np.zeros(G.order, dtype=np.bool_)
    for g in gens:
        G._check_index(g)
        seed[int(g)] = True
    mask = kernels.closure_mask(G.table, seed)
    return Subgroup(G, tuple(int(i) for i in np.flatnonzero(mask)))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup of G, sorted by (size, members)."""
    cached = G.__dict__.get("_all_subgroups")
    if cached is not None:
        return list(cached)
    cyclic = {subgroup_closure(G, [g]) for g in range(G.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    # every subgroup is a join of cyclic ones
    while frontier:
        fresh = set()
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = subgroup_closure(G, H.members + C.members)
                if J not in found:
                    fresh.add(J)
        found |= fresh
        frontier = fresh
    result = sorted(found, key=Subgroup.sort_key)
    G.__dict__["_all_subgroups"] = tuple(result)
    return result


def conjugate_subgroup(H: Subgroup, g: int) -> Subgroup:
    """H^g = {g^-1 h g}."""
    G = H.parent
    G._check_index(g)
    t = G.table
    mem = np.asarray(H.members, dtype=np.int64)
    conj = t[t[G.inverse[g], mem], g]
    return Subgroup(G, tuple(sorted(int(c) for c in conj)))


def is_normal(N: Subgroup) -> bool:
    G = N.parent
    return all(conjugate_subgroup(N, g) == N for g in G.generators)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return [H for H in all_subgroups(G) if is_normal(H)]


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    return Subgroup(H.parent, tuple(sorted(H.memberset & K.memberset)))


def product_set(H: Iterable[int], K: Iterable[int], G: FiniteGroup) -> frozenset:
    h = np.asarray(list(H), dtype=np.int64)
    k = np.asarray(list(K), dtype=np.int64)
    return frozenset(int(v) for v in np.unique(G.table[np.ix_(h, k)]))


def normalizer(H: Subgroup) -> Subgroup:
    G = H.parent
    return Subgroup(G, tuple(g for g in range(G.order) if conjugate_subgroup(H, g) == H))


def coset_transversal(G: FiniteGroup, H: Subgroup, side: str = "right") -> list[int]:
    """Smallest element of each coset, in increasing order.

    ``side='right'`` uses cosets Hg, ``side='left'`` uses gH.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    mem = np.asarray(H.members, dtype=np.int64)
    covered = np.zeros(G.order, dtype=np.bool_)
    reps = []
    for g in range(G.order):
        if covered[g]:
            continue
        reps.append(g)
        covered[G.table[mem, g] if side == "right" else G.table[g, mem]] = True
    return reps


def right_coset(H: Subgroup, g: int) -> frozenset:
    G = H.parent
    return frozenset(int(v) for v in G.table[np.asarray(H.members), g])


class GroupHom:
    """A homomorphism stored as the list of element images."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping, check: bool = True):
        self.source = source
        self.target = target
        self.map = _frozen(mapping)
        if self.map.shape != (source.order,):
            raise NotAHomomorphism("map length differs from source order")
        if check:
            if self.map.min() < 0 or self.map.max() >= target.order:
                raise NotAHomomorphism("image index out of range")
            w = kernels.hom_witness(self.map, source.table, target.table)
            if w[0] >= 0:
                raise NotAHomomorphism(f"map[{w[0]}*{w[1]}] != map[{w[0]}]*map[{w[1]}]", witness=w)

    def __call__(self, g: int) -> int:
        return int(self.map[g])

    def image(self, H: Subgroup | None = None) -> Subgroup:
        mem = range(self.source.order) if H is None else H.members
        return Subgroup(self.target, tuple(sorted({int(self.map[g]) for g in mem})))

    def preimage(self, K: Subgroup) -> Subgroup:
        return Subgroup(self.source, tuple(g for g in range(self.source.order) if int(self.map[g]) in K))

    @cached_property
    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(int(g) for g in np.flatnonzero(self.map == 0)))

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order

    def is_injective(self) -> bool:
        return len(self.kernel) == 1

    def is_injective_on(self, H: Subgroup) -> bool:
        return len({int(self.map[h]) for h in H}) == len(H)

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        if first.target != self.source:
            raise NotAHomomorphism("composition domains do not match")
        return GroupHom(first.source, self.target, self.map[first.map], check=False)

    def inverse(self) -> "GroupHom":
        if not (self.is_injective() and self.is_surjective()):
            raise NotAHomomorphism("not an isomorphism")
        inv = np.empty(self.target.order, dtype=np.int64)
        inv[self.map] = np.arange(self.source.order)
        return GroupHom(self.target, self.source, inv, check=False)

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and np.array_equal(self.map, other.map))

    def __hash__(self):
        return hash(self.map.tobytes())

    def __repr__(self):
        return f"GroupHom({self.source.name}->{self.target.name}, {self.map.tolist()})"


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order), check=False)


def quotient_group(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """G/N with cosets labelled in order of their smallest element."""
    if not is_normal(N):
        raise NotNormal(f"{list(N.members)} is not normal in {G.name}", witness=N)
    reps = coset_transversal(G, N, "left")
    label = np.empty(G.order, dtype=np.int64)
    mem = np.asarray(N.members, dtype=np.int64)
    for i, r in enumerate(reps):
        label[G.table[r, mem]] = i
    r = np.asarray(reps, dtype=np.int64)
    qtable = label[G.table[np.ix_(r, r)]]
    Q = FiniteGroup(qtable, name=f"{G.name}/N{len(N)}", check=False)
    return Q, GroupHom(G, Q, label, check=False)


def _hom_search(G: FiniteGroup, B: FiniteGroup, fixed: np.ndarray, proj: np.ndarray,
                want: np.ndarray) -> Iterator[np.ndarray]:
    gens = np.asarray(G.generators, dtype=np.int64)
    k_total = len(gens)
    imgs = np.zeros(max(k_total, 1), dtype=np.int64)
    g_orders = G.element_orders
    b_orders = B.element_orders
    tg, tb = G.table, B.table

    def candidates(j):
        g = gens[j]
        if fixed[g] >= 0:
            cands = [int(fixed[g])]
        else:
            cands = range(B.order)
        for b in cands:
            if g_orders[g] % b_orders[b]:
                continue
            if want[g] >= 0 and proj[b] != want[g]:
                continue
            yield b

    def dfs(j):
        for b in candidates(j):
            imgs[j] = b
            out = np.full(G.order, -1, dtype=np.int64)
            if not kernels.extend_hom(tg, tb, gens, imgs, j + 1, fixed, proj, want, out):
                continue
            if j + 1 == k_total:
                yield out
            else:
                yield from dfs(j + 1)

    if k_total == 0:
        out = np.full(G.order, -1, dtype=np.int64)
        if kernels.extend_hom(tg, tb, gens, imgs, 0, fixed, proj, want, out):
            yield out
        return
    yield from dfs(0)


def iter_homs(G: FiniteGroup, B: FiniteGroup, constraints: dict | None = None, *,
              lift: tuple[GroupHom, GroupHom] | None = None,
              surjective: bool = False) -> Iterator[GroupHom]:
    """Homomorphisms G -> B in lexicographic order of generator images.

    ``constraints`` fixes images of some elements.  ``lift=(alpha, phi)``
    keeps only homs gamma with alpha(gamma(g)) = phi(g).
    """
    fixed = np.full(G.order, -1, dtype=np.int64)
    for g, b in (constraints or {}).items():
        G._check_index(g)
        B._check_index(b)
        fixed[int(g)] = int(b)
    if lift is None:
        proj = np.arange(B.order, dtype=np.int64)
        want = np.full(G.order, -1, dtype=np.int64)
    else:
        alpha, phi = lift
        if alpha.source != B or phi.source != G or alpha.target != phi.target:
            raise NotAHomomorphism("lift data does not fit G -> B -> A")
        proj = np.asarray(alpha.map, dtype=np.int64)
        want = np.asarray(phi.map, dtype=np.int64)
    for out in _hom_search(G, B, fixed, proj, want):
        h = GroupHom(G, B, out, check=False)
        if surjective and not h.is_surjective():
            continue
        yield h


def enumerate_homs(G: FiniteGroup, B: FiniteGroup, constraints: dict | None = None, **kw) -> list[GroupHom]:
    return list(iter_homs(G, B, constraints, **kw))
