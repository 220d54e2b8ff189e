"""Finite embedding problems (phi: G -> A, alpha: B -> A) and their solutions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoSection, NotACover, TargetMismatch
from .extension import factor_morphism
from .groups import GroupHom, iter_homs
from .structures import (GroupStructure, StructureMorphism, classify_morphism, extend_point_map,
                         fiber_product, identity_morphism, is_isomorphism, sub_structure)


class _Unsolvable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "UNSOLVABLE"


UNSOLVABLE = _Unsolvable()


@dataclass
class EmbeddingProblem:
    phi: StructureMorphism      # G -> A
    alpha: StructureMorphism    # B -> A, a cover

    def __post_init__(self):
        if self.phi.target != self.alpha.target:
            raise TargetMismatch("phi and alpha have different targets")
        cls = classify_morphism(self.alpha)
        if not cls.is_cover:
            raise NotACover("alpha is not a cover", witness=cls.witnesses)


def _point_map(ep: EmbeddingProblem, gamma: GroupHom):
    """Lexicographically first point map making (gamma, map) a solution, or None."""
    G, B = ep.phi.source, ep.alpha.source
    choice = {}
    for x in G.orbit_reps:
        sx = gamma.image(G.stabilizers[x])
        gx = gamma.image(G.delta[x])
        target = ep.phi(x)
        for j in B.points:
            if ep.alpha(j) == target and sx <= B.stabilizers[j] and gx <= B.delta[j]:
                choice[x] = j
                break
        else:
            return None
    return extend_point_map(G, B, gamma, choice)


def solve_direct(ep: EmbeddingProblem):
    G, B = ep.phi.source, ep.alpha.source
    for gamma in iter_homs(G.group, B.group, lift=(ep.alpha.hom, ep.phi.hom)):
        pm = _point_map(ep, gamma)
        if pm is not None:
            return StructureMorphism(G, B, gamma, pm)
    return UNSOLVABLE


def solve_factored(ep: EmbeddingProblem):
    """Reduce to an epimorphic problem through a factorization of phi."""
    fac = factor_morphism(ep.phi)
    fp = fiber_product(ep.alpha, fac.bar)
    sub = EmbeddingProblem(fac.hat, fp.psi)
    sol = solve_direct(sub)
    if not sol:
        return UNSOLVABLE
    return fp.beta.compose(sol)


def solve_embedding(ep: EmbeddingProblem, route: str = "direct"):
    """A morphism gamma with alpha o gamma = phi, or UNSOLVABLE."""
    if route == "direct":
        return solve_direct(ep)
    if route == "factored":
        return solve_factored(ep)
    raise ValueError(f"unknown route {route!r}")


def is_solution(ep: EmbeddingProblem, gamma: StructureMorphism) -> bool:
    if classify_morphism(gamma).is_morphism is False:
        return False
    comp = ep.alpha.compose(gamma)
    return (np.array_equal(comp.hom.map, ep.phi.hom.map)
            and np.array_equal(comp.pointmap, ep.phi.pointmap))


@dataclass
class Section:
    structure: GroupStructure
    inclusion: StructureMorphism
    gamma: StructureMorphism


def find_cover_section(psi: StructureMorphism) -> Section:
    """A sub-structure of the source of psi mapped isomorphically onto the target."""
    G = psi.target
    ep = EmbeddingProblem(identity_morphism(G), psi)
    gamma = solve_embedding(ep)
    if not gamma:
        raise NoSection("the cover has no section")
    H = gamma.hom.image()
    T, inc = sub_structure(psi.source, H, sorted(set(gamma.pointmap.tolist())))
    assert is_isomorphism(psi.compose(inc))
    return Section(T, inc, gamma)
