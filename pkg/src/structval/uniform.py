"""Locally uniform continuity of polynomials and balls inside basic neighborhoods."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import HypothesisViolated
from .padic import INF, is_prime, val, val_vector
from .polynomial import Poly
from .sampling import make_rng, unit_rational


def _vec(a) -> tuple:
    if isinstance(a, (int, Fraction, str)):
        a = [a]
    return tuple(Fraction(x) for x in a)


def _margin(g: Poly, x, a, p: int):
    return val(g(x) - g(a), p)


@dataclass
class ContinuityCertificate:
    p: int
    bound: int                  # v(e)
    samples: int
    ok: bool
    min_margin: int | float     # smallest observed v(g(x) - g(a))
    counterexample: tuple | None = None

    def as_dict(self) -> dict:
        return {"prime": self.p, "bound": self.bound, "samples": self.samples, "ok": self.ok,
                "min_margin": str(self.min_margin),
                "counterexample": None if self.counterexample is None
                else [str(x) for x in self.counterexample]}


def continuity_check(g: Poly, a, x, e, p: int) -> tuple[bool, int | float]:
    """Check one instance; HypothesisViolated if the hypotheses fail."""
    a, x = _vec(a), _vec(x)
    ve = val(e, p)
    if Fraction(e) == 0:
        raise ValueError("e must be nonzero")
    if g.val(p) < 0:
        raise HypothesisViolated("v(g) < 0", clause="v(g)>=0", valuations={"v_g": g.val(p)})
    if val_vector(a + x, p) < 0:
        raise HypothesisViolated("v(a, x) < 0", clause="v(a,x)>=0",
                                 valuations={"v_ax": val_vector(a + x, p)})
    vd = val_vector([s - t for s, t in zip(x, a)], p)
    if not vd > ve:
        raise HypothesisViolated("v(x - a) <= v(e)", clause="v(x-a)>v(e)",
                                 valuations={"v_x_minus_a": vd, "v_e": ve})
    m = _margin(g, x, a, p)
    return m > ve, m


def continuity_certificate(g: Poly, a, e, p: int, samples: int = 200,
                           seed: int | None = None) -> ContinuityCertificate:
    """Sample x with v(x) >= 0 and v(x - a) > v(e) and test v(g(x) - g(a)) > v(e)."""
    a = _vec(a)
    if g.val(p) < 0:
        raise HypothesisViolated("v(g) < 0", clause="v(g)>=0", valuations={"v_g": g.val(p)})
    if val_vector(a, p) < 0:
        raise HypothesisViolated("v(a) < 0", clause="v(a)>=0", valuations={"v_a": val_vector(a, p)})
    ve = val(e, p)
    step = Fraction(p) ** max(ve + 1, 0)
    rng = make_rng(seed)
    worst, bad = INF, None
    for _ in range(samples):
        x = tuple(ai + step * unit_rational(rng, [p]) for ai in a)
        m = _margin(g, x, a, p)
        worst = min(worst, m)
        if not m > ve and bad is None:
            bad = x
    return ContinuityCertificate(p, ve, samples, bad is None, worst, bad)


@dataclass
class LocalChoice:
    """The scalings chosen at one prime: x in the ball of radius c around a lands in the neighborhood."""
    p: int
    e: Fraction
    d: Fraction
    c: Fraction

    @property
    def radius(self) -> int:
        return val(self.c, self.p)


Atom = tuple  # (c'_k, f_k)


def local_choice(a: Sequence, atoms: Sequence[Atom], p: int) -> LocalChoice:
    a = _vec(a)
    pf = Fraction(p)
    e = pf ** max(0, -val_vector(a, p)) if a else Fraction(1)
    gs = [f.scale_inputs(e) for _, f in atoms]
    d = pf ** max(0, -min((g.val(p) for g in gs), default=0))
    need = -val(e, p)
    for (cp, _), g in zip(atoms, gs):
        need = max(need, val(d * Fraction(cp), p) - val(e, p))
    return LocalChoice(p, e, d, pf ** need)


def in_patch(a, atoms, choice: LocalChoice, q: int) -> bool:
    """Is v_q in the set of valuations where ``choice`` still works?"""
    a = _vec(a)
    e, d, c = choice.e, choice.d, choice.c
    if val_vector([e * x for x in a], q) < 0 or val(c * e, q) < 0:
        return False
    for cp, f in atoms:
        if (d * f.scale_inputs(e)).val(q) < 0:
            return False
        if val(c * e / (d * Fraction(cp)), q) < 0:
            return False
    return True


@dataclass
class BallPart:
    primes: tuple
    anchor: int
    radius: Fraction           # the ball is {x : v_q(x - a) > v_q(radius)} for q in primes
    choice: LocalChoice

    def as_dict(self) -> dict:
        return {"primes": list(self.primes), "anchor": self.anchor, "radius": str(self.radius),
                "radius_valuations": {str(q): val(self.radius, q) for q in self.primes}}


@dataclass
class BallPartition:
    a: tuple
    atoms: list
    primes: tuple
    parts: list = field(default_factory=list)

    def part_of(self, q: int) -> BallPart:
        for part in self.parts:
            if q in part.primes:
                return part
        raise KeyError(q)


def ball_partition(a, atoms: Sequence[Atom], primes: Sequence[int]) -> BallPartition:
    """Split the prime set so that each part has one ball radius that works at all its primes.

    Parts are built from the smallest prime not yet covered, in increasing order.
    """
    a = _vec(a)
    atoms = [(Fraction(cp), f) for cp, f in atoms]
    for cp, f in atoms:
        if cp == 0:
            raise ValueError("atom moduli must be nonzero")
        if f.nvars != len(a):
            raise ValueError("atom polynomial has the wrong number of variables")
    B = sorted(set(primes))
    for q in B:
        if not is_prime(q):
            raise ValueError(f"{q} is not prime")
    out = BallPartition(a, atoms, tuple(B))
    covered: set = set()
    for v in B:
        if v in covered:
            continue
        choice = local_choice(a, atoms, v)
        assert in_patch(a, atoms, choice, v)
        part = tuple(q for q in B if q not in covered and in_patch(a, atoms, choice, q))
        covered.update(part)
        out.parts.append(BallPart(part, v, choice.c, choice))
    return out


def sample_ball(a, part: BallPart, rng, count: int) -> list[tuple]:
    a = _vec(a)
    step = Fraction(1)
    for q in part.primes:
        step *= Fraction(q) ** (val(part.radius, q) + 1)
    return [tuple(x + step * unit_rational(rng, part.primes) for x in a) for _ in range(count)]


@dataclass
class PartitionCheck:
    ok: bool
    disjoint: bool
    covers: bool
    failures: list


def verify_ball_partition(bp: BallPartition, samples: int = 100,
                          seed: int | None = None) -> PartitionCheck:
    seen: list = []
    for part in bp.parts:
        seen.extend(part.primes)
    disjoint = len(seen) == len(set(seen))
    covers = set(seen) == set(bp.primes)
    rng = make_rng(seed)
    failures = []
    for part in bp.parts:
        for x in sample_ball(bp.a, part, rng, samples):
            for q in part.primes:
                if not val_vector([s - t for s, t in zip(x, bp.a)], q) > val(part.radius, q):
                    failures.append({"prime": q, "point": [str(t) for t in x], "reason": "not in ball"})
                for k, (cp, f) in enumerate(bp.atoms):
                    if not val(f(x) - f(bp.a), q) > val(cp, q):
                        failures.append({"prime": q, "atom": k, "point": [str(t) for t in x]})
    return PartitionCheck(disjoint and covers and not failures, disjoint, covers, failures)


def transfer_modulus(components: Sequence[Poly], t0, e, primes: Sequence[int]) -> dict[int, int]:
    """rho_p with v_p(t - t0) > rho_p implying v_p(g(t) - g(t0)) > v_p(e) for every component."""
    atoms = [(Fraction(e), g) for g in components]
    return {q: local_choice(t0, atoms, q).radius for q in sorted(set(primes))}
