"""Sharp Hensel lifting and the local homeomorphism data of a hypersurface projection."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (DegenerateDerivative, HypothesisViolated, NotMember, OutsideBall,
                     PrecisionExhausted)
from .padic import INF, PAdic, _int_val, reduce_mod, val, val_vector
from .polynomial import Poly


@dataclass
class LiftProblem:
    """f in T_1..T_r, X (X is the last variable), monic in X."""
    f: Poly
    b0: tuple
    c0: Fraction
    p: int
    epsilon: int
    precision: int

    def __post_init__(self):
        self.b0 = tuple(Fraction(x) for x in self.b0)
        self.c0 = Fraction(self.c0)
        if self.f.nvars != len(self.b0) + 1:
            raise ValueError(f"polynomial has {self.f.nvars} variables, expected {len(self.b0) + 1}")
        if not self.f.is_monic_in(self.xvar):
            raise ValueError("f must be monic in X")

    @property
    def xvar(self) -> int:
        return self.f.nvars - 1

    @property
    def fprime(self) -> Poly:
        return self.f.derivative(self.xvar)

    @property
    def delta(self):
        return val(self.fprime(self.b0 + (self.c0,)), self.p)


@dataclass
class LiftResult:
    p: int
    residue: int                 # root mod p^precision, least nonnegative
    precision: int
    exact: bool                  # residue is an exact rational root
    delta: int
    epsilon: int
    dist_to_seed: int | float    # lower bound on w(c - c0), exact when below precision
    fprime_val: int
    iterations: list = field(default_factory=list)   # w(f(b, c_k)) per step

    @property
    def root(self) -> PAdic:
        if self.residue == 0:
            if self.exact:
                return PAdic.zero(self.p)
            raise PrecisionExhausted(f"root is 0 modulo {self.p}^{self.precision}",
                                     witness={"lower_bound": self.precision})
        k = _int_val(self.residue, self.p)
        n = self.precision - k
        return PAdic(self.p, k, (self.residue // self.p ** k) % self.p ** n, n)

    def digits(self) -> list[int]:
        out, r = [], self.residue
        for _ in range(self.precision):
            out.append(r % self.p)
            r //= self.p
        return out


def _require(ok: bool, clause: str, message: str, **vals):
    if not ok:
        raise HypothesisViolated(message, clause=clause, valuations=vals)


def check_hypotheses(lp: LiftProblem, b: Sequence) -> int:
    """Raise HypothesisViolated naming the failing clause; return delta."""
    p, f = lp.p, lp.f
    b = tuple(Fraction(x) for x in b)
    if len(b) != len(lp.b0):
        raise ValueError("base point has the wrong length")
    wf = f.val(p)
    _require(wf >= 0, "w(f)>=0", "coefficients of f must be p-integral", w_f=wf)
    w0 = val_vector(lp.b0 + (lp.c0,), p)
    _require(w0 >= 0, "1a", "w(b0, c0) must be >= 0", w_b0c0=w0)
    delta = lp.delta
    _require(delta != INF, "1b", "f'(b0, c0) vanishes", delta=delta)
    _require(lp.epsilon >= delta, "epsilon>=delta", "epsilon must be at least delta",
             epsilon=lp.epsilon, delta=delta)
    wf0 = val(f(lp.b0 + (lp.c0,)), p)
    _require(wf0 > delta + lp.epsilon, "1c", "w(f(b0, c0)) must exceed delta + epsilon",
             w_f_b0c0=wf0, bound=delta + lp.epsilon)
    wb = val_vector([x - y for x, y in zip(b, lp.b0)], p)
    _require(wb > delta + lp.epsilon, "1d", "w(b - b0) must exceed delta + epsilon",
             w_b_minus_b0=wb, bound=delta + lp.epsilon)
    return int(delta)


def sharp_hensel_lift(lp: LiftProblem, b: Sequence | None = None) -> LiftResult:
    """The unique root c of f(b, X) with w(c - c0) > epsilon, to lp.precision digits.

    Newton iteration runs on integers mod p^(N + delta), which determines c mod p^N.
    Each step is checked to at least double the excess valuation over delta.
    """
    b = lp.b0 if b is None else tuple(Fraction(x) for x in b)
    delta = check_hypotheses(lp, b)
    p, N, eps = lp.p, lp.precision, lp.epsilon
    if N <= eps:
        raise PrecisionExhausted(f"precision {N} cannot certify w(c - c0) > {eps}",
                                 witness={"precision": N, "epsilon": eps})
    M = N + delta
    mod_m, mod_n = p ** M, p ** N
    bi = [reduce_mod(x, p, M) for x in b]
    f, fp = lp.f, lp.fprime

    def fval(c):
        r = f.eval_mod(bi + [c], p, M)
        return M if r == 0 else _int_val(r, p), r

    c = reduce_mod(lp.c0, p, M)
    k, r = fval(c)
    history = [k]
    while k < M:
        d = fp.eval_mod(bi + [c], p, M)
        unit = (d // p ** delta) % mod_n
        step = (r // p ** delta) * pow(unit, -1, mod_n)
        c = (c - step) % mod_n
        k_new, r = fval(c)
        if k_new < min(M, 2 * k - 2 * delta):
            raise AssertionError(f"Newton step lost quadratic convergence: {k} -> {k_new}")
        k = k_new
        history.append(k)
    c %= mod_n
    exact = f(b + (Fraction(c),)) == 0
    diff = (c - reduce_mod(lp.c0, p, N)) % mod_n
    dist = N if diff == 0 else _int_val(diff, p)
    dprime = fp.eval_mod([reduce_mod(x, p, N) for x in b] + [c], p, N)
    fprime_val = N if dprime == 0 else _int_val(dprime, p)
    if not dist > eps:
        raise AssertionError(f"postcondition w(c - c0) > {eps} failed: {dist}")
    if fprime_val != delta:
        raise AssertionError(f"postcondition w(f'(b, c)) = {delta} failed: {fprime_val}")
    return LiftResult(p, c, N, exact, delta, eps, dist, fprime_val, history)


@dataclass
class NeighborhoodData:
    f: Poly
    b0: tuple
    c0: Fraction
    p: int
    member: bool
    delta: int
    reasons: dict

    @property
    def base_radius(self) -> int:
        """b is in the base ball when w(b - b0) > base_radius."""
        return 2 * self.delta

    @property
    def fiber_radius(self) -> int:
        """c is in the fiber ball when w(c - c0) > fiber_radius."""
        return self.delta

    def as_dict(self) -> dict:
        return {"prime": self.p, "member": self.member, "delta": self.delta,
                "base_radius": self.base_radius, "fiber_radius": self.fiber_radius,
                "conditions": self.reasons}


def membership(f: Poly, b0: Sequence, c0, p: int) -> tuple[bool, int, dict]:
    pt = tuple(Fraction(x) for x in b0) + (Fraction(c0),)
    fp = f.derivative(f.nvars - 1)
    d = fp(pt)
    if d == 0:
        raise DegenerateDerivative("f'(b0, c0) = 0", witness={"point": [str(x) for x in pt]})
    delta = val(d, p)
    wf0 = val(f(pt), p)
    conds = {
        "w(f)>=0": f.val(p) >= 0,
        "w(b0,c0)>=0": val_vector(pt, p) >= 0,
        "w(f(b0,c0))>2delta": wf0 > 2 * delta,
    }
    return all(conds.values()), delta, conds


def neighborhood_data(f: Poly, b0: Sequence, c0, p: int) -> NeighborhoodData:
    if not f.is_monic_in(f.nvars - 1):
        raise ValueError("f must be monic in X")
    member, delta, conds = membership(f, b0, c0, p)
    return NeighborhoodData(f, tuple(Fraction(x) for x in b0), Fraction(c0), p, member,
                            delta, conds)


def project_inverse(nd: NeighborhoodData, b: Sequence, precision: int) -> LiftResult:
    """The unique c in the fiber ball with f(b, c) = 0."""
    if not nd.member:
        raise NotMember(f"v_{nd.p} is not in the neighborhood", witness=nd.reasons)
    b = tuple(Fraction(x) for x in b)
    wb = val_vector([x - y for x, y in zip(b, nd.b0)], nd.p)
    if not wb > nd.base_radius:
        raise OutsideBall(f"w(b - b0) = {wb} is not > {nd.base_radius}",
                          witness={"w_b_minus_b0": wb, "radius": nd.base_radius})
    lp = LiftProblem(nd.f, nd.b0, nd.c0, nd.p, nd.delta, precision)
    return sharp_hensel_lift(lp, b)
