"""Block approximation over the rationals: congruence solving and independent verification."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvalidProblem, PreimageMismatch
from .padic import INF, is_prime, val, val_vector
from .polynomial import Poly
from .uniform import local_choice


@dataclass(frozen=True)
class Block:
    primes: tuple
    target: tuple
    c: Fraction
    preimage: tuple | None = None


@dataclass(frozen=True)
class RationalMap:
    """Component i is num[i] / den[i]; den defaults to 1."""
    num: tuple
    den: tuple

    @classmethod
    def polynomial(cls, comps: Sequence[Poly]) -> "RationalMap":
        return cls(tuple(comps), tuple(Poly.constant(1, c.nvars) for c in comps))

    @property
    def nvars(self) -> int:
        return self.num[0].nvars

    def __call__(self, t) -> tuple:
        out = []
        for n, d in zip(self.num, self.den):
            dv = d(t)
            if dv == 0:
                raise ZeroDivisionError("parametrization undefined at this parameter")
            out.append(n(t) / dv)
        return tuple(out)

    def atoms(self, t0, c) -> list:
        """Polynomial conditions whose joint truth gives v(g(t) - g(t0)) > v(c).

        For g = N/D put H(t) = N(t) D(t0) - N(t0) D(t). Then v(D(t) - D(t0)) > v(D(t0))
        and v(H(t)) > v(c) + 2 v(D(t0)) force the claim.
        """
        c = Fraction(c)
        out = []
        for n, d in zip(self.num, self.den):
            n0, d0 = n(t0), d(t0)
            out.append((d0, d))
            out.append((c * d0 * d0, n * d0 - d * n0))
        return out


@dataclass
class BlockApproxProblem:
    n: int
    blocks: list
    kind: str = "affine"
    equations: list = field(default_factory=list)
    param: RationalMap | None = None

    def __post_init__(self):
        seen: set = set()
        clean = []
        if self.kind not in ("affine", "parametrized"):
            raise InvalidProblem(f"unknown variety kind {self.kind!r}")
        for i, b in enumerate(self.blocks):
            primes = tuple(sorted(set(int(q) for q in b.primes)))
            if not primes:
                raise InvalidProblem(f"block {i} has no primes")
            for q in primes:
                if not is_prime(q):
                    raise InvalidProblem(f"{q} in block {i} is not prime")
                if q in seen:
                    raise InvalidProblem(f"prime {q} appears in two blocks", witness={"prime": q})
                seen.add(q)
            target = tuple(Fraction(x) for x in b.target)
            if len(target) != self.n:
                raise InvalidProblem(f"block {i} target has length {len(target)}, expected {self.n}")
            c = Fraction(b.c)
            if c == 0:
                raise InvalidProblem(f"block {i} has modulus 0")
            pre = None if b.preimage is None else tuple(Fraction(x) for x in b.preimage)
            clean.append(Block(primes, target, c, pre))
        self.blocks = clean
        if self.kind == "parametrized":
            if self.param is None:
                raise InvalidProblem("parametrized variety needs a parametrization")
            if len(self.param.num) != self.n:
                raise InvalidProblem("parametrization has the wrong number of components")
            for i, b in enumerate(self.blocks):
                if b.preimage is None or len(b.preimage) != self.param.nvars:
                    raise InvalidProblem(f"block {i} needs a parameter preimage")


@dataclass
class Margin:
    block: int
    prime: int
    achieved: int | float    # v_p(a - a_i)
    required: int            # v_p(c_i)

    @property
    def ok(self) -> bool:
        return self.achieved > self.required

    def as_dict(self) -> dict:
        a = "inf" if self.achieved == INF else self.achieved
        return {"block": self.block, "prime": self.prime, "achieved": a,
                "required": self.required, "ok": self.ok}


@dataclass
class SolutionCertificate:
    point: tuple
    margins: list
    residuals: list = field(default_factory=list)
    accepted: bool = True
    failure: dict | None = None

    def as_dict(self) -> dict:
        return {"point": [str(x) for x in self.point],
                "margins": [m.as_dict() for m in self.margins],
                "residuals": [str(r) for r in self.residuals],
                "accepted": self.accepted, "failure": self.failure}


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Least nonnegative x with x = r_i mod m_i for pairwise coprime moduli."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m, m


def verify_solution(problem: BlockApproxProblem, a) -> SolutionCertificate:
    a = tuple(Fraction(x) for x in a)
    if len(a) != problem.n:
        raise ValueError(f"point has length {len(a)}, expected {problem.n}")
    margins, failure = [], None
    for i, b in enumerate(problem.blocks):
        for q in b.primes:
            m = Margin(i, q, val_vector([x - y for x, y in zip(a, b.target)], q), val(b.c, q))
            margins.append(m)
            if not m.ok and failure is None:
                failure = m.as_dict()
    residuals = [eq(a) for eq in problem.equations]
    if failure is None:
        for k, r in enumerate(residuals):
            if r != 0:
                failure = {"equation": k, "residual": str(r)}
                break
    return SolutionCertificate(a, margins, residuals, failure is None, failure)


def _solve_congruences(blocks: Sequence[Block], n: int, depth) -> tuple:
    """Coordinatewise: v_p(a_j - target_j) >= depth(block, p) for every block prime p."""
    primes = [q for b in blocks for q in b.primes]
    Q = 1
    for q in primes:
        lowest = min((val(x, q) for b in blocks if q in b.primes for x in b.target), default=0)
        Q *= q ** max(0, -lowest)
    point = []
    for j in range(n):
        residues, moduli = [], []
        for b in blocks:
            for q in b.primes:
                k = depth(b, q) + val(Q, q)
                if k <= 0:
                    continue
                m = q ** k
                t = b.target[j] * Q
                residues.append(t.numerator * pow(t.denominator, -1, m) % m)
                moduli.append(m)
        x, _ = crt(residues, moduli)
        point.append(Fraction(x, Q))
    return tuple(point)


def solve_affine(problem: BlockApproxProblem) -> SolutionCertificate:
    point = _solve_congruences(problem.blocks, problem.n, lambda b, q: val(b.c, q) + 1)
    cert = verify_solution(BlockApproxProblem(problem.n, problem.blocks), point)
    assert cert.accepted, cert.failure
    return cert


def solve_parametrized(problem: BlockApproxProblem) -> SolutionCertificate:
    """Pull each block back to parameter space, solve there, push the point forward."""
    if problem.kind != "parametrized":
        return solve_affine(problem)
    g = problem.param
    pblocks = []
    radii = {}
    for i, b in enumerate(problem.blocks):
        try:
            image = g(b.preimage)
        except ZeroDivisionError:
            image = None
        if image != b.target:
            raise PreimageMismatch(f"block {i}: parametrization does not send the preimage to the target",
                                   witness={"block": i, "image": None if image is None else [str(x) for x in image]})
        atoms = g.atoms(b.preimage, b.c)
        for q in b.primes:
            radii[(i, q)] = local_choice(b.preimage, atoms, q).radius
        pblocks.append(Block(b.primes, b.preimage, Fraction(1)))
    idx = {id(pb): i for i, pb in enumerate(pblocks)}
    t = _solve_congruences(pblocks, g.nvars, lambda b, q: radii[(idx[id(b)], q)] + 1)
    cert = verify_solution(problem, g(t))
    assert cert.accepted, cert.failure
    return cert


def solve(problem: BlockApproxProblem) -> SolutionCertificate:
    return solve_parametrized(problem) if problem.kind == "parametrized" else solve_affine(problem)


def unit_circle() -> tuple[RationalMap, Poly]:
    s = Poly.var(0, 1)
    one = Poly.constant(1, 1)
    g = RationalMap((one - s * s, 2 * s), (one + s * s, one + s * s))
    x, y = Poly.var(0, 2), Poly.var(1, 2)
    return g, x * x + y * y - 1


# ------------------------------------------------------------------ JSON

def _poly_from(data, nvars):
    return Poly.from_json(data, nvars)


def problem_from_json(data: dict) -> BlockApproxProblem:
    try:
        var = data["variety"]
        kind = var.get("kind", "affine")
        n = int(var["n"])
        blocks = [Block(tuple(b["primes"]), tuple(b["target"]), b["c"], b.get("preimage"))
                  for b in data["blocks"]]
        if kind == "affine":
            return BlockApproxProblem(n, blocks)
        r = int(var["r"])
        comps = var["map"]
        num = tuple(_poly_from(c["num"] if isinstance(c, dict) else c, r) for c in comps)
        den = tuple(_poly_from(c.get("den", ["1"]), r) if isinstance(c, dict) else Poly.constant(1, r)
                    for c in comps)
        eqs = [_poly_from(e, n) for e in var.get("equations", [])]
        return BlockApproxProblem(n, blocks, "parametrized", eqs, RationalMap(num, den))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidProblem):
            raise
        raise InvalidProblem(f"malformed block approximation problem: {exc}") from exc


def problem_to_json(p: BlockApproxProblem) -> dict:
    blocks = []
    for b in p.blocks:
        d = {"primes": list(b.primes), "target": [str(x) for x in b.target], "c": str(b.c)}
        if b.preimage is not None:
            d["preimage"] = [str(x) for x in b.preimage]
        blocks.append(d)
    var: dict = {"kind": p.kind, "n": p.n}
    if p.kind == "parametrized":
        var["r"] = p.param.nvars
        var["map"] = [{"num": n.to_json(), "den": d.to_json()} for n, d in zip(p.param.num, p.param.den)]
        var["equations"] = [e.to_json() for e in p.equations]
    return {"variety": var, "blocks": blocks}
