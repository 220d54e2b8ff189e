"""Command line interface: one command per run, JSON records on stdout.

Exit status 0 means success, 1 an unsolvable problem or invalid object
(the record carries the witness), 2 malformed input or usage.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import is_dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import blockapprox, fileio, hensel, padic, uniform
from .embedding import EmbeddingProblem, UNSOLVABLE, is_solution, solve_embedding
from .errors import InvalidProblem, MalformedInput, StructvalError
from .extension import complete_to_cartesian, extend_epimorphism
from .groups import GroupHom, Subgroup, is_normal, subgroup_closure
from .partitions import special_partition, validate_special_partition
from .polynomial import Poly
from .structures import (GroupStructure, StructureMorphism, check_cartesian, classify_morphism,
                         fiber_product, quotient_structure, validate_structure)


class Failure(Exception):
    """A completed run whose answer is negative (exit 1)."""

    def __init__(self, record: dict):
        super().__init__(record.get("message", ""))
        self.record = record


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Subgroup):
        return list(o.members)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, float) and math.isinf(o):
        return "inf"
    if isinstance(o, (set, frozenset)):
        return sorted(o, key=str)
    if hasattr(o, "as_dict"):
        return o.as_dict()
    if is_dataclass(o):
        return {k: v for k, v in o.__dict__.items()}
    return str(o)


def _clean(o):
    """Turn infinities into strings so the output is strict JSON."""
    if isinstance(o, float) and math.isinf(o):
        return "inf"
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def emit(record: dict, out=None) -> None:
    out = out or sys.stdout
    text = json.dumps(record, default=_jsonable)
    out.write(json.dumps(_clean(json.loads(text))) + "\n")


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _rats(text: str) -> list[Fraction]:
    return [Fraction(t) for t in text.replace(",", " ").split()]


def _mdump(f: StructureMorphism) -> dict:
    return {"source": fileio.structure_to_text(f.source), "target": fileio.structure_to_text(f.target),
            **fileio.morphism_to_dict(f)}


def _mload(d: dict) -> StructureMorphism:
    S = fileio.parse_structure(d["source"])
    T = fileio.parse_structure(d["target"])
    return fileio.morphism_from_dict(d, S, T)


def _same_target(f: StructureMorphism, g: StructureMorphism) -> StructureMorphism:
    """Rebuild g over f's target object so identity checks between loaded copies succeed."""
    return StructureMorphism(g.source, f.target, GroupHom(g.source.group, f.target.group, g.hom.map),
                             g.pointmap)


# -------------------------------------------------------------- commands

def cmd_check_structure(args) -> dict:
    text = Path(args.file).read_text()
    S = fileio.parse_structure(text, source=args.file, check=False)
    rep = validate_structure(S)
    rec = {"kind": "check-structure", "structure": text, "valid": rep.valid, "proper": rep.proper,
           "delta_injective": rep.delta_injective, "stabilizers_equal": rep.stabilizers_equal,
           "violations": [v.as_dict() for v in rep.violations]}
    if not rep.valid:
        raise Failure(rec)
    return rec


def _normality_witness(N):
    G = N.parent
    for g in G.generators:
        for n in N:
            if G.conj(n, g) not in N.memberset:
                return {"n": n, "g": g}
    return None


def cmd_quotient(args) -> dict:
    S = fileio.read_structure(args.file)
    N = subgroup_closure(S.group, _ints(args.normal))
    if not is_normal(N):
        raise Failure({"kind": "quotient", "normal": False, "structure": fileio.structure_to_text(S),
                       "subgroup": list(N.members), "witness": _normality_witness(N)})
    Q, q = quotient_structure(S, N)
    cls = classify_morphism(q)
    return {"kind": "quotient", "normal_subgroup": list(N.members), "map": _mdump(q),
            "npoints": Q.npoints, "order": Q.group.order, "is_cover": cls.is_cover}


def cmd_fiber_product(args) -> dict:
    alpha, phi = fileio.read_morphism(args.alpha), fileio.read_morphism(args.phi)
    fp = fiber_product(alpha, phi)
    return {"kind": "fiber-product", "alpha": _mdump(alpha), "phi": _mdump(phi),
            "beta": _mdump(fp.beta), "psi": _mdump(fp.psi),
            "order": fp.structure.group.order, "npoints": fp.structure.npoints,
            "elements": fp.elements, "points": fp.points}


def _cartesian_record(alpha, phi, beta, psi) -> tuple[bool, dict]:
    ok, _ = check_cartesian(alpha, phi, beta, psi)
    return ok, {"alpha": _mdump(alpha), "phi": _mdump(phi), "beta": _mdump(beta), "psi": _mdump(psi),
                "cartesian": ok}


def cmd_cartesian_check(args) -> dict:
    ms = [fileio.read_morphism(p) for p in (args.alpha, args.phi, args.beta, args.psi)]
    ok, rec = _cartesian_record(*ms)
    rec["kind"] = "cartesian-check"
    if not ok:
        raise Failure(rec)
    return rec


def _partition_dict(P) -> list:
    return [{"subgroup": list(b.subgroup.members), "points": list(b.points), "reps": list(b.reps),
             "base": b.base} for b in P.blocks]


def cmd_partition(args) -> dict:
    text = Path(args.file).read_text()
    S = fileio.parse_structure(text, source=args.file)
    P = special_partition(S, pins=_ints(args.pins or ""))
    rep = validate_special_partition(S, P)
    rec = {"kind": "partition", "structure": text, "blocks": _partition_dict(P), "ok": rep.ok,
           "violations": [list(map(str, v)) for v in rep.violations]}
    if not rep.ok:
        raise Failure(rec)
    return rec


def cmd_extend_epi(args) -> dict:
    S = fileio.read_structure(args.file)
    A = fileio.read_structure(args.group).group
    phi = GroupHom(S.group, A, _ints(args.map))
    ext = extend_epimorphism(S, phi, pins=_ints(args.pins or ""))
    cls = classify_morphism(ext.morphism)
    return {"kind": "extend-epi", "map": _mdump(ext.morphism), "group_map": phi.map.tolist(),
            "classification": cls.as_dict(), "blocks": _partition_dict(ext.partition),
            "labels": ext.labels}


def cmd_complete_cartesian(args) -> dict:
    psi = fileio.read_morphism(args.file)
    sq = complete_to_cartesian(psi)
    ok, rec = _cartesian_record(sq.alpha, sq.phi, sq.beta, sq.psi)
    rec.update(kind="complete-cartesian", kernel=list(sq.N.members),
               alpha_is_cover=classify_morphism(sq.alpha).is_cover)
    if not (ok and rec["alpha_is_cover"]):
        raise Failure(rec)
    return rec


def _problem_dict(ep: EmbeddingProblem) -> dict:
    return {"phi": _mdump(ep.phi), "alpha": _mdump(ep.alpha)}


def _problem_load(d: dict) -> EmbeddingProblem:
    phi = _mload(d["phi"])
    alpha = _same_target(phi, _mload(d["alpha"]))
    return EmbeddingProblem(phi, alpha)


def cmd_solve_embedding(args) -> dict:
    ep = fileio.read_embedding_problem(args.file)
    routes = ["direct", "factored"] if args.route == "both" else [args.route]
    answers = {r: solve_embedding(ep, r) for r in routes}
    solvable = {r: bool(g) for r, g in answers.items()}
    if len(set(solvable.values())) > 1:
        raise AssertionError(f"routes disagree: {solvable}")
    rec = {"kind": "solve-embedding", "problem": _problem_dict(ep), "routes": routes,
           "solvable": all(solvable.values())}
    gamma = answers[routes[0]]
    if gamma is UNSOLVABLE:
        raise Failure(rec)
    rec["gamma"] = fileio.morphism_to_dict(gamma)
    return rec


def cmd_build_cover(args) -> dict:
    from .covers import build_special_cover
    spec = json.loads(Path(args.file).read_text())
    base = Path(args.file).parent
    S = fileio.read_structure(base / spec["structure"])
    H = fileio.read_structure(base / spec["group"]).group
    pi = GroupHom(H, S.group, spec["pi"])
    P = special_partition(S, pins=spec.get("pins", []))
    lifts = [subgroup_closure(H, gens) for gens in spec["lifts"]]
    sc = build_special_cover(S, P, pi, lifts)
    cls = classify_morphism(sc.cover)
    return {"kind": "build-cover", "map": _mdump(sc.cover), "pi": list(pi.map.tolist()),
            "lifts": [list(h.members) for h in lifts], "sections": sc.sections,
            "criterion": sc.criterion, "proper": sc.proper, "is_cover": cls.is_cover}


def _point(prime: int) -> padic.ValuationPoint:
    return padic.ValuationPoint(prime or None)


def _val_query(prime, expr=None, sign=None, value=None, form=None, prec=10) -> dict:
    v = _point(prime)
    rec = {"kind": "val-query", "prime": prime}
    if expr is not None:
        rec["expr"] = expr
        rec["member"] = padic.eval_patch(v, padic.parse_patch(expr))
    if sign is not None:
        rec["sign_of"] = sign
        rec["sign"] = padic.sign_vector(v, _rats(sign))
    if value is not None:
        rec["value"] = value
        rec["valuation"] = v(Fraction(value))
    if form is not None:
        if not prime:
            raise MalformedInput("--henselian-form needs a prime")
        res = padic.check_henselian_form(_rats(form), prime, prec)
        rec.update(form=form, precision=prec, holds=res.holds, reason=res.reason,
                   root=None if res.root is None else res.root.mod())
    return rec


def cmd_val_query(args) -> dict:
    if args.expr is None and args.sign is None and args.value is None and args.henselian_form is None:
        raise MalformedInput("val-query needs --expr, --sign, --value or --henselian-form")
    return _val_query(args.prime, args.expr, args.sign, args.value, args.henselian_form, args.prec)


def _parse_poly(text: str, nvars: int) -> Poly:
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
        if data and isinstance(data[0], list):
            return Poly.from_json(data, nvars)
        return Poly.from_dense([Fraction(str(c)) for c in data], nvars, var=nvars - 1)
    return Poly.from_dense(_rats(text), nvars, var=nvars - 1)


def _hensel_record(prime, poly, c0, base, at, eps, prec) -> dict:
    b0 = _rats(base) if base else []
    b = _rats(at) if at else b0
    f = _parse_poly(poly, len(b0) + 1)
    lp = hensel.LiftProblem(f, tuple(b0), Fraction(c0), prime, eps, prec)
    res = hensel.sharp_hensel_lift(lp, b)
    return {"kind": "hensel-lift", "prime": prime, "poly": f.to_json(), "nvars": f.nvars,
            "seed": str(lp.c0), "base": [str(x) for x in b0], "at": [str(x) for x in b],
            "eps": eps, "prec": prec, "residue": res.residue, "digits": res.digits(),
            "exact": res.exact, "delta": res.delta, "dist_to_seed": res.dist_to_seed,
            "fprime_val": res.fprime_val, "newton_valuations": res.iterations}


def cmd_hensel_lift(args) -> dict:
    return _hensel_record(args.prime, args.poly, args.seed, args.base, args.at, args.eps, args.prec)


def _ball_from_spec(spec: dict):
    a = [Fraction(x) for x in spec["a"]]
    atoms = [(Fraction(at["c"]), Poly.from_json(at["f"], len(a))) for at in spec["atoms"]]
    return a, atoms, [int(q) for q in spec["primes"]]


def cmd_ball_partition(args) -> dict:
    spec = json.loads(Path(args.file).read_text())
    a, atoms, primes = _ball_from_spec(spec)
    bp = uniform.ball_partition(a, atoms, primes)
    chk = uniform.verify_ball_partition(bp, samples=args.samples)
    rec = {"kind": "ball-partition", "spec": spec, "parts": [p.as_dict() for p in bp.parts],
           "ok": chk.ok, "disjoint": chk.disjoint, "covers": chk.covers, "failures": chk.failures[:5]}
    if not chk.ok:
        raise Failure(rec)
    return rec


def cmd_block_approx(args) -> dict:
    data = json.loads(Path(args.file).read_text())
    prob = blockapprox.problem_from_json(data)
    cert = blockapprox.solve(prob)
    return {"kind": "block-approx", "problem": blockapprox.problem_to_json(prob), **cert.as_dict()}


# ---------------------------------------------------------------- verify

def _verify(rec: dict) -> tuple[bool, str]:
    kind = rec.get("kind")
    if kind == "check-structure":
        S = fileio.parse_structure(rec["structure"], check=False)
        rep = validate_structure(S)
        return rep.valid == rec["valid"] and rep.proper == rec["proper"], "revalidated structure"
    if kind == "quotient" and rec.get("normal") is False:
        S = fileio.parse_structure(rec["structure"])
        n, g = rec["witness"]["n"], rec["witness"]["g"]
        ok = n in rec["subgroup"] and S.group.conj(n, g) not in rec["subgroup"]
        return ok, "conjugate of a subgroup element leaves the subgroup"
    if kind == "quotient":
        q = _mload(rec["map"])
        cls = classify_morphism(q)
        ok = cls.is_epimorphism and list(q.hom.kernel.members) == rec["normal_subgroup"]
        return ok and cls.is_cover == rec["is_cover"], "quotient map is an epimorphism with the stated kernel"
    if kind in ("fiber-product", "cartesian-check", "complete-cartesian"):
        alpha, phi = _mload(rec["alpha"]), None
        phi = _same_target(alpha, _mload(rec["phi"]))
        beta = _mload(rec["beta"])
        beta = StructureMorphism(beta.source, alpha.source,
                                 GroupHom(beta.source.group, alpha.source.group, beta.hom.map), beta.pointmap)
        psi = _mload(rec["psi"])
        psi = StructureMorphism(beta.source, phi.source,
                                GroupHom(beta.source.group, phi.source.group, psi.hom.map), psi.pointmap)
        ok, _ = check_cartesian(alpha, phi, beta, psi)
        want = rec.get("cartesian", True)
        if kind == "complete-cartesian":
            ok = ok and classify_morphism(alpha).is_cover
        return ok == want, "square rechecked against the fiber product"
    if kind == "partition":
        from .partitions import Block, SpecialPartition
        S = fileio.parse_structure(rec["structure"])
        P = SpecialPartition([Block(Subgroup(S.group, tuple(b["subgroup"])), tuple(b["points"]),
                                    tuple(b["reps"]), b["base"]) for b in rec["blocks"]])
        return validate_special_partition(S, P).ok == rec["ok"], "partition clauses rechecked"
    if kind == "extend-epi":
        f = _mload(rec["map"])
        cls = classify_morphism(f)
        return cls.is_epimorphism and f.hom.map.tolist() == rec["group_map"], "epimorphism rechecked"
    if kind == "solve-embedding":
        ep = _problem_load(rec["problem"])
        if rec["solvable"]:
            gamma = fileio.morphism_from_dict(rec["gamma"], ep.phi.source, ep.alpha.source)
            return is_solution(ep, gamma), "alpha o gamma = phi rechecked"
        return solve_embedding(ep, "direct") is UNSOLVABLE, "unsolvability rechecked by exhaustive search"
    if kind == "build-cover":
        f = _mload(rec["map"])
        return classify_morphism(f).is_cover == rec["is_cover"], "cover rechecked"
    if kind == "val-query":
        again = _val_query(rec["prime"], rec.get("expr"), rec.get("sign_of"), rec.get("value"),
                           rec.get("form"), rec.get("precision", 10))
        return _clean(json.loads(json.dumps(again, default=_jsonable))) == _clean(
            {k: rec[k] for k in again}), "recomputed"
    if kind == "hensel-lift":
        p, N, eps, delta = rec["prime"], rec["prec"], rec["eps"], rec["delta"]
        f = Poly.from_json(rec["poly"], rec["nvars"])
        b = [Fraction(x) for x in rec["at"]]
        r = rec["residue"]
        bi = [padic.reduce_mod(x, p, N + delta) for x in b]
        fr = f.eval_mod(bi + [r], p, N + delta)
        fp = f.derivative(f.nvars - 1).eval_mod(bi + [r], p, N + delta)
        wfp = N + delta if fp == 0 else padic._int_val(fp, p)
        dist = (r - padic.reduce_mod(Fraction(rec["seed"]), p, N)) % p ** N
        wdist = N if dist == 0 else padic._int_val(dist, p)
        ok = fr == 0 and wfp == delta and wdist > eps
        return ok, "f(b, c) = 0 mod p^(N+delta), w(f'(b,c)) = delta and w(c - c0) > eps rechecked"
    if kind == "ball-partition":
        a, atoms, primes = _ball_from_spec(rec["spec"])
        bp = uniform.BallPartition(tuple(a), atoms, tuple(sorted(set(primes))))
        for part in rec["parts"]:
            c = Fraction(part["radius"])
            bp.parts.append(uniform.BallPart(tuple(part["primes"]), part["anchor"], c,
                                             uniform.local_choice(a, atoms, part["anchor"])))
        return uniform.verify_ball_partition(bp).ok == rec["ok"], "sampled ball points rechecked"
    if kind == "block-approx":
        prob = blockapprox.problem_from_json(rec["problem"])
        cert = blockapprox.verify_solution(prob, [Fraction(x) for x in rec["point"]])
        return cert.accepted == rec["accepted"], "margins and residuals rechecked"
    raise MalformedInput(f"unknown certificate kind {kind!r}")


def cmd_verify(args) -> dict:
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    results = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not JSON: {exc}", n, args.file) from exc
        ok, how = _verify(rec)
        results.append({"line": n, "kind": rec.get("kind"), "ok": ok, "check": how})
    out = {"kind": "verify", "ok": all(r["ok"] for r in results), "records": results}
    if not out["ok"]:
        raise Failure(out)
    return out


COMMANDS = {
    "check-structure": cmd_check_structure,
    "quotient": cmd_quotient,
    "fiber-product": cmd_fiber_product,
    "cartesian-check": cmd_cartesian_check,
    "partition": cmd_partition,
    "extend-epi": cmd_extend_epi,
    "complete-cartesian": cmd_complete_cartesian,
    "solve-embedding": cmd_solve_embedding,
    "build-cover": cmd_build_cover,
    "val-query": cmd_val_query,
    "hensel-lift": cmd_hensel_lift,
    "ball-partition": cmd_ball_partition,
    "block-approx": cmd_block_approx,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="structval", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-structure", help="validate a structure file")
    p.add_argument("file")
    p = sub.add_parser("quotient", help="quotient by a normal subgroup")
    p.add_argument("file")
    p.add_argument("--normal", required=True, help="generators of N, e.g. '3 4'")
    p = sub.add_parser("fiber-product", help="fiber product of two morphisms with a common target")
    p.add_argument("alpha")
    p.add_argument("phi")
    p = sub.add_parser("cartesian-check", help="is beta/psi the fiber product of alpha/phi")
    for name in ("alpha", "phi", "beta", "psi"):
        p.add_argument(name)
    p = sub.add_parser("partition", help="special partition of a structure")
    p.add_argument("file")
    p.add_argument("--pins", help="points that must be block base points")
    p = sub.add_parser("extend-epi", help="extend a surjective group map to a structure epimorphism")
    p.add_argument("file")
    p.add_argument("group", help="structure file whose group is the target group")
    p.add_argument("--map", required=True, help="images of the group elements")
    p.add_argument("--pins")
    p = sub.add_parser("complete-cartesian", help="complete a cover to a cartesian square")
    p.add_argument("file", help="morphism file of the cover")
    p = sub.add_parser("solve-embedding", help="solve an embedding problem")
    p.add_argument("file")
    p.add_argument("--route", choices=["direct", "factored", "both"], default="direct")
    p = sub.add_parser("build-cover", help="special cover from a JSON specification")
    p.add_argument("file")
    p = sub.add_parser("val-query", help="valuations, patch sets and sign vectors over Q")
    p.add_argument("--prime", type=int, default=0, help="0 for the trivial valuation")
    p.add_argument("--expr", help="patch expression, e.g. \"Val(7) & ~Val'(1/3)\"")
    p.add_argument("--sign", help="rationals for the sign vector")
    p.add_argument("--value", help="a rational whose valuation is reported")
    p.add_argument("--henselian-form", help="coefficients, low degree first")
    p.add_argument("--prec", type=int, default=10)
    p = sub.add_parser("hensel-lift", help="sharp Hensel lift of a root")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--poly", required=True, help="coefficients in X, low first, or JSON terms")
    p.add_argument("--seed", required=True, help="approximate root c0")
    p.add_argument("--base", default="", help="base point b0")
    p.add_argument("--at", default="", help="point b (defaults to b0)")
    p.add_argument("--eps", type=int, default=0)
    p.add_argument("--prec", type=int, default=10)
    p = sub.add_parser("ball-partition", help="balls inside a basic neighborhood")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=100)
    p = sub.add_parser("block-approx", help="solve a block approximation problem")
    p.add_argument("file")
    p = sub.add_parser("verify", help="recheck certificates (JSON lines, '-' for stdin)")
    p.add_argument("file")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        emit(COMMANDS[args.command](args))
        return 0
    except Failure as f:
        emit(f.record)
        return 1
    except (MalformedInput, InvalidProblem, json.JSONDecodeError, FileNotFoundError,
            ValueError, KeyError, IndexError) as exc:
        print(f"structval: {exc}", file=sys.stderr)
        return 2
    except StructvalError as exc:
        rec = {"kind": args.command, "error": type(exc).__name__, "message": str(exc),
               "witness": exc.witness}
        if getattr(exc, "clause", None) is not None:
            rec["clause"] = exc.clause
        emit(rec)
        print(f"structval: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
