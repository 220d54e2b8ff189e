"""Text formats for group structures, morphisms and embedding problems.

Structure files::

    # comments run to end of line
    group S3 order 6
    <6 rows of 6 indices: row a lists a*b for b = 0..5>
    points 3
    <3 rows of 6 indices: row x lists x^g for g = 0..5>
    delta
    <3 rows: the members of G_x>

``points`` and ``delta`` may be omitted for a structure with no points.

Morphism files name their source and target structure files (paths relative
to the morphism file) and give the group map and the point map::

    morphism
    source s3_sylow.txt
    target z2_point.txt
    hom 0 1 1 0 0 1
    points 0 0 0

Embedding problem files name three structure files and two maps::

    embedding
    source g.txt
    target a.txt
    cover b.txt
    phi-hom ...
    phi-points ...
    alpha-hom ...
    alpha-points ...
"""
from __future__ import annotations

import re
from pathlib import Path

from .errors import InvalidGroup, MalformedInput
from .groups import FiniteGroup, GroupHom
from .structures import GroupStructure, StructureMorphism


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def _ints(tokens, lineno, source, lo=None, hi=None):
    out = []
    for t in tokens:
        if not re.fullmatch(r"\d+", t):
            raise MalformedInput(f"expected a nonnegative integer, got {t!r}", lineno, source)
        v = int(t)
        if hi is not None and v >= hi:
            raise MalformedInput(f"index {v} out of range 0..{hi - 1}", lineno, source)
        out.append(v)
    return out


def parse_group(lines, source=None) -> tuple[FiniteGroup, int]:
    """Read the ``group`` header and table; return the group and lines consumed."""
    if not lines:
        raise MalformedInput("empty input, expected 'group <name> order <n>'", 1, source)
    n0, head = lines[0]
    if len(head) != 4 or head[0] != "group" or head[2] != "order":
        raise MalformedInput("expected 'group <name> order <n>'", n0, source)
    order = _ints([head[3]], n0, source)[0]
    if order < 1:
        raise MalformedInput("group order must be positive", n0, source)
    if len(lines) < 1 + order:
        raise MalformedInput(f"expected {order} table rows", lines[-1][0], source)
    rows = []
    for ln, toks in lines[1:1 + order]:
        if len(toks) != order:
            raise MalformedInput(f"table row has {len(toks)} entries, expected {order}", ln, source)
        rows.append(_ints(toks, ln, source, hi=order))
    try:
        G = FiniteGroup(rows, name=head[1])
    except InvalidGroup as exc:
        raise MalformedInput(f"invalid group table: {exc}", n0, source) from exc
    return G, 1 + order


def parse_structure(text: str, source=None, check: bool = True) -> GroupStructure:
    lines = list(_lines(text))
    G, used = parse_group(lines, source)
    rest = lines[used:]
    if not rest:
        return GroupStructure(G, [], [], check=check)
    ln, head = rest[0]
    if len(head) != 2 or head[0] != "points":
        raise MalformedInput("expected 'points <m>'", ln, source)
    m = _ints([head[1]], ln, source)[0]
    if len(rest) < 1 + m:
        raise MalformedInput(f"expected {m} action rows", rest[-1][0], source)
    action = []
    for ln2, toks in rest[1:1 + m]:
        if len(toks) != G.order:
            raise MalformedInput(f"action row has {len(toks)} entries, expected {G.order}", ln2, source)
        action.append(_ints(toks, ln2, source, hi=m))
    tail = rest[1 + m:]
    if m == 0 and not tail:
        return GroupStructure(G, [], [], check=check)
    if not tail or tail[0][1] != ["delta"]:
        raise MalformedInput("expected 'delta'", tail[0][0] if tail else rest[-1][0], source)
    rows = tail[1:]
    if len(rows) != m:
        where = rows[m][0] if len(rows) > m else tail[0][0]
        raise MalformedInput(f"expected {m} delta rows, found {len(rows)}", where, source)
    delta = [_ints(toks, ln3, source, hi=G.order) for ln3, toks in rows]
    return GroupStructure(G, action, delta, check=check)


def group_to_text(G: FiniteGroup) -> str:
    name = re.sub(r"\s+", "_", G.name) or "G"
    out = [f"group {name} order {G.order}"]
    out += [" ".join(map(str, row)) for row in G.table.tolist()]
    return "\n".join(out) + "\n"


def structure_to_text(S: GroupStructure) -> str:
    out = [group_to_text(S.group).rstrip("\n"), f"points {S.npoints}"]
    out += [" ".join(map(str, row)) for row in S.action.tolist()]
    out.append("delta")
    out += [" ".join(map(str, d.members)) for d in S.delta]
    return "\n".join(out) + "\n"


def read_structure(path, check: bool = True) -> GroupStructure:
    p = Path(path)
    return parse_structure(p.read_text(), source=str(p), check=check)


def _keyed(text: str, header: str, source):
    lines = list(_lines(text))
    if not lines or lines[0][1] != [header]:
        raise MalformedInput(f"expected '{header}' on the first line", lines[0][0] if lines else 1, source)
    out = {}
    for ln, toks in lines[1:]:
        if toks[0] in out:
            raise MalformedInput(f"duplicate key {toks[0]!r}", ln, source)
        out[toks[0]] = (ln, toks[1:])
    return out


def _need(keys, name, source):
    if name not in keys:
        raise MalformedInput(f"missing '{name}' line", None, source)
    return keys[name]


def _map_from(keys, prefix, S: GroupStructure, T: GroupStructure, source) -> StructureMorphism:
    ln, toks = _need(keys, f"{prefix}hom", source)
    if len(toks) != S.group.order:
        raise MalformedInput(f"hom has {len(toks)} entries, expected {S.group.order}", ln, source)
    hom = _ints(toks, ln, source, hi=T.group.order)
    ln2, toks2 = keys.get(f"{prefix}points", (ln, []))
    if len(toks2) != S.npoints:
        raise MalformedInput(f"point map has {len(toks2)} entries, expected {S.npoints}", ln2, source)
    pts = _ints(toks2, ln2, source, hi=max(T.npoints, 1))
    return StructureMorphism(S, T, GroupHom(S.group, T.group, hom), pts)


def _ref(keys, name, base: Path, source, cache: dict) -> GroupStructure:
    ln, toks = _need(keys, name, source)
    if len(toks) != 1:
        raise MalformedInput(f"'{name}' takes one path", ln, source)
    p = (base / toks[0]).resolve()
    if p not in cache:
        if not p.exists():
            raise MalformedInput(f"no such file {toks[0]!r}", ln, source)
        cache[p] = read_structure(p)
    return cache[p]


def parse_morphism(text: str, base=".", source=None) -> StructureMorphism:
    keys = _keyed(text, "morphism", source)
    cache: dict = {}
    S = _ref(keys, "source", Path(base), source, cache)
    T = _ref(keys, "target", Path(base), source, cache)
    return _map_from(keys, "", S, T, source)


def read_morphism(path) -> StructureMorphism:
    p = Path(path)
    return parse_morphism(p.read_text(), base=p.parent, source=str(p))


def parse_embedding_problem(text: str, base=".", source=None):
    from .embedding import EmbeddingProblem
    keys = _keyed(text, "embedding", source)
    cache: dict = {}
    G = _ref(keys, "source", Path(base), source, cache)
    A = _ref(keys, "target", Path(base), source, cache)
    B = _ref(keys, "cover", Path(base), source, cache)
    phi = _map_from(keys, "phi-", G, A, source)
    alpha = _map_from(keys, "alpha-", B, A, source)
    return EmbeddingProblem(phi, alpha)


def read_embedding_problem(path):
    p = Path(path)
    return parse_embedding_problem(p.read_text(), base=p.parent, source=str(p))


def morphism_to_dict(f: StructureMorphism) -> dict:
    return {"hom": f.hom.map.tolist(), "points": [int(x) for x in f.pointmap]}


def morphism_from_dict(d: dict, S: GroupStructure, T: GroupStructure) -> StructureMorphism:
    return StructureMorphism(S, T, GroupHom(S.group, T.group, d["hom"]), d["points"])


def write_problem_files(ep, directory, stem: str = "problem") -> Path:
    """Write the three structures and the problem file; returns the problem path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = {}
    for role, S in (("source", ep.phi.source), ("target", ep.phi.target), ("cover", ep.alpha.source)):
        names[role] = f"{stem}_{role}.txt"
        (d / names[role]).write_text(structure_to_text(S))
    lines = ["embedding"] + [f"{r} {n}" for r, n in names.items()]
    for prefix, f in (("phi-", ep.phi), ("alpha-", ep.alpha)):
        m = morphism_to_dict(f)
        lines.append(f"{prefix}hom " + " ".join(map(str, m["hom"])))
        lines.append(f"{prefix}points " + " ".join(map(str, m["points"])))
    path = d / f"{stem}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def morphism_to_text(f: StructureMorphism, source: str, target: str) -> str:
    m = morphism_to_dict(f)
    return (f"morphism\nsource {source}\ntarget {target}\n"
            f"hom {' '.join(map(str, m['hom']))}\npoints {' '.join(map(str, m['points']))}\n")


def write_morphism_files(f: StructureMorphism, directory, stem: str = "morphism",
                         source: str | None = None, target: str | None = None) -> Path:
    """Write the morphism file, plus its source and target unless existing names are given."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    if source is None:
        source = f"{stem}_source.txt"
        (d / source).write_text(structure_to_text(f.source))
    if target is None:
        target = f"{stem}_target.txt"
        (d / target).write_text(structure_to_text(f.target))
    path = d / f"{stem}.txt"
    path.write_text(morphism_to_text(f, source, target))
    return path
