"""Text formats, named generators, and reproducible JSON reports.

The canonical graph format is an edge list: first line "n m", then m lines
"u v" (0-based, space-separated, LF).  Lines may carry '#' comments.  It is
the format everything hashes and round-trips through.  A DOT-subset reader
(digraph blocks with `a -> b;` statements) is provided for input only.
Partitions are n lines of 0/1, line i giving the block of vertex i.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .digraph import Digraph, Partition

VERSION = "0.1.0"

STATUS_OK = "ok"
STATUS_NEGATIVE = "negative"
STATUS_ERROR = "error"


def serialize_edge_list(g: Digraph) -> str:
    lines = [f"{g.n} {g.edge_count()}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Digraph:
    n = m = 0
    edges = []
    seen = set()
    header_done = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header_done:
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected header 'n m'")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"line {lineno}: header values must be integers") from None
            if n < 0 or m < 0:
                raise ValueError(f"line {lineno}: header values must be nonnegative")
            header_done = True
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: edge endpoints must be integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"line {lineno}: vertex out of range 0..{n - 1}")
        if u == v:
            raise ValueError(f"line {lineno}: self-loop at vertex {u}")
        if (u, v) in seen:
            raise ValueError(f"line {lineno}: duplicate edge {u}->{v}")
        seen.add((u, v))
        edges.append((u, v))
    if not header_done:
        raise ValueError("empty input: missing 'n m' header")
    if len(edges) != m:
        raise ValueError(f"header promised {m} edges, found {len(edges)}")
    rows = [[] for _ in range(n)]
    for u, v in edges:
        rows[u].append(v)
    return Digraph.from_out_lists(n, rows)


def serialize_partition(p: Partition) -> str:
    return "".join(f"{b}\n" for b in p.block)


def parse_partition(text: str, n: int) -> Partition:
    bits = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line not in ("0", "1"):
            raise ValueError(f"line {lineno}: expected 0 or 1, got {line!r}")
        bits.append(int(line))
    if len(bits) != n:
        raise ValueError(f"expected {n} block values, found {len(bits)}")
    return Partition(tuple(bits))


@dataclass(frozen=True)
class GraphDocument:
    """A named digraph plus free-form metadata; digest is the content hash
    of the canonical edge-list text."""

    name: str
    graph: Digraph
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def edges(self):
        return list(self.graph.edges())

    @property
    def text(self) -> str:
        return serialize_edge_list(self.graph)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode("ascii")).hexdigest()


_DOT_HEADER = re.compile(r"^\s*(?:strict\s+)?digraph\s*([A-Za-z_][\w]*|\"[^\"]*\")?\s*\{", re.S)


def parse_dot(text: str) -> GraphDocument:
    """Input-only DOT subset: an optional name, then `a -> b -> c;`
    statements.  Attribute lists are ignored.  Integer node names that form
    a dense 0..n-1 set keep their values; otherwise vertices are numbered by
    first appearance."""
    stripped = re.sub(r"/\*.*?\*/", " ", text, flags=re.S)
    stripped = re.sub(r"//[^\n]*", " ", stripped)
    head = _DOT_HEADER.match(stripped)
    if not head:
        raise ValueError("expected 'digraph NAME {'")
    name = (head.group(1) or "dot").strip('"') or "dot"
    body = stripped[head.end():]
    close = body.rfind("}")
    if close < 0:
        raise ValueError("missing closing '}'")
    body = body[:close]
    body = re.sub(r"\[[^\]]*\]", " ", body)

    names = []
    index = {}

    def intern(token: str) -> str:
        token = token.strip().strip('"')
        if not token:
            raise ValueError("empty node name in edge statement")
        if token not in index:
            index[token] = len(names)
            names.append(token)
        return token

    raw_edges = []
    for stmt in re.split(r"[;\n]", body):
        stmt = stmt.strip()
        if not stmt or stmt in ("graph", "node", "edge") or "=" in stmt:
            continue
        if "->" not in stmt:
            intern(stmt)
            continue
        chain = [intern(t) for t in stmt.split("->")]
        for a, b in zip(chain, chain[1:]):
            raw_edges.append((a, b))

    n = len(names)
    dense = False
    if n and all(re.fullmatch(r"\d+", t) for t in names):
        values = sorted(int(t) for t in names)
        dense = values == list(range(n))
    ident = {t: int(t) for t in names} if dense else index
    rows = [[] for _ in range(n)]
    for a, b in raw_edges:
        u, v = ident[a], ident[b]
        if u == v:
            raise ValueError(f"self-loop at node {a!r}")
        if v in rows[u]:
            raise ValueError(f"duplicate edge {a!r} -> {b!r}")
        rows[u].append(v)
    return GraphDocument(name=name, graph=Digraph(n, rows))


# ---- named generators ----

def _cycle(n: int) -> Digraph:
    if n < 2:
        raise ValueError(f"cycle needs at least 2 vertices, got {n}")
    return Digraph.from_out_lists(n, [[(v + 1) % n] for v in range(n)])


def _complete(n: int) -> Digraph:
    if n < 1:
        raise ValueError(f"complete needs at least 1 vertex, got {n}")
    return Digraph.from_out_lists(n, [[w for w in range(n) if w != v] for v in range(n)])


def _circulant(n: int, offsets) -> Digraph:
    if n < 2:
        raise ValueError(f"circulant needs at least 2 vertices, got {n}")
    mods = [s % n for s in offsets]
    if not mods:
        raise ValueError("circulant needs at least one offset")
    if 0 in mods:
        raise ValueError("offset 0 (mod n) would be a self-loop")
    if len(set(mods)) != len(mods):
        raise ValueError("offsets coincide mod n")
    offs = sorted(mods)
    return Digraph.from_out_lists(
        n, [sorted((v + s) % n for s in offs) for v in range(n)]
    )


def _disjoint_union(parts) -> Digraph:
    rows = []
    shift = 0
    for g in parts:
        rows.extend([h + shift for h in row] for row in g.out_adj)
        shift += g.n
    return Digraph.from_out_lists(shift, rows)


GENERATOR_KINDS = (
    "cycle",
    "complete",
    "circulant",
    "random_d_out",
    "lemma46_left",
    "lemma46_right",
    "disjoint_union",
)


def generate(kind: str, params=(), seed: int = 0) -> Digraph:
    """Build a named digraph family member; errors on infeasible params.
    random_d_out is deterministic per seed."""
    from .engine import sample_d_out_digraph
    from .extremal import fully_dominated_cubic

    if kind == "cycle":
        (n,) = params
        return _cycle(n)
    if kind == "complete":
        (n,) = params
        return _complete(n)
    if kind == "circulant":
        n, offsets = params
        return _circulant(n, offsets)
    if kind == "random_d_out":
        n, d = params
        if not 0 <= d <= n - 1:
            raise ValueError(f"out-degree {d} infeasible on {n} vertices")
        return sample_d_out_digraph(n, d, random.Random(seed))
    if kind == "lemma46_left":
        return fully_dominated_cubic("left")[0]
    if kind == "lemma46_right":
        return fully_dominated_cubic("right")[0]
    if kind == "disjoint_union":
        if not params:
            raise ValueError("disjoint_union needs at least one part")
        return _disjoint_union([generate(k, p, seed) for k, p in params])
    raise ValueError(f"unknown generator kind {kind!r}")


def parse_kindspec(spec: str) -> tuple:
    """Parse a compact generator spec into (kind, params).

    Forms: "cycle:6", "complete:5", "circulant:7:1,2,3",
    "random_d_out:10:3", "lemma46_left", "lemma46_right",
    "disjoint_union:cycle:3+complete:3".
    """
    kind, _, rest = spec.partition(":")
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    if kind in ("lemma46_left", "lemma46_right"):
        if rest:
            raise ValueError(f"{kind} takes no parameters")
        return kind, ()
    if kind == "disjoint_union":
        if not rest:
            raise ValueError("disjoint_union needs parts, e.g. cycle:3+cycle:4")
        return kind, tuple(parse_kindspec(part) for part in rest.split("+"))
    args = rest.split(":") if rest else []

    def as_int(s: str) -> int:
        try:
            return int(s)
        except ValueError:
            raise ValueError(f"expected an integer in spec {spec!r}, got {s!r}") from None

    if kind in ("cycle", "complete"):
        if len(args) != 1:
            raise ValueError(f"{kind} takes exactly one parameter, e.g. {kind}:6")
        return kind, (as_int(args[0]),)
    if kind == "circulant":
        if len(args) != 2:
            raise ValueError("circulant spec is circulant:n:s1,s2,...")
        return kind, (as_int(args[0]), tuple(as_int(s) for s in args[1].split(",")))
    if len(args) != 2:
        raise ValueError("random_d_out spec is random_d_out:n:d")
    return kind, (as_int(args[0]), as_int(args[1]))


def resolve_graph_arg(arg: str, seed: int = 0) -> GraphDocument:
    """Accept either a file path (edge list, or DOT when the name ends in
    .dot) or a generator spec like "cycle:6"."""
    if os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            text = fh.read()
        if arg.endswith(".dot"):
            doc = parse_dot(text)
            return GraphDocument(name=os.path.basename(arg), graph=doc.graph, metadata={"format": "dot"})
        return GraphDocument(name=os.path.basename(arg), graph=parse_edge_list(text))
    try:
        kind, params = parse_kindspec(arg)
    except ValueError as spec_err:
        if "/" in arg or arg.endswith(".txt") or arg.endswith(".dot"):
            raise ValueError(f"no such file: {arg}") from None
        raise ValueError(f"{arg!r} is neither a file nor a generator spec: {spec_err}") from None
    return GraphDocument(name=arg, graph=generate(kind, params, seed), metadata={"spec": arg})


def fraction_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class Report:
    """Reproducible record of one command run.  Replaying (input digest,
    seed, command) reproduces the results byte for byte; to_json is stable
    (sorted keys, rationals as "p/q" strings, no floats in result fields
    that acceptance checks read)."""

    command: str
    status: str
    results: dict
    input_digest: Optional[str] = None
    seed: Optional[int] = None
    error: Optional[dict] = None
    version: str = VERSION

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "status": self.status,
            "results": self.results,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "version": self.version,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def counterexample_dump(g: Digraph, proposition: str, detail: Optional[dict] = None) -> str:
    """Replayable record of a falsifying instance: commented header plus the
    canonical edge list (parse_edge_list reads it back unchanged)."""
    lines = [f"# COUNTEREXAMPLE: falsifies {proposition}"]
    for key in sorted(detail or {}):
        lines.append(f"# {key}: {json.dumps(detail[key], sort_keys=True)}")
    return "\n".join(lines) + "\n" + serialize_edge_list(g)
