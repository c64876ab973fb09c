"""The `dqd v1` surface file format.

Line oriented UTF-8 with `#` comments:

    dqd v1
    scalar exact-qsqrt2          # or: scalar f64 tol 1e-09
    polygon P0
      v 0+0r2 0+0r2
      v 1+0r2 0+0r2
      ...
    glue P0.0 P0.2 map negconj c 1+0r2 1+0r2

Exact scalars use the `p/q+r/sr2` literal syntax; float surfaces use plain
decimal literals.  Serialization applies a canonical ordering (polygons by
id, each gluing keyed by its lexicographically smaller edge) so that
emit -> parse -> emit is byte identical.
"""

from __future__ import annotations

from .scalars import format_scalar, parse_scalar
from .surface import EdgeRef, Gluing, GluingMap, Polygon, Surface, Vec

__all__ = ["dumps", "loads", "load", "dump"]


def _canonical_gluings(surface):
    out = []
    for g in surface.gluings:
        if (g.b.poly, g.b.edge) < (g.a.poly, g.a.edge):
            out.append(Gluing(g.b, g.a, g.m.inverse()))
        else:
            out.append(g)
    out.sort(key=lambda g: (g.a.poly, g.a.edge, g.b.poly, g.b.edge))
    return out


def dumps(surface: Surface, comments=()) -> str:
    lines = ["dqd v1"]
    for c in comments:
        lines.append(f"# {c}")
    if surface.ops.exact:
        lines.append("scalar exact-qsqrt2")
    else:
        lines.append(f"scalar f64 tol {surface.tol!r}")
    for pid in sorted(surface.polygons):
        poly = surface.polygons[pid]
        lines.append(f"polygon {pid}")
        for v in poly.vertices:
            lines.append(f"  v {format_scalar(v.x)} {format_scalar(v.y)}")
    for g in _canonical_gluings(surface):
        c = g.m.c
        lines.append(
            f"glue {g.a} {g.b} map {g.m.kind} c {format_scalar(c.x)} {format_scalar(c.y)}"
        )
    return "\n".join(lines) + "\n"


class ParseError(ValueError):
    def __init__(self, msg, line_no, col=1):
        super().__init__(f"line {line_no}, column {col}: {msg}")
        self.line_no = line_no
        self.col = col


def _edge_ref(token, line_no):
    pid, _, idx = token.rpartition(".")
    if not pid or not idx.isdigit():
        raise ParseError(f"bad edge reference {token!r}", line_no)
    return EdgeRef(pid, int(idx))


def loads(text: str) -> Surface:
    lines = text.splitlines()
    backend = None
    tol = 1e-9
    polygons = []
    cur_id = None
    cur_verts = []
    gluings = []
    header_seen = False

    def flush():
        nonlocal cur_id, cur_verts
        if cur_id is not None:
            polygons.append(Polygon(cur_id, tuple(cur_verts)))
            cur_id, cur_verts = None, []

    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = line.split()
        if not header_seen:
            if toks != ["dqd", "v1"]:
                raise ParseError("expected header 'dqd v1'", no)
            header_seen = True
            continue
        if toks[0] == "scalar":
            if toks[1] == "exact-qsqrt2":
                backend = "exact-qsqrt2"
            elif toks[1] == "f64":
                backend = "f64"
                if len(toks) >= 4 and toks[2] == "tol":
                    tol = float(toks[3])
            else:
                raise ParseError(f"unknown scalar backend {toks[1]!r}", no)
        elif toks[0] == "polygon":
            if backend is None:
                raise ParseError("scalar line must precede polygons", no)
            flush()
            if len(toks) != 2:
                raise ParseError("polygon wants exactly one id", no)
            cur_id = toks[1]
        elif toks[0] == "v":
            if cur_id is None:
                raise ParseError("vertex outside polygon block", no)
            if len(toks) != 3:
                raise ParseError("vertex wants two coordinates", no)
            exact = backend == "exact-qsqrt2"
            try:
                cur_verts.append(Vec(parse_scalar(toks[1], exact), parse_scalar(toks[2], exact)))
            except ValueError as exc:
                raise ParseError(str(exc), no) from None
        elif toks[0] == "glue":
            flush()
            if len(toks) != 8 or toks[3] != "map" or toks[5] != "c":
                raise ParseError("glue syntax: glue A.i B.j map KIND c X Y", no)
            exact = backend == "exact-qsqrt2"
            a = _edge_ref(toks[1], no)
            b = _edge_ref(toks[2], no)
            kind = toks[4]
            if kind not in ("id", "neg", "conj", "negconj"):
                raise ParseError(f"unknown gluing kind {kind!r}", no)
            try:
                c = Vec(parse_scalar(toks[6], exact), parse_scalar(toks[7], exact))
            except ValueError as exc:
                raise ParseError(str(exc), no) from None
            gluings.append(Gluing(a, b, GluingMap(kind, c)))
        else:
            raise ParseError(f"unknown directive {toks[0]!r}", no)
    flush()
    if backend is None:
        raise ParseError("missing scalar line", len(lines) or 1)
    return Surface(polygons, gluings, backend=backend, tol=tol)


def dump(surface: Surface, path, comments=()):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(surface, comments))


def load(path) -> Surface:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
