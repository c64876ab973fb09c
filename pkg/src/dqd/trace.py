"""Straight-line tracing of the horizontal and vertical line fields.

All four gluing maps send horizontal lines to horizontal lines and vertical
lines to vertical lines, so the two axis foliations are globally defined and
a trajectory is a chain of axis-parallel chords, one per polygon chart,
teleported across gluings.  Trajectories may also run along glued edges
(this happens for separatrices of axis-parallel slits), so the tracer keeps
two kinds of state: free flight inside a chart, and travel along an edge.

Passing through a vertex class of total angle 2*pi is regular: the tracer
develops the corner fan around the class and continues straight.  Hitting a
class of any other angle ends the trajectory (separatrix).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .surface import EdgeRef, GluingMap, Surface, Vec, cross, dot, vertex_classes

__all__ = ["TraceState", "CurvePath", "PathSegment", "trace", "start_free", "start_on_edge"]


VERTICAL = "vertical"
HORIZONTAL = "horizontal"


def direction_vector(surface, direction, sign=1):
    one = surface.scalar(sign)
    zero = surface.scalar(0)
    if direction == VERTICAL:
        return Vec(zero, one)
    if direction == HORIZONTAL:
        return Vec(one, zero)
    raise ValueError(f"direction must be horizontal or vertical, not {direction!r}")


@dataclass(frozen=True)
class TraceState:
    mode: str  # "free" or "edge"
    poly: str
    point: Vec
    d: Vec
    edge: int = -1  # edge index when mode == "edge"

    def key(self, ops):
        return (
            self.mode,
            self.poly,
            self.edge,
            ops.to_float(self.point.x),
            ops.to_float(self.point.y),
            ops.to_float(self.d.x),
            ops.to_float(self.d.y),
        )


@dataclass
class PathSegment:
    poly: str
    entry: Vec
    exit: Vec
    on_edge: int = -1  # >= 0 when the segment runs along this edge of `poly`

    def length(self):
        dx = self.exit.x - self.entry.x
        dy = self.exit.y - self.entry.y
        return abs(dx) + abs(dy)  # axis parallel: one term vanishes


@dataclass
class CurvePath:
    """A traced trajectory: chords with gluing crossings between them."""

    segments: list = field(default_factory=list)
    crossings: list = field(default_factory=list)  # (EdgeRef, orientation) per hop
    closed: bool = False
    parity: int = 1  # product of orientation flags along the path
    end_reason: str = "open"  # closed | cone | budget | open
    end_cone: object = None  # VertexClass terminating the path, if any

    @property
    def flat_length(self):
        total = None
        for seg in self.segments:
            value = seg.length()
            total = value if total is None else total + value
        return total

    @property
    def orientation_parity(self):
        return self.parity

    def column_list(self):
        return list(self.segments)


class _Fan:
    """Developed corner fan around one vertex class."""

    def __init__(self, corners):
        # corners: list of ((pid, i), transform GluingMap corner-chart -> ref)
        self.entries = corners


def _identity_map(surface):
    zero = surface.vec(0, 0)
    return GluingMap("id", zero)


def _corner_of(surface, pid, vertex_index):
    return (pid, vertex_index % surface.polygons[pid].n)


def _build_fan(surface, corners):
    """Walk the corner cycle of a vertex class, composing chart transforms."""
    ops = surface.ops
    start = corners[0]
    ident = _identity_map(surface)
    entries = [(start, ident)]
    cur, entered_out, T = start, True, ident
    guard = 0
    while True:
        guard += 1
        if guard > 4 * len(corners) + 8:
            raise RuntimeError("corner fan walk did not close")
        pid, i = cur
        poly = surface.polygons[pid]
        exit_edge = EdgeRef(pid, (i - 1) % poly.n) if entered_out else EdgeRef(pid, i)
        mate, m = surface.mate(exit_edge)
        img = m.apply(poly.vertex(i))
        mp = surface.polygons[mate.poly]
        nxt = None
        for j in ((mate.edge) % mp.n, (mate.edge + 1) % mp.n):
            w = mp.vertex(j)
            if ops.eq(w.x, img.x) and ops.eq(w.y, img.y):
                nxt = (mate.poly, j)
                break
        if nxt is None:
            raise RuntimeError(f"gluing {exit_edge} does not hit the vertex class")
        entered_out = nxt[1] == mate.edge % mp.n
        # directions: m.deriv maps cur-chart to mate-chart; invert for T
        minv_d = GluingMap(m.inverse().kind, surface.vec(0, 0))
        T = T.compose(minv_d)
        if nxt == start:
            break
        entries.append((nxt, T))
        cur = nxt
    return _Fan(entries)


def _class_fans(surface):
    cache = getattr(surface, "_trace_fans", None)
    if cache is None:
        classes = vertex_classes(surface)
        corner_to_class = {}
        for idx, vc in enumerate(classes):
            for c in vc.corners:
                corner_to_class[c] = idx
        fans = {}
        cache = (classes, corner_to_class, fans)
        surface._trace_fans = cache
    return cache


def _fan_for(surface, corner):
    classes, corner_to_class, fans = _class_fans(surface)
    idx = corner_to_class[corner]
    if idx not in fans:
        fans[idx] = _build_fan(surface, classes[idx].corners)
    return classes[idx], fans[idx]


def _aligned(ops, u, v):
    """u, v nonzero and parallel with positive dot."""
    return ops.sign(cross(u, v)) == 0 and ops.sign(dot(u, v)) > 0


def _in_wedge_strict(ops, u, w, d):
    """Is d strictly inside the wedge swept counterclockwise from u to w?"""
    if _aligned(ops, d, u) or _aligned(ops, d, w):
        return False

    def rank(x):
        s = ops.sign(cross(u, x))
        if s > 0:
            return 0
        if s == 0:
            return 1 if ops.sign(dot(u, x)) < 0 else 3  # 3: aligned with u
        return 2

    rd, rw = rank(d), rank(w)
    if rd == 3:
        return False
    if rw == 3:
        # full-turn wedge from u around to u: everything not aligned is inside
        return True
    if rd != rw:
        return rd < rw
    if rd == 1:
        return False
    return ops.sign(cross(d, w)) > 0


def _resolve_through_vertex(surface, corner, d_ref):
    """Continue direction d (in corner's chart) through a 2*pi vertex class.

    Returns ("free", corner', d') to continue into a wedge interior, or
    ("edge", corner', edge_index, d') to continue along an edge germ.
    Raises if the class is a cone (caller must check) or resolution fails.
    """
    ops = surface.ops
    vclass, fan = _fan_for(surface, corner)
    # transform of the reference chart (fan base) to the arrival chart
    base_to_arrival = None
    for (c, T) in fan.entries:
        if c == corner:
            base_to_arrival = T
            break
    if base_to_arrival is None:
        raise RuntimeError("arrival corner missing from fan")
    # d in base chart
    d_base = base_to_arrival.inverse().deriv(d_ref)

    wedge_hit = None
    edge_hit = None
    for (c, T) in fan.entries:
        pid, i = c
        poly = surface.polygons[pid]
        d_local = T.deriv(d_base)
        u = poly.edge_vec(i)  # out germ
        w = poly.vertex(i - 1) - poly.vertex(i)  # in germ
        if _in_wedge_strict(ops, u, w, d_local):
            if wedge_hit is not None:
                raise RuntimeError("ambiguous continuation through vertex")
            wedge_hit = ("free", c, d_local)
        elif _aligned(ops, d_local, u):
            edge_hit = edge_hit or ("edge", c, i, d_local)
    if wedge_hit is not None:
        return wedge_hit
    if edge_hit is not None:
        return edge_hit
    raise RuntimeError("no continuation through vertex")


def _canonical_edge_state(surface, pid, edge_index, point, d):
    """Normalize an on-edge state to the lexicographically smaller side."""
    e = EdgeRef(pid, edge_index)
    mate, m = surface.mate(e)
    if (mate.poly, mate.edge) < (e.poly, e.edge):
        return TraceState("edge", mate.poly, m.apply(point), m.deriv(d), mate.edge), m.orientation
    return TraceState("edge", pid, point, d, edge_index), 1


def start_free(surface, pid, point, direction, sign=1) -> TraceState:
    return TraceState("free", pid, point, direction_vector(surface, direction, sign))


def start_on_edge(surface, e: EdgeRef, point, d) -> TraceState:
    state, _ = _canonical_edge_state(surface, e.poly, e.edge, point, d)
    return state


def _free_step(surface, state):
    """Advance a free state to the polygon boundary.

    Returns ("cross", seg, new_state, crossing) or ("vertex", seg, corner).
    """
    ops = surface.ops
    poly = surface.polygons[state.poly]
    p, d = state.point, state.d
    best = None  # (t, kind, payload)
    for i in range(poly.n):
        a, b = poly.edge_endpoints(i)
        v = b - a
        den = cross(d, v)
        if ops.sign(den) != 0:
            t = cross(a - p, v) / den
            if ops.sign(t) <= 0:
                continue
            s = cross(a - p, d) / den
            ss = ops.sign(s)
            se = ops.sign(s - 1)
            if ss < 0 or se > 0:
                continue
            if ss == 0:
                cand = (t, "vertex", i)
            elif se == 0:
                cand = (t, "vertex", (i + 1) % poly.n)
            else:
                cand = (t, "edge", (i, s))
        else:
            # parallel edge: relevant only if collinear with the ray
            if ops.sign(cross(a - p, d)) != 0:
                continue
            dd = dot(d, d)
            for vi, pt in ((i, a), ((i + 1) % poly.n, b)):
                t = dot(pt - p, d) / dd
                if ops.sign(t) > 0:
                    cand = (t, "vertex", vi)
                    if best is None or ops.sign(cand[0] - best[0]) < 0:
                        best = cand
            continue
        if best is None or ops.sign(cand[0] - best[0]) < 0:
            best = cand
        elif ops.sign(cand[0] - best[0]) == 0 and best[1] == "edge" and cand[1] == "vertex":
            best = cand
    if best is None:
        raise RuntimeError(f"ray did not leave polygon {state.poly}")
    t, kind, payload = best
    hit = p + d.scale(t)
    seg = PathSegment(state.poly, p, hit)
    if kind == "vertex":
        return "vertex", seg, (state.poly, payload)
    i, _ = payload
    mate, m = surface.mate(EdgeRef(state.poly, i))
    new_state = TraceState("free", mate.poly, m.apply(hit), m.deriv(d))
    return "cross", seg, new_state, (EdgeRef(state.poly, i), m.orientation)


def _edge_step(surface, state):
    """Advance an on-edge state to the far endpoint of its edge."""
    poly = surface.polygons[state.poly]
    i = state.edge
    a, b = poly.edge_endpoints(i)
    ev = b - a
    ops = surface.ops
    if _aligned(ops, state.d, ev):
        target_vertex = (i + 1) % poly.n
        hit = b
    else:
        target_vertex = i
        hit = a
    seg = PathSegment(state.poly, state.point, hit, on_edge=i)
    return "vertex", seg, (state.poly, target_vertex)


def trace(surface, state: TraceState, max_steps=100000):
    """Follow the line field until closing up, hitting a cone, or the budget.

    Returns a CurvePath.  `closed` means the exact starting state recurred.
    """
    ops = surface.ops
    path = CurvePath()
    start_key = state.key(ops)
    steps = 0
    while True:
        steps += 1
        if steps > max_steps:
            path.end_reason = "budget"
            return path
        if state.mode == "free":
            result = _free_step(surface, state)
        else:
            result = _edge_step(surface, state)
        if result[0] == "cross":
            _, seg, new_state, crossing = result
            path.segments.append(seg)
            path.crossings.append(crossing)
            path.parity *= crossing[1]
            state = new_state
        else:
            _, seg, corner = result
            path.segments.append(seg)
            vclass, fan = _fan_for(surface, corner)
            if vclass.is_cone:
                path.end_reason = "cone"
                path.end_cone = vclass
                return path
            kind = _resolve_through_vertex(surface, corner, state.d)
            # orientation bookkeeping: net chart transform through the class
            base_to_arrival = None
            base_to_exit = None
            for (c, T) in fan.entries:
                if c == corner:
                    base_to_arrival = T
                if c == kind[1]:
                    base_to_exit = T
            net = base_to_exit.compose(base_to_arrival.inverse())
            path.parity *= net.orientation
            path.crossings.append((("vertex", corner), net.orientation))
            pid2, i2 = kind[1]
            vpoint = surface.polygons[pid2].vertex(i2)
            if kind[0] == "free":
                state = TraceState("free", pid2, vpoint, kind[2])
            else:
                state, flip = _canonical_edge_state(surface, pid2, kind[2], vpoint, kind[3])
                path.parity *= flip
                if flip != 1:
                    path.crossings.append((("edge-normalize", state.poly), flip))
        if state.key(ops) == start_key:
            path.closed = True
            path.end_reason = "closed"
            return path
