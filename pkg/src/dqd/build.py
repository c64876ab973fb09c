"""Constructing surfaces by slitting a glued rectangle.

The builtin families all start from one rectangle with torus boundary
gluings (optionally sheared), cut a few interior slits, and re-glue the slit
banks by dianalytic maps: a pair of 45-degree slits glued by a reflection
`z -> -conj(z) + c` forms a crosscap, a pair of parallel slits glued by a
translation forms a handle, and a pair glued by `z -> -z + c` forms a
handle with a direction flip.  The builder keeps every chart inside the
original rectangle, so plane coordinates identify edges unambiguously.
"""

from __future__ import annotations

from .surface import (
    EdgeRef,
    Gluing,
    GluingMap,
    Polygon,
    Surface,
    Vec,
    cross,
    cut_along,
    dot,
    subdivide_edge,
    _winding_contains,
)

__all__ = ["torus_rectangle", "SlitSurfaceBuilder"]


def torus_rectangle(ops, width, height, shear_v=0, shear_h=0) -> Surface:
    """A flat torus: [0,W]x[0,H] with translation gluings.

    Descending through the bottom re-enters the top shifted by `shear_v` in
    x; wrapping rightward re-enters the left shifted by `-shear_h` in y.
    Shears must lie in [0, W) resp. [0, H).
    """
    W = ops.coerce(width)
    H = ops.coerce(height)
    sv = ops.coerce(shear_v)
    sh = ops.coerce(shear_h)
    zero = ops.coerce(0)

    bottom = [Vec(zero, zero), Vec(W, zero)]
    if ops.sign(sv) > 0:
        bottom.insert(1, Vec(W - sv, zero))
    right = [Vec(W, zero), Vec(W, H)]
    if ops.sign(sh) > 0:
        right.insert(1, Vec(W, sh))
    top = [Vec(W, H), Vec(zero, H)]
    if ops.sign(sv) > 0:
        top.insert(1, Vec(sv, H))
    left = [Vec(zero, H), Vec(zero, zero)]
    if ops.sign(sh) > 0:
        left.insert(1, Vec(zero, H - sh))

    verts = bottom[:-1] + right[:-1] + top[:-1] + left[:-1]
    poly = Polygon("R", tuple(verts))

    def edge_at(p, q):
        for i in range(poly.n):
            a, b = poly.edge_endpoints(i)
            if (a == p and b == q) or (a == q and b == p):
                return EdgeRef("R", i)
        raise AssertionError("rectangle edge lookup failed")

    gluings = []
    # bottom -> top via z + (sv, H): descending wraps with x -> x + sv
    if ops.sign(sv) > 0:
        gluings.append(
            Gluing(
                edge_at(Vec(zero, zero), Vec(W - sv, zero)),
                edge_at(Vec(sv, H), Vec(W, H)),
                GluingMap("id", Vec(sv, H)),
            )
        )
        gluings.append(
            Gluing(
                edge_at(Vec(W - sv, zero), Vec(W, zero)),
                edge_at(Vec(zero, H), Vec(sv, H)),
                GluingMap("id", Vec(sv - W, H)),
            )
        )
    else:
        gluings.append(
            Gluing(
                edge_at(Vec(zero, zero), Vec(W, zero)),
                edge_at(Vec(W, H), Vec(zero, H)),
                GluingMap("id", Vec(zero, H)),
            )
        )
    # left -> right via z + (W, sh): rightward wraps with y -> y - sh
    if ops.sign(sh) > 0:
        gluings.append(
            Gluing(
                edge_at(Vec(zero, zero), Vec(zero, H - sh)),
                edge_at(Vec(W, sh), Vec(W, H)),
                GluingMap("id", Vec(W, sh)),
            )
        )
        gluings.append(
            Gluing(
                edge_at(Vec(zero, H - sh), Vec(zero, H)),
                edge_at(Vec(W, zero), Vec(W, sh)),
                GluingMap("id", Vec(W, sh - H)),
            )
        )
    else:
        gluings.append(
            Gluing(
                edge_at(Vec(zero, H), Vec(zero, zero)),
                edge_at(Vec(W, zero), Vec(W, H)),
                GluingMap("id", Vec(W, zero)),
            )
        )
    return Surface(
        [poly],
        gluings,
        backend=ops.backend,
        tol=getattr(ops, "tol", 1e-9),
    )


def _edges_with_endpoints(surface, p, q):
    ops = surface.ops
    found = []
    for pid, poly in surface.polygons.items():
        for i in range(poly.n):
            a, b = poly.edge_endpoints(i)
            fwd = ops.eq(a.x, p.x) and ops.eq(a.y, p.y) and ops.eq(b.x, q.x) and ops.eq(b.y, q.y)
            rev = ops.eq(a.x, q.x) and ops.eq(a.y, q.y) and ops.eq(b.x, p.x) and ops.eq(b.y, p.y)
            if fwd or rev:
                found.append(EdgeRef(pid, i))
    return found


def _point_strictly_on_edge(surface, poly, i, p):
    ops = surface.ops
    a, b = poly.edge_endpoints(i)
    if ops.sign(cross(b - a, p - a)) != 0:
        return False
    return ops.sign(dot(p - a, b - a)) > 0 and ops.sign(dot(p - b, a - b)) > 0


def ensure_vertex(surface, p) -> Surface:
    """Subdivide until no edge contains p in its interior."""
    changed = True
    while changed:
        changed = False
        for pid, poly in surface.polygons.items():
            for i in range(poly.n):
                if _point_strictly_on_edge(surface, poly, i, p):
                    surface = subdivide_edge(surface, EdgeRef(pid, i), p)
                    changed = True
                    break
            if changed:
                break
    return surface


class SlitSurfaceBuilder:
    """Cut named slits into a surface and re-glue their banks."""

    def __init__(self, surface: Surface):
        self.surface = surface
        self.slits = {}  # name -> (p, q)

    def _containing_polygon(self, p, q):
        ops = self.surface.ops
        half = ops.coerce(1) / 2 if ops.exact else 0.5
        mid = Vec((p.x + q.x) * half, (p.y + q.y) * half)
        for pid, poly in self.surface.polygons.items():
            if _winding_contains(self.surface, poly, mid) > 0:
                return pid
        raise ValueError("slit midpoint is not interior to any polygon")

    def _chord_through(self, pid, p, q):
        """Maximal boundary-to-boundary chord of `pid` along the line p->q."""
        surface = self.surface
        ops = surface.ops
        poly = surface.polygons[pid]
        u = q - p
        ts = set()
        for i in range(poly.n):
            a, b = poly.edge_endpoints(i)
            v = b - a
            den = cross(u, v)
            if ops.sign(den) != 0:
                t = cross(a - p, v) / den
                s = cross(a - p, u) / den
                if 0 <= ops.sign(s) and ops.sign(s - 1) <= 0:
                    ts.add(t)
            else:
                # collinear edge: its endpoints bound the chord
                if ops.sign(cross(a - p, u)) == 0:
                    ts.add(dot(a - p, u) / dot(u, u))
                    ts.add(dot(b - p, u) / dot(u, u))
        zero = ops.coerce(0)
        one = ops.coerce(1)
        lo = [t for t in ts if ops.sign(t - zero) <= 0]
        hi = [t for t in ts if ops.sign(t - one) >= 0]
        if not lo or not hi:
            raise ValueError("slit does not extend to a chord (is it inside the polygon?)")
        t1 = max(lo)
        t2 = min(hi)
        return p + u.scale(t1), p + u.scale(t2)

    def add_slit(self, name, p, q):
        """Cut the interior segment p-q open; banks stay id-glued until used."""
        if name in self.slits:
            raise ValueError(f"duplicate slit {name!r}")
        surface = self.surface
        pid = self._containing_polygon(p, q)
        c1, c2 = self._chord_through(pid, p, q)
        surface = cut_along(surface, pid, (c1, c2))
        surface = ensure_vertex(surface, p)
        surface = ensure_vertex(surface, q)
        self.surface = surface
        self.slits[name] = (p, q)
        return self

    def _unglue(self, p, q):
        """Drop the gluing between the two coincident edges p-q; return them."""
        edges = _edges_with_endpoints(self.surface, p, q)
        if len(edges) != 2:
            raise ValueError(f"expected 2 bank edges for slit, found {len(edges)}")
        eset = set(edges)
        kept = []
        removed = False
        for g in self.surface.gluings:
            if {g.a, g.b} == eset:
                removed = True
                continue
            kept.append(g)
        if not removed:
            raise ValueError("slit banks are not glued to each other")
        self.surface = self.surface.replace(gluings=kept)
        return edges

    def glue_slits(self, name_a, name_b, gmap: GluingMap):
        """Re-glue the banks of two slits via the plane isometry `gmap`.

        `gmap` must carry the segment of slit `name_a` onto the segment of
        slit `name_b`; each bank of `a` is paired with the unique bank of
        `b` on the matching side.
        """
        pa, qa = self.slits[name_a]
        pb, qb = self.slits[name_b]
        ops = self.surface.ops
        ia, iq = gmap.apply(pa), gmap.apply(qa)

        def same(u, v):
            return ops.eq(u.x, v.x) and ops.eq(u.y, v.y)

        if not (
            (same(ia, pb) and same(iq, qb)) or (same(ia, qb) and same(iq, pb))
        ):
            raise ValueError(f"map does not carry slit {name_a!r} onto {name_b!r}")
        banks_a = self._unglue(pa, qa)
        banks_b = self._unglue(pb, qb)

        def inward_normal(e):
            poly = self.surface.polygons[e.poly]
            d = poly.edge_vec(e.edge)
            return Vec(-d.y, d.x)

        gluings = list(self.surface.gluings)
        for ea in banks_a:
            img = gmap.deriv(inward_normal(ea))
            matched = None
            for eb in banks_b:
                nb = inward_normal(eb)
                if ops.sign(cross(img, nb)) == 0 and ops.sign(dot(img, nb)) < 0:
                    matched = eb
                    break
            if matched is None:
                raise ValueError(f"no side-compatible bank for {ea} under {gmap}")
            gluings.append(Gluing(ea, matched, gmap))
        self.surface = self.surface.replace(gluings=gluings)
        return self
