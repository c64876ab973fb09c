"""Polygon complexes with dianalytic edge gluings.

A surface is a finite collection of plane polygons (each its own chart,
vertices counterclockwise) together with a pairing of all edges by maps of
the four dianalytic forms

    z -> z + c,  z -> -z + c,  z -> conj(z) + c,  z -> -conj(z) + c.

The quotient is a flat surface with cone points whose angles are integer
multiples of pi; the conj-type gluings are exactly what makes the quotient
non-orientable.  Everything here is written over an abstract scalar backend
(see `scalars`), so the same code validates exact Q(sqrt2) surfaces with zero
tolerance and float64 surfaces with an explicit one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .scalars import ExactOps, FloatOps, QSqrt2, ops_for_backend

__all__ = [
    "Vec",
    "EdgeRef",
    "GluingMap",
    "Gluing",
    "Polygon",
    "Surface",
    "ValidationReport",
    "VertexClass",
    "TopologyReport",
    "validate",
    "total_area",
    "vertex_classes",
    "euler_characteristic",
    "classify_topology",
    "cut_along",
    "glue_pair",
    "transform_polygon",
    "subdivide_edge",
]


class Vec(NamedTuple):
    """A point or displacement in one polygon chart."""

    x: object
    y: object

    def __add__(self, other):
        return Vec(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec(-self.x, -self.y)

    def scale(self, k):
        return Vec(self.x * k, self.y * k)

    def to_float(self):
        return (float(self.x), float(self.y))


def cross(u: Vec, v: Vec):
    return u.x * v.y - u.y * v.x


def dot(u: Vec, v: Vec):
    return u.x * v.x + u.y * v.y


class EdgeRef(NamedTuple):
    poly: str
    edge: int

    def __str__(self):
        return f"{self.poly}.{self.edge}"


# kind -> (sign s, conjugate flag e); the map is z -> s*conj^e(z) + c.
_KINDS = {"id": (1, 0), "neg": (-1, 0), "conj": (1, 1), "negconj": (-1, 1)}
_KIND_NAMES = {v: k for k, v in _KINDS.items()}


@dataclass(frozen=True)
class GluingMap:
    """One of the four dianalytic plane isometries z -> +/- z + c, +/- conj(z) + c."""

    kind: str
    c: Vec

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown gluing kind {self.kind!r}")

    @property
    def sign(self) -> int:
        return _KINDS[self.kind][0]

    @property
    def conj(self) -> bool:
        return bool(_KINDS[self.kind][1])

    @property
    def orientation(self) -> int:
        """Jacobian determinant: +1 for id/neg, -1 for conj/negconj."""
        return -1 if self.conj else 1

    def apply(self, p: Vec) -> Vec:
        s = self.sign
        y = -p.y if self.conj else p.y
        return Vec(s * p.x + self.c.x, s * y + self.c.y)

    def deriv(self, v: Vec) -> Vec:
        s = self.sign
        y = -v.y if self.conj else v.y
        return Vec(s * v.x, s * y)

    def inverse(self) -> "GluingMap":
        s, e = _KINDS[self.kind]
        if e:
            # z = s*conj(w) - s*conj(c)
            return GluingMap(self.kind, Vec(-s * self.c.x, s * self.c.y))
        if s == -1:
            return GluingMap("neg", self.c)
        return GluingMap("id", -self.c)

    def compose(self, inner: "GluingMap") -> "GluingMap":
        """self o inner, again one of the four forms."""
        s2, e2 = _KINDS[self.kind]
        s1, e1 = _KINDS[inner.kind]
        c1 = Vec(inner.c.x, -inner.c.y) if e2 else inner.c
        kind = _KIND_NAMES[(s1 * s2, e1 ^ e2)]
        return GluingMap(kind, Vec(s2 * c1.x + self.c.x, s2 * c1.y + self.c.y))


@dataclass(frozen=True)
class Gluing:
    """Edge `a` identified with edge `b` via `m` (mapping a's chart to b's)."""

    a: EdgeRef
    b: EdgeRef
    m: GluingMap


@dataclass(frozen=True)
class Polygon:
    id: str
    vertices: tuple

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Vec:
        return self.vertices[i % len(self.vertices)]

    def edge_endpoints(self, i: int):
        return self.vertex(i), self.vertex(i + 1)

    def edge_vec(self, i: int) -> Vec:
        a, b = self.edge_endpoints(i)
        return b - a

    def shoelace_twice(self):
        """Twice the signed area (positive for counterclockwise)."""
        acc = None
        vs = self.vertices
        for i in range(len(vs)):
            term = cross(vs[i], vs[(i + 1) % len(vs)])
            acc = term if acc is None else acc + term
        return acc


class Surface:
    """Immutable polygon complex; derived structure is cached lazily."""

    def __init__(self, polygons, gluings, backend="exact-qsqrt2", tol=1e-9):
        if isinstance(polygons, dict):
            self.polygons = dict(polygons)
        else:
            self.polygons = {p.id: p for p in polygons}
        self.gluings = tuple(gluings)
        self.ops = ops_for_backend(backend, tol)
        self._edge_map = None
        self._vertex_classes = None

    @property
    def backend(self):
        return self.ops.backend

    @property
    def tol(self):
        return self.ops.tol

    def replace(self, polygons=None, gluings=None):
        return Surface(
            self.polygons if polygons is None else polygons,
            self.gluings if gluings is None else gluings,
            backend=self.backend,
            tol=self.tol,
        )

    def polygon(self, pid: str) -> Polygon:
        return self.polygons[pid]

    def edge_refs(self):
        for pid, poly in self.polygons.items():
            for i in range(poly.n):
                yield EdgeRef(pid, i)

    @property
    def edge_map(self):
        """EdgeRef -> (mate EdgeRef, map this-chart -> mate-chart)."""
        if self._edge_map is None:
            em = {}
            for g in self.gluings:
                em.setdefault(g.a, []).append((g.b, g.m))
                em.setdefault(g.b, []).append((g.a, g.m.inverse()))
            self._edge_map = em
        return self._edge_map

    def mate(self, e: EdgeRef):
        entries = self.edge_map.get(e)
        if not entries or len(entries) != 1:
            raise ValueError(f"edge {e} is not glued exactly once")
        return entries[0]

    def scalar(self, v):
        return self.ops.coerce(v)

    def vec(self, x, y) -> Vec:
        return Vec(self.ops.coerce(x), self.ops.coerce(y))


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __str__(self):
        lines = []
        for c in self.checks:
            mark = "pass" if c.ok else "FAIL"
            suffix = f" ({c.detail})" if c.detail else ""
            lines.append(f"{mark}  {c.name}{suffix}")
        return "\n".join(lines)


def _segments_intersect(ops, p1, p2, q1, q2) -> bool:
    """Do closed segments [p1,p2], [q1,q2] meet in more than a shared endpoint?"""
    d1 = ops.sign(cross(p2 - p1, q1 - p1))
    d2 = ops.sign(cross(p2 - p1, q2 - p1))
    d3 = ops.sign(cross(q2 - q1, p1 - q1))
    d4 = ops.sign(cross(q2 - q1, p2 - q1))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_segment(a, b, p):
        if ops.sign(cross(b - a, p - a)) != 0:
            return False
        return ops.sign(dot(p - a, b - a)) > 0 and ops.sign(dot(p - b, a - b)) > 0

    return (
        on_segment(p1, p2, q1)
        or on_segment(p1, p2, q2)
        or on_segment(q1, q2, p1)
        or on_segment(q1, q2, p2)
    )


def _check_polygon(surface, poly, out):
    ops = surface.ops
    n = poly.n
    if n < 3:
        out.append(CheckResult("polygon-min-vertices", False, f"{poly.id} has {n} < 3"))
        return
    for i in range(n):
        a, b = poly.edge_endpoints(i)
        if ops.eq(a.x, b.x) and ops.eq(a.y, b.y):
            out.append(CheckResult("polygon-edge-length", False, f"{poly.id}.{i} has zero length"))
            return
    # aligned germs at a vertex mean a zero-angle spike
    for i in range(n):
        u = poly.edge_vec(i)
        w = poly.vertex(i - 1) - poly.vertex(i)
        if ops.sign(cross(u, w)) == 0 and ops.sign(dot(u, w)) > 0:
            out.append(CheckResult("polygon-spike", False, f"{poly.id} vertex {i}"))
            return
    area2 = poly.shoelace_twice()
    if ops.sign(area2) <= 0:
        out.append(CheckResult("polygon-area", False, f"{poly.id} not counterclockwise"))
        return
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                continue
            p1, p2 = poly.edge_endpoints(i)
            q1, q2 = poly.edge_endpoints(j)
            if _segments_intersect(ops, p1, p2, q1, q2):
                out.append(
                    CheckResult("polygon-simple", False, f"{poly.id} edges {i},{j} intersect")
                )
                return
    out.append(CheckResult(f"polygon-{poly.id}", True))


def _check_backend(surface, out):
    want_exact = surface.ops.exact
    for poly in surface.polygons.values():
        for v in poly.vertices:
            for coord in (v.x, v.y):
                is_exact = isinstance(coord, (QSqrt2, int, Fraction))
                if is_exact != want_exact:
                    out.append(
                        CheckResult(
                            "backend-consistency",
                            False,
                            f"{poly.id} mixes scalar backends",
                        )
                    )
                    return
    for g in surface.gluings:
        for coord in (g.m.c.x, g.m.c.y):
            is_exact = isinstance(coord, (QSqrt2, int, Fraction))
            if is_exact != want_exact:
                out.append(CheckResult("backend-consistency", False, f"gluing {g.a}~{g.b}"))
                return
    out.append(CheckResult("backend-consistency", True))


def _check_gluings(surface, out):
    ops = surface.ops
    seen = {}
    ok = True
    for g in surface.gluings:
        if g.a == g.b:
            out.append(
                CheckResult(
                    "gluing-self",
                    False,
                    f"{g.a} glued to itself; subdivide the edge instead",
                )
            )
            ok = False
            continue
        for e in (g.a, g.b):
            if e.poly not in surface.polygons or not (0 <= e.edge < surface.polygons[e.poly].n):
                out.append(CheckResult("gluing-edge-ref", False, f"{e} out of range"))
                return
            seen[e] = seen.get(e, 0) + 1
    for e in surface.edge_refs():
        cnt = seen.get(e, 0)
        if cnt != 1:
            out.append(
                CheckResult(
                    "gluing-matching",
                    False,
                    f"{e} appears in {cnt} gluings (want exactly 1)",
                )
            )
            ok = False
    if not ok:
        return
    for g in surface.gluings:
        pa = surface.polygons[g.a.poly]
        pb = surface.polygons[g.b.poly]
        a0, a1 = pa.edge_endpoints(g.a.edge)
        b0, b1 = pb.edge_endpoints(g.b.edge)
        ia0, ia1 = g.m.apply(a0), g.m.apply(a1)

        def same(p, q):
            return ops.eq(p.x, q.x) and ops.eq(p.y, q.y)

        forward = same(ia0, b0) and same(ia1, b1)
        backward = same(ia0, b1) and same(ia1, b0)
        if not (forward or backward):
            out.append(
                CheckResult("gluing-endpoints", False, f"{g.a}~{g.b}: map misses edge endpoints")
            )
            ok = False
            continue
        # material of a must land opposite the material of b
        na = Vec(-(a1 - a0).y, (a1 - a0).x)
        nb = Vec(-(b1 - b0).y, (b1 - b0).x)
        im = g.m.deriv(na)
        if not (ops.sign(cross(im, nb)) == 0 and ops.sign(dot(im, nb)) < 0):
            out.append(CheckResult("gluing-side", False, f"{g.a}~{g.b}: same-side gluing"))
            ok = False
    if ok:
        out.append(CheckResult("gluing-structure", True))


def _check_cone_angles(surface, out):
    try:
        classes = vertex_classes(surface)
    except Exception as exc:  # angle computation needs valid gluings
        out.append(CheckResult("cone-angles", False, str(exc)))
        return
    for vc in classes:
        if not vc.angle_is_multiple_of_pi:
            out.append(
                CheckResult(
                    "cone-angles",
                    False,
                    f"class {vc.corners[0]} has angle {vc.angle:.12f} not in pi*Z",
                )
            )
            return
    out.append(CheckResult("cone-angles", True))


def validate(surface: Surface) -> ValidationReport:
    """Run every structural invariant; failures are data, not exceptions."""
    out = []
    _check_backend(surface, out)
    for poly in surface.polygons.values():
        _check_polygon(surface, poly, out)
    bad = [c for c in out if not c.ok]
    if bad:
        return ValidationReport(out)
    _check_gluings(surface, out)
    bad = [c for c in out if not c.ok]
    if bad:
        return ValidationReport(out)
    _check_cone_angles(surface, out)
    area2 = total_area(surface) * 2
    out.append(CheckResult("total-area-positive", surface.ops.sign(area2) > 0))
    return ValidationReport(out)


def total_area(surface: Surface):
    acc = None
    for poly in surface.polygons.values():
        a = poly.shoelace_twice()
        acc = a if acc is None else acc + a
    half = Fraction(1, 2) if surface.ops.exact else 0.5
    return acc * half


# -- vertex classes ----------------------------------------------------------


@dataclass
class VertexClass:
    corners: list  # list of (poly id, vertex index)
    angle: float  # total interior angle, radians
    pi_multiple: int  # k with angle == k*pi
    angle_is_multiple_of_pi: bool

    @property
    def is_cone(self) -> bool:
        return self.pi_multiple != 2

    def __contains__(self, corner):
        return corner in self.corners


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            self.parent[x] = p = self.find(p)
        return p

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)


def _corner_angle(poly: Polygon, i: int) -> float:
    u = poly.edge_vec(i)
    w = poly.vertex(i - 1) - poly.vertex(i)
    ang = math.atan2(
        float(cross(u, w)),
        float(dot(u, w)),
    )
    if ang <= 0:
        ang += 2 * math.pi
    return ang


def _gluing_vertex_images(surface, g: Gluing):
    """Pairs ((P,i) corner, (Q,j) corner) identified by gluing g."""
    ops = surface.ops
    pa = surface.polygons[g.a.poly]
    pb = surface.polygons[g.b.poly]
    pairs = []
    for k in range(2):
        vi = (g.a.edge + k) % pa.n
        img = g.m.apply(pa.vertex(vi))
        for m in range(2):
            wj = (g.b.edge + m) % pb.n
            w = pb.vertex(wj)
            if ops.eq(img.x, w.x) and ops.eq(img.y, w.y):
                pairs.append(((g.a.poly, vi), (g.b.poly, wj)))
                break
        else:
            raise ValueError(f"gluing {g.a}~{g.b} does not match edge endpoints")
    return pairs


def vertex_classes(surface: Surface):
    if surface._vertex_classes is not None:
        return surface._vertex_classes
    uf = _UnionFind()
    for pid, poly in surface.polygons.items():
        for i in range(poly.n):
            uf.find((pid, i))
    for g in surface.gluings:
        for ca, cb in _gluing_vertex_images(surface, g):
            uf.union(ca, cb)
    groups = {}
    for pid, poly in surface.polygons.items():
        for i in range(poly.n):
            groups.setdefault(uf.find((pid, i)), []).append((pid, i))
    classes = []
    for corners in groups.values():
        corners.sort()
        theta = sum(_corner_angle(surface.polygons[p], i) for p, i in corners)
        k = round(theta / math.pi)
        ok = k >= 1 and abs(theta - k * math.pi) <= 1e-9 * (len(corners) + 1)
        if ok and surface.ops.exact:
            ok = _angle_sum_is_pi_multiple_exact(surface, corners)
        classes.append(VertexClass(corners, theta, k, ok))
    classes.sort(key=lambda c: c.corners[0])
    surface._vertex_classes = classes
    return classes


def _angle_sum_is_pi_multiple_exact(surface, corners) -> bool:
    # arg of prod_i w_i * conj(u_i) vanishes mod pi iff the imaginary part
    # of the product is exactly zero; all arithmetic stays in Q(sqrt2).
    re, im = QSqrt2(1), QSqrt2(0)
    for pid, i in corners:
        poly = surface.polygons[pid]
        u = poly.edge_vec(i)
        w = poly.vertex(i - 1) - poly.vertex(i)
        tr = dot(w, u)  # Re(w * conj(u))
        ti = cross(u, w)  # Im(w * conj(u))
        re, im = re * tr - im * ti, re * ti + im * tr
    return surface.ops.sign(im) == 0


@dataclass
class TopologyReport:
    euler_characteristic: int
    orientable: bool
    genus: int

    def as_dict(self):
        return {
            "chi": self.euler_characteristic,
            "orientable": self.orientable,
            "genus": self.genus,
        }


def euler_characteristic(surface: Surface) -> int:
    v = len(vertex_classes(surface))
    e = len(surface.gluings)
    f = len(surface.polygons)
    return v - e + f


def classify_topology(surface: Surface) -> TopologyReport:
    colors = {}
    orientable = True
    for start in surface.polygons:
        if start in colors:
            continue
        colors[start] = 1
        stack = [start]
        while stack:
            pid = stack.pop()
            poly = surface.polygons[pid]
            for i in range(poly.n):
                mate, m = surface.mate(EdgeRef(pid, i))
                want = colors[pid] * m.orientation
                if mate.poly not in colors:
                    colors[mate.poly] = want
                    stack.append(mate.poly)
                elif colors[mate.poly] != want:
                    orientable = False
    chi = euler_characteristic(surface)
    genus = (2 - chi) // 2 if orientable else 2 - chi
    return TopologyReport(chi, orientable, genus)


# -- equivalence moves -------------------------------------------------------


def _point_on_edge(surface, poly, i, p) -> bool:
    ops = surface.ops
    a, b = poly.edge_endpoints(i)
    if ops.sign(cross(b - a, p - a)) != 0:
        return False
    return ops.sign(dot(p - a, b - a)) > 0 and ops.sign(dot(p - b, a - b)) > 0


def subdivide_edge(surface: Surface, e: EdgeRef, p: Vec) -> Surface:
    """Insert p (interior to edge e) as a vertex, splitting e and its mate."""
    mate, m = surface.mate(e)
    if mate == e:
        raise ValueError("cannot subdivide a self-glued edge")
    q = m.apply(p)
    same_poly = mate.poly == e.poly

    def insert(polys, pid, pos, point):
        poly = polys[pid]
        vs = list(poly.vertices)
        vs.insert(pos + 1, point)
        polys[pid] = Polygon(poly.id, tuple(vs))

    polys = dict(surface.polygons)
    insert(polys, e.poly, e.edge, p)
    # mate's index once p has been inserted
    mate_after = mate.edge + (1 if same_poly and mate.edge > e.edge else 0)
    insert(polys, mate.poly, mate_after, q)

    e_first = e.edge + (1 if same_poly and e.edge > mate_after else 0)
    mate_first = mate_after

    def shift(ref):
        r = ref.edge
        if ref.poly == e.poly and r > e.edge:
            r += 1
        if ref.poly == mate.poly and r > mate_after:
            r += 1
        return EdgeRef(ref.poly, r)

    # does m send the first half of e to the first half of the mate?
    pa = surface.polygons[e.poly]
    ia0 = m.apply(pa.vertex(e.edge))
    b0 = surface.polygons[mate.poly].vertex(mate.edge)
    ops = surface.ops
    keeps_start = ops.eq(ia0.x, b0.x) and ops.eq(ia0.y, b0.y)

    new_gluings = []
    for g in surface.gluings:
        if (g.a, g.b) in ((e, mate), (mate, e)):
            e1 = EdgeRef(e.poly, e_first)
            e2 = EdgeRef(e.poly, e_first + 1)
            m1 = EdgeRef(mate.poly, mate_first)
            m2 = EdgeRef(mate.poly, mate_first + 1)
            if keeps_start:
                new_gluings.append(Gluing(e1, m1, m))
                new_gluings.append(Gluing(e2, m2, m))
            else:
                new_gluings.append(Gluing(e1, m2, m))
                new_gluings.append(Gluing(e2, m1, m))
        else:
            new_gluings.append(Gluing(shift(g.a), shift(g.b), g.m))
    return surface.replace(polygons=polys, gluings=new_gluings)


def cut_along(surface: Surface, poly_id: str, chord) -> Surface:
    """Cut one polygon along a straight chord into two id-glued polygons."""
    p, q = chord
    poly = surface.polygons[poly_id]
    ops = surface.ops

    def locate(point):
        for i in range(poly.n):
            v = poly.vertex(i)
            if ops.eq(v.x, point.x) and ops.eq(v.y, point.y):
                return ("vertex", i)
        for i in range(poly.n):
            if _point_on_edge(surface, poly, i, point):
                return ("edge", i)
        raise ValueError(f"chord endpoint {point} not on boundary of {poly_id}")

    kind_p = locate(p)
    if kind_p[0] == "edge":
        surface = subdivide_edge(surface, EdgeRef(poly_id, kind_p[1]), p)
        poly = surface.polygons[poly_id]
    kind_q = locate(q)
    if kind_q[0] == "edge":
        surface = subdivide_edge(surface, EdgeRef(poly_id, kind_q[1]), q)
        poly = surface.polygons[poly_id]

    def vertex_index(point):
        for i in range(poly.n):
            v = poly.vertex(i)
            if ops.eq(v.x, point.x) and ops.eq(v.y, point.y):
                return i
        raise ValueError("chord endpoint vanished during subdivision")

    ip, iq = vertex_index(p), vertex_index(q)
    if ip == iq:
        raise ValueError("chord endpoints coincide")
    n = poly.n

    # interior check: midpoint strictly inside
    half = Fraction(1, 2) if ops.exact else 0.5
    mid = Vec((p.x + q.x) * half, (p.y + q.y) * half)
    if _winding_contains(surface, poly, mid) <= 0:
        raise ValueError("chord does not run through the polygon interior")

    id_a, id_b = poly_id + "a", poly_id + "b"
    while id_a in surface.polygons or id_b in surface.polygons:
        id_a += "x"
        id_b += "x"

    def arc(start, stop):
        idx = [start]
        while idx[-1] != stop:
            idx.append((idx[-1] + 1) % n)
        return idx

    arc_a = arc(ip, iq)  # p ... q, then chord edge q->p closes it
    arc_b = arc(iq, ip)
    poly_a = Polygon(id_a, tuple(poly.vertex(i) for i in arc_a))
    poly_b = Polygon(id_b, tuple(poly.vertex(i) for i in arc_b))

    # old edge i of `poly` is edge (position of i in arc) of the new polygon
    edge_home = {}
    for pos, vi in enumerate(arc_a[:-1]):
        edge_home[vi] = EdgeRef(id_a, pos)
    for pos, vi in enumerate(arc_b[:-1]):
        edge_home[vi] = EdgeRef(id_b, pos)

    def remap(ref):
        if ref.poly != poly_id:
            return ref
        return edge_home[ref.edge]

    gluings = [Gluing(remap(g.a), remap(g.b), g.m) for g in surface.gluings]
    chord_a = EdgeRef(id_a, len(arc_a) - 1)
    chord_b = EdgeRef(id_b, len(arc_b) - 1)
    zero = surface.vec(0, 0)
    gluings.append(Gluing(chord_a, chord_b, GluingMap("id", zero)))

    polys = {pid: pl for pid, pl in surface.polygons.items() if pid != poly_id}
    polys[id_a] = poly_a
    polys[id_b] = poly_b
    return surface.replace(polygons=polys, gluings=gluings)


def _winding_contains(surface, poly, pt) -> int:
    """1 if pt strictly inside, 0 on boundary, -1 outside (simple polygon)."""
    ops = surface.ops
    for i in range(poly.n):
        a, b = poly.edge_endpoints(i)
        if ops.sign(cross(b - a, pt - a)) == 0 and ops.sign(dot(pt - a, b - a)) >= 0 and ops.sign(
            dot(pt - b, a - b)
        ) >= 0:
            return 0
    wind = 0.0
    px, py = float(pt.x), float(pt.y)
    for i in range(poly.n):
        a, b = poly.edge_endpoints(i)
        ax, ay = float(a.x) - px, float(a.y) - py
        bx, by = float(b.x) - px, float(b.y) - py
        wind += math.atan2(ax * by - ay * bx, ax * bx + ay * by)
    return 1 if abs(wind) > math.pi else -1


def glue_pair(surface: Surface, gluing: Gluing) -> Surface:
    """Merge the two polygons joined by `gluing` into one."""
    if gluing not in surface.gluings:
        raise ValueError("gluing not part of this surface")
    a, b, m = gluing.a, gluing.b, gluing.m
    if a.poly == b.poly:
        raise ValueError("cannot merge a polygon with itself")
    pa = surface.polygons[a.poly]
    pb = surface.polygons[b.poly]
    minv = m.inverse()

    # pull polygon b into a's chart
    moved = [minv.apply(v) for v in pb.vertices]
    reversed_b = m.orientation < 0
    if reversed_b:
        moved = list(reversed(moved))
        # edge j of pb becomes edge (n-2-j) mod n of the reversed list

    def b_edge_index(j):
        if reversed_b:
            return (pb.n - 2 - j) % pb.n
        return j

    target = b_edge_index(b.edge)
    # moved polygon's edge `target` coincides with pa's edge a (opposite
    # traversal); build the merged cycle
    a0 = (a.edge + 1) % pa.n
    cyc = [pa.vertex((a0 + k) % pa.n) for k in range(pa.n - 1)]
    b0 = (target + 1) % pb.n
    cyc += [moved[(b0 + k) % pb.n] for k in range(pb.n - 1)]

    new_id = a.poly
    merged = Polygon(new_id, tuple(cyc))

    # new edge (pa.n-1 + k) is moved edge (b0+k)%pb.n, i.e. the original pb
    # edge j with b_edge_index(j) == (b0+k)%pb.n
    inv_b = {}
    for j in range(pb.n):
        inv_b[b_edge_index(j)] = j
    remap = {}
    for k in range(pa.n - 1):
        remap[EdgeRef(a.poly, (a0 + k) % pa.n)] = k
    for k in range(pb.n - 1):
        remap[EdgeRef(b.poly, inv_b[(b0 + k) % pb.n])] = pa.n - 1 + k

    new_gluings = []
    for g in surface.gluings:
        if g is gluing or (g.a, g.b) == (gluing.a, gluing.b):
            continue
        ga, gb, gm = g.a, g.b, g.m
        if ga.poly == b.poly:
            gm = gm.compose(m)  # new chart -> old b chart -> target
            ga = EdgeRef(new_id, remap[ga])
        elif ga.poly == a.poly:
            ga = EdgeRef(new_id, remap[ga])
        if gb.poly == b.poly:
            gm = minv.compose(gm)
            gb = EdgeRef(new_id, remap[gb])
        elif gb.poly == a.poly:
            gb = EdgeRef(new_id, remap[gb])
        new_gluings.append(Gluing(ga, gb, gm))

    polys = {
        pid: pl for pid, pl in surface.polygons.items() if pid not in (a.poly, b.poly)
    }
    polys[new_id] = merged
    out = surface.replace(polygons=polys, gluings=new_gluings)
    rep = []
    _check_polygon(out, merged, rep)
    if any(not c.ok for c in rep):
        raise ValueError(f"union of {a.poly} and {b.poly} is not a simple polygon")
    return out


_MOVES = {
    "rotate-pi": GluingMap("neg", None),
    "reflect-real-axis": GluingMap("conj", None),
    "reflect-imag-axis": GluingMap("negconj", None),
}


def transform_polygon(surface: Surface, poly_id: str, move, c: Vec = None) -> Surface:
    """Apply translate/rotate-pi/reflect to one chart, conjugating its gluings."""
    zero = surface.vec(0, 0)
    if move == "translate":
        t = GluingMap("id", c if c is not None else zero)
    elif move in _MOVES:
        t = GluingMap(_MOVES[move].kind, zero)
    else:
        raise ValueError(f"unknown move {move!r}")
    tinv = t.inverse()
    poly = surface.polygons[poly_id]
    verts = [t.apply(v) for v in poly.vertices]
    flips = t.orientation < 0
    if flips:
        verts = list(reversed(verts))

    def new_index(i):
        if flips:
            return (poly.n - 2 - i) % poly.n
        return i

    polys = dict(surface.polygons)
    polys[poly_id] = Polygon(poly_id, tuple(verts))
    new_gluings = []
    for g in surface.gluings:
        ga, gb, gm = g.a, g.b, g.m
        if ga.poly == poly_id and gb.poly == poly_id:
            gm = t.compose(gm.compose(tinv))
            ga = EdgeRef(poly_id, new_index(ga.edge))
            gb = EdgeRef(poly_id, new_index(gb.edge))
        elif ga.poly == poly_id:
            gm = gm.compose(tinv)
            ga = EdgeRef(poly_id, new_index(ga.edge))
        elif gb.poly == poly_id:
            gm = t.compose(gm)
            gb = EdgeRef(poly_id, new_index(gb.edge))
        new_gluings.append(Gluing(ga, gb, gm))
    return surface.replace(polygons=polys, gluings=new_gluings)
