"""Saddle connections found by unfolding a cylinder triangulation.

A saddle connection is a straight segment joining two cone points with
no cone point in its interior.  Each cylinder is cut into triangles
whose vertices are the marked corners on its two boundary circles, and
the search develops triangles into the plane along sight lines from
each corner.  Every gluing map of the surface has the shape z -> z + c
or z -> -z + c, so a placement is a sign and an offset and the whole
computation stays in plane geometry.

The search handles numeric surfaces only.  Honouring a length cutoff
needs square-root comparisons, which exact rational data cannot decide
without leaving the rationals, so exact-mode callers are told to build
a numeric twin first.
"""

import math
from collections import deque
from dataclasses import dataclass

from .errors import ModeMismatch, OutOfRange, RadiusTooSmall
from .surface import NUMERIC

DEDUP_TOL = 1e-9
DEFAULT_CAP = 50_000


@dataclass(frozen=True)
class SaddleConnection:
    """One saddle connection, stored up to reversal.

    The holonomy is sign-normalized: y > 0, or y == 0 and x > 0.  The
    endpoints are spine vertex ids (piece, vertex index) ordered so the
    segment runs from the first to the second along the stored
    holonomy.  cells is the sequence of triangulation cells the segment
    crosses, a certificate that can be replayed against the complex.
    """

    holonomy: tuple
    endpoints: tuple
    cells: tuple

    @property
    def length(self):
        return math.hypot(self.holonomy[0], self.holonomy[1])


@dataclass(frozen=True)
class SaddleSearch:
    """Search output: connections sorted by length plus budget status.

    cap_exceeded reports that the placement budget ran out, in which
    case the list is a sample rather than a census.  The seed pass
    records every triangulation edge before any unfolding happens, so
    even a truncated search still holds the shortest edges.
    """

    connections: tuple
    cap_exceeded: bool
    radius: float
    placements: int

    def __len__(self):
        return len(self.connections)

    def __iter__(self):
        return iter(self.connections)

    def __getitem__(self, index):
        return self.connections[index]


class _Complex:
    """Triangulated surface with per-edge transition maps.

    pts[t] holds the corner coordinates of triangle t in its cylinder
    chart, counterclockwise.  nbrs[t][e] is (t2, e2, sign, tx, ty):
    edge e of t (corner e to corner e+1) is glued to edge e2 of t2, and
    psi(z) = sign*z + (tx, ty) maps the chart of t2 into the chart of t.
    """

    def __init__(self):
        self.pts = []
        self.vids = []
        self.nbrs = []

    def add_triangle(self, pts, vids):
        self.pts.append(pts)
        self.vids.append(vids)
        self.nbrs.append([None, None, None])
        return len(self.pts) - 1

    def link(self, t1, e1, t2, e2, sign, tx, ty):
        self.nbrs[t1][e1] = (t2, e2, sign, tx, ty)
        if sign == 1:
            self.nbrs[t2][e2] = (t1, e1, 1, -tx, -ty)
        else:
            # a point reflection is its own inverse
            self.nbrs[t2][e2] = (t1, e1, -1, tx, ty)

    def min_edge(self):
        best = None
        for pts in self.pts:
            for e in range(3):
                d = math.dist(pts[e], pts[(e + 1) % 3])
                if best is None or d < best:
                    best = d
        return best


def _triangulate_cylinder(cx, q, cyl, arc_slot):
    """Cut one cylinder into corner-to-corner triangles.

    Corners of both boundary circles are merged by x position and swept
    once around; each event closes a triangle against the most recent
    corner seen on the opposite circle.  Every triangle gets exactly
    one boundary arc, recorded in arc_slot keyed by (piece, half_edge),
    and the sweep's first and last diagonals are glued across the seam
    with a one-period shift.
    """
    ell = cyl.length
    height = cyl.height
    events = []
    for idx, side in enumerate(cyl.bottom):
        x = side.x_tail
        if x >= ell:
            x -= ell
        vid = (side.piece, q.sa.graphs[side.piece].vertex_of(side.half_edge))
        events.append((x, 0, idx, vid, side))
    n_top = len(cyl.top)
    for idx, side in enumerate(cyl.top):
        x = side.x_tail
        if x >= ell:
            x -= ell
        vid = (side.piece, q.sa.graphs[side.piece].vertex_of(side.half_edge))
        # the arc to the right of a top corner is the previous side in
        # the face cycle: the top circle is laid out right to left
        arc = cyl.top[(idx - 1) % n_top]
        events.append((x, 1, idx, vid, arc))
    events.sort(key=lambda ev: (ev[0], ev[1], ev[2]))

    # seed with the last corner of each circle shifted one period left,
    # so the first triangle closes against the last ones over the seam
    last_b = [ev for ev in events if ev[1] == 0][-1]
    last_t = [ev for ev in events if ev[1] == 1][-1]
    cb_x, cb_vid, cb_arc = last_b[0] - ell, last_b[3], last_b[4]
    ct_x, ct_vid, ct_arc = last_t[0] - ell, last_t[3], last_t[4]

    tol = 1e-7 * (1.0 + ell)
    first = len(cx.pts)
    prev = None
    for x, rank, _idx, vid, arc in events:
        if rank == 0:
            assert abs((x - cb_x) - cb_arc.length) <= tol
            pts = ((cb_x, 0.0), (x, 0.0), (ct_x, height))
            vids = (cb_vid, vid, ct_vid)
            arc_side, arc_e, new_diag = cb_arc, 0, 1
            cb_x, cb_vid, cb_arc = x, vid, arc
        else:
            assert abs((x - ct_x) - ct_arc.length) <= tol
            pts = ((cb_x, 0.0), (x, height), (ct_x, height))
            vids = (cb_vid, vid, ct_vid)
            arc_side, arc_e, new_diag = ct_arc, 1, 0
            ct_x, ct_vid, ct_arc = x, vid, arc
        t = cx.add_triangle(pts, vids)
        arc_slot[(arc_side.piece, arc_side.half_edge)] = (t, arc_e)
        if prev is not None:
            cx.link(t, 2, prev[0], prev[1], 1, 0.0, 0.0)
        prev = (t, new_diag)
    cx.link(first, 2, prev[0], prev[1], 1, -ell, 0.0)


def _build_complex(q):
    cx = _Complex()
    arc_slot = {}
    for cyl in q.layout():
        _triangulate_cylinder(cx, q, cyl, arc_slot)
    for (piece, h), (t1, e1) in arc_slot.items():
        h2 = q.sa.graphs[piece].iota[h]
        if h2 < h:
            continue
        t2, e2 = arc_slot[(piece, h2)]
        # the tail corner of a side is identified with the head corner
        # of its partner, so psi sends tail2 -> head1 and head2 -> tail1
        head1 = cx.pts[t1][(e1 + 1) % 3]
        tail2 = cx.pts[t2][e2]
        if q.edge_flip(piece, h):
            cx.link(t1, e1, t2, e2, -1,
                    head1[0] + tail2[0], head1[1] + tail2[1])
        else:
            cx.link(t1, e1, t2, e2, 1,
                    head1[0] - tail2[0], head1[1] - tail2[1])
    for row in cx.nbrs:
        assert None not in row
    return cx


def _clipped_dist2(pa, pb, lo, hi):
    """Squared distance from the origin to the visible part of ab.

    The segment is clipped to the closed cone between lo and hi before
    measuring, so a corridor whose edge sweeps near the origin outside
    its own window does not keep the search alive.  Returns None when
    nothing of the segment lies in the cone.
    """
    ax, ay = pa
    bx, by = pb
    t0, t1 = 0.0, 1.0
    for ux, uy, sgn in ((lo[0], lo[1], 1.0), (hi[0], hi[1], -1.0)):
        c0 = sgn * (ux * ay - uy * ax)
        c1 = sgn * (ux * by - uy * bx)
        if c0 < 0.0 and c1 < 0.0:
            return None
        if c0 < 0.0:
            t0 = max(t0, c0 / (c0 - c1))
        elif c1 < 0.0:
            t1 = min(t1, c0 / (c0 - c1))
    if t0 > t1:
        return None
    dx = bx - ax
    dy = by - ay
    dd = dx * dx + dy * dy
    if dd > 0.0:
        t = -(ax * dx + ay * dy) / dd
        t = min(max(t, t0), t1)
    else:
        t = t0
    px = ax + t * dx
    py = ay + t * dy
    return px * px + py * py


def saddle_connections_up_to(q, radius, cap=DEFAULT_CAP):
    """Every saddle connection of length <= radius, sorted by length.

    Duplicates found from both endpoints or from different angular
    sectors collapse under a key of sign-normalized holonomy quantized
    at DEDUP_TOL together with the endpoint pair; parallel segments
    sharing holonomy and endpoints count once.  Raises RadiusTooSmall
    when nothing fits inside the radius (the shortest candidate is the
    shortest triangulation edge).  A search that spends its placement
    budget returns what it has with cap_exceeded set instead of
    raising.
    """
    if q.mode != NUMERIC:
        raise ModeMismatch("saddle search needs a numeric-mode surface")
    radius = float(radius)
    if not radius > 0.0:
        raise OutOfRange(f"radius must be positive, got {radius}")
    cap = int(cap)
    if cap < 0:
        raise OutOfRange(f"cap must be nonnegative, got {cap}")

    cx = _build_complex(q)
    pts = cx.pts
    vids = cx.vids
    nbrs = cx.nbrs
    r2 = radius * radius
    found = {}
    remaining = cap
    cap_exceeded = False

    def record(origin, target, hx, hy, cells):
        if hy < 0.0 or (hy == 0.0 and hx < 0.0):
            hx, hy = -hx, -hy
            ends = (target, origin)
        else:
            ends = (origin, target)
        # the endpoint pair is unordered in the key: holonomy carries a
        # sign ambiguity of its own, so the searches from the two ends
        # of one segment may agree on the normalized vector yet swap
        # the traversal order
        key = (round(hx / DEDUP_TOL), round(hy / DEDUP_TOL),
               min(ends), max(ends))
        if key not in found:
            found[key] = SaddleConnection((hx, hy), ends, cells)

    for t0 in range(len(pts)):
        for corner in range(3):
            ax, ay = pts[t0][corner]
            bx, by = pts[t0][(corner + 1) % 3]
            cx_, cy = pts[t0][(corner + 2) % 3]
            origin = vids[t0][corner]
            lox, loy = bx - ax, by - ay
            hix, hiy = cx_ - ax, cy - ay
            # the two triangle edges at this corner are themselves
            # saddle connections, and the open window below excludes
            # exactly their directions, so record them as seeds
            if lox * lox + loy * loy <= r2:
                record(origin, vids[t0][(corner + 1) % 3], lox, loy, (t0,))
            if hix * hix + hiy * hiy <= r2:
                record(origin, vids[t0][(corner + 2) % 3], hix, hiy, (t0,))
            d2 = _clipped_dist2((lox, loy), (hix, hiy),
                                (lox, loy), (hix, hiy))
            if d2 is None or d2 > r2:
                continue
            e0 = (corner + 1) % 3
            t1, e1, s1, tx1, ty1 = nbrs[t0][e0]
            queue = deque()
            queue.append((t1, e1, s1, tx1 - ax, ty1 - ay,
                          (lox, loy), (hix, hiy), (t0, t1)))
            while queue:
                if remaining <= 0:
                    cap_exceeded = True
                    break
                remaining -= 1
                t, in_e, ms, mx, my, lo, hi, path = queue.popleft()
                lx, ly = lo
                hx, hy = hi
                placed = []
                for k in range(3):
                    px, py = pts[t][k]
                    placed.append((ms * px + mx, ms * py + my))
                # rays must cross the entry edge going away from the
                # origin, so the triangle has to sit on the far side of
                # that edge's line.  Direction cones alone cannot see
                # this: a corridor that wraps a cone point of angle
                # 2 pi or more keeps every directional test happy
                # forever while its crossing parameters run backwards.
                pa = placed[in_e]
                pb = placed[(in_e + 1) % 3]
                pw = placed[(in_e + 2) % 3]
                side_o = pa[0] * pb[1] - pa[1] * pb[0]
                side_w = ((pb[0] - pa[0]) * (pw[1] - pa[1])
                          - (pb[1] - pa[1]) * (pw[0] - pa[0]))
                if side_o * side_w >= 0.0:
                    continue
                for k in range(3):
                    px, py = placed[k]
                    if (lx * py - ly * px > 0.0
                            and px * hy - py * hx > 0.0
                            and px * px + py * py <= r2):
                        record(origin, vids[t][k], px, py, path)
                for e in range(3):
                    if e == in_e:
                        continue
                    pa = placed[e]
                    pb = placed[(e + 1) % 3]
                    c = pa[0] * pb[1] - pa[1] * pb[0]
                    if c > 0.0:
                        ca, cb = pa, pb
                    elif c < 0.0:
                        ca, cb = pb, pa
                    else:
                        # edge collinear with the origin: nothing is
                        # visible through its open cone
                        continue
                    nlo = ca if lx * ca[1] - ly * ca[0] > 0.0 else lo
                    nhi = cb if cb[0] * hy - cb[1] * hx > 0.0 else hi
                    if nlo[0] * nhi[1] - nlo[1] * nhi[0] <= 0.0:
                        continue
                    d2 = _clipped_dist2(pa, pb, nlo, nhi)
                    if d2 is None or d2 > r2:
                        continue
                    t2, e2, s2, tx2, ty2 = nbrs[t][e]
                    queue.append((t2, e2, ms * s2, ms * tx2 + mx,
                                  ms * ty2 + my, nlo, nhi, path + (t2,)))

    conns = sorted(found.values(),
                   key=lambda c: (c.length, c.holonomy, c.endpoints))
    if not conns:
        raise RadiusTooSmall(
            f"no saddle connection has length <= {radius}; the shortest "
            f"triangulation edge is {cx.min_edge():.6g}")
    return SaddleSearch(tuple(conns), cap_exceeded, radius, cap - remaining)
