"""
Builders for the concrete piecewise-flat complexes the library certifies.

The menagerie: flat 3-tori on arbitrary lattices (Freudenthal-triangulated
grids), the double-torus blocks glued onto a base complex along designated
triangles, Bing's house with two rooms, the two counterexample gluings built
from it and from a tetrahedron, compact complexes with free fundamental
group, an operation that removes free faces by isometric self-identification
(changing the group only by a free factor), and the singular genus surfaces
obtained from a regular polygon with its vertex segments glued.

Everything returned here is a MetricComplex whose simplices are all flatly
realizable; identifications are performed by the quotient machinery, which
refuses non-simplicial or non-isometric gluings instead of repairing them.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations
from typing import NamedTuple

import numpy as np

from .complexes import (
    build_complex,
    canonical_simplex,
    collapse_core,
    faces_of,
    free_faces,
)
from .homology import RangeError
from .metric import (
    EPS_LEN,
    MetricComplex,
    MetricError,
    edge_key,
    embed_simplex,
    metric_disjoint_union,
    metric_quotient,
    realizable,
    vertex_link_graph,
)

_AXES = np.eye(3, dtype=int)


class SubdivisionError(ValueError):
    pass


class DegenerateMetricError(ValueError):
    pass


class PlacementError(RuntimeError):
    """No admissible identification target could be found."""


# ---------------------------------------------------------------------------
# simplices and grids


def simplex_complex(dim: int, edge_length: float = 1.0) -> MetricComplex:
    """The solid dim-simplex with all edges of the given length."""
    c = build_complex([tuple(range(dim + 1))], name=f"delta{dim}")
    lengths = {e: edge_length for e in
               (tuple(s) for s in c.k_simplices(1))}
    return MetricComplex(c, lengths)


def _grid_tets(sizes, vid):
    """Freudenthal tetrahedra of a cubical grid, via a vertex id function."""
    nx, ny, nz = sizes
    tets = []
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                base = np.array([i, j, k])
                for perm in permutations(range(3)):
                    chain = [base.copy()]
                    for axis in perm:
                        chain.append(chain[-1] + _AXES[axis])
                    tets.append((tuple(chain), tuple(vid(*p) for p in chain)))
    return tets


def _lengths_from_grid(tets, shape):
    lengths = {}
    for offsets, ids in tets:
        for (oa, ia), (ob, ib) in combinations(zip(offsets, ids), 2):
            delta = np.asarray(ob) - np.asarray(oa)
            lengths[edge_key(ia, ib)] = float(np.linalg.norm(shape @ delta))
    return lengths


def flat_torus3(m: int = 3, shape=None) -> MetricComplex:
    """Freudenthal-triangulated flat 3-torus on the lattice `shape` * (m Z)^3.

    m >= 3 keeps the grid quotient simplicial; `shape` is the 3x3 matrix
    whose columns span the lattice (identity by default).
    """
    if m < 3:
        raise SubdivisionError(f"torus grid needs m >= 3, got {m}")
    shape = np.eye(3) if shape is None else np.asarray(shape, dtype=float)
    if abs(np.linalg.det(shape)) < 1e-12:
        raise DegenerateMetricError("lattice matrix is singular")

    def vid(i, j, k):
        return ((i % m) * m + (j % m)) * m + (k % m)

    tets = _grid_tets((m, m, m), vid)
    c = build_complex([ids for _, ids in tets], name=f"torus3_{m}")
    return MetricComplex(c, _lengths_from_grid(tets, shape))


def flat_torus2(m: int = 3, shape=None) -> MetricComplex:
    """Flat 2-torus: an m x m grid of squares split along increasing diagonals."""
    if m < 3:
        raise SubdivisionError(f"torus grid needs m >= 3, got {m}")
    shape = np.eye(2) if shape is None else np.asarray(shape, dtype=float)
    if abs(np.linalg.det(shape)) < 1e-12:
        raise DegenerateMetricError("lattice matrix is singular")

    def vid(i, j):
        return (i % m) * m + (j % m)

    tris = []
    for i in range(m):
        for j in range(m):
            tris.append((((i, j), (i + 1, j), (i + 1, j + 1)),
                         (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1))))
            tris.append((((i, j), (i, j + 1), (i + 1, j + 1)),
                         (vid(i, j), vid(i, j + 1), vid(i + 1, j + 1))))
    c = build_complex([ids for _, ids in tris], name=f"torus2_{m}")
    lengths = {}
    for offsets, ids in tris:
        for (oa, ia), (ob, ib) in combinations(zip(offsets, ids), 2):
            delta = np.asarray(ob) - np.asarray(oa)
            lengths[edge_key(ia, ib)] = float(np.linalg.norm(shape @ delta))
    return MetricComplex(c, lengths)


def box_complex(nx: int, ny: int, nz: int) -> MetricComplex:
    """Freudenthal-triangulated solid box [0,nx] x [0,ny] x [0,nz]."""

    def vid(i, j, k):
        return (i * (ny + 1) + j) * (nz + 1) + k

    tets = _grid_tets((nx, ny, nz), vid)
    c = build_complex([ids for _, ids in tets], name=f"box{nx}{ny}{nz}")
    return MetricComplex(c, _lengths_from_grid(tets, np.eye(3)))


# ---------------------------------------------------------------------------
# Bing's house with two rooms


_HOUSE_BOX = (4, 3, 2)
_TUBE_UPPER = (1, 1)   # unit square [1,2] x [1,2], upper storey
_TUBE_LOWER = (2, 1)   # unit square [2,3] x [1,2], lower storey


def _house_squares():
    """Unit squares of the house, each as a (corner, axis-pair) record.

    The house lives in a 4 x 3 x 2 box: floor, roof and a middle wall divide
    it into two storeys; each storey is entered through a square tube passing
    through the other one, and one membrane per tube joins it to an outer
    wall so the complement of each tube stays simply connected.
    """
    ax, ay = _TUBE_UPPER
    bx, by = _TUBE_LOWER
    nx, ny, nz = _HOUSE_BOX
    squares = []
    for x in range(nx):           # horizontal plates, holes at the tube mouths
        for y in range(ny):
            if (x, y) != (bx, by):
                squares.append(((x, y, 0), "xy"))
            if (x, y) != (ax, ay):
                squares.append(((x, y, 2), "xy"))
            if (x, y) not in (_TUBE_UPPER, _TUBE_LOWER):
                squares.append(((x, y, 1), "xy"))
    for y in range(ny):           # outer walls
        for z in range(nz):
            squares.append(((0, y, z), "yz"))
            squares.append(((nx, y, z), "yz"))
    for x in range(nx):
        for z in range(nz):
            squares.append(((x, 0, z), "xz"))
            squares.append(((x, ny, z), "xz"))
    # upper tube walls (z in [1,2]) and lower tube walls (z in [0,1])
    squares += [((ax, ay, 1), "yz"), ((ax + 1, ay, 1), "yz"),
                ((ax, ay, 1), "xz"), ((ax, ay + 1, 1), "xz")]
    squares += [((bx, by, 0), "yz"), ((bx + 1, by, 0), "yz"),
                ((bx, by, 0), "xz"), ((bx, by + 1, 0), "xz")]
    # membranes: upper tube to the wall x=0, lower tube to the wall x=nx
    squares += [((0, ay, 1), "xz"), ((bx + 1, by + 1, 0), "xz")]
    return squares


def _square_triangles(corner, plane):
    x, y, z = corner
    if plane == "xy":
        c00, c10 = (x, y, z), (x + 1, y, z)
        c01, c11 = (x, y + 1, z), (x + 1, y + 1, z)
    elif plane == "yz":
        c00, c10 = (x, y, z), (x, y + 1, z)
        c01, c11 = (x, y, z + 1), (x, y + 1, z + 1)
    else:
        c00, c10 = (x, y, z), (x + 1, y, z)
        c01, c11 = (x, y, z + 1), (x + 1, y, z + 1)
    # increasing diagonal, matching the ambient Freudenthal box triangulation
    return [(c00, c10, c11), (c00, c01, c11)]


def house_with_two_rooms() -> MetricComplex:
    """A fixed triangulation of the house with two rooms.

    Contractible, yet with no free faces, so it admits no elementary
    collapse.  Vertices sit on the integer grid of a 4 x 3 x 2 box and edge
    lengths come from the Euclidean embedding; the triangulation embeds as a
    subcomplex of box_complex(4, 3, 2).
    """
    _, ny, nz = _HOUSE_BOX

    def vid(p):
        return (p[0] * (ny + 1) + p[1]) * (nz + 1) + p[2]

    tris = []
    coords = {}
    for corner, plane in _house_squares():
        for t in _square_triangles(corner, plane):
            ids = tuple(vid(p) for p in t)
            tris.append(ids)
            for p, i in zip(t, ids):
                coords[i] = np.asarray(p, dtype=float)
    c = build_complex(tris, name="house")
    lengths = {}
    for e in c.k_simplices(1):
        lengths[tuple(e)] = float(np.linalg.norm(coords[e[0]] - coords[e[1]]))
    return MetricComplex(c, lengths)


# ---------------------------------------------------------------------------
# gluing double-torus blocks along marked triangles


def _adapted_lattice(a: float, b: float, c: float) -> np.ndarray:
    """Lattice basis whose Freudenthal grid contains a triangle with sides
    a, b, c as the face (0, e1, e1+e2); flatness survives any nonsingular
    choice, and the third basis vector is an orthogonal strut of average
    side length."""
    if not realizable([a, b, c], 2):
        raise MetricError(f"interface triangle with sides {a}, {b}, {c} "
                          f"is not realizable")
    x = (a * a + c * c - b * b) / (2.0 * a)
    y = math.sqrt(max(c * c - x * x, 0.0))
    basis = np.array([[a, x - a, 0.0],
                      [0.0, y, 0.0],
                      [0.0, 0.0, (a + b + c) / 3.0]])
    if abs(np.linalg.det(basis)) < 1e-12:
        raise DegenerateMetricError(f"degenerate lattice for sides {a},{b},{c}")
    return basis


def _double_torus_block(sides, m: int):
    """Two flat 3-tori glued along a triangle congruent to `sides`.

    Returns (block, interface_vertices): the three interface vertex ids are
    ordered so their pairwise lengths match sides = (|p0 p1|, |p1 p2|,
    |p0 p2|).
    """
    a, b, c = sides
    torus = flat_torus3(m, shape=_adapted_lattice(a, b, c))

    def tvid(i, j, k):
        return ((i % m) * m + (j % m)) * m + (k % m)

    lam0 = (tvid(0, 0, 0), tvid(1, 0, 0), tvid(1, 1, 0))
    both, shift = metric_disjoint_union(torus, torus)
    lam1 = tuple(shift[v] for v in lam0)
    tri0 = canonical_simplex(lam0)
    tri1 = canonical_simplex(lam1)
    pair = ([s for s in faces_of(tri1)],
            [s for s in faces_of(tri0)],
            dict(zip(lam1, lam0)))
    block, vm = metric_quotient(both, [pair])
    interface = tuple(vm[v] for v in lam0)
    return block, interface


def glue_double_tori(base: MetricComplex, interfaces, torus_subdivision: int = 3,
                     name: str | None = None) -> MetricComplex:
    """Attach one double-torus block to the base along each marked triangle.

    Each block is two flat 3-tori sharing a triangle; its lattice is adapted
    so that shared triangle is congruent to the marked one, which makes every
    identification an isometry.  The Euler characteristic drops by 2 per
    marked triangle.
    """
    marked = [canonical_simplex(t) for t in interfaces]
    for t in marked:
        if t not in base.complex.simplices:
            raise MetricError(f"marked triangle {t} not in the base complex")
    if not marked:
        return base

    block_cache = {}
    simplices = set(base.complex.simplices)
    lengths = dict(base.lengths)
    offset = max(base.complex.vertices) + 1
    pairs = []
    for t in marked:
        p0, p1, p2 = t
        sides = (base.length(p0, p1), base.length(p1, p2), base.length(p0, p2))
        key = tuple(round(s, 12) for s in sides)
        if key not in block_cache:
            block_cache[key] = _double_torus_block(sides, torus_subdivision)
        block, interface = block_cache[key]
        nverts = len(block.complex.vertices)
        for s in block.complex.simplices:
            simplices.add(tuple(v + offset for v in s))
        for (u, v), l in block.lengths.items():
            lengths[edge_key(u + offset, v + offset)] = l
        lam = tuple(v + offset for v in interface)
        lam_tri = canonical_simplex(lam)
        pairs.append(([s for s in faces_of(lam_tri)],
                      [s for s in faces_of(t)],
                      dict(zip(lam, t))))
        offset += nverts

    from .complexes import Complex

    assembled = MetricComplex(Complex(frozenset(simplices), name=name), lengths)
    glued, _ = metric_quotient(assembled, pairs)
    return MetricComplex(glued.complex, glued.lengths)


# ---------------------------------------------------------------------------
# the two counterexample gluings


EXAMPLE1 = "example1"
EXAMPLE2 = "example2"


def example1_interface_complex(override_angles=None) -> MetricComplex:
    """The three boundary triangles of a tetrahedron sharing the vertex 0.

    With the intrinsic metric each triangle is equilateral (all corner
    angles pi/3); `override_angles` reshapes the triangles so the corner
    angles at vertex 0 take prescribed values instead, by adjusting only the
    edges opposite to vertex 0.
    """
    tris = [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
    c = build_complex(tris, name="example1-interfaces")
    lengths = {tuple(e): 1.0 for e in c.k_simplices(1)}
    if override_angles is not None:
        if len(override_angles) != len(tris):
            raise MetricError(f"need {len(tris)} override angles")
        for t, ang in zip(tris, override_angles):
            if not 0.0 < ang < math.pi:
                raise MetricError(f"override angle {ang} outside (0, pi)")
            opposite = edge_key(*[v for v in t if v != 0])
            lengths[opposite] = 2.0 * math.sin(ang / 2.0)
    return MetricComplex(c, lengths)


def example_complex(name: str, override_angles=None) -> MetricComplex:
    """The two gluing counterexamples.

    example1: a unit tetrahedron with a double-torus block on each of the
    three boundary triangles at vertex 0.  With override angles the solid
    tetrahedron is replaced by the three reshaped triangles alone (the solid
    would be metrically degenerate, and the reshaped object is the carrier
    of the alternate metric anyway).

    example2: a triangulated solid box containing the house with two rooms,
    with a block on every house triangle.
    """
    if name == EXAMPLE1:
        tris = [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
        if override_angles is None:
            base = simplex_complex(3)
        else:
            base = example1_interface_complex(override_angles)
        return glue_double_tori(base, tris, name=EXAMPLE1)
    if name == EXAMPLE2:
        house = house_with_two_rooms()
        base = box_complex(*_HOUSE_BOX)
        for t in house.complex.k_simplices(2):
            if t not in base.complex.simplices:
                raise MetricError(f"house triangle {t} missing from the box")
        return glue_double_tori(base, house.complex.k_simplices(2),
                                name=EXAMPLE2)
    raise ValueError(f"unknown example {name!r}")


# ---------------------------------------------------------------------------
# complexes with free fundamental group


def free_group_complex(n: int) -> MetricComplex:
    """A compact flat 2-complex without free faces and with first homology
    of rank n (its fundamental group is free of rank n).

    For n >= 3: a unit-circumference flat cylinder whose bottom boundary
    circle absorbs a wrapped interior vertical segment of length one, and
    whose top circle is covered by n-2 arcs, each identified with a disjoint
    interior vertical segment of matching length.  For n = 2 the cylinder is
    replaced by a flat Moebius band, whose single boundary circle absorbs
    the wrapped segment.
    """
    if n < 2:
        raise RangeError(f"free group rank must be >= 2, got {n}")
    if n == 2:
        return _moebius_variant()
    m = max(3 * (n - 2), 6)
    rows = m + 4  # two margin rows keep the segments clear of both circles
    h = 1.0 / m

    def vid(i, j):
        return (i % m) * (rows + 1) + j

    tris, lengths = _grid_strip(m, rows, h, vid)
    c = build_complex(tris, name=f"freegroup{n}")
    mc = MetricComplex(c, lengths)
    k = m // (n - 2)

    def pairs_for(shift0, shift1):
        pairs = []
        # wrap the interior vertical segment at column 0 onto the bottom circle
        seg = [vid(0, 2 + t) for t in range(m + 1)]
        bottom = [vid((t + shift0) % m, 0) for t in range(m)]
        pairs.append(([(seg[-1],)], [(seg[0],)], {seg[-1]: seg[0]}))
        pairs.append(_path_onto_cycle_pair(seg, bottom))
        # identify each short interior segment with its arc on the top circle
        for i in range(1, n - 1):
            col = 2 * i + 1
            seg_i = [vid(col, 2 + t) for t in range(k + 1)]
            arc_i = [vid(((i - 1) * k + t + shift1) % m, rows)
                     for t in range(k + 1)]
            if k == m:  # a single arc covering the whole circle wraps too
                pairs.append(([(seg_i[-1],)], [(seg_i[0],)],
                              {seg_i[-1]: seg_i[0]}))
            pairs.append(_segments_pair(seg_i, arc_i))
        return pairs

    # the wrapping offsets only rotate the identification; take the first
    # ones the quotient accepts as simplicial
    return _first_valid_gluing(
        mc, pairs_for,
        [(s0, s1) for s0 in range(m) for s1 in (range(m) if k == m else (0,))],
        f"freegroup{n}")


def _grid_strip(cols, rows, h, vid):
    """Square cells of size h split along increasing diagonals."""
    tris = []
    lengths = {}
    diag = h * math.sqrt(2.0)
    for i in range(cols):
        for j in range(rows):
            c00, c10 = vid(i, j), vid(i + 1, j)
            c01, c11 = vid(i, j + 1), vid(i + 1, j + 1)
            tris += [(c00, c10, c11), (c00, c01, c11)]
            lengths[edge_key(c00, c10)] = h
            lengths[edge_key(c01, c11)] = h
            lengths[edge_key(c00, c01)] = h
            lengths[edge_key(c10, c11)] = h
            lengths[edge_key(c00, c11)] = diag
    return tris, lengths


def _path_onto_cycle_pair(path, cycle):
    """Identification wrapping a closed-up path onto a cycle of equal length."""
    m = len(cycle)
    vmap = {path[t]: cycle[t % m] for t in range(len(path))}
    src = [(v,) for v in path]
    src += [canonical_simplex((path[t], path[t + 1])) for t in range(len(path) - 1)]
    dst = [(v,) for v in cycle]
    dst += [canonical_simplex((cycle[t], cycle[(t + 1) % m])) for t in range(m)]
    return (src, dst, vmap)


def _segments_pair(seg, arc):
    """Identification of two embedded edge paths of equal step lengths."""
    vmap = dict(zip(seg, arc))
    src = [(v,) for v in seg]
    src += [canonical_simplex((seg[t], seg[t + 1])) for t in range(len(seg) - 1)]
    dst = [(v,) for v in dict.fromkeys(arc)]
    dst += [canonical_simplex((arc[t], arc[t + 1])) for t in range(len(arc) - 1)]
    return (src, dst, vmap)


def _moebius_variant() -> MetricComplex:
    """Flat Moebius band with its boundary circle absorbing a wrapped
    interior segment; first homology has rank 2."""
    cols = 6
    rows = 2 * cols + 4
    h = 1.0 / (2 * cols)

    def vid(i, j):
        if i == cols:
            return 0 * (rows + 1) + (rows - j)
        return i * (rows + 1) + j

    tris, lengths = _grid_strip(cols, rows, h, vid)
    c = build_complex(tris, name="freegroup2")
    mc = MetricComplex(c, lengths)

    circle = [vid(t, 0) for t in range(cols)] + \
             [vid(t, rows) for t in range(cols)]
    seg = [vid(2, 2 + t) for t in range(2 * cols + 1)]

    def pairs_for(shift):
        boundary = [circle[(t + shift) % len(circle)]
                    for t in range(len(circle))]
        return [([(seg[-1],)], [(seg[0],)], {seg[-1]: seg[0]}),
                _path_onto_cycle_pair(seg, boundary)]

    return _first_valid_gluing(mc, lambda s, _unused: pairs_for(s),
                               [(s, 0) for s in range(len(circle))],
                               "freegroup2")


def _first_valid_gluing(mc, pairs_for, candidates, what):
    from .complexes import QuotientDegeneracyError

    for c1, c2 in candidates:
        try:
            glued, _ = metric_quotient(mc, pairs_for(c1, c2))
        except QuotientDegeneracyError:
            continue
        return MetricComplex(glued.complex, glued.lengths)
    raise PlacementError(f"no admissible wrapping offsets for {what}")


# ---------------------------------------------------------------------------
# removing free faces by isometric self-identification


class GcifyResult(NamedTuple):
    complex: MetricComplex
    added_loops: int


def midpoint_subdivision(mc: MetricComplex) -> MetricComplex:
    """Split every edge at its midpoint (complexes of dimension <= 3).

    Triangles fall into four half-size pieces; tetrahedra into four corner
    pieces plus a central octahedron cut along its shortest diagonal.  All
    new lengths are true Euclidean distances inside the flat simplices, so
    the metric is subdivided exactly.
    """
    c = mc.complex
    if c.dim > 3:
        raise SubdivisionError("midpoint subdivision implemented for dim <= 3")
    base = (max(c.vertices) + 1) if c.vertices else 0
    mid = {}
    for idx, e in enumerate(c.k_simplices(1)):
        mid[tuple(e)] = base + idx

    def m(u, v):
        return mid[edge_key(u, v)]

    lengths = {}
    for (u, v), l in mc.lengths.items():
        w = m(u, v)
        lengths[edge_key(u, w)] = l / 2.0
        lengths[edge_key(w, v)] = l / 2.0
    generators = []
    for s in c.facets():
        if len(s) == 1:
            generators.append(s)
        elif len(s) == 2:
            u, v = s
            generators += [(u, m(u, v)), (m(u, v), v)]
        elif len(s) == 3:
            generators += _split_triangle(s, m, mc, lengths)
        else:
            generators += _split_tetrahedron(s, m, mc, lengths)
    # non-facet triangles of tetrahedra still need their midsegment lengths,
    # which _split_triangle records; run it on every triangle
    for s in c.k_simplices(2):
        _split_triangle(s, m, mc, lengths)
    name = c.name
    return MetricComplex(build_complex(generators, name=name), lengths)


def _split_triangle(s, m, mc, lengths):
    a, b, c_ = s
    mab, mac, mbc = m(a, b), m(a, c_), m(b, c_)
    lengths[edge_key(mab, mac)] = mc.length(b, c_) / 2.0
    lengths[edge_key(mab, mbc)] = mc.length(a, c_) / 2.0
    lengths[edge_key(mac, mbc)] = mc.length(a, b) / 2.0
    return [(a, mab, mac), (b, mab, mbc), (c_, mac, mbc), (mab, mac, mbc)]


def _split_tetrahedron(s, m, mc, lengths):
    a, b, c_, d = s
    pts = embed_simplex(mc.simplex_lengths(s), 3)
    pos = dict(zip(s, pts))
    mids = {frozenset(p): (pos[p[0]] + pos[p[1]]) / 2.0
            for p in combinations(s, 2)}
    opposite = [((a, b), (c_, d)), ((a, c_), (b, d)), ((a, d), (b, c_))]
    diag_lengths = {}
    for e1, e2 in opposite:
        dl = float(np.linalg.norm(mids[frozenset(e1)] - mids[frozenset(e2)]))
        diag_lengths[(e1, e2)] = dl
    (e1, e2), dl = min(diag_lengths.items(), key=lambda kv: (kv[1], kv[0]))
    x, y = m(*e1), m(*e2)
    lengths[edge_key(x, y)] = dl
    corner = [(v,) + tuple(m(v, w) for w in s if w != v) for v in s]
    others = [p for p in combinations(s, 2)
              if p not in (e1, e2) and tuple(sorted(p)) not in
              (tuple(sorted(e1)), tuple(sorted(e2)))]
    # equator 4-cycle: midpoints of the remaining edges, consecutive ones
    # sharing an original vertex
    eq = [others[0]]
    rest = others[1:]
    while rest:
        last = set(eq[-1])
        nxt = next(p for p in rest if set(p) & last)
        eq.append(nxt)
        rest.remove(nxt)
    central = []
    for t in range(4):
        p, q = eq[t], eq[(t + 1) % 4]
        central.append((x, y, m(*p), m(*q)))
    return corner + central


def gcify(mc: MetricComplex, max_rounds: int = 6) -> GcifyResult:
    """Remove every free face; the fundamental group gains a free factor.

    Free faces disappear through two homotopy-controlled moves.  Isometric
    identification of a free face with a disjoint simplex adds exactly one
    loop (one unit of first homology rank); the count of identifications is
    reported.  Elementary collapses remove free face / coface pairs without
    changing the homotopy type at all.  The loop identifies whatever it can,
    subdividing at midpoints until the first identification lands, and
    collapses the rest; the result has no free faces and first homology
    rank increased by exactly the reported count.
    """
    work = mc
    added = 0
    rounds = 0
    while True:
        frees = free_faces(work.complex)
        if not frees:
            break
        batch = _identification_batch(work, frees)
        applied = 0
        if batch:
            work, applied = _apply_batch(work, batch)
            added += applied
        if applied:
            continue
        if added:
            # nothing left to identify: collapsing is homotopy-preserving
            # and always terminates with zero free faces
            core, _ = collapse_core(work.complex)
            lengths = {tuple(e): work.lengths[tuple(e)]
                       for e in core.k_simplices(1)}
            work = MetricComplex(core, lengths)
            continue
        rounds += 1
        if rounds > max_rounds:
            raise PlacementError(
                f"no identifiable pair among {len(frees)} free faces "
                f"after {max_rounds} subdivision rounds")
        # uniform halving keeps piece lengths commensurable
        work = midpoint_subdivision(work)
    return GcifyResult(work, added)


def _apply_batch(work, batch):
    """Apply as large a prefix of the batch as validates in one quotient.

    Pairs were validated one by one against the same complex; rare
    interactions between them are resolved by halving the batch.  Dropped
    pairs are rediscovered on the next sweep.
    """
    from .complexes import QuotientDegeneracyError

    while batch:
        try:
            glued, _ = metric_quotient(work, batch)
            return MetricComplex(glued.complex, glued.lengths), len(batch)
        except (QuotientDegeneracyError, MetricError):
            batch = batch[:len(batch) // 2]
    return work, 0


def stellar_edge_split(mc: MetricComplex, edge) -> MetricComplex:
    """Split one edge at its midpoint, subdividing exactly its cofaces."""
    u, v = edge_key(*edge)
    c = mc.complex
    if (u, v) not in c.simplices:
        raise SubdivisionError(f"edge {(u, v)} not in complex")
    w = max(c.vertices) + 1
    length_uv = mc.length(u, v)
    lengths = dict(mc.lengths)
    del lengths[(u, v)]
    lengths[edge_key(u, w)] = length_uv / 2.0
    lengths[edge_key(v, w)] = length_uv / 2.0
    generators = [(w,)]
    for s in c.simplices:
        if u in s and v in s:
            rest = [x for x in s if x not in (u, v)]
            for x in rest:
                # median from the midpoint of (u, v) to x
                a, b, cc = mc.length(u, x), mc.length(v, x), length_uv
                lengths[edge_key(w, x)] = math.sqrt(
                    max(2 * a * a + 2 * b * b - cc * cc, 0.0)) / 2.0
            generators.append(tuple(sorted([x for x in s if x != v] + [w])))
            generators.append(tuple(sorted([x for x in s if x != u] + [w])))
        else:
            generators.append(s)
    return MetricComplex(build_complex(generators, name=c.name), lengths)


def _identification_batch(mc: MetricComplex, frees):
    """A maximal set of independent isometric identifications of free faces.

    A free face may glue onto another free face (both stop being free) or
    onto any disjoint isometric simplex elsewhere in the complex, whose
    cofaces it then shares.  Least-entangled free faces go first; partners
    disjoint from the face's whole closed neighborhood are preferred; each
    candidate passes a local degeneracy check (the quotient validator
    restricted to the affected stars), and accepted identifications claim
    their affected vertices so the batch members cannot interact.
    """
    star = {}
    nbrs = {}
    for s in mc.complex.simplices:
        for v in s:
            star.setdefault(v, []).append(s)
        if len(s) == 2:
            nbrs.setdefault(s[0], set()).add(s[1])
            nbrs.setdefault(s[1], set()).add(s[0])

    def length_key(s):
        if len(s) == 1:
            return (len(s),)
        return (len(s),) + tuple(round(l, 9)
                                 for l in sorted(mc.simplex_lengths(s)))

    def pollution(s):
        return sum(len(nbrs.get(v, ())) for v in s)

    free_set = {p.face for p in frees}
    by_key = {}
    for s in mc.complex.simplices:
        by_key.setdefault(length_key(s), []).append(s)
    for group in by_key.values():
        # least-entangled partners first, free or not: fresh free pieces can
        # absorb each other, saving the interior supply for the rest
        group.sort(key=lambda s: (pollution(s), s in free_set, s))

    claimed = set()
    batch = []
    for fa in sorted(free_set, key=lambda s: (len(s), pollution(s), s)):
        if set(fa) & claimed:
            continue
        closed = set(fa)
        for v in fa:
            closed |= nbrs.get(v, set())
        group = by_key.get(length_key(fa), ())
        clean = [s for s in group if s != fa and not (set(s) & closed)]
        risky = [s for s in group
                 if s != fa and (set(s) & closed) and not (set(s) & set(fa))]
        found = None
        for fb in (clean + risky)[:80]:
            if set(fb) & claimed:
                continue
            for perm in permutations(fb):
                # merging adjacent vertices degenerates their edge
                if any(w in nbrs.get(v, ()) for v, w in zip(fa, perm)):
                    continue
                if not _isometric_map(mc, fa, perm):
                    continue
                if not _pair_admissible(mc.complex, star, fa, perm):
                    continue
                found = perm
                break
            if found:
                break
        if found is None:
            continue
        vmap = dict(zip(fa, found))
        batch.append(([s for s in faces_of(fa)],
                      [s for s in faces_of(canonical_simplex(found))],
                      vmap))
        claimed |= set(fa) | set(found)
    return batch


def _pair_admissible(c, star, fa, perm) -> bool:
    """Whether identifying fa with perm keeps the complex simplicial.

    Equivalent to running the quotient validator, but restricted to the
    simplices meeting the identified vertices; everything else is untouched
    and cannot degenerate or collide.
    """
    cls = {}
    for v, w in zip(fa, perm):
        r = min(v, w)
        cls[v] = r
        cls[w] = r
    declared = {}
    for f in faces_of(fa):
        image = tuple(sorted({cls[v] for v in f}))
        declared[image] = 2  # the face and its partner both map there
    seen = {}
    affected = set()
    for v in list(fa) + list(perm):
        affected.update(star[v])
    # acceptance is a pure counting condition, so iteration order is free
    for s in affected:
        image = tuple(sorted({cls.get(v, v) for v in s}))
        if len(image) < len(s):
            return False
        prior = seen.get(image)
        if prior is not None and prior != s:
            allowance = declared.get(image, 1)
            if allowance <= 1:
                return False
            declared[image] = allowance - 1
        else:
            seen[image] = s
        if image not in affected and image != s and image in c.simplices:
            return False  # collides with an untouched simplex
    return True


def _isometric_map(mc, fa, fb_ordered):
    for (a1, a2), (b1, b2) in zip(combinations(fa, 2),
                                  combinations(fb_ordered, 2)):
        la, lb = mc.length(a1, a2), mc.length(b1, b2)
        if abs(la - lb) > EPS_LEN * max(1.0, la):
            return False
    return True


# ---------------------------------------------------------------------------
# singular genus surfaces


def genus_surface(n: int, identify_segments: bool = True) -> MetricComplex:
    """Genus-n surface from a regular 4n-gon, optionally made singular.

    The polygon (unit sides) is triangulated with a half-scale interior ring
    and a central fan, its sides are identified in the standard genus-n
    pattern (every polygon corner lands on a single vertex whose total angle
    is 2*pi*(2n-1)), and finally two of the vertex segments separated by
    more than 2*pi of angle on both sides are identified.  The result is
    flat away from the identified vertex, nonpositively curved, without free
    faces, and not a surface: the merged segment lies in four triangles.
    """
    if n < 2:
        raise RangeError(f"genus must be >= 2, got {n}")
    sides = 4 * n
    per_side = 3  # two interior points per side keep the quotient simplicial
    ring = per_side * sides
    radius = 1.0 / (2.0 * math.sin(math.pi / sides))

    outer = []
    for s in range(sides):
        th0 = 2.0 * math.pi * s / sides
        th1 = 2.0 * math.pi * (s + 1) / sides
        p = np.array([math.cos(th0), math.sin(th0)]) * radius
        p1 = np.array([math.cos(th1), math.sin(th1)]) * radius
        for t in range(per_side):
            outer.append(p + (p1 - p) * (t / per_side))
    coords = {t: outer[t] for t in range(ring)}
    for t in range(ring):
        coords[ring + t] = outer[t] * 0.5
    center = 2 * ring
    coords[center] = np.zeros(2)

    tris = []
    for t in range(ring):
        t1 = (t + 1) % ring
        tris.append((t, t1, ring + t1))
        tris.append((t, ring + t1, ring + t))
        tris.append((ring + t, ring + t1, center))
    c = build_complex(tris, name=f"genus{n}")
    lengths = {}
    for e in c.k_simplices(1):
        lengths[tuple(e)] = float(np.linalg.norm(coords[e[0]] - coords[e[1]]))
    mc = MetricComplex(c, lengths)

    def side_points(s):
        return [(per_side * s + t) % ring for t in range(per_side + 1)]

    pairs = []
    for j in range(n):
        for off in (0, 1):  # identify side 4j+off with side 4j+off+2, reversed
            sa, sb = 4 * j + off, 4 * j + off + 2
            apts = side_points(sa)
            bpts = list(reversed(side_points(sb)))
            vmap = dict(zip(apts, bpts))
            src = [(v,) for v in apts]
            src += [canonical_simplex(e) for e in zip(apts, apts[1:])]
            dst = [(v,) for v in bpts]
            dst += [canonical_simplex(e) for e in zip(bpts, bpts[1:])]
            pairs.append((src, dst, vmap))
    glued, vm = metric_quotient(mc, pairs)
    surface = MetricComplex(glued.complex, glued.lengths)

    corner_classes = {vm[per_side * s] for s in range(sides)}
    if len(corner_classes) != 1:
        raise PlacementError("side identifications did not merge all corners")
    apex = corner_classes.pop()
    if not identify_segments:
        return surface

    mid_classes = {vm[per_side * s + 1] for s in range(sides)} | \
                  {vm[per_side * s + per_side - 1] for s in range(sides)}
    alpha, beta, arcs = _balanced_link_split(surface, apex, mid_classes)
    if min(arcs) <= 2.0 * math.pi:
        raise PlacementError(
            f"cannot separate two vertex segments by more than 2*pi "
            f"(arcs {arcs})")
    e_a, e_b = canonical_simplex((apex, alpha)), canonical_simplex((apex, beta))
    pair = ([s for s in faces_of(e_a)], [s for s in faces_of(e_b)],
            {apex: apex, alpha: beta})
    final, _ = metric_quotient(surface, [pair])
    return MetricComplex(final.complex, final.lengths)


def _balanced_link_split(mc: MetricComplex, v: int, mid_classes):
    """Pick two side-midpoint link nodes splitting the link circle of v into
    two arcs as evenly as possible; returns (node_a, node_b, arcs)."""
    g = vertex_link_graph(mc, v)
    adj = {}
    for a in g.arcs:
        adj.setdefault(a.u, []).append((a.v, a.weight))
        adj.setdefault(a.v, []).append((a.u, a.weight))
    if any(len(nbrs) != 2 for nbrs in adj.values()):
        raise PlacementError(f"link of vertex {v} is not a single circle")
    start = g.nodes[0]
    order = [start]
    pos = [0.0]
    prev = None
    while True:
        here = order[-1]
        w, wt = next((w, wt) for w, wt in adj[here] if w != prev)
        if w == start:
            total = pos[-1] + wt
            break
        order.append(w)
        pos.append(pos[-1] + wt)
        prev = here
    at = {x: p for x, p in zip(order, pos)}
    mids = [x for x in order if x in mid_classes]
    alpha = mids[0]
    best = None
    for x in mids[1:]:
        d1 = abs(at[x] - at[alpha])
        d2 = total - d1
        score = min(d1, d2)
        if best is None or score > best[0]:
            best = (score, x, (d1, d2))
    _, beta, arcs = best
    return alpha, beta, arcs
