"""
Piecewise-flat metrics on simplicial complexes.

A metric complex is a complex plus positive edge lengths realizing every
simplex as a flat Euclidean simplex (certified by Cayley-Menger sign
patterns).  Vertex and edge links become weighted multigraphs whose arc
weights are corner and dihedral angles; the nonpositive-curvature condition
for 2-complexes is "no vertex link has an injective loop shorter than 2*pi",
and geodesic extendability additionally needs every link point to see some
other link point at distance at least pi.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .complexes import (
    Complex,
    MissingSimplexError,
    canonical_simplex,
    free_faces,
    quotient,
)
from .report import FAIL, PASS, CheckItem, CheckReport

EPS_CM = 1e-9      # relative tolerance on Cayley-Menger determinants
EPS_ANG = 1e-9     # tolerance on angle comparisons
EPS_GB = 1e-6      # absolute tolerance on the Gauss-Bonnet identity
EPS_LEN = 1e-9     # relative tolerance when identified edges must be isometric
DEFAULT_DELTA = 1e-3

TWO_PI = 2.0 * math.pi


class MetricError(Exception):
    """A length assignment fails to realize some simplex flatly."""


class ArityError(ValueError):
    pass


class DomainError(ValueError):
    pass


class DimensionError(ValueError):
    pass


class SurfaceConditionError(ValueError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


def edge_key(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class MetricComplex:
    """A complex with an edge-length map (abstract length units)."""

    complex: Complex
    lengths: dict = field(compare=False)

    def length(self, u: int, v: int) -> float:
        return self.lengths[edge_key(u, v)]

    def simplex_lengths(self, s) -> list:
        """Edge lengths of a simplex in canonical vertex-pair order."""
        return [self.length(a, b) for a, b in combinations(s, 2)]

    def restrict(self, simplices, name=None) -> "MetricComplex":
        sub = self.complex.subcomplex(simplices, name=name)
        lengths = {e: self.lengths[e] for e in
                   (tuple(s) for s in sub.k_simplices(1))}
        return MetricComplex(sub, lengths)


# ---------------------------------------------------------------------------
# flat realizability


def _cayley_menger_det(d2: np.ndarray) -> float:
    n = d2.shape[0]
    m = np.ones((n + 1, n + 1))
    m[0, 0] = 0.0
    m[1:, 1:] = d2
    return float(np.linalg.det(m))


def realizable(edge_lengths: list, dim: int, eps: float = EPS_CM) -> bool:
    """Whether a flat nondegenerate simplex with these edge lengths exists.

    Lengths are given in canonical vertex-pair order, C(dim+1, 2) of them.
    The test checks the Cayley-Menger sign pattern on every face: the
    determinant on m points must have sign (-1)^m and magnitude above the
    (scale-normalized) tolerance.
    """
    n = dim + 1
    pairs = list(combinations(range(n), 2))
    if len(edge_lengths) != len(pairs):
        raise ArityError(
            f"expected {len(pairs)} edge lengths for a {dim}-simplex, "
            f"got {len(edge_lengths)}")
    if any(l <= 0 for l in edge_lengths):
        return False
    d2 = np.zeros((n, n))
    for (i, j), l in zip(pairs, edge_lengths):
        d2[i, j] = d2[j, i] = l * l
    scale = float(d2.max())
    if scale == 0.0:
        return False
    for m in range(3, n + 1):
        for subset in combinations(range(n), m):
            det = _cayley_menger_det(d2[np.ix_(subset, subset)])
            sign = -1 if m % 2 else 1
            if sign * det <= eps * scale ** (m - 1):
                return False
    return True


def corner_angle(a: float, b: float, c: float) -> float:
    """Angle between the sides of lengths a and b, opposite side c."""
    if a <= 0 or b <= 0 or c <= 0:
        raise DomainError(f"nonpositive length in corner ({a}, {b}, {c})")
    arg = (a * a + b * b - c * c) / (2.0 * a * b)
    return math.acos(max(-1.0, min(1.0, arg)))


def embed_simplex(edge_lengths: list, dim: int) -> np.ndarray:
    """Coordinates of a flat simplex with the given edge lengths.

    Vertex 0 sits at the origin; the Gram matrix is factored by eigenvalue
    decomposition, so mildly degenerate inputs come out flattened rather
    than failing.
    """
    n = dim + 1
    pairs = list(combinations(range(n), 2))
    if len(edge_lengths) != len(pairs):
        raise ArityError(
            f"expected {len(pairs)} edge lengths for a {dim}-simplex")
    d2 = np.zeros((n, n))
    for (i, j), l in zip(pairs, edge_lengths):
        d2[i, j] = d2[j, i] = l * l
    g = 0.5 * (d2[0, 1:, None].repeat(n - 1, axis=1)
               + d2[0, None, 1:].repeat(n - 1, axis=0) - d2[1:, 1:])
    w, v = np.linalg.eigh(g)
    w = np.clip(w, 0.0, None)
    coords = v * np.sqrt(w)
    return np.vstack([np.zeros(n - 1), coords])


def dihedral_angle(mc: MetricComplex, tet, edge) -> float:
    """Dihedral angle of a tetrahedron along one of its edges."""
    tet = canonical_simplex(tet)
    a, b = edge_key(*edge)
    rest = [v for v in tet if v not in (a, b)]
    if len(rest) != 2:
        raise DomainError(f"{edge} is not an edge of {tet}")
    c, d = rest
    order = [a, b, c, d]
    lengths = [mc.length(x, y) for x, y in combinations(order, 2)]
    pts = embed_simplex(lengths, 3)
    pa, pb, pc, pd = pts
    e = pb - pa
    e = e / np.linalg.norm(e)
    u = (pc - pa) - np.dot(pc - pa, e) * e
    v = (pd - pa) - np.dot(pd - pa, e) * e
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise MetricError(f"degenerate dihedral in {tet} along {edge}")
    arg = float(np.dot(u, v) / (nu * nv))
    return math.acos(max(-1.0, min(1.0, arg)))


def validate_metric(mc: MetricComplex, eps: float = EPS_CM) -> None:
    """Raise MetricError unless every simplex is flatly realizable."""
    for e in mc.complex.k_simplices(1):
        l = mc.lengths.get(tuple(e))
        if l is None:
            raise MetricError(f"edge {e} has no length")
        if l <= 0:
            raise MetricError(f"edge {e} has nonpositive length {l}")
    for k in range(2, mc.complex.dim + 1):
        for s in mc.complex.k_simplices(k):
            if not realizable(mc.simplex_lengths(s), k, eps):
                raise MetricError(f"simplex {s} is not flatly realizable")


def angle_sum_at_vertex(mc: MetricComplex, v: int) -> float:
    """Total corner angle over all triangles containing the vertex."""
    total = 0.0
    for t in mc.complex.k_simplices(2):
        if v in t:
            a, b = [x for x in t if x != v]
            total += corner_angle(mc.length(v, a), mc.length(v, b),
                                  mc.length(a, b))
    return total


# ---------------------------------------------------------------------------
# metric graphs (links)


class Arc(NamedTuple):
    u: int
    v: int
    weight: float
    tag: tuple = ()


@dataclass(frozen=True)
class MetricGraph:
    """Weighted multigraph; parallel arcs allowed, self-loops not."""

    nodes: tuple
    arcs: tuple

    def __post_init__(self):
        nodeset = set(self.nodes)
        for a in self.arcs:
            if a.u == a.v:
                raise DomainError(f"self-loop at {a.u}")
            if a.weight <= 0:
                raise DomainError(f"nonpositive arc weight {a.weight}")
            if a.u not in nodeset or a.v not in nodeset:
                raise DomainError(f"arc {a} references unknown node")

    def total_weight(self) -> float:
        return sum(a.weight for a in self.arcs)


def vertex_link_graph(mc: MetricComplex, v: int) -> MetricGraph:
    """The metric link of a vertex in a locally 2-dimensional complex.

    Nodes are the edges at v (labelled by their opposite vertex); each
    triangle at v contributes an arc weighted by its corner angle there.
    """
    c = mc.complex
    if (v,) not in c.simplices:
        raise MissingSimplexError(f"vertex {v} not in complex")
    nodes = []
    arcs = []
    for s in sorted(c.simplices, key=lambda s: (len(s), s)):
        if v not in s:
            continue
        if len(s) == 2:
            nodes.append(s[0] if s[1] == v else s[1])
        elif len(s) == 3:
            a, b = [x for x in s if x != v]
            ang = corner_angle(mc.length(v, a), mc.length(v, b),
                               mc.length(a, b))
            arcs.append(Arc(a, b, ang, tag=s))
        elif len(s) >= 4:
            raise DimensionError(
                f"vertex {v} lies in {s}; vertex links are only built where "
                f"the star is 2-dimensional")
    return MetricGraph(tuple(nodes), tuple(arcs))


def edge_link_graph(mc: MetricComplex, e) -> MetricGraph:
    """The metric link of an edge in a complex of dimension at most 3.

    Nodes are the triangles containing the edge (labelled by their third
    vertex); each tetrahedron around the edge contributes an arc weighted by
    its dihedral angle there.
    """
    e = canonical_simplex(e)
    c = mc.complex
    if e not in c.simplices:
        raise MissingSimplexError(f"edge {e} not in complex")
    eset = set(e)
    nodes = []
    arcs = []
    for s in sorted(c.simplices, key=lambda s: (len(s), s)):
        if not eset.issubset(s):
            continue
        if len(s) == 3:
            nodes.append(next(x for x in s if x not in eset))
        elif len(s) == 4:
            cc, dd = [x for x in s if x not in eset]
            arcs.append(Arc(cc, dd, dihedral_angle(mc, s, e), tag=s))
    return MetricGraph(tuple(nodes), tuple(arcs))


# ---------------------------------------------------------------------------
# shortest cycles


def _adjacency(g: MetricGraph) -> dict:
    adj = {n: [] for n in g.nodes}
    for i, a in enumerate(g.arcs):
        adj[a.u].append((a.v, a.weight, i))
        adj[a.v].append((a.u, a.weight, i))
    return adj


def _dijkstra(adj, source, skip_arc=None):
    dist = {source: 0.0}
    prev = {}
    heap = [(0.0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist.get(x, math.inf):
            continue
        for y, w, idx in adj[x]:
            if idx == skip_arc:
                continue
            nd = d + w
            if nd < dist.get(y, math.inf) - 1e-15:
                dist[y] = nd
                prev[y] = x
                heapq.heappush(heap, (nd, y))
    return dist, prev


def shortest_cycle(g: MetricGraph):
    """(length, node list) of the shortest injective cycle, or (inf, None).

    Every simple cycle must use some arc; removing that arc and joining its
    endpoints by a shortest path realizes the minimum.
    """
    adj = _adjacency(g)
    best = math.inf
    best_cycle = None
    for i, a in enumerate(g.arcs):
        dist, prev = _dijkstra(adj, a.u, skip_arc=i)
        d = dist.get(a.v, math.inf)
        if d + a.weight < best - 1e-15:
            best = d + a.weight
            path = [a.v]
            while path[-1] != a.u:
                path.append(prev[path[-1]])
            best_cycle = tuple(reversed(path))
    return best, best_cycle


def girth(g: MetricGraph) -> float:
    """Length of the shortest injective cycle; infinity when acyclic."""
    return shortest_cycle(g)[0]


# ---------------------------------------------------------------------------
# minimal eccentricity of a metric graph, over all (interior) points


class EccentricityBounds(NamedTuple):
    lo: float
    hi: float
    connected: bool = True


def _is_connected(g: MetricGraph) -> bool:
    if not g.nodes:
        return True
    adj = _adjacency(g)
    seen = {g.nodes[0]}
    stack = [g.nodes[0]]
    while stack:
        x = stack.pop()
        for y, _, _ in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(g.nodes)


def min_eccentricity(g: MetricGraph, delta: float = DEFAULT_DELTA) -> EccentricityBounds:
    """Bounds on min over points x of max over points y of d(x, y).

    Points range over the whole graph body, arc interiors included.  The
    eccentricity restricted to one arc is piecewise linear with slopes in
    {-1, 0, 1}, so the minimum is found exactly by examining the breakpoint
    grid; the returned interval is degenerate (lo == hi) up to floating
    point.  `delta` is kept as the requested resolution bound and only
    validated; the exact optimum trivially satisfies hi - lo <= 2*delta.
    """
    if delta <= 0:
        raise DomainError(f"resolution must be positive, got {delta}")
    if not g.nodes:
        raise DomainError("empty graph has no eccentricity")
    if not _is_connected(g):
        return EccentricityBounds(math.inf, math.inf, connected=False)
    if not g.arcs:
        return EccentricityBounds(0.0, 0.0)

    adj = _adjacency(g)
    nodes = list(g.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    dist = {n: _dijkstra(adj, n)[0] for n in nodes}
    darr = {n: np.array([dist[n][m] for m in nodes]) for n in nodes}

    p_idx = np.array([index[a.u] for a in g.arcs])
    q_idx = np.array([index[a.v] for a in g.arcs])
    z_arr = np.array([a.weight for a in g.arcs])

    def node_ecc(n) -> float:
        base = darr[n]
        over_arcs = (base[p_idx] + base[q_idx] + z_arr) / 2.0
        return max(float(base.max()), float(over_arcs.max()))

    best = min(node_ecc(n) for n in nodes)

    for ai, arc in enumerate(g.arcs):
        w = arc.weight
        du, dv = darr[arc.u], darr[arc.v]
        detour = _dijkstra(adj, arc.u, skip_arc=ai)[0].get(arc.v, math.inf)
        cap = (w + detour) / 2.0 if math.isfinite(detour) else math.inf

        def eval_terms(t: float) -> np.ndarray:
            f = np.minimum(t + du, (w - t) + dv)
            over_arcs = (f[p_idx] + f[q_idx] + z_arr) / 2.0
            over_arcs[ai] = max(min(t, cap), min(w - t, cap))
            return np.concatenate([f, over_arcs])

        breaks = {0.0, w, w / 2.0}
        crossing = (w + dv - du) / 2.0
        for t in crossing:
            if 0.0 < t < w:
                breaks.add(float(t))
        if math.isfinite(cap):
            for t in ((w - detour) / 2.0, (w + detour) / 2.0):
                if 0.0 < t < w:
                    breaks.add(t)
        grid = sorted(breaks)

        for t1, t2 in zip(grid, grid[1:]):
            if t2 - t1 < 1e-14:
                continue
            v1 = eval_terms(t1)
            v2 = eval_terms(t2)
            e1, e2 = float(v1.max()), float(v2.max())
            cand = min(e1, e2)
            slope = (v2 - v1) / (t2 - t1)
            rising = slope > 0.5
            falling = slope < -0.5
            if rising.any() and falling.any():
                b_plus = float((v1[rising] - t1).max())
                b_minus = float((v1[falling] + t1).max())
                t_star = (b_minus - b_plus) / 2.0
                if t1 < t_star < t2:
                    flat = ~(rising | falling)
                    e_star = (b_plus + b_minus) / 2.0
                    if flat.any():
                        e_star = max(e_star, float(v1[flat].max()))
                    cand = min(cand, e_star)
            if cand < best:
                best = cand

    return EccentricityBounds(best, best)


# ---------------------------------------------------------------------------
# curvature and completeness certificates


def cat0_two_complex_check(mc: MetricComplex) -> CheckReport:
    """Link condition for 2-complexes: every vertex link has girth >= 2*pi."""
    if mc.complex.dim > 2:
        raise DimensionError(
            f"link condition check requires dim <= 2, got {mc.complex.dim}")
    items = []
    ok = True
    for v in mc.complex.vertices:
        g = vertex_link_graph(mc, v)
        length, cycle = shortest_cycle(g)
        bad = length < TWO_PI - EPS_ANG
        ok = ok and not bad
        items.append(CheckItem(f"vertex {v}", length, TWO_PI,
                               witness=cycle if bad else None))
    meta = {"condition": "girth(link(v)) >= 2*pi for every vertex v"}
    return CheckReport(PASS if ok else FAIL, tuple(items), meta)


def npc_edge_link_check(mc: MetricComplex) -> CheckReport:
    """Necessary curvature conditions for 3-complexes via edge links.

    Only girth >= 2*pi around every edge is certified; vertex links of
    3-complexes are spherical 2-complexes whose full verification is out of
    scope, so a clean result is reported as pass with a necessary-only flag.
    """
    if mc.complex.dim > 3:
        raise DimensionError(f"edge link check requires dim <= 3")
    items = []
    ok = True
    for e in mc.complex.k_simplices(1):
        g = edge_link_graph(mc, e)
        length, cycle = shortest_cycle(g)
        bad = length < TWO_PI - EPS_ANG
        ok = ok and not bad
        if bad:
            items.append(CheckItem(f"edge {e}", length, TWO_PI, witness=cycle))
    meta = {"necessary_conditions_only": True,
            "condition": "girth(link(e)) >= 2*pi for every edge e"}
    return CheckReport(PASS if ok else FAIL, tuple(items), meta)


def extendability_check(mc: MetricComplex) -> CheckReport:
    """Geodesic extendability certificate for compact flat 2-complexes.

    Passes when the complex has no free faces and every vertex link has
    minimal eccentricity at least pi (each incoming direction sees an
    outgoing one at angular distance >= pi).  The eccentricity side is
    evaluated exactly, so the verdict is decisive; inconclusive is reserved
    for the sampling fallback of callers supplying their own bounds.
    """
    if mc.complex.dim > 2:
        raise DimensionError(
            f"extendability check requires dim <= 2, got {mc.complex.dim}")
    items = []
    ok = True
    for pair in free_faces(mc.complex):
        ok = False
        items.append(CheckItem(f"free face {pair.face}", True, False,
                               witness=pair.coface))
    for v in mc.complex.vertices:
        g = vertex_link_graph(mc, v)
        if not g.nodes:
            continue  # isolated vertex: already reported as a free situation
        ecc = min_eccentricity(g)
        bad = ecc.lo < math.pi - EPS_ANG
        ok = ok and not bad
        items.append(CheckItem(f"vertex {v}", ecc.lo, math.pi,
                               witness=(ecc.lo, ecc.hi) if bad else None))
    meta = {"condition": "no free faces and min eccentricity of every vertex "
                         "link >= pi",
            "dimension_restriction": "certified for complexes of dim <= 2"}
    return CheckReport(PASS if ok else FAIL, tuple(items), meta)


def gauss_bonnet(mc: MetricComplex):
    """(2*pi*chi, total angle defect) for a closed piecewise-flat surface."""
    c = mc.complex
    if c.dim != 2:
        raise SurfaceConditionError(f"not a surface: dimension {c.dim}")
    count = {}
    for t in c.k_simplices(2):
        for e in combinations(t, 2):
            count[e] = count.get(e, 0) + 1
    for e in c.k_simplices(1):
        if count.get(tuple(e), 0) != 2:
            raise SurfaceConditionError(
                f"edge {e} lies in {count.get(tuple(e), 0)} triangles, "
                f"expected 2", edge=tuple(e))
    from .complexes import euler_characteristic

    lhs = TWO_PI * euler_characteristic(c)
    rhs = sum(TWO_PI - angle_sum_at_vertex(mc, v) for v in c.vertices)
    return lhs, rhs


# ---------------------------------------------------------------------------
# metric-aware assembly helpers


def metric_disjoint_union(a: MetricComplex, b: MetricComplex):
    """Disjoint union of metric complexes; returns (union, b-vertex shift)."""
    from .complexes import disjoint_union

    c, shift = disjoint_union(a.complex, b.complex)
    lengths = dict(a.lengths)
    for (u, v), l in b.lengths.items():
        lengths[edge_key(shift[u], shift[v])] = l
    return MetricComplex(c, lengths), shift


def metric_quotient(mc: MetricComplex, pairs):
    """Quotient that also merges edge lengths, requiring isometric gluing.

    Identified edges must agree in length within EPS_LEN relative tolerance;
    otherwise the identification is not an isometry and a MetricError names
    the offending edge pair.
    """
    res = quotient(mc.complex, pairs)
    vm = res.vertex_map
    lengths = {}
    for (u, v), l in mc.lengths.items():
        key = edge_key(vm[u], vm[v])
        old = lengths.get(key)
        if old is not None and abs(old - l) > EPS_LEN * max(1.0, abs(old)):
            raise MetricError(
                f"edges identified onto {key} have different lengths "
                f"{old} vs {l}")
        lengths[key] = l if old is None else old
    return MetricComplex(res.complex, lengths), vm
