"""
Finite abstract simplicial complexes.

A simplex is a strictly increasing tuple of nonnegative integer vertex ids;
a complex is a face-closed finite set of such tuples.  Everything here is
purely combinatorial: face/coface queries, links and stars, free faces,
elementary collapses, quotient identifications and Euler characteristics.
All operations are pure functions on immutable values, and every iteration
order is deterministic (length first, then lexicographic), so downstream
reports are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence


class ComplexError(Exception):
    """Base class for errors raised by this module."""


class InvalidSimplexError(ComplexError):
    """A vertex tuple with repeated entries was offered as a simplex."""


class MissingSimplexError(ComplexError):
    """An operation referenced a simplex that is not in the complex."""


class MappingError(ComplexError):
    """An identification pair does not describe matching subcomplexes."""


class QuotientDegeneracyError(ComplexError):
    """A quotient would produce a non-simplicial complex.

    Carries the offending simplex (or simplex pair) so construction code can
    report exactly which identification went wrong instead of silently
    subdividing.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


Simplex = tuple  # canonical form: strictly increasing tuple of ints


def canonical_simplex(vertices: Iterable[int]) -> Simplex:
    """Sort a vertex collection into canonical simplex form.

    Raises InvalidSimplexError if a vertex repeats.
    """
    t = tuple(sorted(vertices))
    for a, b in zip(t, t[1:]):
        if a == b:
            raise InvalidSimplexError(f"repeated vertex {a} in simplex {t}")
    if t and t[0] < 0:
        raise InvalidSimplexError(f"negative vertex id in simplex {t}")
    return t


def faces_of(simplex: Simplex) -> list[Simplex]:
    """All nonempty faces of a simplex, the simplex itself included."""
    out = []
    for k in range(1, len(simplex) + 1):
        out.extend(combinations(simplex, k))
    return out


def _sort_key(s: Simplex):
    return (len(s), s)


@dataclass(frozen=True)
class Complex:
    """A face-closed set of simplices with an optional label.

    Instances are immutable; construct through :func:`build_complex`, which
    applies the face closure, rather than directly.
    """

    simplices: frozenset = field(default_factory=frozenset)
    name: str | None = field(default=None, compare=False)

    def __iter__(self):
        return iter(sorted(self.simplices, key=_sort_key))

    def __len__(self):
        return len(self.simplices)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplices

    @property
    def dim(self) -> int:
        """Max simplex dimension; -1 for the empty complex."""
        if not self.simplices:
            return -1
        return max(len(s) for s in self.simplices) - 1

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self.simplices if len(s) == 1)

    def k_simplices(self, k: int) -> list[Simplex]:
        """All k-dimensional simplices in lexicographic order."""
        return sorted(s for s in self.simplices if len(s) == k + 1)

    def counts(self) -> list[int]:
        """Number of simplices in each dimension 0..dim."""
        out = [0] * (self.dim + 1)
        for s in self.simplices:
            out[len(s) - 1] += 1
        return out

    def facets(self) -> list[Simplex]:
        """Maximal simplices (those with no proper coface)."""
        non_maximal = set()
        by_card = {}
        for s in self.simplices:
            by_card.setdefault(len(s), set()).add(s)
        for s in self.simplices:
            for f in combinations(s, len(s) - 1):
                if f:
                    non_maximal.add(f)
        return sorted((s for s in self.simplices if s not in non_maximal),
                      key=_sort_key)

    def subcomplex(self, simplices: Iterable[Simplex], name=None) -> "Complex":
        """Face closure of a subset of this complex's simplices."""
        chosen = [canonical_simplex(s) for s in simplices]
        for s in chosen:
            if s not in self.simplices:
                raise MissingSimplexError(f"{s} is not a simplex of the complex")
        return build_complex(chosen, name=name)


def build_complex(generators: Iterable[Sequence[int]], name: str | None = None) -> Complex:
    """Face closure of the given generator tuples.

    Idempotent: the closure of a closure is itself.
    """
    simplices = set()
    for g in generators:
        s = canonical_simplex(g)
        if not s:
            continue
        for f in faces_of(s):
            simplices.add(f)
    return Complex(frozenset(simplices), name=name)


def star(c: Complex, s) -> Complex:
    """Closed star: all cofaces of s together with their faces."""
    s = canonical_simplex(s)
    if s not in c.simplices:
        raise MissingSimplexError(f"{s} is not a simplex of the complex")
    sset = set(s)
    cofaces = [t for t in c.simplices if sset.issubset(t)]
    return build_complex(cofaces)


def link(c: Complex, s) -> Complex:
    """The link of s: simplices disjoint from s whose join with s is present."""
    s = canonical_simplex(s)
    if s not in c.simplices:
        raise MissingSimplexError(f"{s} is not a simplex of the complex")
    sset = set(s)
    out = []
    for t in c.simplices:
        if sset.isdisjoint(t) and canonical_simplex(t + s) in c.simplices:
            out.append(t)
    return Complex(frozenset(out))


class FreeFacePair(NamedTuple):
    face: Simplex
    coface: Simplex


def _coface_counts(simplices: set) -> dict:
    """Map each simplex to its codimension-1 cofaces."""
    cofaces = {s: [] for s in simplices}
    for t in simplices:
        if len(t) < 2:
            continue
        for f in combinations(t, len(t) - 1):
            cofaces[f].append(t)
    return cofaces

def free_faces(c: Complex) -> list[FreeFacePair]:
    """All pairs (face, coface) where face lies in exactly one coface.

    A simplex contained in some simplex two dimensions up necessarily has at
    least two codimension-1 cofaces, so counting those alone is sufficient.
    Pairs come out sorted by face, lexicographically.
    """
    cofaces = _coface_counts(set(c.simplices))
    out = [FreeFacePair(f, ts[0]) for f, ts in cofaces.items() if len(ts) == 1]
    out.sort(key=lambda p: (len(p.face), p.face))
    return out


class CollapseResult(NamedTuple):
    complex: Complex
    steps: int


def collapse_core(c: Complex) -> CollapseResult:
    """Remove free face / coface pairs until none remain.

    Each step removes the lexicographically smallest free face together with
    its unique coface, so the result is deterministic even where the core
    itself is not canonical.
    """
    simplices = set(c.simplices)
    cofaces = _coface_counts(simplices)
    steps = 0
    while True:
        frees = [(len(f), f) for f, ts in cofaces.items() if len(ts) == 1]
        if not frees:
            break
        _, f = min(frees)
        t = cofaces[f][0]
        for dead in (f, t):
            simplices.discard(dead)
            cofaces.pop(dead, None)
        # codim-1 faces of both removed simplices lose one coface each
        for dead in (f, t):
            if len(dead) < 2:
                continue
            for sub in combinations(dead, len(dead) - 1):
                if sub in cofaces:
                    cofaces[sub] = [x for x in cofaces[sub] if x != dead]
        steps += 1
    return CollapseResult(Complex(frozenset(simplices), name=c.name), steps)


def euler_characteristic(c: Complex) -> int:
    """Alternating sum of simplex counts."""
    chi = 0
    for s in c.simplices:
        chi += 1 if (len(s) - 1) % 2 == 0 else -1
    return chi


# ---------------------------------------------------------------------------
# quotients


class IdentificationPair(NamedTuple):
    """Identify the source subcomplex with the target one via vertex_map.

    source and target are simplex lists (faces included); vertex_map sends
    every vertex appearing in source to a vertex of target.  The map need not
    be injective, which permits wrapping a subdivided arc onto a circle when
    combined with an explicit endpoint merge in the same quotient call.
    """

    source: tuple
    target: tuple
    vertex_map: Mapping


class QuotientResult(NamedTuple):
    complex: Complex
    vertex_map: dict  # old vertex id -> new (dense) vertex id


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # keep the smaller representative so ambient vertex ids stay stable
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra


def _normalize_pair(c: Complex, pair) -> IdentificationPair:
    source, target, vmap = pair
    src = [canonical_simplex(s) for s in source]
    dst = [canonical_simplex(s) for s in target]
    for s in src + dst:
        if s not in c.simplices:
            raise MissingSimplexError(f"identification references {s}, not in complex")
    return IdentificationPair(tuple(src), tuple(dst), dict(vmap))


def quotient(c: Complex, pairs: Sequence) -> QuotientResult:
    """Glue the complex along the given identification pairs.

    Every pair must map its source subcomplex simplex-by-simplex onto its
    target (a mapping error otherwise).  After merging vertex classes the
    result is checked to still be simplicial: no simplex may degenerate, and
    two distinct simplices may land on the same vertex set only if the
    declared identifications actually relate them.  Vertex ids of the result
    are renumbered densely; the old-to-new map is returned alongside.
    """
    pairs = [_normalize_pair(c, p) for p in pairs]
    verts = _UnionFind()
    cells = _UnionFind()
    for v in c.vertices:
        verts.find(v)

    for src, dst, vmap in pairs:
        dst_set = set(dst)
        covered = set()
        for s in src:
            try:
                img_vs = [vmap[v] for v in s]
            except KeyError as e:
                raise MappingError(f"vertex {e.args[0]} of {s} has no image") from None
            img = tuple(sorted(img_vs))
            if len(set(img)) != len(img):
                raise MappingError(f"{s} degenerates to {img} under the pair map")
            if img not in dst_set:
                raise MappingError(f"{s} maps to {img}, not in the target subcomplex")
            covered.add(img)
            cells.union(s, img)
        if covered != dst_set:
            missing = sorted(dst_set - covered, key=_sort_key)
            raise MappingError(f"target simplices not covered by the map: {missing[:3]}")
        for v, w in vmap.items():
            verts.union(v, w)

    # dense renumbering by sorted class representatives
    reps = sorted({verts.find(v) for v in c.vertices})
    rep_to_new = {r: i for i, r in enumerate(reps)}
    vertex_map = {v: rep_to_new[verts.find(v)] for v in c.vertices}

    image_of = {}
    for s in sorted(c.simplices, key=_sort_key):
        img = tuple(sorted({vertex_map[v] for v in s}))
        if len(img) != len(s):
            raise QuotientDegeneracyError(
                f"simplex {s} degenerates to {img} in the quotient", witness=s)
        image_of.setdefault(img, []).append(s)

    for img, originals in image_of.items():
        if len(originals) == 1:
            continue
        root = cells.find(originals[0])
        for other in originals[1:]:
            if cells.find(other) != root:
                raise QuotientDegeneracyError(
                    f"distinct simplices {originals[0]} and {other} collide on "
                    f"{img} without being identified", witness=(originals[0], other))

    return QuotientResult(Complex(frozenset(image_of), name=c.name), vertex_map)


def disjoint_union(a: Complex, b: Complex) -> tuple[Complex, dict]:
    """Disjoint union, relabelling b's vertices above a's range.

    Returns the union and the map from b's old vertex ids to new ones.
    """
    offset = (max(a.vertices) + 1) if a.vertices else 0
    shift = {v: v + offset for v in b.vertices}
    moved = {tuple(v + offset for v in s) for s in b.simplices}
    return Complex(frozenset(set(a.simplices) | moved)), shift
