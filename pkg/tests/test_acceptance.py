"""Acceptance suite: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Each test prints its verdict; a failing assertion marks the
criterion failed.
"""

import itertools
import math
import random

import pytest

from pfcomplex import (
    Arc,
    MetricGraph,
    betti,
    boundary_matrix,
    box_complex,
    build_complex,
    cat0_two_complex_check,
    collapse_core,
    edge_link_graph,
    euler_characteristic,
    example1_interface_complex,
    example_complex,
    flat_torus2,
    flat_torus3,
    free_faces,
    free_group_complex,
    gcify,
    genus_surface,
    girth,
    glue_double_tori,
    house_with_two_rooms,
    local_homology,
    min_eccentricity,
    simplex_complex,
    solid_chain_check,
)
from pfcomplex.metric import _adjacency, _dijkstra, angle_sum_at_vertex

TWO_PI = 2 * math.pi


def _report(name, ok=True):
    print(f"\n[acceptance] {name}: {'PASS' if ok else 'FAIL'}")


def test_criterion_1_first_example_obstruction():
    """Intrinsic link cycle of length pi fails; the 2*pi/3 override passes."""
    j = example1_interface_complex()
    intrinsic = cat0_two_complex_check(j)
    assert intrinsic.verdict == "fail"
    witness = [i for i in intrinsic.items if i.witness is not None]
    assert len(witness) == 1 and witness[0].location == "vertex 0"
    assert abs(witness[0].measured - math.pi) <= 1e-9

    j_override = example1_interface_complex([2 * math.pi / 3] * 3)
    override = cat0_two_complex_check(j_override)
    assert override.verdict == "pass"
    apex = next(i for i in override.items if i.location == "vertex 0")
    assert abs(apex.measured - TWO_PI) <= 1e-9
    _report("criterion 1 (first example obstruction)")


def test_criterion_2_second_example_chain():
    """House certificates, the top-chain contradiction, and b3 = 2r."""
    house = house_with_two_rooms()
    assert free_faces(house.complex) == []
    assert betti(house.complex, "z").ranks == (1, 0, 0)
    assert betti(house.complex, "z2").ranks == (1, 0, 0)

    box = box_complex(4, 3, 2)
    lemma = solid_chain_check(box.complex, house.complex)
    assert lemma.verdict == "contradiction"
    items = {i.location: i for i in lemma.items}
    assert items["has-3-simplex"].measured is True
    assert items["relative-b3"].measured == 0

    x = example_complex("example2")
    r = len(house.complex.k_simplices(2))
    b = betti(x.complex, "z")
    assert b.ranks[3] == 2 * r
    assert not any(b.torsion)
    _report("criterion 2 (second example obstruction chain)")


def test_criterion_3_gauss_bonnet():
    """2*pi*(2-2n) = 2*pi - ell for the genus-n polygon surfaces."""
    for n in (2, 3, 4):
        y = genus_surface(n, identify_segments=False)
        ell = max(angle_sum_at_vertex(y, v) for v in y.complex.vertices)
        assert abs(TWO_PI * (2 - 2 * n) - (TWO_PI - ell)) <= 1e-6
        if n == 2:
            assert abs(ell - 6 * math.pi) <= 1e-6
    _report("criterion 3 (piecewise-flat Gauss-Bonnet)")


def test_criterion_4_free_group_complexes():
    for n in (2, 3, 5):
        fc = free_group_complex(n)
        assert free_faces(fc.complex) == []
        b = betti(fc.complex, "z")
        assert b.ranks[1] == n
        assert b.ranks[2] == 0
        assert euler_characteristic(fc.complex) == 1 - n
    _report("criterion 4 (free group complexes)")


def test_criterion_5_free_face_elimination():
    for dim in (3, 2):
        res = gcify(simplex_complex(dim))
        assert free_faces(res.complex.complex) == []
        assert res.added_loops >= 1
        b = betti(res.complex.complex, "z")
        assert b.ranks[1] == res.added_loops
        again = gcify(res.complex)
        assert again.added_loops == 0
        assert again.complex is res.complex
    _report("criterion 5 (free face elimination)")


def test_criterion_6_property_suites():
    rng = random.Random(2024)

    # boundaries square to zero on 100 random complexes
    checked = 0
    while checked < 100:
        gens = [tuple(rng.sample(range(9), rng.randint(1, 4)))
                for _ in range(rng.randint(2, 7))]
        c = build_complex(gens)
        if c.dim < 2:
            continue
        checked += 1
        for k in range(2, c.dim + 1):
            for ring in ("z", "z2"):
                assert not boundary_matrix(c, k - 1, ring).compose(
                    boundary_matrix(c, k, ring))

    # Betti numbers survive every elementary collapse step on 50 cones
    from pfcomplex.complexes import Complex

    done = 0
    while done < 50:
        base = build_complex([tuple(rng.sample(range(6), rng.randint(1, 3)))
                              for _ in range(rng.randint(2, 4))])
        if base.dim < 0:
            continue
        apex = max(base.vertices) + 1
        cone = build_complex([s + (apex,) for s in base.facets()])
        done += 1
        reference = betti(cone, "z2").ranks
        work = cone
        while True:
            pairs = free_faces(work)
            if not pairs:
                break
            f, t = pairs[0]
            work = Complex(frozenset(set(work.simplices) - {f, t}))
            got = betti(work, "z2").ranks
            padded = got + (0,) * (len(reference) - len(got))
            assert padded == reference

    # girth equals the brute-force minimum over simple cycles, exhaustively
    # over all <=4-node topologies and assorted multigraphs up to 8 nodes
    def brute_force_girth(g):
        adj = _adjacency(g)
        best = [math.inf]

        def extend(start, cur, visited, used, length):
            for nxt, w, idx in adj[cur]:
                if idx in used:
                    continue
                if nxt == start:
                    best[0] = min(best[0], length + w)
                elif nxt not in visited and nxt > start:
                    extend(start, nxt, visited | {nxt}, used | {idx},
                           length + w)

        for start in g.nodes:
            extend(start, start, {start}, frozenset(), 0.0)
        return best[0]

    graphs = []
    for n in (2, 3, 4):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1, 2 ** len(pairs)):
            arcs = [Arc(u, v, rng.uniform(0.2, 3.0))
                    for bit, (u, v) in enumerate(pairs) if mask >> bit & 1]
            graphs.append(MetricGraph(tuple(range(n)), tuple(arcs)))
    for _ in range(25):
        n = rng.randint(5, 8)
        arcs = []
        for u, v in itertools.combinations(range(n), 2):
            for _ in range(rng.choice((0, 0, 0, 1, 1, 2))):
                arcs.append(Arc(u, v, rng.uniform(0.2, 3.0)))
        graphs.append(MetricGraph(tuple(range(n)), tuple(arcs[:n + 5])))
    for g in graphs:
        assert girth(g) == pytest.approx(brute_force_girth(g), abs=1e-9)

    # min eccentricity brackets a fine-sample oracle, width <= 2*delta
    def sampled_min_ecc(g, step):
        adj = _adjacency(g)
        nd = {x: _dijkstra(adj, x)[0] for x in g.nodes}
        pts = []
        for ai, a in enumerate(g.arcs):
            k = max(2, int(a.weight / step))
            pts.extend((ai, a.weight * t / k) for t in range(k + 1))

        def dist(p, q):
            (ai, t), (bj, s) = p, q
            a, b = g.arcs[ai], g.arcs[bj]
            through = min(
                t + nd[a.u][b.u] + s, t + nd[a.u][b.v] + (b.weight - s),
                (a.weight - t) + nd[a.v][b.u] + s,
                (a.weight - t) + nd[a.v][b.v] + (b.weight - s))
            return min(abs(t - s), through) if ai == bj else through

        return min(max(dist(p, q) for q in pts) for p in pts)

    delta = 0.1
    samples = [
        MetricGraph((0, 1), (Arc(0, 1, 1.0), Arc(0, 1, 1.0), Arc(0, 1, 2.0))),
        MetricGraph((0, 1, 2), (Arc(0, 1, 0.315), Arc(0, 2, 1.261),
                                Arc(1, 2, 2.170))),
        MetricGraph(tuple(range(4)),
                    tuple(Arc(i, (i + 1) % 4, math.pi / 2) for i in range(4))),
    ]
    for g in samples:
        e = min_eccentricity(g, delta)
        oracle = sampled_min_ecc(g, delta / 10)
        assert e.hi - e.lo <= 2 * delta
        assert e.lo - delta / 10 - 1e-9 <= oracle <= e.hi + delta / 10 + 1e-9

    # chi(glue) = chi(base) - 2r over random interface choices
    base = flat_torus2(3)
    triangles = base.complex.k_simplices(2)
    for _ in range(3):
        chosen = rng.sample(triangles, rng.randint(1, 3))
        glued = glue_double_tori(base, chosen)
        assert euler_characteristic(glued.complex) == \
            euler_characteristic(base.complex) - 2 * len(chosen)
    _report("criterion 6 (property suites)")


def test_criterion_7_torus_fixture():
    t3 = flat_torus3(3)
    assert len(t3.complex.vertices) == 27
    assert len(t3.complex.k_simplices(3)) == 162
    b = betti(t3.complex, "z")
    assert b.ranks == (1, 3, 3, 1)
    assert not any(b.torsion)
    for e in t3.complex.k_simplices(1):
        assert abs(girth(edge_link_graph(t3, tuple(e))) - TWO_PI) <= 1e-9
    for v in t3.complex.vertices:
        assert local_homology(t3.complex, v, "z").ranks == (0, 0, 1)
    _report("criterion 7 (flat 3-torus fixture)")


def test_criterion_8_collapse_regression():
    """A punctured flat torus collapses to a figure-eight-like 1-complex."""
    t2 = flat_torus2(4)
    punctured_simplices = set(t2.complex.simplices)
    punctured_simplices.remove(t2.complex.k_simplices(2)[0])
    from pfcomplex.complexes import Complex

    punctured = Complex(frozenset(punctured_simplices))
    core, steps = collapse_core(punctured)
    assert steps > 0
    assert core.dim == 1
    b = betti(core, "z")
    assert b.ranks[0] == 1
    assert b.ranks[1] == 2
    _report("criterion 8 (collapse regression)")
