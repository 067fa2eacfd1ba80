"""Combinatorial layer: closures, links, free faces, collapses, quotients."""

import random

import pytest

from pfcomplex import (
    InvalidSimplexError,
    MappingError,
    MissingSimplexError,
    QuotientDegeneracyError,
    build_complex,
    collapse_core,
    euler_characteristic,
    free_faces,
    link,
    quotient,
    star,
)
from pfcomplex.complexes import canonical_simplex, faces_of


def random_complex(rng, n_vertices=8, n_generators=6, max_dim=3):
    gens = []
    for _ in range(n_generators):
        k = rng.randint(1, max_dim + 1)
        gens.append(tuple(rng.sample(range(n_vertices), k)))
    return build_complex(gens)


def test_delta3_closure_count():
    c = build_complex([(0, 1, 2, 3)])
    assert len(c) == 15
    assert c.counts() == [4, 6, 4, 1]


def test_empty_complex():
    c = build_complex([])
    assert len(c) == 0 and c.dim == -1
    assert euler_characteristic(c) == 0


def test_triangle_boundary():
    c = build_complex([(0, 1), (1, 2), (0, 2)])
    assert len(c) == 6
    assert c.dim == 1


def test_invalid_simplex_rejected():
    with pytest.raises(InvalidSimplexError):
        build_complex([(0, 1, 1)])


def test_closure_idempotent():
    rng = random.Random(7)
    for _ in range(20):
        c = random_complex(rng)
        again = build_complex(c.simplices)
        assert again.simplices == c.simplices


def test_link_of_vertex_in_delta3():
    c = build_complex([(0, 1, 2, 3)])
    lk = link(c, (0,))
    assert lk.simplices == build_complex([(1, 2, 3)]).simplices


def test_link_in_sphere_is_circle():
    c = build_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    lk = link(c, (0,))
    assert lk.counts() == [3, 3]
    assert euler_characteristic(lk) == 0


def test_link_example_interface_triangles():
    # three triangles pairwise sharing the edges at vertex 0: the link is a
    # 3-cycle, one node per edge at 0 and one arc per triangle
    j = build_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    lk = link(j, (0,))
    assert lk.counts() == [3, 3]


def test_link_requires_membership():
    c = build_complex([(0, 1, 2)])
    with pytest.raises(MissingSimplexError):
        link(c, (7,))


def test_star_link_duality():
    rng = random.Random(21)
    for _ in range(10):
        c = random_complex(rng)
        for v in c.vertices:
            st = star(c, (v,))
            lk = link(c, (v,))
            rebuilt = set(lk.simplices)
            for t in lk.simplices:
                rebuilt.add(canonical_simplex(t + (v,)))
            rebuilt.add((v,))
            assert rebuilt == set(st.simplices)


def test_free_faces_of_solid_triangle():
    c = build_complex([(0, 1, 2)])
    pairs = free_faces(c)
    assert [p.face for p in pairs] == [(0, 1), (0, 2), (1, 2)]
    assert all(p.coface == (0, 1, 2) for p in pairs)


def test_collapse_solid_triangle_to_point():
    core, steps = collapse_core(build_complex([(0, 1, 2)]))
    assert len(core) == 1
    assert steps == 3


def test_collapse_preserves_euler():
    rng = random.Random(3)
    for _ in range(20):
        c = random_complex(rng)
        core, _ = collapse_core(c)
        assert euler_characteristic(core) == euler_characteristic(c)
        assert not free_faces(core)


def test_euler_characteristic_values():
    assert euler_characteristic(build_complex([(0, 1, 2, 3)])) == 1
    sphere = build_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert euler_characteristic(sphere) == 2


def test_quotient_identity_pair_is_noop():
    c = build_complex([(0, 1, 2)])
    res = quotient(c, [([(0,)], [(0,)], {0: 0})])
    assert res.complex.simplices == c.simplices
    assert res.vertex_map == {v: v for v in c.vertices}


def test_quotient_strip_to_cylinder():
    # a strip of three squares; identifying its short ends gives chi = 0
    strip = build_complex([(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 5),
                           (4, 5, 6), (5, 6, 7)])
    pair = ([(0,), (1,), (0, 1)], [(6,), (7,), (6, 7)], {0: 6, 1: 7})
    res = quotient(strip, [pair])
    assert euler_characteristic(res.complex) == 0
    assert len(res.complex.vertices) == 6


def test_quotient_rejects_degenerate_map():
    c = build_complex([(0, 1, 2)])
    # folding one edge onto another across their shared vertex collapses it
    with pytest.raises((QuotientDegeneracyError, MappingError)):
        quotient(c, [([(0,), (1,), (0, 1)], [(1,), (2,), (1, 2)],
                      {0: 1, 1: 2})])


def test_quotient_vertex_count_drops_by_merges():
    rng = random.Random(11)
    c = build_complex([(0, 1, 2), (3, 4, 5)])
    res = quotient(c, [([(0,), (1,), (0, 1)], [(3,), (4,), (3, 4)],
                        {0: 3, 1: 4})])
    assert len(res.complex.vertices) == 6 - 2


def test_quotient_validates_target_membership():
    c = build_complex([(0, 1, 2)])
    with pytest.raises(MissingSimplexError):
        quotient(c, [([(0,)], [(9,)], {0: 9})])


def test_facets():
    c = build_complex([(0, 1, 2), (2, 3)])
    assert c.facets() == [(2, 3), (0, 1, 2)]
