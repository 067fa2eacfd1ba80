"""
The first counterexample: why an intrinsic core can fail to be npc.

Take a solid tetrahedron and mark the three boundary triangles at one
vertex.  Attaching a double-torus block along each marked triangle forces
any homotopy-equivalent subspace to contain all three triangles, and the
three of them meet the apex in a link cycle of length 3 * (pi/3) = pi,
far below the 2*pi the nonpositive-curvature link condition demands.
Reshaping the triangles so each apex angle is 2*pi/3 stretches that cycle
to exactly 2*pi: the same combinatorics, now flat at the apex.
"""

import math

from pfcomplex import (
    cat0_two_complex_check,
    euler_characteristic,
    example1_interface_complex,
    example_complex,
    girth,
    vertex_link_graph,
)

print("Building the glued counterexample (tetrahedron + 3 blocks)...")
x = example_complex("example1")
print(f"  simplex counts by dimension: {x.complex.counts()}")
print(f"  euler characteristic: {euler_characteristic(x.complex)}"
      f"  (tetrahedron gives 1, each block subtracts 2)")

print("\nThe marked triangles with their intrinsic (equilateral) metric:")
j = example1_interface_complex()
link = vertex_link_graph(j, 0)
print(f"  link of the apex: {len(link.nodes)} nodes, {len(link.arcs)} arcs, "
      f"girth {girth(link):.9f}  (pi = {math.pi:.9f})")
report = cat0_two_complex_check(j)
print(f"  link condition verdict: {report.verdict}")
for item in report.items:
    if item.witness is not None:
        print(f"    offending {item.location}: cycle {item.witness} "
              f"of length {item.measured:.9f} < 2*pi")

print("\nSame complex, corner angles at the apex reshaped to 2*pi/3:")
j2 = example1_interface_complex([2 * math.pi / 3] * 3)
report2 = cat0_two_complex_check(j2)
apex = next(i for i in report2.items if i.location == "vertex 0")
print(f"  link condition verdict: {report2.verdict} "
      f"(apex girth {apex.measured:.9f} = 2*pi exactly)")
