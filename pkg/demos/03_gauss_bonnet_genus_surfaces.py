"""
Singular flat surfaces of higher genus and the polyhedral Gauss-Bonnet
identity.

Identifying the sides of a regular 4n-gon in the standard genus-n pattern
concentrates all the curvature at a single vertex whose total angle is
ell = 2*pi*(2n-1); the identity 2*pi*chi = sum of angle defects pins this
exactly.  Because ell >= 6*pi, two segments leaving that vertex can be
separated by more than 2*pi of angle on both sides; identifying them keeps
the complex nonpositively curved and geodesically extendable but destroys
the surface property along the merged segment.
"""

import math

from pfcomplex import (
    cat0_two_complex_check,
    euler_characteristic,
    extendability_check,
    free_faces,
    gauss_bonnet,
    genus_surface,
)
from pfcomplex.metric import angle_sum_at_vertex

for n in (2, 3, 4):
    y = genus_surface(n, identify_segments=False)
    lhs, rhs = gauss_bonnet(y)
    ell = max(angle_sum_at_vertex(y, v) for v in y.complex.vertices)
    print(f"genus {n}: chi = {euler_characteristic(y.complex)}, "
          f"2*pi*chi = {lhs:+.6f}, angle defect sum = {rhs:+.6f}, "
          f"ell/pi = {ell / math.pi:.6f} (expected {2 * (2 * n - 1)})")

print("\nAfter identifying two vertex segments (genus 2):")
z = genus_surface(2)
counts = {}
for t in z.complex.k_simplices(2):
    for i in range(3):
        e = t[:i] + t[i + 1:]
        counts[e] = counts.get(e, 0) + 1
fat = [e for e, c in counts.items() if c == 4]
print(f"  free faces: {len(free_faces(z.complex))}")
print(f"  edges lying in four triangles: {fat} (so not a 2-manifold)")
print(f"  link condition: {cat0_two_complex_check(z).verdict}")
print(f"  geodesic extendability: {extendability_check(z).verdict}")
