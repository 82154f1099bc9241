"""Tour of the model spaces: distances, geodesics, comparison defects.

Run: python3 demos/01_model_spaces.py
"""

import math

import numpy as np

from geowidth import (
    CayleyTree,
    EuclideanSpace,
    HyperbolicPlane,
    MetricTree,
    quadrilateral_defect,
    triangle_defect,
)

print("== Euclidean plane ==")
e2 = EuclideanSpace(2)
p, q = e2.point([0, 0]), e2.point([3, 4])
print(f"dist((0,0), (3,4)) = {e2.dist(p, q)}")
print(f"midpoint = {e2.geodesic_point(p, q, 0.5)}")

print("\n== Hyperbolic plane (hyperboloid model) ==")
h2 = HyperbolicPlane()
o = h2.point([1, 0, 0])
x = h2.from_polar(2.0, 0.0)
print(f"dist(origin, radius-2 point) = {h2.dist(o, x)}")
m = h2.geodesic_point(o, x, 0.5)
print(f"midpoint sits at radius {h2.dist(o, m)}")

print("\n== Metric tree (tripod) ==")
tripod = MetricTree(
    ["c", "p", "q", "r"], [("c", "p", 1.0), ("c", "q", 1.0), ("c", "r", 1.0)]
)
P, Q, R = (tripod.vertex_point(v) for v in "pqr")
print(f"leaf-to-leaf distance = {tripod.dist(P, Q)}")
print(f"midpoint of [q, r] = {tripod.geodesic_point(Q, R, 0.5)} (the center)")

print("\n== Cayley tree of the free group of rank 2 ==")
cayley = CayleyTree(2)
u = cayley.vertex_point((1, 2, -1))  # the vertex a b a^-1
print(f"dist(e, abA) = {cayley.dist(cayley.vertex_point(()), u)}")

print("\n== Comparison defects ==")
print("Euclidean triangles meet the comparison inequality with equality:")
rng = np.random.default_rng(0)
pts = [e2.random_point(rng) for _ in range(3)]
print(f"  defect = {triangle_defect(e2, *pts, 0.3):.2e}")
print("Trees are 'thinner' than Euclidean space, so defects are positive:")
print(f"  tripod defect at lambda = 1/2: {triangle_defect(tripod, P, Q, R, 0.5)}")
print("The four-point comparison behaves the same way:")
pts = [h2.random_point(rng) for _ in range(4)]
print(f"  hyperbolic quadrilateral defect: {quadrilateral_defect(h2, *pts, 0.5, 0.5):.4f}")
