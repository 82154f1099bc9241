"""Equivariant maps, geodesic homotopies, and their widths.

Two maps of a theta graph into the hyperbolic plane are joined by the
geodesic homotopy; we report the W-infinity and W2 widths and show that
length and energy are convex along the homotopy.

Run: python3 demos/02_widths_and_convexity.py
"""

from geowidth import (
    Edge,
    EquivariantMap,
    FundamentalGraph,
    GeodesicHomotopy,
    HyperbolicIsometry,
    HyperbolicPlane,
    Representation,
    convexity_report,
    energy,
    homotopy_width_2,
    homotopy_width_inf,
    length,
)

space = HyperbolicPlane()
rho = Representation(
    space,
    [
        HyperbolicIsometry([[1.0, 2.0], [0.0, 1.0]]),
        HyperbolicIsometry([[1.0, 0.0], [2.0, 1.0]]),
    ],
)

# theta graph: two vertices, three unit edges labelled e, a, b
graph = FundamentalGraph(
    [0, 1], [Edge(0, 1, 1.0, ()), Edge(0, 1, 1.0, (1,)), Edge(1, 0, 1.0, (2,))]
)

u = EquivariantMap(graph, rho, {0: space.point([1, 0, 0]), 1: space.from_polar(0.5, 0.2)})
v = EquivariantMap(graph, rho, {0: space.from_polar(1.0, 1.0), 1: space.from_polar(0.7, -0.4)})

print(f"L(u) = {length(u):.6f},  E(u) = {energy(u):.6f}")
print(f"L(v) = {length(v):.6f},  E(v) = {energy(v):.6f}")

h = GeodesicHomotopy(u, v)
print(f"\nW_inf(H) = {homotopy_width_inf(h):.6f}")
print(f"W_2(H)   = {homotopy_width_2(h):.6f}")

print("\nlength and energy along the homotopy (both convex in s):")
for row in convexity_report(h, [i / 5 for i in range(6)]):
    print(f"  s = {row.s:.1f}:  L = {row.length:.6f}  E = {row.energy:.6f}")
