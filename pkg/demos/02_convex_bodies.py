"""Convex bodies: support functions, Minkowski algebra, and two geometric
constructions used by the concavity machinery.

The coupling core of a body K (given two anchor points and times) collects
the points whose two-point decomposition inside K is ray-aligned after time
rescaling; the interior witness certifies that a shrunken shifted copy of a
body never covers the whole interior.
"""

import numpy as np

from concavekit import (
    Ball,
    Box,
    Interval,
    Polytope,
    coupling_core,
    interior_witness_outside,
    minkowski_combine,
    support_of_combination,
)

print("support values h_K(u):")
print("  box [-1,1]^2 at (1,0):", Box([-1, -1], [1, 1]).support([1, 0]))
print("  ball((2,0), 3) at (0,1):", Ball([2, 0], 3.0).support([0, 1]))
tri = Polytope([[0, 0], [1, 0], [0, 2]])
print("  triangle at (0,1):", tri.support([0, 1]))

print("\nMinkowski combinations:")
print("  0.5*[0,1] + 0.5*[2,4] =", minkowski_combine(0.5, Interval(0, 1), 0.5, Interval(2, 4)))
print("  2*ball(0,1) =", minkowski_combine(2.0, Ball([0.0, 0.0], 1.0), 0.0, np.zeros(2)))
# support arithmetic works even for pairs without a closed-form body
u = np.array([0.6, 0.8])
h = support_of_combination(1.0, Ball([0.0, 0.0], 1.0), 1.0, Box([-1, -1], [1, 1]), u)
print(f"  h_(ball + box)(u) = {h:.4f} (support-level arithmetic)")

print("\ncoupling core of K = [-1, 1] with x0 = x1 = 0, t0 = 1, t1 = 4, alpha = 1:")
core = coupling_core(Interval(-1, 1), [0.0], [0.0], 1.0, 4.0, 1.0, 0.5)
lo, hi = core.bounding_box()
print(f"  core = [{lo[0]:.4f}, {hi[0]:.4f}]")
y = np.array([0.3])
y0, y1 = core.decompose(y)
print(f"  decomposition of y=0.3: y0={y0[0]:.4f}, y1={y1[0]:.4f}")
print(f"  ray alignment: (x0-y0)/t0 = {-y0[0]:.4f}, (x1-y1)/t1 = {-y1[0]/4:.4f}")

print("\ninterior witness outside a shrunken shift:")
for omega, s, mu, v in (
    (Interval(0, 1), 0.5, 0.0, [1.0]),
    (Interval(0, 1), 1.0, 0.25, [1.0]),
    (Ball([0.0, 0.0], 1.0), 0.9, 0.0, [1.0, 0.0]),
):
    y = interior_witness_outside(omega, s, mu, np.asarray(v))
    print(f"  {type(omega).__name__}, s={s}, mu={mu}: witness {np.round(y, 4)}")
    assert omega.is_interior(y)
