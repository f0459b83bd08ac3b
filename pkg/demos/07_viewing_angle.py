"""Viewing-angle maximization with a uniqueness certificate.

The angle under which a wall segment [a, b] is seen from (x, t) equals the
Poisson convolution of the segment's indicator, which is strictly
quasi-concave on the upper half-plane.  Strict quasi-concavity means at
most one maximum point, so all multistart ascents must land on one spot;
the classical answer on a vertical line through the origin is
t* = sqrt(a b).
"""

import math

import numpy as np

from concavekit import maximize, MaxProblem, oracle_P_interval, regiomontanus
from concavekit.geometry import Box, Interval

a, b = 1.0, 4.0
print(f"segment [{a}, {b}] on the wall; observing from the t-axis:")
r = regiomontanus(a, b, Interval(0.5, 5.0))
print(f"  best height t = {r.argmax[1]:.9f} (sqrt(ab) = {math.sqrt(a*b)})")
print(f"  angle there = {r.value:.6f} * pi rad")

print("\nobserving from a shifted window [3, 5] (boundary optimum):")
r = regiomontanus(a, b, Interval(3.0, 5.0))
print(f"  best height t = {r.argmax[1]:.6f} (the angle only shrinks past sqrt(ab))")

print("\nfree 2-d observation box [-2,2] x [0.5,3]:")
r = regiomontanus(a, b, Box([-2.0, 0.5], [2.0, 3.0]), multistart=10)
print(f"  argmax = {np.round(r.argmax, 6)}")
print(f"  starts converged = {r.starts_converged}, pairwise spread = {r.max_pairwise_spread:.1e}")
print(f"  uniqueness certificate: {r.unique}")

print("\nsymmetric segment [-1, 1], same box: the optimum centers itself:")
prob = MaxProblem(
    objective=lambda z: oracle_P_interval(-1.0, 1.0, z[0], z[1]),
    feasible=Box([-2.0, 0.5], [2.0, 3.0]),
)
r = maximize(prob)
print(f"  argmax = {np.round(r.argmax, 6)} (x = 0 by symmetry, t at the lower edge)")

print("\na two-bump objective fails the certificate, as it should:")
bumps = lambda z: math.exp(-((z[0] - 2) ** 2)) + math.exp(-((z[0] + 2) ** 2))
r = maximize(MaxProblem(objective=bumps, feasible=Interval(-3, 3)))
print(f"  spread = {r.max_pairwise_spread:.2f}, unique = {r.unique}")
