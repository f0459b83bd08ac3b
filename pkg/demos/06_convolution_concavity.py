"""Space convolutions of kernels with compactly supported data, and the
concavity they inherit.

For indicator data on an interval both convolutions have closed forms (erf
for the heat kernel, arctan for the Poisson kernel), which serve as oracles
for the quadrature engine and as exact fields for the concavity checks: the
convolution of an almost-strictly parabolically concave kernel with
concave compactly supported data is strictly parabolically concave at the
combined exponent, here quasi-concavity.
"""

import math

from concavekit import (
    CheckConfig,
    GaussWeierstrassKernel,
    HeatIndicatorField,
    IndicatorField,
    PoissonIndicatorField,
    PoissonKernel,
    QuadratureSpec,
    SpaceTimeBox,
    bbl_exponent,
    check_p_concavity,
    check_parabolic_p_concavity,
    convolve_at,
    holder_exponent,
    oracle_P_interval,
    oracle_W_interval,
)
from concavekit.geometry import Interval
from concavekit.sampling import make_rng

psi = IndicatorField(Interval(-1, 1))
quad = QuadratureSpec.default_for(psi.support)

print("quadrature vs closed forms at (x, t) = (0, 1):")
r = convolve_at(GaussWeierstrassKernel(1), psi, [0.0], 1.0, quad)
print(f"  heat: {r.value:.8f} +- {r.est_error:.1e}, oracle {oracle_W_interval(-1,1,0,1):.8f}")
r = convolve_at(PoissonKernel(1), psi, [0.0], 1.0, quad)
print(f"  poisson: {r.value:.8f} +- {r.est_error:.1e}, oracle {oracle_P_interval(-1,1,0,1):.8f}")

print("\nexponent bookkeeping for indicator data (q = +inf):")
for name, p_kernel in (("heat", -1.0), ("poisson", -1.0)):
    ell = holder_exponent(p_kernel, math.inf)
    print(f"  {name}: kernel p = {p_kernel}, ell = {ell}, combined = {bbl_exponent(ell, 1)}")

print("\nstrict parabolic quasi-concavity of the convolutions (closed forms):")
stb = SpaceTimeBox(Interval(-2, 2), 0.5, 4.0)
W = HeatIndicatorField(-1, 1)
P = PoissonIndicatorField(-1, 1)
cfg = CheckConfig(samples=4000, seed=21, domain=stb)
print("  heat, alpha=1/2:", check_parabolic_p_concavity(W, 0.5, -math.inf, cfg, "strict").verdict)
print("  poisson, alpha=1:", check_parabolic_p_concavity(P, 1.0, -math.inf, cfg, "strict").verdict)

print("\nfixed-time slices inherit strict spatial concavity:")
for t in (0.25, 1.0, 4.0):
    cfg_s = CheckConfig(samples=3000, seed=22, domain=Interval(-3, 3))
    vW = check_p_concavity(W.slice_at(t), 0.0, cfg_s, strict=True).verdict
    vP = check_p_concavity(P.slice_at(t), -1.0, cfg_s, strict=True).verdict
    print(f"  t = {t}: heat slice log-concave: {vW}; poisson slice -1-concave: {vP}")

print("\nthe -1-concavity of a Poisson slice, spelled out (1/P is convex):")
rng = make_rng(23)
t = 1.0
x0, x1 = rng.uniform(-3, 3, (2, 5))
mid = 0.5 * (x0 + x1)
inv = lambda x: 1.0 / oracle_P_interval(-1, 1, x, t)
for i in range(5):
    gap = 0.5 * inv(x0[i]) + 0.5 * inv(x1[i]) - inv(mid[i])
    print(f"  x0={x0[i]:+.2f}, x1={x1[i]:+.2f}: convexity gap of 1/P = {gap:.4f}")
