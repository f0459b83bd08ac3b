"""Kernels and the transforms that build parabolically concave fields.

Two closed-form radial templates, t^a exp(-r^b/t^c) and t^a (r^b+t^b)^{c/b},
cover the heat and half-space Poisson kernels after a rescaling.  The time
lift t^{alpha/p} f(x/t^alpha) turns any p-concave spatial profile into an
(alpha-)parabolically p-concave space-time field, and the log-time
conjugation moves fields between the alpha = 1 and alpha = 0 pictures.
"""

import math

from concavekit import (
    GaussWeierstrassKernel,
    KappaExpKernel,
    KappaPowerKernel,
    PoissonKernel,
    TentField,
    conjugate0,
    lift,
    sigma_sphere,
)
from concavekit.geometry import Interval

print("sphere surface measures:", [round(sigma_sphere(n), 6) for n in (1, 2, 3)])

gw = GaussWeierstrassKernel(1)
pk = PoissonKernel(1)
print("\nheat kernel at (0, 1/(4 pi)):", gw([0.0], 1 / (4 * math.pi)))
print("Poisson kernel at (0, 1):", pk([0.0], 1.0), "= 1/pi")

print("\ntemplate reproductions:")
k_exp = KappaExpKernel(-0.5, 2.0, 1.0)
x, t = 0.8, 1.7
print(f"  heat{x, t} = {gw([x], t):.12f}")
print(f"  scaled exp template = {(4 * math.pi) ** -0.5 * k_exp([x / 2], t):.12f}")
k_pow = KappaPowerKernel(1.0, 2.0, -2.0)
print(f"  poisson{x, t} = {pk([x], t):.12f}")
print(f"  scaled power template = {2 / sigma_sphere(1) * k_pow([x], t):.12f}")
print(f"  template metadata: alpha={k_exp.claimed_alpha}, p={k_exp.claimed_exponent}")

print("\ntime lift of a tent profile (p = 1, alpha = 1):")
tent = TentField(Interval(-1, 1))
phi = lift(tent, 1.0, 1.0)
for xx, tt in ((0.5, 2.0), (0.0, 3.0), (2.5, 2.0)):
    print(f"  phi({xx}, {tt}) = {phi([xx], tt):.4f}")

print("\nlog-time conjugation:")
phi0 = conjugate0(phi)
print(f"  phi0(0.5, e^2) = {phi0([0.5], math.e ** 2):.4f} = phi(0.5, 2) = {phi([0.5], 2.0):.4f}")
# the scaling law behind the lift: one profile generates the whole field
for tt in (0.5, 1.0, 2.0):
    direct = k_pow([0.9], tt)
    rescaled = tt ** (k_pow.claimed_alpha / k_pow.claimed_exponent) * k_pow(
        [0.9 / tt**k_pow.claimed_alpha], 1.0
    )
    print(f"  power template scaling at t={tt}: {direct:.10f} vs {rescaled:.10f}")
