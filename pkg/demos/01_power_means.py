"""Two-point power means and the exponent algebra behind them.

The mean M_p(a, b; lam) interpolates from min (p = -inf) through harmonic,
geometric (p = 0), arithmetic, and up to max (p = +inf), and it is zero as
soon as either operand is zero.  Products of means obey a Holder-type
inequality whose combined exponent ell = pq/(p+q) drives everything else in
this package.
"""

import numpy as np

from concavekit import (
    INF,
    NEG_INF,
    bbl_exponent,
    check_product_inequality,
    holder_exponent,
    mean_p,
)

a, b, lam = 1.0, 4.0, 0.5
print("means of (1, 4) at lam = 1/2:")
for p in (NEG_INF, -1.0, 0.0, 1.0, 2.0, INF):
    print(f"  p = {p:>5}: M_p = {mean_p(p, a, b, lam):.6f}")
print("  any p with a zero operand:", mean_p(2.0, 5.0, 0.0, 0.3))

print("\nmonotonicity in p (sampled):")
rng = np.random.default_rng(0)
ps = np.sort(rng.uniform(-5, 5, 6))
vals = [mean_p(p, 2.0, 7.0, 0.3) for p in ps]
for p, v in zip(ps, vals):
    print(f"  p = {p:+.2f}: {v:.6f}")
assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))

print("\ncombined exponents ell = pq/(p+q):")
for p, q in ((2, 2), (0, 0), (3, -3), (-0.5, INF), (INF, INF)):
    print(f"  ell({p}, {q}) = {holder_exponent(p, q)}")

print("\nproduct inequality M_p * M_q >= M_ell at a few points:")
for p, q in ((2, 2), (0, 0), (1, -0.5)):
    r = check_product_inequality(p, q, 1.0, 2.0, 3.0, 1.0, 0.5)
    print(f"  p={p}, q={q}: lhs={r.lhs:.6f} rhs={r.rhs:.6f} margin={r.margin:.2e}")
    assert r.ok

print("\nmarginal-integral exponent ell/(1 + n*ell):")
for ell, n in ((0.0, 3), (INF, 2), (-0.5, 1), (-1.0, 1)):
    print(f"  n={n}, ell={ell}: {bbl_exponent(ell, n)}")

# the Poisson-kernel chain: kernel exponent -1/(n+1) with indicator data
# (q = +inf) lands exactly on the boundary value -1
for n in (1, 2, 3):
    ell = holder_exponent(-1.0 / (n + 1), INF)
    print(f"  kernel chain n={n}: ell={ell:.4f} -> {bbl_exponent(ell, n):.4f}")
