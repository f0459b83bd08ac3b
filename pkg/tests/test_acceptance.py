"""Acceptance suite: one test per release criterion, each printing a verdict
line.  Every tolerance is fixed here, not tuned at runtime."""

import math
import time

import numpy as np

from concavekit.bbl import BBLInstance, verify_bbl
from concavekit.concavity import (
    PASS,
    CheckConfig,
    check_p_concavity,
    check_parabolic_p_concavity,
    classify_equality,
)
from concavekit.convolve import (
    HeatIndicatorField,
    PoissonIndicatorField,
    QuadratureSpec,
    convolve_at,
    oracle_P_interval,
    oracle_W_interval,
)
from concavekit.fields import (
    GaussWeierstrassKernel,
    GaussWeierstrassSlice,
    GridField,
    IndicatorField,
    KappaExpKernel,
    KappaPowerKernel,
    PoissonKernel,
    ProductField,
    TentField,
    conjugate0,
    lift,
    sigma_sphere,
)
from concavekit.geometry import (
    Ball,
    Box,
    CylinderRegion,
    Interval,
    SpaceTimeBox,
    check_parabolic_convexity,
    coupling_core,
    time_scaled_region,
)
from concavekit.means import bbl_exponent, holder_exponent, mean_p, product_inequality_margin
from concavekit.sampling import make_rng

EPS = np.finfo(float).eps
INF = math.inf


def report(num, ok, text, elapsed):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {text} ({elapsed:.1f}s)")


def test_criterion_1_mean_algebra():
    t0 = time.perf_counter()
    rng = make_rng(1001)
    n = 1_000_000

    p = rng.uniform(-20, 20, n)
    q = np.abs(rng.uniform(0, 20, n)) - p  # guarantees p + q >= 0
    exact_zero = rng.random(n) < 0.05
    q[exact_zero] = -p[exact_zero]
    inf_p = rng.random(n) < 0.02
    p[inf_p] = INF
    a, b, c, d = (rng.uniform(0, 5, n) for _ in range(4))
    zero_hits = rng.random(n) < 0.02
    a[zero_hits] = 0.0
    lam = rng.uniform(0, 1, n)

    margin, lhs, rhs = product_inequality_margin(p, q, a, b, c, d, lam, with_parts=True)
    scale = np.maximum(np.maximum(lhs, rhs), 1.0)
    product_ok = (margin / scale).min() >= -4 * EPS

    hi = rng.uniform(-20, 20, n)
    lo = hi - np.abs(rng.normal(0, 1, n)) * 10.0 ** rng.uniform(-10, 1, n)
    m_hi = mean_p(hi, a, b, lam)
    m_lo = mean_p(lo, a, b, lam)
    mono_scale = np.maximum(np.maximum(m_hi, m_lo), 1e-300)
    mono_ok = ((m_hi - m_lo) / mono_scale).min() >= -4 * EPS

    elapsed = time.perf_counter() - t0
    ok = product_ok and mono_ok and elapsed < 10.0
    report(1, ok, f"1e6 product-inequality and monotonicity margins >= -4 ulp", elapsed)
    assert product_ok
    assert mono_ok
    assert elapsed < 10.0


def test_criterion_2_bbl_verification():
    t0 = time.perf_counter()
    flagship = BBLInstance(
        IndicatorField(Interval(0, 1)), IndicatorField(Interval(2, 4)), 0.0, 0.5, 512
    )
    r = verify_bbl(flagship)
    h = 1.5 / 512
    flagship_ok = abs(r.lhs - 1.5) <= h and r.rhs == math.sqrt(2.0)

    rng = make_rng(1002)
    failures = 0
    count = 0
    for k in range(200):
        n = 1 if k % 2 == 0 else 2
        ell = [-1.0 / (2 * n), 0.0, 1.0, INF][k % 4]
        lam = rng.uniform(0.1, 0.9)
        if n == 1:
            makers = [
                lambda lo, w: IndicatorField(Interval(lo, lo + w)),
                lambda lo, w: TentField(Interval(lo, lo + w)),
                lambda lo, w: ProductField(
                    [GaussWeierstrassSlice(1, 1.0), IndicatorField(Interval(lo, lo + w))]
                ),
            ]
            f0 = makers[k % 3](rng.uniform(-2, 0), rng.uniform(0.5, 2))
            f1 = makers[(k + 1) % 3](rng.uniform(-1, 1), rng.uniform(0.5, 2))
        else:
            lo0 = rng.uniform(-1, 0, 2)
            lo1 = rng.uniform(-1, 0, 2)
            mk = [IndicatorField, TentField]
            f0 = mk[k % 2](Box(lo0, lo0 + rng.uniform(0.5, 1.5, 2)))
            f1 = mk[(k + 1) % 2](Box(lo1, lo1 + rng.uniform(0.5, 1.5, 2)))
        rep = verify_bbl(BBLInstance(f0, f1, ell, lam, 512))
        count += 1
        if not rep.ok:
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = flagship_ok and failures == 0 and elapsed < 120.0
    report(2, ok, f"interval instance exact + {count} random instances within tol(h)", elapsed)
    assert flagship_ok
    assert failures == 0
    assert elapsed < 120.0


def test_criterion_3_oracle_agreement():
    t0 = time.perf_counter()
    rng = make_rng(1003)
    psi = IndicatorField(Interval(-1, 1))
    quad = QuadratureSpec.default_for(psi.support)
    gw = GaussWeierstrassKernel(1)
    pk = PoissonKernel(1)
    worst = 0.0
    for _ in range(100):
        x = rng.uniform(-3, 3)
        t = rng.uniform(0.1, 5.0)
        rw = convolve_at(gw, psi, [x], t, quad)
        dw = abs(rw.value - oracle_W_interval(-1, 1, x, t))
        assert dw <= max(rw.est_error, 1e-6)
        rp = convolve_at(pk, psi, [x], t, quad)
        dp = abs(rp.value - oracle_P_interval(-1, 1, x, t))
        assert dp <= max(rp.est_error, 1e-6)
        worst = max(worst, dw, dp)
    elapsed = time.perf_counter() - t0
    report(3, True, f"100 random (x,t) quadrature-vs-closed-form, worst |diff| {worst:.2e}", elapsed)


def _strict_margin_sweep(field, alpha, samples, seed):
    """Margins of the quasi-concavity inequality on random space-time pairs."""
    rng = make_rng(seed)
    dom = SpaceTimeBox(Interval(-2, 2), 0.5, 4.0)
    X0, T0 = dom.sample(rng, samples)
    X1, T1 = dom.sample(rng, samples)
    lam = rng.uniform(0.0, 1.0, samples)
    t_comb = mean_p(alpha, T0, T1, lam)
    x_comb = (1 - lam)[:, None] * X0 + lam[:, None] * X1
    f0 = field(X0, T0)
    f1 = field(X1, T1)
    fl = field(x_comb, t_comb)
    margin = fl - mean_p(-INF, f0, f1, lam)
    sep = np.sqrt(np.linalg.norm(X0 - X1, axis=1) ** 2 + (T0 - T1) ** 2)
    interior = (lam > 1e-3) & (lam < 1 - 1e-3)
    return margin, sep, interior, np.maximum(fl, np.maximum(f0, f1))


def test_criterion_4_main_concavity_of_convolutions():
    t0 = time.perf_counter()
    results = {}
    for name, field, alpha, p_kernel in (
        ("heat", HeatIndicatorField(-1, 1), 0.5, -1.0),
        ("poisson", PoissonIndicatorField(-1, 1), 1.0, -1.0),
    ):
        # combined exponent: kernel p = -1/n with indicator data q = +inf
        ell = holder_exponent(p_kernel, INF)
        assert bbl_exponent(ell, 1) == -INF  # strict quasi-concavity target

        margin, sep, interior, scale = _strict_margin_sweep(field, alpha, 500, 1004)
        noise = 0.0  # closed-form evaluation
        violations = int((margin < -(1e-9 * scale + 3 * noise)).sum())
        separated = (sep > 1e-3) & interior
        strict_ok = bool((margin[separated] > 3 * noise).all())

        cfg = CheckConfig(
            samples=500, seed=1004, domain=SpaceTimeBox(Interval(-2, 2), 0.5, 4.0)
        )
        verdict = check_parabolic_p_concavity(field, alpha, -INF, cfg, mode="strict").verdict
        results[name] = (violations, strict_ok, verdict)

    elapsed = time.perf_counter() - t0
    ok = all(v == 0 and s and w == PASS for v, s, w in results.values()) and elapsed < 180.0
    report(4, ok, f"strict space-time quasi-concavity of both convolutions {results}", elapsed)
    for name, (violations, strict_ok, verdict) in results.items():
        assert violations == 0, name
        assert strict_ok, name
        assert verdict == PASS, name
    assert elapsed < 180.0


def test_criterion_5_slice_corollaries():
    t0 = time.perf_counter()
    rng = make_rng(1005)
    n_samples = 10_000
    for t in (0.25, 1.0, 4.0):
        x0 = rng.uniform(-3, 3, n_samples)
        x1 = rng.uniform(-3, 3, n_samples)
        lam = rng.uniform(0.0, 1.0, n_samples)
        xm = (1 - lam) * x0 + lam * x1
        distinct = (np.abs(x0 - x1) > 1e-6) & (lam > 1e-6) & (lam < 1 - 1e-6)

        # reciprocal of the angle integral is midpoint/lambda-convex, strictly
        P0 = oracle_P_interval(-1, 1, x0, t)
        P1 = oracle_P_interval(-1, 1, x1, t)
        Pm = oracle_P_interval(-1, 1, xm, t)
        gap = (1 - lam) / P0 + lam / P1 - 1.0 / Pm
        assert (gap[distinct] > 0).all(), f"reciprocal convexity failed at t={t}"
        margin_p = Pm - mean_p(-1.0, P0, P1, lam)
        assert (margin_p >= -1e-12).all()

        # heat slices are strictly log-concave
        W0 = oracle_W_interval(-1, 1, x0, t)
        W1 = oracle_W_interval(-1, 1, x1, t)
        Wm = oracle_W_interval(-1, 1, xm, t)
        log_gap = np.log(Wm) - ((1 - lam) * np.log(W0) + lam * np.log(W1))
        assert (log_gap[distinct] > 0).all(), f"log-concavity failed at t={t}"

        # the randomized checkers agree
        cfg = CheckConfig(samples=2000, seed=1005, domain=Interval(-3, 3))
        P = PoissonIndicatorField(-1, 1)
        W = HeatIndicatorField(-1, 1)
        assert check_p_concavity(P.slice_at(t), -1.0, cfg, strict=True).verdict == PASS
        assert check_p_concavity(W.slice_at(t), 0.0, cfg, strict=True).verdict == PASS
    elapsed = time.perf_counter() - t0
    report(5, True, "strict -1-concavity / log-concavity of slices at t in {0.25, 1, 4}", elapsed)


def test_criterion_6_ray_equality_detection():
    t0 = time.perf_counter()
    gw = GaussWeierstrassKernel(1)
    c = classify_equality(gw, 0.5, -1.0, [1.0], 1.0, [2.0], 4.0, 0.5, eps_eq=1e-12)
    on_ray_ok = c.labels == ("on_ray", "equal")
    rel = abs(c.lhs - c.rhs) / max(c.lhs, c.rhs)
    agree_ok = rel <= 1e-12

    c2 = classify_equality(gw, 0.5, -1.0, [1.0], 1.0, [2.1], 4.0, 0.5, eps_eq=1e-12)
    off_ray_ok = c2.labels == ("off_ray", "strict")
    elapsed = time.perf_counter() - t0
    ok = on_ray_ok and agree_ok and off_ray_ok
    report(6, ok, f"ray pair classified {c.labels}, sides agree to {rel:.1e}", elapsed)
    assert on_ray_ok
    assert agree_ok
    assert off_ray_ok


def test_criterion_7_kernel_template_cross_checks():
    t0 = time.perf_counter()
    rng = make_rng(1007)
    x = rng.uniform(-4, 4, 1000)
    t = rng.uniform(0.1, 5.0, 1000)

    k_exp = KappaExpKernel(-0.5, 2.0, 1.0, n=1)
    gw = GaussWeierstrassKernel(1)
    lhs = gw(x[:, None], t)
    rhs = (4 * math.pi) ** -0.5 * k_exp(x[:, None] / 2.0, t)
    exp_ok = np.max(np.abs(lhs - rhs) / np.abs(lhs)) <= 1e-12

    k_pow = KappaPowerKernel(1.0, 2.0, -2.0, n=1)
    pk = PoissonKernel(1)
    lhs2 = pk(x[:, None], t)
    rhs2 = (2.0 / sigma_sphere(1)) * k_pow(x[:, None], t)
    pow_ok = np.max(np.abs(lhs2 - rhs2) / np.abs(lhs2)) <= 1e-12

    elapsed = time.perf_counter() - t0
    ok = exp_ok and pow_ok
    report(7, ok, "exp/power kernel templates reproduce heat and Poisson kernels", elapsed)
    assert exp_ok
    assert pow_ok


def test_criterion_8_viewing_angle_maximization():
    from concavekit.optimize import regiomontanus

    t0 = time.perf_counter()
    r1 = regiomontanus(1.0, 4.0, Interval(0.5, 5.0))
    vertical_ok = abs(r1.argmax[1] - 2.0) < 1e-6

    r2 = regiomontanus(1.0, 4.0, Box([-2.0, 0.5], [2.0, 3.0]), multistart=10)
    box_ok = r2.starts_converged == 10 and r2.max_pairwise_spread < 1e-5 and r2.unique

    elapsed = time.perf_counter() - t0
    ok = vertical_ok and box_ok and elapsed < 10.0
    report(
        8,
        ok,
        f"|t-2| = {abs(r1.argmax[1] - 2.0):.1e}, 10-start spread {r2.max_pairwise_spread:.1e}",
        elapsed,
    )
    assert vertical_ok
    assert box_ok
    assert elapsed < 10.0


def _conjugation_instances():
    """(field on linear time, exponent, expected-pass flag) triples.

    The conjugation identity links the time mean at alpha = 1 with the one
    at alpha = 0, so every field here has known behavior at alpha = 1:
    time-lifts of concave profiles and the two 1-parabolic kernels pass,
    lifts of non-concave data fail, and the verdicts must agree across the
    log-time map either way.
    """
    from concavekit.fields import PoissonSlice, RadialProfile, radialize

    out = []
    bodies = [Interval(-1, 1), Interval(-2, 0.5), Interval(0.2, 1.7)]
    for body in bodies:
        out.append((lift(TentField(body), 1.0, 1.0), 1.0, True))
        out.append((lift(IndicatorField(body), 2.0, 1.0), 2.0, True))
    for t_slice in (0.25, 0.5, 1.0):
        out.append((lift(GaussWeierstrassSlice(1, t_slice), 0.0, 1.0), 0.0, True))
    out.append((PoissonKernel(1), -1.0, True))
    out.append((KappaPowerKernel(1.0, 2.0, -2.0), -1.0, True))
    out.append((lift(PoissonSlice(1, 1.0), -0.5, 1.0), -0.5, True))
    exp_profile = RadialProfile(lambda r: np.exp(-r), strictly_decreasing=True)
    out.append((lift(radialize(exp_profile, 1), 0.0, 1.0), 0.0, True))

    bump = np.zeros(41)
    bump[5:10] = 1.0
    bump[30:35] = 1.0
    two_bump = GridField(bump, [-2.0], [2.0])
    for p in (1.0, 0.0, -1.0):
        out.append((lift(two_bump, p if p != 0 else 1.0, 1.0), p, False))

    wiggle = GridField(1.0 + np.sin(np.linspace(0, 9, 50)) ** 2, [-2.0], [2.0])
    for p in (1.0, 0.0, -1.0, 2.0):
        out.append((lift(wiggle, 1.0, 1.0), p, False))
    return out[:20]


def test_criterion_9_structural_equivalences():
    t0 = time.perf_counter()

    # conjugation: the log-time check verdict equals the linear-time verdict
    instances = _conjugation_instances()
    assert len(instances) == 20
    agreements = 0
    for i, (phi1, p, expect_pass) in enumerate(instances):
        dom1 = SpaceTimeBox(Interval(-1.5, 1.5), math.log(1.5), math.log(6.0))
        dom0 = SpaceTimeBox(Interval(-1.5, 1.5), 1.5, 6.0)
        v1 = check_parabolic_p_concavity(
            phi1, 1.0, p, CheckConfig(samples=800, seed=1009 + i, domain=dom1)
        ).verdict
        v0 = check_parabolic_p_concavity(
            conjugate0(phi1), 0.0, p, CheckConfig(samples=800, seed=1009 + i, domain=dom0)
        ).verdict
        assert v0 == v1, f"instance {i}: {v0} vs {v1}"
        assert (v1 == PASS) == expect_pass, f"instance {i} expected pass={expect_pass}, got {v1}"
        agreements += 1

    # chart-vs-direct agreement on scaled regions and a cylinder
    for region in (
        time_scaled_region(Ball([0.0, 0.0], 1.0), 1.0),
        time_scaled_region(Box([-1.0, -0.5], [1.0, 0.5]), 1.0),
        CylinderRegion(Interval(-1, 1), 0.5, 2.0, 1.0),
    ):
        rep = check_parabolic_convexity(region, samples=800, seed=1010)
        assert rep.verdict == PASS
        assert rep.chart_verdict == rep.direct_verdict == PASS

    # membership of the coupling core against brute-force decomposition search
    rng = make_rng(1011)
    checked = 0
    for trial in range(20):
        dim = 1 if trial % 2 == 0 else 2
        if dim == 1:
            base = Interval(*np.sort(rng.uniform(-2, 2, 2) + [0, 1.0]))
        else:
            lo = rng.uniform(-2, 0, 2)
            base = Box(lo, lo + rng.uniform(0.5, 2, 2))
        x0 = rng.uniform(-1, 1, dim)
        x1 = rng.uniform(-1, 1, dim)
        t0_, t1_ = rng.uniform(0.5, 3, 2)
        lam = rng.uniform(0.2, 0.8)
        alpha = rng.uniform(0.3, 1.5)
        core = coupling_core(base, x0, x1, t0_, t1_, alpha, lam)

        m = 41 if dim == 1 else 21
        klo, khi = base.bounding_box()
        axes = [np.linspace(klo[i], khi[i], m) for i in range(dim)]
        grid = np.stack([g.reshape(-1) for g in np.meshgrid(*axes, indexing="ij")], axis=1)
        h = float(np.max((khi - klo) / (m - 1)))
        slope = 1.0 / t0_**alpha + (1 - lam) / (lam * t1_**alpha)
        res_tol = 0.75 * slope * h * math.sqrt(dim)
        layer = (1.0 + (1 - lam) / lam) * h

        probes = rng.uniform(klo * 2 - 1, khi * 2 + 1, size=(30, dim))
        for y in probes:
            y1g = (y[None, :] - (1 - lam) * grid) / lam
            inside = base.contains_many(y1g, tol=1e-9)
            res = np.linalg.norm((x0 - grid) / t0_**alpha - (x1 - y1g) / t1_**alpha, axis=1)
            found = bool((inside & (res < res_tol)).any())
            exact = core.contains(y)
            if found != exact:
                y0x, y1x = core.decompose(y)
                d_edge = min(
                    np.min(np.abs(np.concatenate([y0x - klo, khi - y0x]))),
                    np.min(np.abs(np.concatenate([y1x - klo, khi - y1x]))),
                )
                assert d_edge <= layer, f"trial {trial}: disagreement beyond the boundary layer"
            checked += 1

    elapsed = time.perf_counter() - t0
    report(
        9,
        True,
        f"{agreements} conjugation agreements, 3 chart agreements, {checked} core probes",
        elapsed,
    )
