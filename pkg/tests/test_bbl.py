import math

import pytest

from concavekit.bbl import BBLInstance, instance_from_json, sup_convolution, verify_bbl
from concavekit.convolve import oracle_W_interval
from concavekit.fields import (
    GaussWeierstrassKernel,
    GaussWeierstrassSlice,
    IndicatorField,
    ProductField,
    PullbackField,
    TentField,
)
from concavekit.geometry import Box, Interval
from concavekit.means import holder_exponent, mean_p
from concavekit.sampling import make_rng

INF = math.inf


def interval_instance(ell=0.0, lam=0.5, grid=512):
    return BBLInstance(
        IndicatorField(Interval(0, 1)), IndicatorField(Interval(2, 4)), ell, lam, grid
    )


class TestSupConvolution:
    def test_identical_indicators(self):
        inst = BBLInstance(
            IndicatorField(Interval(0, 1)), IndicatorField(Interval(0, 1)), 0.0, 0.5
        )
        assert sup_convolution(inst, [0.5]) == 1.0

    def test_disjoint_indicators_inside_combination(self):
        assert sup_convolution(interval_instance(), [1.5]) == 1.0

    def test_outside_combination_is_zero(self):
        assert sup_convolution(interval_instance(), [3.0]) == 0.0

    def test_heights_mix_through_the_mean(self):
        inst = BBLInstance(
            IndicatorField(Interval(0, 1), height=1.0),
            IndicatorField(Interval(2, 4), height=2.0),
            0.0,
            0.5,
        )
        assert sup_convolution(inst, [1.5]) == pytest.approx(math.sqrt(2.0), rel=1e-12)


class TestVerify:
    def test_flagship_interval_instance(self):
        r = verify_bbl(interval_instance())
        h = 1.5 / 512
        assert abs(r.lhs - 1.5) <= h
        assert r.rhs == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert r.margin == pytest.approx(1.5 - math.sqrt(2.0), abs=h)
        assert r.ok

    def test_equality_at_identical_data(self):
        inst = BBLInstance(
            IndicatorField(Interval(0, 1)), IndicatorField(Interval(0, 1)), 0.0, 0.5
        )
        r = verify_bbl(inst)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(1.0, rel=1e-15)
        assert r.ok

    def test_truncated_gaussians(self):
        g0 = ProductField([GaussWeierstrassSlice(1, 0.5), IndicatorField(Interval(-3, 3))])
        g1 = ProductField([GaussWeierstrassSlice(1, 1.0), IndicatorField(Interval(-3, 3))])
        r = verify_bbl(BBLInstance(g0, g1, 0.0, 0.5))
        assert r.ok

    def test_monotone_in_ell(self):
        f0 = IndicatorField(Interval(0, 1))
        f1 = TentField(Interval(1, 3))
        prev = -math.inf
        for ell in (-0.5, 0.0, 1.0, INF):
            r = verify_bbl(BBLInstance(f0, f1, ell, 0.4))
            assert r.lhs >= prev - 1e-12
            prev = r.lhs

    def test_zero_mass_rejected(self):
        inst = BBLInstance(
            IndicatorField(Interval(0, 1), height=0.0), IndicatorField(Interval(2, 4)), 0.0, 0.5
        )
        with pytest.raises(ValueError):
            verify_bbl(inst)

    def test_random_instances_nonnegative_margin(self):
        rng = make_rng(60)
        families_1d = [
            lambda a, b: IndicatorField(Interval(a, b)),
            lambda a, b: TentField(Interval(a, b)),
            lambda a, b: ProductField(
                [GaussWeierstrassSlice(1, 1.0), IndicatorField(Interval(a, b))]
            ),
        ]
        for k in range(30):
            mk0 = families_1d[k % 3]
            mk1 = families_1d[(k + 1) % 3]
            a0 = rng.uniform(-2, 0)
            b0 = a0 + rng.uniform(0.5, 2)
            a1 = rng.uniform(-1, 1)
            b1 = a1 + rng.uniform(0.5, 2)
            ell = [-0.5, 0.0, 1.0, INF][k % 4]
            lam = rng.uniform(0.1, 0.9)
            r = verify_bbl(BBLInstance(mk0(a0, b0), mk1(a1, b1), ell, lam, grid_points=256))
            assert r.ok, (k, r)

    def test_random_instances_2d(self):
        rng = make_rng(61)
        for k in range(8):
            lo0 = rng.uniform(-1, 0, 2)
            f0 = IndicatorField(Box(lo0, lo0 + rng.uniform(0.5, 1.5, 2)))
            lo1 = rng.uniform(-1, 0, 2)
            f1 = TentField(Box(lo1, lo1 + rng.uniform(0.5, 1.5, 2)))
            ell = [-0.25, 0.0, 1.0, INF][k % 4]
            r = verify_bbl(BBLInstance(f0, f1, ell, 0.5, grid_points=512))
            assert r.ok, (k, r)

    def test_marginal_exponent_boundary(self):
        # ell = -1/n turns the right side into the minimum of the masses
        f0 = IndicatorField(Interval(0, 1))
        f1 = IndicatorField(Interval(0, 3))
        r = verify_bbl(BBLInstance(f0, f1, -1.0, 0.5))
        assert r.marginal_exponent == -INF
        assert r.rhs == pytest.approx(1.0, rel=1e-12)
        assert r.ok


class TestProofStepConsistency:
    def test_weighted_product_bound_for_concave_weights(self):
        # for a q-concave weight psi and any nonnegative pair (v0, v1):
        # M_p(v0, v1) * psi(y_lam) >= M_ell(v0 psi(y0), v1 psi(y1)),
        # the pointwise estimate behind the sup-convolution bound
        rng = make_rng(59)
        psi = TentField(Interval(-1, 1))  # 1-concave
        q = 1.0
        for _ in range(500):
            p = rng.uniform(-q, 3.0)  # keeps p + q >= 0
            ell = holder_exponent(p, q)
            v0, v1 = rng.uniform(0, 5, 2)
            y0, y1 = rng.uniform(-1.2, 1.2, 2)
            lam = rng.uniform(0, 1)
            ylam = (1 - lam) * y0 + lam * y1
            lhs = mean_p(p, v0, v1, lam) * psi([ylam])
            rhs = mean_p(ell, v0 * psi([y0]), v1 * psi([y1]), lam)
            assert lhs >= rhs - 1e-12 * max(lhs, rhs, 1.0)

    def test_integral_of_sup_dominates_combined_convolutions(self):
        # the two data slices of a kernel-times-data product: the integral of
        # their sup-convolution dominates the mean of the two convolution
        # values at the endpoints
        psi = IndicatorField(Interval(-1, 1))
        gw = GaussWeierstrassKernel(1)
        x0, t0 = 0.3, 0.8
        x1, t1 = -0.4, 1.7
        lam = 0.4
        p, q = -1.0, INF
        ell = holder_exponent(p, q)  # -1 at the boundary -1/n

        f0 = ProductField([PullbackField(gw.slice_at(t0), scale=-1.0, shift=[x0]), psi])
        f1 = ProductField([PullbackField(gw.slice_at(t1), scale=-1.0, shift=[x1]), psi])
        inst = BBLInstance(f0, f1, ell, lam, grid_points=512)
        r = verify_bbl(inst)
        gamma0 = oracle_W_interval(-1, 1, x0, t0)
        gamma1 = oracle_W_interval(-1, 1, x1, t1)
        assert r.mass0 == pytest.approx(gamma0, abs=1e-4)
        assert r.mass1 == pytest.approx(gamma1, abs=1e-4)
        rhs = mean_p(-INF, gamma0, gamma1, lam)
        assert r.lhs >= rhs - r.tolerance - 1e-4


class TestJson:
    def test_instance_round_trip(self):
        data = {
            "f0": {"kind": "indicator", "body": {"kind": "interval", "a": 0, "b": 1}},
            "f1": {"kind": "indicator", "body": {"kind": "interval", "a": 2, "b": 4}},
            "ell": 0,
            "lambda": 0.5,
        }
        inst = instance_from_json(data)
        r = verify_bbl(inst)
        assert r.rhs == pytest.approx(math.sqrt(2.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            BBLInstance(
                IndicatorField(Interval(0, 1)), IndicatorField(Interval(0, 1)), -2.0, 0.5
            )
        with pytest.raises(ValueError):
            BBLInstance(
                IndicatorField(Interval(0, 1)), IndicatorField(Interval(0, 1)), 0.0, 1.0
            )
        with pytest.raises(ValueError):
            BBLInstance(
                GaussWeierstrassSlice(1, 1.0), IndicatorField(Interval(0, 1)), 0.0, 0.5
            )
