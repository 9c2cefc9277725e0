import math

import numpy as np
import pytest

from bralpha.kernels import (
    KernelParams,
    dpsi_alpha,
    kernel_eval,
    kernel_eval_periodic,
    psi_alpha,
)
from bralpha.specfun import bessel_k1

from conftest import euler_periodic_reference

TWO_PI = 2.0 * math.pi
EULER_GAMMA = 0.5772156649015329


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            KernelParams("br_alpha")  # missing alpha
        with pytest.raises(ValueError):
            KernelParams("blob", delta=-1.0)
        with pytest.raises(ValueError):
            KernelParams("euler", period=0.0)
        with pytest.raises(ValueError):
            KernelParams("euler", image_tail_threshold=5.0)
        with pytest.raises(ValueError):
            KernelParams("fancy")


class TestStreamFunctions:
    def test_dpsi_far_field(self):
        # Bessel tail negligible at r/alpha = 40
        want = 1.0 / (TWO_PI * 40.0)
        assert abs(dpsi_alpha(40.0, 1.0) - want) <= 1e-15 * want

    def test_dpsi_at_alpha(self):
        want = (1.0 - bessel_k1(1.0)) / TWO_PI
        assert abs(dpsi_alpha(1.0, 1.0) - want) <= 1e-15

    def test_dpsi_small_r_vanishes_like_r_log_r(self):
        alpha = 0.3
        for r in (1e-8, 1e-6, 1e-4):
            lead = -(r / (4.0 * math.pi * alpha**2)) * (
                math.log(r / (2.0 * alpha)) + EULER_GAMMA - 0.5
            )
            assert abs(dpsi_alpha(r, alpha) - lead) <= 1e-5 * abs(lead)

    def test_psi_value(self):
        want = 0.42102443824070834 / TWO_PI
        assert abs(psi_alpha(1.0, 1.0) - want) <= 1e-14

    def test_psi_zero_limit(self):
        alpha = 0.7
        limit = (math.log(alpha) + math.log(2.0) - EULER_GAMMA) / TWO_PI
        assert abs(psi_alpha(1e-12, alpha) - limit) <= 1e-12

    def test_psi_log_tail(self):
        # K0 term below 1e-20 relative at r/alpha = 50
        val = psi_alpha(50.0, 1.0)
        assert abs(val - math.log(50.0) / TWO_PI) <= 1e-18

    def test_psi_dpsi_derivative_consistency(self):
        r, alpha = 0.7, 0.3
        errs = []
        for h in (1e-3, 5e-4):
            fd = (psi_alpha(r + h, alpha) - psi_alpha(r - h, alpha)) / (2 * h)
            errs.append(abs(fd - dpsi_alpha(r, alpha)))
        assert math.log2(errs[0] / errs[1]) >= 1.9

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            dpsi_alpha(-1.0, 1.0)
        with pytest.raises(ValueError):
            psi_alpha(0.0, 1.0)


class TestFreeKernels:
    def test_smoothed_zero_at_origin(self):
        p = KernelParams("br_alpha", alpha=0.5)
        assert (kernel_eval([0.0, 0.0], p) == 0.0).all()

    def test_blob_example(self):
        p = KernelParams("blob", delta=0.1)
        got = kernel_eval([0.1, 0.0], p)
        assert abs(got[0]) == 0.0
        assert abs(got[1] - 1.0 / (4.0 * math.pi * 0.1)) <= 1e-15

    def test_smoothed_example(self):
        p = KernelParams("br_alpha", alpha=1.0)
        got = kernel_eval([1.0, 0.0], p)
        assert got[0] == 0.0
        assert abs(got[1] - dpsi_alpha(1.0, 1.0)) <= 1e-16

    def test_euler_singular(self):
        p = KernelParams("euler")
        with pytest.raises(ValueError):
            kernel_eval([0.0, 0.0], p)
        got = kernel_eval([0.0, 2.0], p)
        assert np.allclose(got, [-1.0 / (4.0 * math.pi), 0.0])

    def test_antisymmetry_exact(self, rng):
        dx = rng.normal(size=(10_000, 2))
        for p in (
            KernelParams("br_alpha", alpha=0.37),
            KernelParams("blob", delta=0.21),
            KernelParams("euler"),
        ):
            plus = kernel_eval(dx, p)
            minus = kernel_eval(-dx, p)
            assert (plus == -minus).all()

    def test_orthogonal_to_separation(self, rng):
        # kernel is proportional to dx_perp; the residual dot product is
        # pure rounding of the two component products (~1 ulp each)
        dx = rng.normal(size=(1000, 2))
        for p in (
            KernelParams("br_alpha", alpha=0.37),
            KernelParams("blob", delta=0.21),
            KernelParams("euler"),
        ):
            v = kernel_eval(dx, p)
            dots = v[:, 0] * dx[:, 0] + v[:, 1] * dx[:, 1]
            scale = np.abs(v * dx).sum(axis=1)
            assert (np.abs(dots) <= 4e-16 * scale).all()

    def test_alpha_limit_far_field(self, rng):
        # the smoothing correction relative to the singular kernel is
        # z K1(z); at z = 50 that is ~2e-21, far below an ulp, so the
        # two evaluation paths must agree to rounding
        assert 50.0 * bessel_k1(50.0) < 1e-18
        pe = KernelParams("euler")
        for alpha in (0.1, 0.02):
            pa = KernelParams("br_alpha", alpha=alpha)
            dx = rng.normal(size=(100, 2))
            dx *= (50.0 * alpha / np.hypot(dx[:, 0], dx[:, 1]))[:, None]
            diff = np.abs(kernel_eval(dx, pa) - kernel_eval(dx, pe)).max()
            scale = np.abs(kernel_eval(dx, pe)).max()
            assert diff <= 1e-15 * scale

    def test_small_argument_law(self):
        # sharp asymptote: K(x) = -(dx_perp / 4 pi a^2)(log z + g - 1/2 - log 2),
        # z = |dx|/a.  The bare -log z form is only O(1/log z) accurate.
        alpha = 0.4
        p = KernelParams("br_alpha", alpha=alpha)
        for z in (1e-6, 1e-5, 1e-3):
            r = z * alpha
            dx = np.array([r / math.sqrt(2.0), -r / math.sqrt(2.0)])
            got = kernel_eval(dx, p)
            perp = np.array([-dx[1], dx[0]])
            sharp = -perp / (4 * math.pi * alpha**2) * (
                math.log(z / 2.0) + EULER_GAMMA - 0.5
            )
            assert np.abs(got - sharp).max() <= 1e-3 * np.abs(sharp).max()
            bare = -perp / (4 * math.pi * alpha**2) * math.log(z)
            rel = np.abs(got - bare).max() / np.abs(bare).max()
            # remainder of the bare form is ~|g - 1/2 - log2| / |log z|
            assert rel <= 0.7 / abs(math.log(z))


class TestPeriodicKernels:
    def test_euler_quarter_period(self):
        for L in (1.0, 2.0 * math.pi):
            p = KernelParams("euler", period=L)
            got = kernel_eval_periodic([L / 4.0, 0.0], p)
            assert abs(got[0]) == 0.0
            assert abs(got[1] - 1.0 / (2.0 * L)) <= 1e-15

    def test_far_field_shear(self):
        L = 2.0
        p = KernelParams("euler", period=L)
        got = kernel_eval_periodic([0.3, 1e4], p)
        assert np.allclose(got, [-1.0 / (2.0 * L), 0.0], atol=1e-17)
        got = kernel_eval_periodic([0.3, -1e4], p)
        assert np.allclose(got, [1.0 / (2.0 * L), 0.0], atol=1e-17)

    def test_euler_lattice_raises(self):
        p = KernelParams("euler", period=1.5)
        with pytest.raises(ValueError):
            kernel_eval_periodic([3.0, 0.0], p)

    def test_smoothed_lattice_limit(self):
        p = KernelParams("br_alpha", alpha=0.3, period=1.5)
        assert (kernel_eval_periodic([3.0, 0.0], p) == 0.0).all()

    def test_blob_not_periodizable(self):
        p = KernelParams("blob", delta=0.1, period=1.0)
        with pytest.raises(ValueError):
            kernel_eval_periodic([0.2, 0.0], p)

    def test_euler_vs_brute_force(self, rng):
        L = 2.0
        p = KernelParams("euler", period=L)
        for _ in range(12):
            dx = [rng.uniform(-L / 2, L / 2), rng.uniform(-L, L)]
            if math.hypot(*dx) < 1e-2:
                continue
            ref = euler_periodic_reference(dx, L)
            got = kernel_eval_periodic(dx, p)
            assert np.abs(got - ref).max() <= 1e-10

    def test_smoothed_vs_brute_force(self, rng):
        L = 2.0
        alpha = 0.4
        p = KernelParams("br_alpha", alpha=alpha, period=L)
        from bralpha.specfun import bessel_k1 as k1

        for _ in range(12):
            dx = [rng.uniform(-L / 2, L / 2), rng.uniform(-L, L)]
            if math.hypot(*dx) < 1e-2:
                continue
            ref = euler_periodic_reference(dx, L)
            for m in range(-80, 81):
                a = dx[0] + m * L
                r = math.hypot(a, dx[1])
                z = r / alpha
                if z > 600.0:
                    continue
                ref = ref - np.array([-dx[1], a]) * k1(z) / (
                    TWO_PI * alpha * r
                )
            got = kernel_eval_periodic(dx, p)
            assert np.abs(got - ref).max() <= 1e-10

    def test_matches_euler_when_alpha_small(self):
        # at |dx| >= L/2 the smoothing correction is exponentially small
        L = 2.0 * math.pi
        alpha = 0.4
        pp = KernelParams("br_alpha", alpha=alpha, period=L)
        pe = KernelParams("euler", period=L)
        for dx in ([L / 2.0, L / 4.0], [L / 2.0, 1e-9]):
            diff = np.abs(
                kernel_eval_periodic(dx, pp) - kernel_eval_periodic(dx, pe)
            )
            assert diff.max() <= math.exp(-L / (2.0 * alpha))

    def test_antisymmetry(self, rng):
        L = 1.7
        for p in (
            KernelParams("br_alpha", alpha=0.3, period=L),
            KernelParams("euler", period=L),
        ):
            dx = rng.normal(size=(2000, 2))
            plus = kernel_eval_periodic(dx, p)
            minus = kernel_eval_periodic(-dx, p)
            assert np.abs(plus + minus).max() <= 1e-15 * np.abs(plus).max()
