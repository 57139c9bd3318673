import numpy as np
import pytest

from gradts import acquire as acq
from gradts import candidates as cand
from gradts import gp, turbo
from gradts.kernel import KernelParams


def make_model(n=8, d=3, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.random((n, d))
    y = -np.sum((X - 0.5) ** 2, axis=1)
    data = gp.Dataset.make(X, y)
    params = KernelParams(lengthscales=np.full(d, 0.4), noise_variance=1e-4)
    return gp.GpModel.build(params, data)


class TestConfig:
    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            acq.AcquisitionConfig(policy="gradient-descent")

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            acq.AcquisitionConfig(M=0)
        with pytest.raises(ValueError):
            acq.AcquisitionConfig(q=0)


class TestAcquire:
    def test_singleton_candidate_is_selected(self):
        model = make_model()
        cfg = acq.AcquisitionConfig(M=1, policy="sobol", q=1)
        res = acq.acquire(model, cfg, seed=0)
        cs, _ = acq._member_candidates(
            model, cfg, None,
            np.random.SeedSequence(0).spawn(1)[0].spawn(2)[0])
        np.testing.assert_array_equal(res.x_next[0], cs.points[0])

    @pytest.mark.parametrize("policy", acq.PLAIN_POLICIES + acq.GRAD_POLICIES)
    def test_reproducible_and_in_domain(self, policy):
        model = make_model()
        cfg = acq.AcquisitionConfig(M=64, policy=policy)
        a = acq.acquire(model, cfg, seed=42)
        b = acq.acquire(model, cfg, seed=42)
        np.testing.assert_array_equal(a.x_next, b.x_next)
        np.testing.assert_array_equal(a.ts_max, b.ts_max)
        assert np.all((a.x_next >= 0) & (a.x_next <= 1))
        c = acq.acquire(model, cfg, seed=43)
        assert not np.array_equal(a.x_next, c.x_next)

    def test_batch_members_use_distinct_seeds(self):
        model = make_model()
        cfg = acq.AcquisitionConfig(M=256, policy="grad-raasp", q=2)
        res = acq.acquire(model, cfg, seed=7)
        assert res.x_next.shape == (2, 3)
        assert not np.array_equal(res.x_next[0], res.x_next[1])
        assert len(res.gradient_samples) == 2
        assert not np.array_equal(res.gradient_samples[0].g,
                                  res.gradient_samples[1].g)

    def test_ts_max_monotone_in_candidate_count(self):
        # the max over a superset of candidates under one joint draw can only grow;
        # emulate by nesting candidate sets and conditioning on a shared draw
        model = make_model(seed=3)
        rng = np.random.default_rng(0)
        gs = gp.sample_gradient(model, model.data.X[0], rng)
        Xc = np.random.default_rng(1).random((128, 3))
        vals = gp.sample_candidates_conditioned(
            model, gs, Xc, np.random.default_rng(2))
        assert vals[:32].max() <= vals[:64].max() <= vals.max()

    def test_grad_policies_record_log_volume(self):
        model = make_model()
        cfg = acq.AcquisitionConfig(M=64, policy="grad-raasp")
        res = acq.acquire(model, cfg, seed=0)
        assert res.region_log_volumes.shape == (1,)
        assert res.region_log_volumes[0] <= 0.0  # cone inside the unit cube

    def test_trust_region_containment(self):
        model = make_model()
        state = turbo.TrustRegionState.init(q=1, d=3)
        x0, _ = gp.incumbent(model)
        tr = turbo.region(state, model, x0)
        cfg = acq.AcquisitionConfig(M=128, policy="grad-raasp", use_turbo=True)
        res = acq.acquire(model, cfg, trust_region=tr, seed=5)
        assert np.all(res.x_next[0] >= tr.lower - 1e-12)
        assert np.all(res.x_next[0] <= tr.upper + 1e-12)

    def test_turbo_without_region_raises(self):
        model = make_model()
        cfg = acq.AcquisitionConfig(M=8, use_turbo=True)
        with pytest.raises(ValueError):
            acq.acquire(model, cfg, seed=0)

    def test_plain_region_ignores_trust_region_when_disabled(self):
        model = make_model()
        tr = cand.SearchRegion(np.full(3, 0.45), np.full(3, 0.55),
                               provenance="trust-region")
        cfg = acq.AcquisitionConfig(M=512, policy="sobol", use_turbo=False)
        res = acq.acquire(model, cfg, trust_region=tr, seed=0)
        # with turbo off the search covers the whole cube, so the chosen point
        # is almost surely outside the tiny box
        assert not (np.all(res.x_next[0] >= tr.lower)
                    and np.all(res.x_next[0] <= tr.upper))
