import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradts import candidates as cand
from gradts.candidates import MaskVariant, SearchRegion


def region(lower, upper):
    return SearchRegion(lower=np.asarray(lower, float), upper=np.asarray(upper, float),
                        provenance="domain")


class TestSobol:
    def test_range_and_shape(self):
        X = cand.sobol(100, 7, seed=0)
        assert X.shape == (100, 7)
        assert np.all((X >= 0) & (X <= 1))

    def test_deterministic(self):
        np.testing.assert_array_equal(cand.sobol(64, 3, seed=5), cand.sobol(64, 3, seed=5))
        assert not np.array_equal(cand.sobol(64, 3, seed=5), cand.sobol(64, 3, seed=6))

    def test_lower_discrepancy_than_uniform(self):
        # star-discrepancy proxy: worst-case box-count error over random anchors
        d, M = 2, 1024
        Xs = cand.sobol(M, d, seed=0)
        Xu = np.random.default_rng(0).random((M, d))
        anchors = np.random.default_rng(1).random((200, d))

        def disc(X):
            frac = (X[None, :, :] <= anchors[:, None, :]).all(axis=2).mean(axis=1)
            return np.max(np.abs(frac - anchors.prod(axis=1)))

        assert disc(Xs) < disc(Xu)

    def test_high_dim_fallback_warns(self):
        from scipy.stats import qmc
        d = qmc.Sobol.MAXDIM + 1
        with pytest.warns(UserWarning):
            X = cand.sobol(8, d, seed=0)
        assert X.shape == (8, d)
        assert np.all((X >= 0) & (X <= 1))

    def test_region_sobol_respects_bounds(self):
        r = region([0.2, 0.5], [0.4, 0.9])
        X = cand.region_sobol(r, 50, seed=0)
        assert np.all(X >= r.lower - 1e-12) and np.all(X <= r.upper + 1e-12)


class TestRaasp:
    def test_mean_perturbed_dims(self):
        d, M = 100, 10_000
        x0 = np.full(d, 0.5)
        cs = cand.raasp(x0, M, seed=0)
        per = np.count_nonzero(cs.points != x0, axis=1)
        assert abs(per.mean() - 20.0) <= 1.5

    def test_small_d_perturbs_everything_often(self):
        # min(20/d, 1) = 1 for d <= 20: every dimension eligible every time
        x0 = np.full(5, 0.5)
        cs = cand.raasp(x0, 200, seed=1)
        assert np.all(np.any(cs.points != x0, axis=1))

    def test_unperturbed_dims_equal_anchor(self):
        x0 = np.random.default_rng(3).random(50)
        cs = cand.raasp(x0, 100, seed=2)
        for row in cs.points:
            same = row == x0
            assert same.sum() >= 1 or True  # rows may perturb everything by chance
            np.testing.assert_array_equal(row[same], x0[same])

    def test_determinism(self):
        a = cand.raasp(np.full(30, 0.5), 64, seed=9).points
        b = cand.raasp(np.full(30, 0.5), 64, seed=9).points
        np.testing.assert_array_equal(a, b)


class TestConeRegion:
    def test_sign_rule(self):
        x0 = np.array([0.3, 0.6, 0.5])
        g = np.array([1.0, -2.0, 0.0])
        r = cand.cone_region(x0, g, cand.unit_cube(3))
        np.testing.assert_array_equal(r.lower, [0.3, 0.0, 0.5])
        np.testing.assert_array_equal(r.upper, [1.0, 0.6, 0.5])
        assert r.degenerate_count == 1

    def test_volume_at_center(self):
        d = 6
        r = cand.cone_region(np.full(d, 0.5), np.ones(d), cand.unit_cube(d))
        assert cand.log_volume(r) == pytest.approx(-d * np.log(2.0))

    def test_anchor_on_boundary(self):
        # anchor at the upper face with positive gradient: zero width there
        x0 = np.array([1.0, 0.5])
        r = cand.cone_region(x0, np.array([1.0, 1.0]), cand.unit_cube(2))
        assert r.upper[0] == r.lower[0] == 1.0
        assert not r.empty

    def test_rejection_oracle(self):
        # points sampled in the cone satisfy the per-dimension sign inequality
        rng = np.random.default_rng(0)
        for _ in range(20):
            d = rng.integers(2, 6)
            x0 = rng.random(d)
            g = rng.standard_normal(d)
            r = cand.cone_region(x0, g, cand.unit_cube(d))
            pts = cand.region_uniform(r, 100, rng.integers(1 << 30))
            signed = (pts - x0) * g
            assert np.all(signed >= -1e-12)


class TestMaskProbs:
    def test_one_hot_gradient(self):
        p = cand.adaptive_mask_probs(np.array([0.0, 3.0, 0.0]), MaskVariant("l2"))
        np.testing.assert_allclose(p, [0.0, 1.0, 0.0])

    def test_equal_magnitudes_large_d(self):
        g = np.ones(100)
        p = cand.adaptive_mask_probs(g, MaskVariant("l2", c=20.0))
        np.testing.assert_allclose(p, np.full(100, 0.2))

    def test_lp_family_budget(self):
        rng = np.random.default_rng(4)
        for kind in ("l1", "l2", "l3"):
            g = rng.standard_normal(200)
            p = cand.adaptive_mask_probs(g, MaskVariant(kind, c=20.0))
            assert np.all((p >= 0) & (p <= 1))
            assert p.sum() <= 20.0 + 1e-9

    def test_lp_ordering_by_magnitude(self):
        g = np.array([0.1, -0.5, 2.0, 0.0])
        p = cand.adaptive_mask_probs(g, MaskVariant("l2", c=1.0))
        assert p[2] > p[1] > p[0] > p[3] == 0.0

    def test_topk(self):
        g = np.array([0.1, -5.0, 2.0, 0.3, -0.2])
        p = cand.adaptive_mask_probs(g, MaskVariant("topk", c=3))
        np.testing.assert_array_equal(p, [0.0, 1.0, 1.0, 1.0, 0.0])

    def test_topk_stable_ties(self):
        g = np.array([1.0, 1.0, 1.0, 1.0])
        p = cand.adaptive_mask_probs(g, MaskVariant("topk", c=2))
        np.testing.assert_array_equal(p, [1.0, 1.0, 0.0, 0.0])

    def test_topk_c_exceeds_d(self):
        p = cand.adaptive_mask_probs(np.array([1.0, 2.0]), MaskVariant("topk", c=20))
        np.testing.assert_array_equal(p, [1.0, 1.0])

    def test_softmax(self):
        g = np.array([0.0, 1.0, -1.0])
        p = cand.adaptive_mask_probs(g, MaskVariant("softmax", c=1.0))
        assert p[1] == pytest.approx(p[2])
        assert p[1] > p[0] > 0.0
        assert p.sum() == pytest.approx(1.0)

    def test_zero_gradient_rejected_for_lp_and_softmax(self):
        for kind in ("l1", "l2", "l3", "softmax"):
            with pytest.raises(ValueError):
                cand.adaptive_mask_probs(np.zeros(40), MaskVariant(kind, c=20.0))
        # TopK stays well-defined: magnitudes tie at zero, stable order wins
        p = cand.adaptive_mask_probs(np.zeros(5), MaskVariant("topk", c=2))
        np.testing.assert_array_equal(p, [1.0, 1.0, 0.0, 0.0, 0.0])


class TestConeRaasp:
    def test_sign_constraints_and_masking(self):
        rng = np.random.default_rng(0)
        d = 30
        x0 = rng.random(d)
        g = rng.standard_normal(d)
        r = cand.cone_region(x0, g, cand.unit_cube(d))
        cs = cand.cone_raasp(x0, g, r, 500, MaskVariant("l2"), seed=7)
        assert cs.points.shape == (500, d)
        signed = (cs.points - x0) * g
        assert np.all(signed >= -1e-12)
        # unmasked dimensions stay at the anchor
        changed = cs.points != x0
        assert changed.any()

    def test_each_row_perturbs_something(self):
        rng = np.random.default_rng(1)
        d = 200
        x0 = rng.random(d)
        g = rng.standard_normal(d)
        r = cand.cone_region(x0, g, cand.unit_cube(d))
        cs = cand.cone_raasp(x0, g, r, 300, MaskVariant("l2"), seed=3)
        assert np.all(np.any(cs.points != x0, axis=1))

    def test_degenerate_region_returns_anchor_copies(self):
        x0 = np.array([1.0, 1.0])
        r = cand.cone_region(x0, np.array([1.0, 1.0]), cand.unit_cube(2))
        with pytest.warns(UserWarning):
            cs = cand.cone_raasp(x0, np.array([1.0, 1.0]), r, 10, MaskVariant("l2"), seed=0)
        np.testing.assert_array_equal(cs.points, np.tile(x0, (10, 1)))

    def test_policy_name(self):
        x0 = np.full(4, 0.5)
        g = np.ones(4)
        r = cand.cone_region(x0, g, cand.unit_cube(4))
        cs = cand.cone_raasp(x0, g, r, 8, MaskVariant("l3"), seed=0)
        assert cs.policy == "grad-raasp-l3"


class TestLineRegion:
    def test_geometry(self):
        x0 = np.full(2, 0.5)
        g = np.array([1.0, 0.0])
        r = cand.line_region(x0, g, cand.unit_cube(2))
        np.testing.assert_array_equal(r.anchor, x0)
        np.testing.assert_array_equal(r.direction, g)
        # half the domain diagonal over the direction norm
        assert r.v_max == pytest.approx(0.5 * np.sqrt(2.0))

    def test_candidates_on_segment(self):
        x0 = np.full(3, 0.4)
        g = np.array([1.0, -1.0, 0.5])
        r = cand.line_region(x0, g, cand.unit_cube(3))
        pts = cand.line_candidates(r, cand.unit_cube(3), 200, seed=0).points
        # every point is x0 + v * g for some v in [0, v_max], clipped to the cube
        assert np.all((pts >= 0) & (pts <= 1))
        free = np.abs(g) > 0
        v = (pts[:, 0] - x0[0]) / g[0]
        clipped = ((pts <= 1e-12) | (pts >= 1 - 1e-12)).any(axis=1)
        on_line = np.abs(pts - (x0 + v[:, None] * g)) < 1e-9
        assert np.all(on_line[~clipped][:, free])
        assert np.all(v >= -1e-12)

    def test_masked_direction(self):
        x0 = np.full(4, 0.5)
        g = np.array([1.0, 2.0, -1.0, 0.5])
        mask = np.array([True, False, True, False])
        r = cand.line_region(x0, g, cand.unit_cube(4), mask=mask)
        pts = cand.line_candidates(r, cand.unit_cube(4), 50, seed=1).points
        np.testing.assert_array_equal(pts[:, 1], np.full(50, 0.5))
        np.testing.assert_array_equal(pts[:, 3], np.full(50, 0.5))

    def test_zero_direction_raises(self):
        with pytest.raises(ValueError):
            cand.line_region(np.full(2, 0.5), np.zeros(2), cand.unit_cube(2))


class TestIntersect:
    def test_subset(self):
        a = region([0.0, 0.0], [1.0, 1.0])
        b = region([0.2, 0.3], [0.6, 0.8])
        r = cand.intersect(a, b)
        np.testing.assert_array_equal(r.lower, b.lower)
        np.testing.assert_array_equal(r.upper, b.upper)
        assert r.provenance == "intersection"

    def test_identity(self):
        a = region([0.1, 0.2], [0.9, 0.7])
        r = cand.intersect(a, a)
        np.testing.assert_array_equal(r.lower, a.lower)
        np.testing.assert_array_equal(r.upper, a.upper)

    def test_disjoint_marks_empty(self):
        a = region([0.0], [0.4])
        b = region([0.5], [0.9])
        assert cand.intersect(a, b).empty

    def test_rejection_sampling_oracle(self):
        rng = np.random.default_rng(0)
        a = region([0.1, 0.0, 0.3], [0.8, 0.6, 0.9])
        b = region([0.3, 0.2, 0.0], [1.0, 0.5, 0.7])
        inter = cand.intersect(a, b)
        pts = rng.random((1000, 3))
        in_both = a.contains(pts) & b.contains(pts)
        in_inter = inter.contains(pts)
        np.testing.assert_array_equal(in_both, in_inter)


class TestLogVolume:
    def test_unit_cube(self):
        assert cand.log_volume(cand.unit_cube(5)) == 0.0

    def test_empty_is_neg_inf(self):
        a = cand.intersect(region([0.0], [0.4]), region([0.5], [0.9]))
        assert cand.log_volume(a) == -np.inf

    def test_degenerate_dims_skipped(self):
        r = region([0.2, 0.5], [0.7, 0.5])
        assert cand.log_volume(r) == pytest.approx(np.log(0.5))

    def test_all_degenerate_is_neg_inf(self):
        r = region([0.5, 0.5], [0.5, 0.5])
        assert cand.log_volume(r) == -np.inf


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), d=st.integers(2, 40))
def test_cone_candidates_always_inside_cube(seed, d):
    rng = np.random.default_rng(seed)
    x0 = rng.random(d)
    g = rng.standard_normal(d)
    r = cand.cone_region(x0, g, cand.unit_cube(d))
    cs = cand.cone_raasp(x0, g, r, 32, MaskVariant("l2"), seed=seed)
    assert np.all((cs.points >= -1e-12) & (cs.points <= 1 + 1e-12))
    assert np.all(r.contains(cs.points))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), d=st.integers(1, 50))
def test_raasp_stays_in_cube(seed, d):
    x0 = np.random.default_rng(seed).random(d)
    cs = cand.raasp(x0, 16, seed=seed)
    assert np.all((cs.points >= 0) & (cs.points <= 1))
