import math

import numpy as np
import pytest

from icrates import (
    AuxInputDist,
    InfoQuery,
    RatePolytope,
    SearchConfig,
    compose_joint,
    equals,
    hausdorff_support_gap,
    includes,
    max_sumrate,
    mutual_information,
    polytope_hk,
    polytope_hk_strong_y2,
    polytope_one_sided,
    polytope_semijoint,
    random_channel,
    region_gaussian,
    region_scheme,
    union_region,
)
from icrates.channels import GaussianIC
from icrates.errors import (
    AngleGridMismatchError,
    DimensionMismatchError,
    EmptyListError,
    NotOneSidedError,
)
from icrates.gaussian import tin_rates
from icrates.regions import (
    batch_bounds,
    batch_joint,
    dist_batch_from_aux,
    table_for_scheme,
)
from icrates.verify import generate_regime_channel
from tests.conftest import orthogonal_channel, product_channel, strong_pair_channel

CFG = SearchConfig(grid_steps=4, cond_grid_steps=2, restarts=1, aux_card_w=2, seed=0)


def random_aux(seed, nw1=2, nw2=2, nx1=2, nx2=2):
    rng = np.random.default_rng(seed)
    return AuxInputDist(
        rng.dirichlet(np.ones(nw1)),
        rng.dirichlet(np.ones(nw2)),
        rng.dirichlet(np.ones(nx1), size=nw1),
        rng.dirichlet(np.ones(nx2), size=nw2),
    )


class TestPolytopes:
    def test_semijoint_orthogonal_identity_layers(self):
        # Y1 = X1, Y2 = X2: full common layers force each receiver to decode
        # the other's whole message, collapsing the sum bounds to 1 bit.
        ch = orthogonal_channel()
        d = AuxInputDist.identity_w(np.full(2, 0.5), np.full(2, 0.5))
        poly = polytope_semijoint(ch, d)
        bounds = [b for _, _, b in poly.constraints]
        assert bounds == pytest.approx([1.0, 1.0, 1.0, 1.0], abs=1e-12)

    def test_semijoint_degenerate_layers_rectangle(self):
        ch = orthogonal_channel()
        d = AuxInputDist.product(np.full(2, 0.5), np.full(2, 0.5))
        poly = polytope_semijoint(ch, d)
        bounds = [b for _, _, b in poly.constraints]
        assert bounds == pytest.approx([1.0, 1.0, 2.0, 2.0], abs=1e-12)

    def test_semijoint_identity_reduces_to_strong_form(self):
        ch = random_channel(21, (2, 2, 2, 2))
        d = AuxInputDist.identity_w(np.array([0.4, 0.6]), np.array([0.7, 0.3]))
        poly = polytope_semijoint(ch, d)
        joint = compose_joint(d, ch)
        want_r1 = mutual_information(joint, InfoQuery.of("X1", "Y1", "X2"))
        want_sum1 = mutual_information(joint, InfoQuery.of(("X1", "X2"), "Y1"))
        want_sum2 = mutual_information(joint, InfoQuery.of(("X1", "X2"), "Y2"))
        bounds = [b for _, _, b in poly.constraints]
        assert bounds[0] == pytest.approx(want_r1, abs=1e-12)
        assert bounds[2] == pytest.approx(want_sum1, abs=1e-12)
        assert bounds[3] == pytest.approx(want_sum2, abs=1e-12)

    def test_hk_degenerate_layers_rectangle(self):
        ch = random_channel(2, (2, 2, 2, 2))
        d = AuxInputDist.product(np.array([0.5, 0.5]), np.array([0.5, 0.5]))
        hk = polytope_hk(ch, d)
        joint = compose_joint(d, ch)
        i1 = mutual_information(joint, InfoQuery.of("X1", "Y1"))
        i2 = mutual_information(joint, InfoQuery.of("X2", "Y2"))
        assert hk.support(0.0) == pytest.approx(i1, abs=1e-9)
        assert hk.support(90.0) == pytest.approx(i2, abs=1e-9)
        assert hk.max_sum() == pytest.approx(i1 + i2, abs=1e-9)

    def test_hk_identity_layers(self):
        # Orthogonal links: with full common layers the cross-conditioned sum
        # bound is exactly zero (each output is blind to the other user), so
        # the polytope collapses to the origin; the degenerate-layer member
        # of the union still supplies the square.
        ch = orthogonal_channel()
        d = AuxInputDist.identity_w(np.full(2, 0.5), np.full(2, 0.5))
        assert polytope_hk(ch, d).max_sum() == pytest.approx(0.0, abs=1e-12)
        # Joint-output channel: full common layers achieve the square.
        ch2 = strong_pair_channel()
        hk2 = polytope_hk(ch2, d)
        assert hk2.support(0.0) == pytest.approx(1.0, abs=1e-12)
        assert hk2.support(90.0) == pytest.approx(1.0, abs=1e-12)
        assert hk2.max_sum() == pytest.approx(2.0, abs=1e-12)

    def test_hk_contained_in_semijoint_on_very_weak(self):
        cfg = SearchConfig(grid_steps=4, cond_grid_steps=2, restarts=1, aux_card_w=2)
        ch = generate_regime_channel("very_weak", 5, cfg)
        for seed in range(12):
            d = random_aux(seed)
            assert polytope_semijoint(ch, d).includes(polytope_hk(ch, d), tol=1e-9)

    def test_strong_y2_needs_degenerate_w1(self):
        ch = strong_pair_channel()
        with pytest.raises(DimensionMismatchError):
            polytope_hk_strong_y2(ch, random_aux(0))

    def test_strong_y2_canonical(self):
        ch = strong_pair_channel()
        d = AuxInputDist.product(np.full(2, 0.5), np.full(2, 0.5))
        poly = polytope_hk_strong_y2(ch, d)
        assert poly.support(0.0) == pytest.approx(1.0, abs=1e-12)
        assert poly.support(90.0) == pytest.approx(1.0, abs=1e-12)
        assert poly.max_sum() == pytest.approx(2.0, abs=1e-12)

    def test_strong_y2_chain_rule_dominance(self):
        ch = generate_regime_channel("strong_y2", 1, CFG)
        for seed in range(8):
            d = random_aux(seed, nw1=1)
            poly = polytope_hk_strong_y2(ch, d)
            bounds = [b for _, _, b in poly.constraints]
            assert bounds[2] >= bounds[1] - 1e-12  # I(X1,X2;Y2) >= I(X2;Y2|X1)

    def test_one_sided_guard(self):
        ch = strong_pair_channel()
        d = AuxInputDist.product(np.full(2, 0.5), np.full(2, 0.5))
        with pytest.raises(NotOneSidedError):
            polytope_one_sided(ch, d)

    def test_one_sided_rectangle_when_w2_degenerate(self):
        ch = product_channel(7)
        d = AuxInputDist.product(np.array([0.5, 0.5]), np.array([0.5, 0.5]))
        poly = polytope_one_sided(ch, d)
        joint = compose_joint(d, ch)
        i1 = mutual_information(joint, InfoQuery.of("X1", "Y1"))
        i2 = mutual_information(joint, InfoQuery.of("X2", "Y2"))
        assert poly.support(0.0) == pytest.approx(i1, abs=1e-9)
        assert poly.support(90.0) == pytest.approx(i2, abs=1e-9)

    def test_bounds_within_caps(self):
        for seed in range(8):
            ch = random_channel(seed, (2, 2, 2, 2))
            d = random_aux(seed + 100)
            for poly in (polytope_hk(ch, d), polytope_semijoint(ch, d)):
                for c1, c2, bound in poly.constraints:
                    assert bound >= 0.0
                    assert bound <= c1 * 1.0 + c2 * 1.0 + 1e-9  # binary caps


class TestUnionRegion:
    def test_single_polytope_support(self):
        poly = RatePolytope(((1, 0, 1.0), (0, 1, 0.5), (1, 1, 1.2)))
        region = union_region([poly], angles=91)
        for k, theta in enumerate(region.theta_deg):
            assert region.h_bits[k] == pytest.approx(poly.support(theta), abs=1e-12)

    def test_two_segments_hull(self):
        p1 = RatePolytope(((1, 0, 1.0), (0, 1, 0.0)))
        p2 = RatePolytope(((1, 0, 0.0), (0, 1, 1.0)))
        region = union_region([p1, p2], angles=91)
        assert region.h_bits[45] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)

    def test_union_monotone(self):
        p1 = RatePolytope(((1, 0, 0.8), (0, 1, 0.3)))
        p2 = RatePolytope(((1, 0, 0.5), (0, 1, 0.9)))
        small = union_region([p1], angles=91)
        big = union_region([p1, p2], angles=91)
        assert np.all(big.h_bits >= small.h_bits - 1e-15)

    def test_empty_list(self):
        with pytest.raises(EmptyListError):
            union_region([], angles=91)

    def test_support_idempotent_under_resampling(self):
        polys = [
            RatePolytope(((1, 0, 0.9), (0, 1, 0.4), (1, 1, 1.1))),
            RatePolytope(((1, 0, 0.4), (0, 1, 1.0), (2, 1, 1.5))),
        ]
        region = union_region(polys, angles=91)
        verts = np.vstack([region.vertices, [[0.0, 0.0]]])
        rad = np.radians(region.theta_deg)
        u = np.stack([np.cos(rad), np.sin(rad)], axis=1)
        resampled = (verts @ u.T).max(axis=0)
        np.testing.assert_allclose(resampled, region.h_bits, atol=1e-12)


class TestRegionOps:
    def test_equality_reflexive(self):
        region = union_region([RatePolytope(((1, 0, 1.0), (0, 1, 1.0)))], angles=91)
        assert equals(region, region, tol=0.0)

    def test_square_vs_triangle(self):
        square = union_region([RatePolytope(((1, 0, 1.0), (0, 1, 1.0)))], angles=91)
        triangle = union_region(
            [RatePolytope(((1, 0, 1.0), (0, 1, 1.0), (1, 1, 1.0)))], angles=91
        )
        assert includes(square, triangle, tol=1e-12)
        assert not includes(triangle, square, tol=1e-3)

    def test_max_sumrate_square(self):
        square = union_region([RatePolytope(((1, 0, 1.0), (0, 1, 1.0)))], angles=91)
        assert max_sumrate(square) == pytest.approx(2.0, abs=1e-12)

    def test_angle_grid_mismatch(self):
        a = union_region([RatePolytope(((1, 0, 1.0), (0, 1, 1.0)))], angles=91)
        b = union_region([RatePolytope(((1, 0, 1.0), (0, 1, 1.0)))], angles=31)
        with pytest.raises(AngleGridMismatchError):
            hausdorff_support_gap(a, b)


class TestRegionScheme:
    def test_orthogonal_unit_square_any_scheme(self):
        ch = orthogonal_channel()
        for scheme in ("tin", "semijoint", "hk", "strong_capacity"):
            region = region_scheme(ch, scheme, CFG)
            assert region.h_bits[0] == pytest.approx(1.0, abs=1e-9)
            assert region.h_bits[-1] == pytest.approx(1.0, abs=1e-9)

    def test_tin_subset_of_hk_and_semijoint(self):
        ch = random_channel(33, (2, 2, 2, 2))
        tin = region_scheme(ch, "tin", CFG)
        hk = region_scheme(ch, "hk", CFG)
        sj = region_scheme(ch, "semijoint", CFG)
        assert includes(hk, tin, tol=1e-9)
        assert includes(sj, tin, tol=1e-9)

    def test_strong_capacity_canonical(self, strong_pair):
        region = region_scheme(strong_pair, "strong_capacity", CFG)
        assert region.h_bits[45] == pytest.approx(math.sqrt(2.0), abs=1e-9)
        verts = {tuple(np.round(v, 9)) for v in region.vertices}
        assert verts == {(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}

    def test_one_sided_scheme_guard(self):
        with pytest.raises(NotOneSidedError):
            region_scheme(strong_pair_channel(), "one_sided", CFG)

    def test_deterministic(self):
        ch = random_channel(12, (2, 2, 2, 2))
        a = region_scheme(ch, "semijoint", CFG)
        b = region_scheme(ch, "semijoint", CFG)
        np.testing.assert_array_equal(a.h_bits, b.h_bits)
        np.testing.assert_array_equal(a.points, b.points)


class TestStrongBothInclusion:
    def test_identity_layers_cover_semijoint_on_strong_channels(self):
        # On a channel that is strong in both directions, every semijoint
        # polytope is contained in the identity-layer polytope at the same
        # input marginals, so the W=X union covers the semijoint union when
        # built over the collapsed marginals of the same family.
        from icrates.regions import (
            SupportAccumulator,
            lift_wx,
            merged_dirs_bounds,
            scheme_family,
        )

        cfg = SearchConfig(grid_steps=4, cond_grid_steps=2, restarts=1, aux_card_w=2, seed=2)
        ch = generate_regime_channel("strong_both", 0, cfg)
        table = table_for_scheme("semijoint")
        acc_sj = SupportAccumulator(cfg.angles)
        acc_wx = SupportAccumulator(cfg.angles)
        for batch in scheme_family(ch, "semijoint", cfg):
            bj = batch_joint(ch, batch)
            bounds = batch_bounds(bj, table)
            dirs, merged = merged_dirs_bounds(table, bounds)
            acc_sj.add(dirs, merged)
            px1 = np.einsum("bw,bwi->bi", batch["pw1"], batch["px1w1"])
            px2 = np.einsum("bw,bwj->bj", batch["pw2"], batch["px2w2"])
            bj_wx = batch_joint(ch, lift_wx(px1, px2))
            bounds_wx = batch_bounds(bj_wx, table)
            dirs, merged = merged_dirs_bounds(table, bounds_wx)
            acc_wx.add(dirs, merged)
        region_sj = acc_sj.finalize()
        region_wx = acc_wx.finalize()
        assert includes(region_wx, region_sj, tol=1e-9)


class TestBatchConsistency:
    def test_batch_bounds_match_polytopes(self):
        ch = random_channel(3, (2, 2, 2, 2))
        dists = [random_aux(s) for s in range(6)]
        bj = batch_joint(ch, dist_batch_from_aux(dists))
        for scheme, builder in (
            ("hk", polytope_hk),
            ("semijoint", polytope_semijoint),
        ):
            bounds = batch_bounds(bj, table_for_scheme(scheme))
            for row, d in enumerate(dists):
                single = [b for _, _, b in builder(ch, d).constraints]
                np.testing.assert_allclose(bounds[row], single, atol=1e-12)


class TestGaussianRegions:
    def test_no_interference_rectangle(self):
        g = GaussianIC(a=0.0, b=0.0, p1=1.0, p2=1.0)
        region = region_gaussian(g, "tin", splits=3)
        assert region.h_bits[0] == pytest.approx(0.5, abs=1e-12)
        assert region.h_bits[-1] == pytest.approx(0.5, abs=1e-12)

    def test_tin_caps_closed_form(self):
        g = GaussianIC(a=0.8, b=0.4, p1=2.0, p2=1.0)
        region = region_gaussian(g, "tin", splits=1)
        r1, r2 = tin_rates(g)
        assert region.h_bits[0] == pytest.approx(r1, abs=1e-12)
        assert region.h_bits[-1] == pytest.approx(r2, abs=1e-12)

    def test_semijoint_contains_tin(self):
        g = GaussianIC(a=0.5, b=0.6, p1=1.5, p2=1.0)
        tin = region_gaussian(g, "tin", splits=1)
        sj = region_gaussian(g, "semijoint", splits=9)
        assert includes(sj, tin, tol=1e-9)

    def test_one_sided_requires_zero_cross_gain(self):
        with pytest.raises(NotOneSidedError):
            region_gaussian(GaussianIC(a=0.5, b=0.1, p1=1.0, p2=1.0), "one_sided")
