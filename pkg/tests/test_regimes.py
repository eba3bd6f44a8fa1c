import numpy as np
import pytest

from icrates import (
    DiscreteIC,
    SearchConfig,
    check_strong_at_y2,
    check_strong_both,
    check_very_weak,
    evaluate_condition_margin,
)
from icrates.errors import ConfigError
from icrates.regimes import NO_VIOLATION_FOUND, VIOLATED
from tests.conftest import product_channel, strong_pair_channel, xor_channel

CFG = SearchConfig(grid_steps=4, cond_grid_steps=2, restarts=2, aux_card_w=2, seed=3)


def cross_revealing_channel() -> DiscreteIC:
    """Y2 = X1 noiselessly; Y1 is pure noise."""
    law = np.zeros((2, 2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            law[x1, x2, :, x1] = 0.5
    return DiscreteIC.from_array(law)


class TestVeryWeak:
    def test_one_sided_never_violates_first_condition(self):
        ch = product_channel(0)
        r1, _ = check_very_weak(ch, CFG)
        assert r1.status == NO_VIOLATION_FOUND
        assert r1.margin_bits <= 1e-9

    def test_cross_revealing_violates(self):
        ch = cross_revealing_channel()
        r1, _ = check_very_weak(ch, CFG)
        assert r1.status == VIOLATED
        assert r1.margin_bits > 0.5  # close to one bit at uniform inputs

    def test_witness_reproduces_margin(self):
        ch = cross_revealing_channel()
        r1, r2 = check_very_weak(ch, CFG)
        for report in (r1, r2):
            again = evaluate_condition_margin(ch, report.condition, report.witness)
            assert again == pytest.approx(report.margin_bits, abs=1e-9)

    def test_monotone_resolution_with_witness_carry(self):
        ch = cross_revealing_channel()
        lo = SearchConfig(grid_steps=4, cond_grid_steps=2, restarts=1, aux_card_w=2, seed=3)
        hi = SearchConfig(grid_steps=8, cond_grid_steps=4, restarts=1, aux_card_w=2, seed=3)
        r_lo, _ = check_very_weak(ch, lo)
        r_hi, _ = check_very_weak(ch, hi, prior_witnesses=([r_lo.witness], []))
        assert r_hi.margin_bits >= r_lo.margin_bits - 1e-12
        assert not (r_lo.status == VIOLATED and r_hi.status == NO_VIOLATION_FOUND)


class TestStrong:
    def test_pair_channel_certifies(self):
        report = check_strong_at_y2(strong_pair_channel(), CFG)
        assert report.status == NO_VIOLATION_FOUND

    def test_y2_blind_violates(self):
        # Y1 = X1 noiseless, Y2 independent of X1
        law = np.zeros((2, 2, 2, 2))
        for x1 in range(2):
            for x2 in range(2):
                law[x1, x2, x1, :] = 0.5
        ch = DiscreteIC.from_array(law)
        report = check_strong_at_y2(ch, CFG)
        assert report.status == VIOLATED
        assert report.margin_bits == pytest.approx(1.0, abs=1e-6)

    def test_swap_symmetry(self):
        ch = cross_revealing_channel()
        swapped_law = np.transpose(ch.law.values, (1, 0, 3, 2))
        swapped = DiscreteIC.from_array(swapped_law)
        fwd = check_strong_at_y2(ch, CFG)
        _, mirror = check_strong_both(swapped, CFG)
        assert mirror.margin_bits == pytest.approx(fwd.margin_bits, abs=1e-9)

    def test_strong_both_on_pair_channel(self):
        ra, rb = check_strong_both(strong_pair_channel(), CFG)
        assert ra.status == NO_VIOLATION_FOUND
        assert rb.status == NO_VIOLATION_FOUND

    def test_one_sided_with_informative_y2_violates_mirror(self):
        ch = product_channel(3)
        _, mirror = check_strong_both(ch, CFG)
        # Y1 carries nothing about X2, so any informative own link violates
        assert mirror.status == VIOLATED

    def test_strong_witness_reproduces(self):
        ch = xor_channel()
        report = check_strong_at_y2(ch, CFG)
        again = evaluate_condition_margin(ch, report.condition, report.witness)
        assert again == pytest.approx(report.margin_bits, abs=1e-9)


class TestConfig:
    def test_grid_steps_bound(self):
        with pytest.raises(ConfigError):
            SearchConfig(grid_steps=1)

    def test_report_serializes(self):
        report = check_strong_at_y2(strong_pair_channel(), CFG)
        doc = report.to_json_dict()
        assert doc["condition"] == "strong_y2"
        assert "witness" in doc and "resolution" in doc
