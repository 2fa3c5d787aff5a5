"""Constant-conductance transfer expressions against plain divider arithmetic."""

import pytest
from hypothesis import given, strategies as st

from gpiodac.analytic import (
    SwitchModel,
    error_factor_output,
    ideal_output,
    stretched_output,
    switch_model_output,
    two_resistor_output,
)
from oracles import divider


class TestIdealOutput:
    def test_rails(self):
        assert ideal_output(15, 0, 3.3) == 0.0
        assert ideal_output(15, 15, 3.3) == pytest.approx(3.3, rel=1e-15)

    def test_code_5_of_15(self):
        assert ideal_output(15, 5, 3.3) == pytest.approx(1.1, rel=1e-12)

    def test_code_out_of_range(self):
        with pytest.raises(ValueError):
            ideal_output(15, 16, 3.3)
        with pytest.raises(ValueError):
            ideal_output(15, -1, 3.3)


class TestSwitchModelOutput:
    def test_matched_conductances_reduce_to_ideal(self):
        m = SwitchModel(gop=0.025, gon=0.025, vdd=3.3, d_max=15)
        assert switch_model_output(m, 5, inverting=False) == pytest.approx(1.1, rel=1e-12)
        assert switch_model_output(m, 5, inverting=True) == pytest.approx(
            3.3 - 1.1, rel=1e-12
        )

    def test_rail_code_collapses_divider(self):
        m = SwitchModel(gop=0.025, gon=0.0225, vdd=3.3, d_max=15)
        assert switch_model_output(m, 15, inverting=False) == pytest.approx(3.3, rel=1e-15)

    def test_mid_code_with_mismatch(self):
        # direct divider arithmetic: 8*gop / (8*gop + 7*gon) * 3.3
        m = SwitchModel(gop=0.025, gon=0.0225, vdd=3.3, d_max=15)
        expected = divider(8, 7, 0.025, 0.0225, 3.3)
        assert expected == pytest.approx(1.8461538461538463, rel=1e-12)
        assert switch_model_output(m, 8, inverting=False) == pytest.approx(
            expected, rel=1e-12
        )

    @given(
        gop=st.floats(1e-3, 1.0),
        mismatch=st.floats(-0.9, 0.9),
        d_max=st.integers(1, 1023),
        data=st.data(),
    )
    def test_error_factor_form_matches_inverting_divider(self, gop, mismatch, d_max, data):
        code = data.draw(st.integers(0, d_max))
        m = SwitchModel(gop=gop, gon=gop * (1.0 - mismatch), vdd=3.3, d_max=d_max)
        raw = switch_model_output(m, code, inverting=True)
        via_error_term = error_factor_output(m, code)
        assert via_error_term == pytest.approx(raw, abs=1e-12, rel=1e-12)


class TestTwoResistorOutput:
    def test_vanishing_parallel_conductance_approaches_ideal(self):
        m = SwitchModel(gop=0.025, gon=0.025, vdd=3.3, d_max=15)
        v = two_resistor_output(m, 5, gpp=1e-12, gnn=1e-12)
        assert v == pytest.approx(ideal_output(15, 5, 3.3), abs=1e-9)

    def test_endpoint_pinning_at_alpha_for_reference_device(self):
        # alpha_g = 17.25 pins code 0 at 3.3 * 17.25 / 49.5 = 1.150 V
        assert stretched_output(15, 0, 3.3, 17.25) == pytest.approx(1.15, rel=1e-12)
        assert stretched_output(15, 15, 3.3, 17.25) == pytest.approx(2.15, rel=1e-12)

    @given(
        gop=st.floats(1e-3, 1.0),
        alpha=st.floats(1e-3, 100.0),
        d_max=st.integers(1, 255),
        data=st.data(),
    )
    def test_reduces_to_stretched_form_when_symmetric(self, gop, alpha, d_max, data):
        code = data.draw(st.integers(0, d_max))
        m = SwitchModel(gop=gop, gon=gop, vdd=3.3, d_max=d_max)
        gp = alpha * gop
        assert two_resistor_output(m, code, gp, gp) == pytest.approx(
            stretched_output(d_max, code, 3.3, alpha), rel=1e-12
        )

    def test_endpoint_pinning_is_threshold_by_construction(self):
        # alpha_g from the sizing rule maps the rails onto (vth, vdd - vth)
        vdd, vth, d_max = 3.3, 1.15, 15
        alpha = d_max * vth / (vdd - 2 * vth)
        assert stretched_output(d_max, 0, vdd, alpha) == pytest.approx(vth, abs=1e-12)
        assert stretched_output(d_max, d_max, vdd, alpha) == pytest.approx(
            vdd - vth, abs=1e-12
        )
