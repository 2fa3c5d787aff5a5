"""Operating-point solver checks against the nested-bisection oracle."""

import numpy as np
import pytest

from gpiodac.analytic import SwitchModel, switch_model_output, two_resistor_output
from gpiodac.devices import (
    DevicePair,
    LinearSwitch,
    MosfetParams,
    OperatingRegion,
    Polarity,
    calibrated_pair,
)
from gpiodac.network import (
    DacConfig,
    FourResistor,
    ParallelAttach,
    SolverError,
    Standalone,
    TwoResistor,
    complement_check,
    solve_code,
    solve_units,
    transfer_curve,
)
from oracles import oracle_curve, oracle_solve

VDD = 3.3
PAIR = calibrated_pair(VDD, 1.15, 40.0)  # bench-calibrated symmetric devices


def switch_pair(g: float) -> DevicePair:
    return DevicePair(pmos=LinearSwitch(g), nmos=LinearSwitch(g))


def cfg4(topology=None) -> DacConfig:
    return DacConfig(n_bits=4, vdd=VDD, devices=PAIR, topology=topology or Standalone())


class TestSolveCode:
    def test_rail_codes_float_to_rails_with_zero_current(self):
        lo = solve_code(cfg4(), 0)
        assert lo.vdac == pytest.approx(0.0, abs=1e-9)
        assert lo.i_total == 0.0
        hi = solve_code(cfg4(), 15)
        assert hi.vdac == pytest.approx(VDD, abs=1e-9)
        assert hi.i_total == 0.0

    def test_midrange_current_near_300mA(self):
        sol = solve_code(cfg4(), 8)
        assert sol.i_total == pytest.approx(0.30, rel=0.20)
        assert sol.kcl_residual <= 1e-9

    def test_midrange_matches_oracle(self):
        sol = solve_code(cfg4(), 8)
        vdac, _, _ = oracle_solve(cfg4(), 8)
        assert sol.vdac == pytest.approx(vdac, abs=1e-6)

    def test_invalid_code_rejected(self):
        with pytest.raises(ValueError):
            solve_code(cfg4(), 16)
        with pytest.raises(ValueError):
            solve_code(cfg4(), -1)

    def test_node_ordering_invariant(self):
        cfg = cfg4(FourResistor(rsp=10.0, rsn=2.0, rpp=5.0, rpn=5.0))
        for code in range(16):
            sol = solve_code(cfg, code)
            assert sol.vs - 1e-9 <= sol.vdac <= sol.vd + 1e-9
            assert 0.0 <= sol.vdac <= VDD
            assert sol.kcl_residual <= 1e-9


class TestTransferCurve:
    def test_one_bit_hits_both_rails(self):
        cfg = DacConfig(n_bits=1, vdd=VDD, devices=PAIR)
        curve = transfer_curve(cfg)
        assert curve.rows[0].vdac == pytest.approx(0.0, abs=1e-9)
        assert curve.rows[1].vdac == pytest.approx(VDD, abs=1e-9)

    def test_standalone_4bit_matches_oracle_and_is_monotone(self):
        curve = transfer_curve(cfg4())
        reference = oracle_curve(cfg4())
        for row, ref in zip(curve.rows, reference):
            assert row.vdac == pytest.approx(ref, abs=1e-6)
        v = curve.vdac
        assert v[8] > v[7]
        assert np.all(np.diff(v) >= -1e-9)

    def test_two_resistor_current_is_flat_and_about_1A(self):
        cfg = cfg4(TwoResistor(rpp=2.35, rpn=2.35))
        curve = transfer_curve(cfg)
        mid = curve.rows[8].i_total
        assert mid == pytest.approx(1.0, rel=0.25)
        i = curve.i_total
        assert np.max(i) / np.min(i) < 1.25  # near-constant across codes

    def test_monotone_for_all_topologies(self):
        topologies = [
            Standalone(),
            TwoResistor(rpp=2.35, rpn=2.35),
            FourResistor(rsp=10.0, rsn=0.0, rpp=5.0, rpn=5.0),
        ]
        for topo in topologies:
            v = transfer_curve(cfg4(topo)).vdac
            assert np.all(np.diff(v) >= -1e-9), topo

    def test_current_endpoints(self):
        standalone = transfer_curve(cfg4())
        assert standalone.rows[0].i_total == 0.0
        assert standalone.rows[15].i_total == 0.0
        corrected = transfer_curve(cfg4(TwoResistor(rpp=2.35, rpn=2.35)))
        assert corrected.rows[0].i_total > 0.0  # parallel paths conduct at the rails

    def test_region_narrative_low_mid_high(self):
        curve = transfer_curve(cfg4())
        pairs = [(r.region_p, r.region_n) for r in curve.rows]
        T, S = OperatingRegion.TRIODE, OperatingRegion.SATURATION
        for code in range(1, 7):
            assert pairs[code] == (S, T)
        for code in (7, 8):
            assert pairs[code] == (T, T)
        for code in range(9, 15):
            assert pairs[code] == (T, S)


class TestConstantConductanceReduction:
    def test_standalone_matches_divider_exactly(self):
        m = SwitchModel(gop=0.05, gon=0.05, vdd=VDD, d_max=15)
        cfg = DacConfig(n_bits=4, vdd=VDD, devices=switch_pair(0.05))
        for row in transfer_curve(cfg).rows:
            expected = switch_model_output(m, row.code, inverting=False)
            assert row.vdac == pytest.approx(expected, abs=1e-9)

    def test_two_resistor_matches_divider_form(self):
        m = SwitchModel(gop=0.05, gon=0.05, vdd=VDD, d_max=15)
        cfg = DacConfig(
            n_bits=4, vdd=VDD, devices=switch_pair(0.05), topology=TwoResistor(2.0, 4.0)
        )
        for row in transfer_curve(cfg).rows:
            expected = two_resistor_output(m, row.code, gpp=0.5, gnn=0.25)
            assert row.vdac == pytest.approx(expected, abs=1e-9)


class TestComplementCheck:
    def test_symmetric_standalone_is_self_complementary(self):
        assert complement_check(transfer_curve(cfg4())) <= 2e-9

    def test_symmetric_two_resistor_is_self_complementary(self):
        curve = transfer_curve(cfg4(TwoResistor(rpp=2.35, rpn=2.35)))
        assert complement_check(curve) <= 2e-9

    def test_conductance_mismatch_breaks_symmetry(self):
        kp = PAIR.pmos.k
        pair = DevicePair(
            pmos=MosfetParams(Polarity.PMOS, 1.15, kp),
            nmos=MosfetParams(Polarity.NMOS, 1.15, 0.9 * kp),  # 10% mismatch
        )
        curve = transfer_curve(DacConfig(n_bits=4, vdd=VDD, devices=pair))
        asym = complement_check(curve)
        # frozen from the bisection oracle: 0.4296 V peak asymmetry
        assert asym == pytest.approx(0.4296, rel=1e-3)
        assert asym > 1e-3


class TestOracleEquivalence:
    def test_small_random_matrix(self):
        rng = np.random.default_rng(20260808)
        for trial in range(30):
            n_bits = int(rng.integers(1, 7))
            vth = float(rng.uniform(0.4, 1.4))
            kp = float(rng.uniform(2e-3, 5e-2))
            kn = float(rng.uniform(2e-3, 5e-2))
            pair = DevicePair(
                pmos=MosfetParams(Polarity.PMOS, vth, kp),
                nmos=MosfetParams(Polarity.NMOS, vth, kn),
            )
            kind = trial % 3
            if kind == 0:
                topo = Standalone()
            elif kind == 1:
                topo = TwoResistor(float(rng.uniform(1, 100)), float(rng.uniform(1, 100)))
            else:
                topo = FourResistor(
                    rsp=float(rng.uniform(0.5, 30)),
                    rsn=float(rng.uniform(0.0, 5.0)) if trial % 2 else 0.0,
                    rpp=float(rng.uniform(1, 100)),
                    rpn=float(rng.uniform(1, 100)),
                    parallel_attach=ParallelAttach.INNER_RAILS
                    if trial % 4 < 2
                    else ParallelAttach.SUPPLY_RAILS,
                )
            cfg = DacConfig(n_bits=n_bits, vdd=VDD, devices=pair, topology=topo)
            codes = rng.integers(0, cfg.d_max + 1, size=3)
            for code in codes:
                sol = solve_code(cfg, int(code))
                vdac, vd, vs = oracle_solve(cfg, int(code))
                assert sol.vdac == pytest.approx(vdac, abs=1e-6), (trial, code)
                assert sol.vd == pytest.approx(vd, abs=1e-6), (trial, code)
                assert sol.vs == pytest.approx(vs, abs=1e-6), (trial, code)


class TestSolveUnits:
    def test_counts_match_codes(self):
        for count in range(16):
            assert solve_units(cfg4(), count).vdac == solve_code(cfg4(), count).vdac

    def test_out_of_range_count(self):
        with pytest.raises(ValueError):
            solve_units(cfg4(), 16)


class TestValidation:
    def test_bad_bit_width(self):
        with pytest.raises(ValueError):
            DacConfig(n_bits=0, vdd=VDD, devices=PAIR)
        with pytest.raises(ValueError):
            DacConfig(n_bits=17, vdd=VDD, devices=PAIR)

    def test_bad_resistances(self):
        with pytest.raises(ValueError):
            TwoResistor(rpp=0.0, rpn=1.0)
        with pytest.raises(ValueError):
            FourResistor(rsp=0.0, rsn=0.0, rpp=1.0, rpn=1.0)
        with pytest.raises(ValueError):
            FourResistor(rsp=1.0, rsn=-1.0, rpp=1.0, rpn=1.0)
        # the shared-ground board case: rsn = 0 is legal
        FourResistor(rsp=1.0, rsn=0.0, rpp=1.0, rpn=1.0)

    def test_solver_error_carries_diagnostics(self):
        err = SolverError("no luck", code=5, residual=1e-3)
        assert err.code == 5 and err.residual == 1e-3
