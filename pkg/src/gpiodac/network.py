"""DC operating point of the shorted-GPIO DAC network.

For an input code m out of d_max = 2^n - 1 unit cells, m drivers pull up and
d_max - m pull down into the common output node. Three topologies are solved:

* standalone: drivers only, local rails are the supply rails;
* two-resistor: extra resistors rpp (supply to output) and rpn (output to
  ground) that stretch the linear region;
* four-resistor: series resistors rsp/rsn derate the local rails vd/vs, which
  also lowers the gate swing (driver gates ride the local rails, so
  vgs = vd - vs for both device groups), plus the two parallel resistors.

The nonlinear system is the KCL balance at the floating nodes (output, and
vd/vs when series resistors are present). It is solved with damped Newton
iterations using analytic branch derivatives; every branch current is monotone
in its node voltages, so a per-node bisection sweep is a guaranteed fallback
when Newton stalls.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from .devices import (
    DevicePair,
    OperatingRegion,
    classify_region,
    current_and_derivatives,
)

RESIDUAL_TOL = 1e-9  # amperes
MAX_ITERATIONS = 200


class SolverError(RuntimeError):
    """The operating-point iteration did not reach the residual tolerance."""

    def __init__(self, message: str, *, code: int | None = None, residual: float = math.nan):
        super().__init__(message)
        self.code = code
        self.residual = residual


class Encoding(enum.Enum):
    BINARY = "binary"
    THERMOMETER = "thermometer"


class ParallelAttach(enum.Enum):
    """Where the parallel resistors tie on the far side: the supply rails
    (VDD/GND) or the derated inner rails (vd/vs)."""

    SUPPLY_RAILS = "supply"
    INNER_RAILS = "inner"


@dataclass(frozen=True)
class Standalone:
    pass


@dataclass(frozen=True)
class TwoResistor:
    rpp: float
    rpn: float

    def __post_init__(self) -> None:
        if self.rpp <= 0.0 or self.rpn <= 0.0:
            raise ValueError(f"parallel resistors must be > 0, got rpp={self.rpp}, rpn={self.rpn}")


@dataclass(frozen=True)
class FourResistor:
    rsp: float
    rsn: float
    rpp: float
    rpn: float
    parallel_attach: ParallelAttach = ParallelAttach.INNER_RAILS

    def __post_init__(self) -> None:
        if self.rsp <= 0.0:
            raise ValueError(f"rsp must be > 0, got {self.rsp}")
        if self.rsn < 0.0:
            raise ValueError(f"rsn must be >= 0 (0 means the ground rail is shared), got {self.rsn}")
        if self.rpp <= 0.0 or self.rpn <= 0.0:
            raise ValueError(f"parallel resistors must be > 0, got rpp={self.rpp}, rpn={self.rpn}")


Topology = Union[Standalone, TwoResistor, FourResistor]

MAX_BITS = 16  # 2^16 - 1 unit cells is the practical full-sweep ceiling


@dataclass(frozen=True)
class DacConfig:
    n_bits: int
    vdd: float
    devices: DevicePair
    topology: Topology = field(default_factory=Standalone)
    encoding: Encoding = Encoding.BINARY

    def __post_init__(self) -> None:
        if not 1 <= self.n_bits <= MAX_BITS:
            raise ValueError(f"n_bits must be in 1..{MAX_BITS}, got {self.n_bits}")
        if self.vdd <= 0.0:
            raise ValueError(f"vdd must be > 0, got {self.vdd}")

    @property
    def d_max(self) -> int:
        return (1 << self.n_bits) - 1


@dataclass(frozen=True)
class NodeSolution:
    """Solved DC point for one input code (or raw unit count mid-transition)."""

    code: int
    vdac: float
    vd: float
    vs: float
    i_total: float
    i_per_pullup: float
    i_per_pulldown: float
    i_rpp: float
    i_rpn: float
    region_p: OperatingRegion
    region_n: OperatingRegion
    kcl_residual: float


@dataclass(frozen=True)
class TransferCurve:
    config: DacConfig
    rows: tuple[NodeSolution, ...]

    def __post_init__(self) -> None:
        expected = self.config.d_max + 1
        if len(self.rows) != expected:
            raise ValueError(f"expected {expected} rows, got {len(self.rows)}")
        codes = [r.code for r in self.rows]
        if codes != list(range(expected)):
            raise ValueError("row codes must be 0..d_max in ascending order")

    @property
    def vdac(self) -> np.ndarray:
        return np.array([r.vdac for r in self.rows])

    @property
    def i_total(self) -> np.ndarray:
        return np.array([r.i_total for r in self.rows])


class _Network:
    """Residuals, Jacobian and bookkeeping for one (config, unit count) solve."""

    def __init__(self, config: DacConfig, n_up: int):
        self.cfg = config
        self.n_up = n_up
        self.n_dn = config.d_max - n_up
        topo = config.topology
        self.four = isinstance(topo, FourResistor)
        self.has_vs = self.four and topo.rsn > 0.0
        if isinstance(topo, Standalone):
            self.gpp = self.gpn = 0.0
        else:
            self.gpp = 1.0 / topo.rpp
            self.gpn = 1.0 / topo.rpn
        self.inner = (not self.four) or topo.parallel_attach is ParallelAttach.INNER_RAILS
        self.gsp = 1.0 / topo.rsp if self.four else 0.0
        self.gsn = 1.0 / topo.rsn if self.has_vs else 0.0

    # Unknown ordering: [vdac, vd?, vs?]
    @property
    def n_vars(self) -> int:
        return 1 + (1 if self.four else 0) + (1 if self.has_vs else 0)

    def unpack(self, x: np.ndarray) -> tuple[float, float, float]:
        vdac = float(x[0])
        vd = float(x[1]) if self.four else self.cfg.vdd
        vs = float(x[-1]) if self.has_vs else 0.0
        return vdac, vd, vs

    def residual_and_jacobian(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        vdac, vd, vs = self.unpack(x)
        cfg = self.cfg
        vgs = vd - vs

        ip, dip_g, dip_d = current_and_derivatives(cfg.devices.pmos, vgs, vd - vdac)
        in_, din_g, din_d = current_and_derivatives(cfg.devices.nmos, vgs, vdac - vs)
        Ip, In = self.n_up * ip, self.n_dn * in_

        # Pull-up group: d(Ip)/d(vdac, vd, vs)
        dIp = (
            -self.n_up * dip_d,
            self.n_up * (dip_g + dip_d),
            -self.n_up * dip_g,
        )
        dIn = (
            self.n_dn * din_d,
            self.n_dn * din_g,
            -self.n_dn * (din_g + din_d),
        )

        vtop = vd if self.inner else cfg.vdd
        vbot = vs if self.inner else 0.0
        i_rpp = self.gpp * (vtop - vdac)
        i_rpn = self.gpn * (vdac - vbot)
        drpp = (-self.gpp, self.gpp if self.inner else 0.0, 0.0)
        drpn = (self.gpn, 0.0, -self.gpn if self.inner else 0.0)

        f = [Ip + i_rpp - In - i_rpn]
        rows = [tuple(dIp[j] + drpp[j] - dIn[j] - drpn[j] for j in range(3))]

        if self.four:
            f_vd = self.gsp * (cfg.vdd - vd) - Ip - (i_rpp if self.inner else 0.0)
            row_vd = [
                -dIp[j] - (drpp[j] if self.inner else 0.0) for j in range(3)
            ]
            row_vd[1] -= self.gsp
            f.append(f_vd)
            rows.append(tuple(row_vd))
        if self.has_vs:
            f_vs = In + (i_rpn if self.inner else 0.0) - self.gsn * vs
            row_vs = [dIn[j] + (drpn[j] if self.inner else 0.0) for j in range(3)]
            row_vs[2] -= self.gsn
            f.append(f_vs)
            rows.append(tuple(row_vs))

        cols = [0] + ([1] if self.four else []) + ([2] if self.has_vs else [])
        jac = np.array([[row[c] for c in cols] for row in rows])
        return np.array(f), jac

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.residual_and_jacobian(x)[0]

    def initial_guess(self) -> np.ndarray:
        vdac0 = (self.n_up / self.cfg.d_max) * self.cfg.vdd
        x = [vdac0]
        if self.four:
            x.append(self.cfg.vdd)
        if self.has_vs:
            x.append(0.0)
        return np.array(x)

    def solution(self, x: np.ndarray) -> NodeSolution:
        vdac, vd, vs = self.unpack(x)
        cfg = self.cfg
        vgs = vd - vs
        ip = current_and_derivatives(cfg.devices.pmos, vgs, vd - vdac)[0]
        in_ = current_and_derivatives(cfg.devices.nmos, vgs, vdac - vs)[0]
        vtop = vd if self.inner else cfg.vdd
        vbot = vs if self.inner else 0.0
        i_rpp = self.gpp * (vtop - vdac)
        i_rpn = self.gpn * (vdac - vbot)

        if isinstance(cfg.topology, Standalone):
            i_total = self.n_up * ip
        elif isinstance(cfg.topology, TwoResistor):
            i_total = self.n_up * ip + i_rpp
        else:
            i_total = self.gsp * (cfg.vdd - vd)
            if not self.inner:
                i_total += i_rpp

        # Report the region of the active groups; a group with no active units
        # has its devices' gates parked at their own source rail, i.e. cutoff.
        vgs_mag = max(vgs, 0.0)
        region_p = (
            classify_region(cfg.devices.pmos, vgs_mag, max(vd - vdac, 0.0))
            if self.n_up > 0
            else OperatingRegion.CUTOFF
        )
        region_n = (
            classify_region(cfg.devices.nmos, vgs_mag, max(vdac - vs, 0.0))
            if self.n_dn > 0
            else OperatingRegion.CUTOFF
        )
        res = self.residual(x)
        return NodeSolution(
            code=self.n_up,
            vdac=vdac,
            vd=vd,
            vs=vs,
            i_total=i_total,
            i_per_pullup=ip if self.n_up > 0 else 0.0,
            i_per_pulldown=in_ if self.n_dn > 0 else 0.0,
            i_rpp=i_rpp,
            i_rpn=i_rpn,
            region_p=region_p,
            region_n=region_n,
            kcl_residual=float(np.max(np.abs(res))),
        )


def _newton(net: _Network, x: np.ndarray, budget: int) -> tuple[np.ndarray, int, bool]:
    """Damped Newton; returns (x, iterations used, converged)."""
    used = 0
    f, jac = net.residual_and_jacobian(x)
    norm = float(np.max(np.abs(f)))
    while used < budget:
        if norm <= RESIDUAL_TOL:
            return x, used, True
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return x, used, False
        if not np.all(np.isfinite(dx)):
            return x, used, False
        lam = 1.0
        while lam > 1e-8:
            x_try = x + lam * dx
            f_try, jac_try = net.residual_and_jacobian(x_try)
            norm_try = float(np.max(np.abs(f_try)))
            if norm_try < norm or norm_try <= RESIDUAL_TOL:
                x, f, jac, norm = x_try, f_try, jac_try, norm_try
                break
            lam *= 0.5
        else:
            return x, used, False  # stalled: no damping step reduced the residual
        used += 1
    return x, used, norm <= RESIDUAL_TOL


def _bisect_node(net: _Network, x: np.ndarray, idx: int, lo: float, hi: float) -> None:
    """Bisect unknown idx on its own KCL residual, others held fixed.

    All node residuals are strictly decreasing in their own voltage, so the
    bracket [lo, hi] with f(lo) >= 0 >= f(hi) always closes.
    """
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        x[idx] = mid
        f = net.residual(x)[idx]
        if f > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    x[idx] = 0.5 * (lo + hi)


def _bisection_sweeps(net: _Network, x: np.ndarray, budget: int) -> tuple[np.ndarray, bool]:
    vdd = net.cfg.vdd
    span = 2.0 * vdd  # generous brackets; solutions live in [0, vdd]
    for _ in range(budget):
        _bisect_node(net, x, 0, -span, vdd + span)
        if net.four:
            _bisect_node(net, x, 1, -span, vdd + span)
        if net.has_vs:
            _bisect_node(net, x, net.n_vars - 1, -span, vdd + span)
        norm = float(np.max(np.abs(net.residual(x))))
        if norm <= RESIDUAL_TOL:
            return x, True
    return x, False


def solve_units(config: DacConfig, pullup_units: int) -> NodeSolution:
    """Operating point with an explicit pull-up unit count (0..d_max).

    ``solve_code`` is the public entry; this variant also serves transient
    analysis, where a mid-transition pin state is a unit count that need not
    correspond to any encodable code.
    """
    if not 0 <= pullup_units <= config.d_max:
        raise ValueError(f"pullup_units {pullup_units} out of range 0..{config.d_max}")
    net = _Network(config, pullup_units)
    x = net.initial_guess()
    x, used, ok = _newton(net, x, MAX_ITERATIONS)
    if not ok:
        x, ok = _bisection_sweeps(net, x, MAX_ITERATIONS - used)
    if not ok:
        residual = float(np.max(np.abs(net.residual(x))))
        raise SolverError(
            f"no convergence after {MAX_ITERATIONS} iterations "
            f"(best residual {residual:.3e} A)",
            code=pullup_units,
            residual=residual,
        )
    return net.solution(x)


def solve_code(config: DacConfig, code: int) -> NodeSolution:
    """DC operating point for one input code."""
    if not 0 <= code <= config.d_max:
        raise ValueError(f"code {code} out of range 0..{config.d_max}")
    return solve_units(config, code)


def transfer_curve(config: DacConfig) -> TransferCurve:
    """Full static sweep code = 0..d_max; codes are independent solves."""
    rows = []
    for code in range(config.d_max + 1):
        try:
            rows.append(solve_code(config, code))
        except SolverError as exc:
            raise SolverError(
                f"transfer curve failed at code {code}: {exc}",
                code=code,
                residual=exc.residual,
            ) from exc
    return TransferCurve(config=config, rows=tuple(rows))


def complement_check(curve: TransferCurve) -> float:
    """Max over codes of |vdac(d_max - m) - (vdd - vdac(m))| [V].

    For a mirror-symmetric configuration (matched devices, rpp == rpn,
    rsp == rsn) the network maps code m to the complement of code d_max - m,
    so this is a solver self-consistency probe that must sit at numerical
    noise. For mismatched devices it measures the asymmetry itself.
    """
    vdd = curve.config.vdd
    v = curve.vdac
    return float(np.max(np.abs(v[::-1] - (vdd - v))))


def with_topology(config: DacConfig, topology: Topology) -> DacConfig:
    """Copy of config with a different resistor topology."""
    return replace(config, topology=topology)
