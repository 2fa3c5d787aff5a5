"""Parameter extraction from a transfer curve and correction-resistor sizing.

The extraction mirrors the bench procedure: read the threshold voltage off the
linear (triode-triode) region's span, and the unit on-resistance off the
per-GPIO current near mid-scale. The sizing formulas then place the parallel
resistors so the output pins at one threshold away from each rail, and the
series resistors so a chosen total current keeps both device groups in strong
inversion and simultaneous saturation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .devices import OperatingRegion
from .network import (
    DacConfig,
    FourResistor,
    NodeSolution,
    Standalone,
    Topology,
    TransferCurve,
    TwoResistor,
    transfer_curve,
)


class ExtractionError(ValueError):
    """The curve does not expose the features extraction needs."""


class SizingError(ValueError):
    """The requested correction is infeasible; the message names the constraint."""


@dataclass(frozen=True)
class ExtractedParams:
    """Device knobs recovered from a standalone transfer curve.

    vth is conservative: at coarse code granularity the detected linear span
    undershoots the true one, which biases vth high, never low. ron is the
    mid-scale secant resistance of one unit (output voltage over per-unit
    current), the same quantity a bench measurement produces.
    """

    vth: float
    ron: float
    vdd: float
    linear_range: tuple[float, float]

    def __post_init__(self) -> None:
        if not 0.0 < self.vth < 0.5 * self.vdd:
            raise ExtractionError(
                f"vth must be within (0, vdd/2), got vth={self.vth}, vdd={self.vdd}"
            )
        if self.ron <= 0.0:
            raise ExtractionError(f"ron must be > 0, got {self.ron}")
        lo, hi = self.linear_range
        if not (0.0 <= lo <= hi <= self.vdd):
            raise ExtractionError(f"linear_range {self.linear_range} outside [0, vdd]")


@dataclass(frozen=True)
class SizingResult:
    topology: Topology
    predicted_dynamic_range: tuple[float, float]
    alpha_g: float | None = None
    it_bounds: tuple[float, float] | None = None
    rs_bounds: tuple[float, float] | None = None
    strong_inversion_ok: bool = True
    notes: tuple[str, ...] = ()


def extract_from_table(
    codes: list[int],
    vdac: list[float],
    i_per_pullup: list[float],
    region_p: list[str],
    region_n: list[str],
    vdd: float,
) -> ExtractedParams:
    """Extraction from raw columns (e.g. an imported measurement CSV).

    Detects the linear region as the longest run of codes where both device
    groups are in triode, derives vth from its span, and inverts the triode
    law at the in-run code nearest mid-scale to get the unit resistance.
    """
    n = len(codes)
    if not (len(vdac) == len(i_per_pullup) == len(region_p) == len(region_n) == n):
        raise ExtractionError("column lengths differ")

    triode = OperatingRegion.TRIODE.value
    runs: list[tuple[int, int]] = []  # [start, end] inclusive index ranges
    start = None
    for idx in range(n):
        both = region_p[idx] == triode and region_n[idx] == triode
        if both and start is None:
            start = idx
        if not both and start is not None:
            runs.append((start, idx - 1))
            start = None
    if start is not None:
        runs.append((start, n - 1))
    runs = [r for r in runs if r[1] - r[0] >= 1]
    if not runs:
        raise ExtractionError(
            "no triode-triode run of at least 2 codes found "
            "(curve too coarse, or already corrected)"
        )
    lo_idx, hi_idx = max(runs, key=lambda r: r[1] - r[0])

    linear_range = (vdac[lo_idx], vdac[hi_idx])
    # The true region boundary falls between the last in-run code and its
    # out-of-run neighbor; take the midpoint of that bracket so the span (and
    # the vth read off it) is not biased by a full code step.
    edge_lo = 0.5 * (vdac[lo_idx - 1] + vdac[lo_idx]) if lo_idx > 0 else vdac[lo_idx]
    edge_hi = 0.5 * (vdac[hi_idx] + vdac[hi_idx + 1]) if hi_idx < n - 1 else vdac[hi_idx]
    span = edge_hi - edge_lo
    vth = 0.5 * (vdd - span)

    half = 0.5 * vdd
    mid_idx = min(range(lo_idx, hi_idx + 1), key=lambda i: (abs(vdac[i] - half), i))
    i_unit = i_per_pullup[mid_idx]
    if i_unit <= 0.0:
        raise ExtractionError("no pull-up current at the mid-range code")

    # Invert the triode law at the measured point, then express the result as
    # the mid-scale secant resistance vds/i at vds = vdd/2.
    vov = vdd - vth
    vsd = vdd - vdac[mid_idx]
    denom = vov * vsd - 0.5 * vsd * vsd
    if denom <= 0.0:
        raise ExtractionError("mid-range point is not inside the triode region")
    k_est = i_unit / denom
    ron = 1.0 / (k_est * (vov - 0.25 * vdd))
    return ExtractedParams(vth=vth, ron=ron, vdd=vdd, linear_range=linear_range)


def extract_parameters(curve: TransferCurve) -> ExtractedParams:
    """Extraction from a simulated standalone curve."""
    if not isinstance(curve.config.topology, Standalone):
        raise ExtractionError("extraction expects a standalone (no-resistor) curve")
    rows: tuple[NodeSolution, ...] = curve.rows
    return extract_from_table(
        codes=[r.code for r in rows],
        vdac=[r.vdac for r in rows],
        i_per_pullup=[r.i_per_pullup for r in rows],
        region_p=[r.region_p.value for r in rows],
        region_n=[r.region_n.value for r in rows],
        vdd=curve.config.vdd,
    )


def size_two_resistor(p: ExtractedParams, d_max: int) -> SizingResult:
    """Parallel-only correction: rpp = rpn = ron / alpha_g.

    alpha_g = d_max * vth / (vdd - 2 vth) stretches the triode-triode region
    over the whole code range, pinning the output at vth and vdd - vth.
    """
    if d_max < 1:
        raise SizingError(f"d_max must be >= 1, got {d_max}")
    window = p.vdd - 2.0 * p.vth
    if window <= 0.0:
        raise SizingError(
            f"no linear region: vdd - 2*vth = {window:.4g} V is not positive"
        )
    alpha_g = d_max * p.vth / window
    rp = p.ron / alpha_g
    return SizingResult(
        topology=TwoResistor(rpp=rp, rpn=rp),
        predicted_dynamic_range=(p.vth, p.vdd - p.vth),
        alpha_g=alpha_g,
        notes=("sizing assumes constant on-conductance inside the stretched region",),
    )


def size_four_resistor(
    p: ExtractedParams,
    it_target: float,
    split: float = 1.0,
    rs_total: float | None = None,
) -> SizingResult:
    """Series + parallel correction for a target total current.

    The feasible series total lies in
    [(vdd - 2 vth) / it, (vdd - vth) / it]; the lower edge opens the
    simultaneous-saturation window, the upper edge keeps the gate swing in
    strong inversion. The deterministic default is the interval midpoint
    (callers with board constraints may pass rs_total explicitly). Parallel
    resistors are vth / it on both sides, which pins one threshold of drop
    across them at the code-range ends.
    """
    if it_target <= 0.0:
        raise SizingError(f"it_target must be > 0, got {it_target}")
    if not 0.0 <= split <= 1.0:
        raise SizingError(f"split must be in [0, 1], got {split}")
    window = p.vdd - 2.0 * p.vth
    if window <= 0.0:
        raise SizingError(
            f"window collapse: vdd - 2*vth = {window:.4g} V is not positive"
        )
    rs_lo = window / it_target
    rs_hi = (p.vdd - p.vth) / it_target
    if rs_total is None:
        rs_total = 0.5 * (rs_lo + rs_hi)
        notes = ("rs_total set to the midpoint of its feasible interval",)
    else:
        notes = ()
        if rs_total < rs_lo * (1.0 - 1e-12):
            raise SizingError(
                f"rs_total {rs_total:.4g} below saturation-window bound {rs_lo:.4g} "
                f"(vdd - 2*vth)/it_target"
            )
        if rs_total > rs_hi * (1.0 + 1e-12):
            raise SizingError(
                f"rs_total {rs_total:.4g} violates strong-inversion bound {rs_hi:.4g} "
                f"(vdd - vth)/it_target"
            )
    rsp = split * rs_total
    rsn = (1.0 - split) * rs_total
    rp = p.vth / it_target
    strong_inversion_ok = p.vdd - it_target * rs_total >= p.vth
    vdac_min = p.vdd - it_target * rsp - p.vth
    vdac_max = it_target * rsn + p.vth
    return SizingResult(
        topology=FourResistor(rsp=rsp, rsn=rsn, rpp=rp, rpn=rp),
        predicted_dynamic_range=(vdac_min, vdac_max),
        it_bounds=(window / rs_total, (p.vdd - p.vth) / rs_total),
        rs_bounds=(rs_lo, rs_hi),
        strong_inversion_ok=strong_inversion_ok,
        notes=notes,
    )


def check_saturation_window(config: DacConfig) -> list[bool]:
    """Per-code flags: do the solved rails put both groups in saturation?

    Evaluated on the solved node voltages: strong inversion vd - vs >= vth,
    pull-down saturation vdac >= vd - vth, pull-up saturation
    vdac <= vs + vth. Without series resistors the last two require
    vdd <= 2 vth, so the window is empty for any realistic device; that is
    exactly why the four-resistor correction exists.
    """
    pmos = config.devices.pmos
    nmos = config.devices.nmos
    vth_p = getattr(pmos, "vth", 0.0)
    vth_n = getattr(nmos, "vth", 0.0)
    curve = transfer_curve(config)
    flags = []
    for row in curve.rows:
        strong = row.vd - row.vs >= max(vth_n, vth_p)
        n_sat = row.vdac >= row.vd - vth_n
        p_sat = row.vdac <= row.vs + vth_p
        flags.append(bool(strong and n_sat and p_sat))
    return flags
