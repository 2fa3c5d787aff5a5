"""First-order transistor model for the GPIO output stage.

A GPIO output driver is treated as a CMOS pair: one PMOS unit pulling toward
the local supply rail and one NMOS unit pulling toward the local ground rail.
Currents follow the square law with channel-length modulation neglected, so a
device is fully described by its threshold voltage and transconductance
parameter. All voltages handled here are source-referenced magnitudes; the
``polarity`` field only records which sign convention the caller must apply.

``LinearSwitch`` is the ideal counterpart (a fixed on-conductance with no
threshold); it turns the network into a plain resistor divider and is used to
check that the nonlinear solver degenerates to the ideal DAC.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union


class Polarity(enum.Enum):
    NMOS = "nmos"
    PMOS = "pmos"


class OperatingRegion(enum.Enum):
    CUTOFF = "cutoff"
    TRIODE = "triode"
    SATURATION = "saturation"


class DeviceError(ValueError):
    """Invalid device parameters or an evaluation outside the model's domain."""


@dataclass(frozen=True)
class MosfetParams:
    """Square-law device: threshold magnitude [V] and transconductance [A/V^2]."""

    polarity: Polarity
    vth: float
    k: float

    def __post_init__(self) -> None:
        if not self.vth > 0.0:
            raise DeviceError(f"vth must be > 0, got {self.vth}")
        if not self.k > 0.0:
            raise DeviceError(f"k must be > 0, got {self.k}")


@dataclass(frozen=True)
class LinearSwitch:
    """Constant-conductance unit cell; conducts g*vds whenever it is driven."""

    g: float

    def __post_init__(self) -> None:
        if not self.g > 0.0:
            raise DeviceError(f"g must be > 0, got {self.g}")


UnitDevice = Union[MosfetParams, LinearSwitch]


@dataclass(frozen=True)
class DevicePair:
    """Pull-up and pull-down unit devices of one GPIO driver.

    Asymmetric pairs are legal; they are what produce the conductance-mismatch
    error term in the transfer function.
    """

    pmos: UnitDevice
    nmos: UnitDevice


def classify_region(p: UnitDevice, vgs_mag: float, vds_mag: float) -> OperatingRegion:
    """Operating region at (vgs, vds), both source-referenced magnitudes.

    The vds == vgs - vth boundary is assigned to saturation (both current
    formulas agree there, but reporting must be deterministic).
    """
    _check_domain(vgs_mag, vds_mag)
    if isinstance(p, LinearSwitch):
        return OperatingRegion.TRIODE
    if vgs_mag < p.vth:
        return OperatingRegion.CUTOFF
    if vds_mag >= vgs_mag - p.vth:
        return OperatingRegion.SATURATION
    return OperatingRegion.TRIODE


def drain_current(p: UnitDevice, vgs_mag: float, vds_mag: float) -> float:
    """Drain current [A] of one unit device at source-referenced magnitudes."""
    _check_domain(vgs_mag, vds_mag)
    if isinstance(p, LinearSwitch):
        return p.g * vds_mag
    vov = vgs_mag - p.vth
    if vov <= 0.0:
        return 0.0
    if vds_mag >= vov:
        return 0.5 * p.k * vov * vov
    return p.k * (vov * vds_mag - 0.5 * vds_mag * vds_mag)


def on_resistance(p: UnitDevice, vgs_mag: float) -> float:
    """Small-signal triode resistance 1/(k*(vgs - vth)) at vds -> 0 [ohm]."""
    if isinstance(p, LinearSwitch):
        return 1.0 / p.g
    if vgs_mag <= p.vth:
        raise DeviceError(
            f"no conduction: vgs {vgs_mag} V does not exceed vth {p.vth} V"
        )
    return 1.0 / (p.k * (vgs_mag - p.vth))


def midrange_resistance(p: UnitDevice, vgs_mag: float, vdd: float) -> float:
    """Secant resistance vds/i of one unit at vds = vdd/2 [ohm].

    This is the quantity a bench extraction sees when dividing the mid-scale
    output voltage by the per-GPIO current; it is larger than the small-signal
    on-resistance because the triode curve bends over.
    """
    if isinstance(p, LinearSwitch):
        return 1.0 / p.g
    half = 0.5 * vdd
    i = drain_current(p, vgs_mag, half)
    if i <= 0.0:
        raise DeviceError("no conduction at mid-scale; device stays cut off")
    return half / i


def calibrated_pair(vdd: float, vth: float, ron_midrange: float) -> DevicePair:
    """Symmetric device pair whose mid-scale secant resistance equals ron_midrange.

    Inverts the triode law at vds = vdd/2 with vgs = vdd:
    k = 1 / (ron * (vdd - vth - vdd/4)). Requires vth < vdd/2 so the mid-scale
    point actually sits in the triode region.
    """
    if not 0.0 < vth < 0.5 * vdd:
        raise DeviceError(f"calibration needs 0 < vth < vdd/2, got vth={vth}, vdd={vdd}")
    if ron_midrange <= 0.0:
        raise DeviceError(f"ron_midrange must be > 0, got {ron_midrange}")
    k = 1.0 / (ron_midrange * (vdd - vth - 0.25 * vdd))
    return DevicePair(
        pmos=MosfetParams(Polarity.PMOS, vth, k),
        nmos=MosfetParams(Polarity.NMOS, vth, k),
    )


def current_and_derivatives(
    p: UnitDevice, vgs: float, vds: float
) -> tuple[float, float, float]:
    """(i, di/dvgs, di/dvds) with a signed extension for solver iterations.

    Off-solution trial points may momentarily put vds < 0 or vgs < 0; the
    current is extended antisymmetrically in vds and clamped to cutoff for
    vgs <= 0 so the branch stays continuous and monotone for Newton/bisection.
    """
    if vds < 0.0:
        i, dvgs, dvds = current_and_derivatives(p, vgs, -vds)
        return -i, -dvgs, dvds
    if isinstance(p, LinearSwitch):
        return p.g * vds, 0.0, p.g
    vov = vgs - p.vth
    if vov <= 0.0:
        return 0.0, 0.0, 0.0
    if vds >= vov:
        return 0.5 * p.k * vov * vov, p.k * vov, 0.0
    return (
        p.k * (vov * vds - 0.5 * vds * vds),
        p.k * vds,
        p.k * (vov - vds),
    )


def _check_domain(vgs_mag: float, vds_mag: float) -> None:
    if vgs_mag < 0.0 or vds_mag < 0.0:
        raise DeviceError(
            f"voltages must be source-referenced magnitudes >= 0, "
            f"got vgs={vgs_mag}, vds={vds_mag}"
        )
