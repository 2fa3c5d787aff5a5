"""Static linearity and current figures of merit for a transfer curve.

DNL/INL are referenced to the end-point line (code 0 to code d_max), the
stricter and simpler of the two common conventions; the report records the
choice so a best-fit variant can be added without ambiguity. Metrics are
always computed over the full code range: a corrected configuration compresses
the voltage span, but the code count (and therefore the LSB denominator)
stays put.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .network import TransferCurve

INL_REFERENCE = "endpoint"
# Adjacent steps this far negative (in volts) still count as monotone; the
# operating-point solver is only trusted to ~1e-9 V.
MONOTONIC_SLACK = 1e-9


class MetricsError(ValueError):
    """Degenerate curve, e.g. zero full-scale span."""


@dataclass(frozen=True)
class LinearityReport:
    dnl: tuple[float, ...]
    inl: tuple[float, ...]
    dnl_max_abs: float
    inl_max_abs: float
    dynamic_range: float
    monotonic: bool
    i_max: float
    i_at_midrange: float
    lsb_ref: float
    inl_reference: str = INL_REFERENCE


def _lsb_ref(levels: np.ndarray) -> float:
    span = float(levels[-1] - levels[0])
    if span == 0.0:
        raise MetricsError("zero full-scale span: vdac(d_max) equals vdac(0)")
    return span / (len(levels) - 1)


def dnl_from_levels(levels: Sequence[float]) -> np.ndarray:
    """Per-step deviation from one LSB, in LSB units (length d_max)."""
    v = np.asarray(levels, dtype=float)
    if v.size < 2:
        raise MetricsError("need at least 2 levels")
    lsb = _lsb_ref(v)
    return np.diff(v) / lsb - 1.0


def inl_from_levels(levels: Sequence[float]) -> np.ndarray:
    """Deviation from the end-point line, in LSB units (length d_max + 1)."""
    v = np.asarray(levels, dtype=float)
    if v.size < 2:
        raise MetricsError("need at least 2 levels")
    lsb = _lsb_ref(v)
    line = v[0] + lsb * np.arange(v.size)
    return (v - line) / lsb


def dnl(curve: TransferCurve) -> np.ndarray:
    return dnl_from_levels(curve.vdac)


def inl(curve: TransferCurve) -> np.ndarray:
    return inl_from_levels(curve.vdac)


def summary(curve: TransferCurve) -> LinearityReport:
    levels = curve.vdac
    currents = curve.i_total
    d = dnl_from_levels(levels)
    i = inl_from_levels(levels)
    deltas = np.diff(levels)
    d_max = curve.config.d_max
    mid_code = (d_max + 1) // 2
    return LinearityReport(
        dnl=tuple(float(x) for x in d),
        inl=tuple(float(x) for x in i),
        dnl_max_abs=float(np.max(np.abs(d))),
        inl_max_abs=float(np.max(np.abs(i))),
        dynamic_range=float(levels[-1] - levels[0]),
        monotonic=bool(np.all(deltas >= -MONOTONIC_SLACK)),
        i_max=float(np.max(np.abs(currents))),
        i_at_midrange=float(currents[mid_code]),
        lsb_ref=_lsb_ref(levels),
    )
