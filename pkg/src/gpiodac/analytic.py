"""Constant-conductance transfer-function expressions.

These treat every unit cell as a fixed on-conductance, which reduces the DAC
to a resistor divider. They serve two purposes: quick what-if arithmetic, and
cross-checks that the nonlinear solver collapses to the divider when fed
``LinearSwitch`` devices. Outputs are constant-conductance approximations, not
solver results.

Two code conventions exist for the same hardware. A raw inverter chain inverts
(pull-up count = d_max - code); a GPIO buffer has two inverters in cascade and
does not (pull-up count = code). Both are exposed through an explicit flag
because neither is a safe silent default.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SwitchModel:
    """Divider model: pull-up / pull-down on-conductances [S], supply, level count."""

    gop: float
    gon: float
    vdd: float
    d_max: int

    def __post_init__(self) -> None:
        if self.gop <= 0.0 or self.gon <= 0.0:
            raise ValueError(f"conductances must be > 0, got gop={self.gop}, gon={self.gon}")
        if self.d_max < 1:
            raise ValueError(f"d_max must be >= 1, got {self.d_max}")
        if abs(self.mismatch) >= 1.0:
            raise ValueError("conductance mismatch magnitude must be < 1")

    @property
    def mismatch(self) -> float:
        """Relative error factor 1 - gon/gop of the two on-conductances."""
        return 1.0 - self.gon / self.gop


def _check_code(d_max: int, code: int) -> None:
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    if not 0 <= code <= d_max:
        raise ValueError(f"code {code} out of range 0..{d_max}")


def ideal_output(d_max: int, code: int, vdd: float) -> float:
    """Ideal level (code / d_max) * vdd of the non-inverting divider."""
    _check_code(d_max, code)
    return (code / d_max) * vdd


def switch_model_output(m: SwitchModel, code: int, inverting: bool) -> float:
    """Divider output under the chosen code convention.

    inverting: pull-up count = d_max - code (plain inverter array).
    non-inverting: pull-up count = code (GPIO buffer array).
    With gop == gon both reduce to the ideal level (or its complement).
    """
    _check_code(m.d_max, code)
    n_up = (m.d_max - code) if inverting else code
    n_dn = m.d_max - n_up
    g_up = n_up * m.gop
    g_dn = n_dn * m.gon
    return g_up / (g_up + g_dn) * m.vdd


def error_factor_output(m: SwitchModel, code: int) -> float:
    """Inverting divider rewritten around the mismatch term.

    Algebraically identical to switch_model_output(..., inverting=True):
    v = v_ideal * [1 + x / (1 - x)] with x = (code / d_max) * mismatch.
    """
    _check_code(m.d_max, code)
    x = (code / m.d_max) * m.mismatch
    v_ideal = ((m.d_max - code) / m.d_max) * m.vdd
    return v_ideal * (1.0 + x / (1.0 - x))


def two_resistor_output(m: SwitchModel, code: int, gpp: float, gnn: float) -> float:
    """Divider output with parallel conductances gpp (to supply) and gnn (to ground).

    v = (code + gpp/gop) / (d_max - code * mismatch + (gpp + gnn)/gop) * vdd.
    For gpp == gnn and zero mismatch this is the symmetric stretched form
    (code + alpha_g) / (d_max + 2 * alpha_g) * vdd with alpha_g = gpp/gop.
    """
    _check_code(m.d_max, code)
    if gpp <= 0.0 or gnn <= 0.0:
        raise ValueError(f"parallel conductances must be > 0, got gpp={gpp}, gnn={gnn}")
    num = code + gpp / m.gop
    den = m.d_max - code * m.mismatch + (gpp + gnn) / m.gop
    return num / den * m.vdd


def stretched_output(d_max: int, code: int, vdd: float, alpha_g: float) -> float:
    """Symmetric two-resistor form (code + alpha_g) / (d_max + 2*alpha_g) * vdd."""
    _check_code(d_max, code)
    if alpha_g < 0.0:
        raise ValueError(f"alpha_g must be >= 0, got {alpha_g}")
    return (code + alpha_g) / (d_max + 2.0 * alpha_g) * vdd
