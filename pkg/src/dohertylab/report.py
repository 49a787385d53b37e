"""Deterministic CSV/JSON rendering of sweep results.

All floats are formatted with a fixed number of significant digits
(default 9, overridable through the DOHERTYLAB_PRECISION environment
variable) and a lowercase exponent, so identical inputs always produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .analysis import LoadModulationSweep, PASimResult
from .ideal import current_profile, itr_conv, itr_intro, pbo_level

__all__ = [
    "float_digits",
    "fmt",
    "csv_text",
    "json_text",
    "SWEEP_COLUMNS",
    "load_mod_rows",
    "pa_sim_rows",
    "itr_curve_rows",
    "ITR_COLUMNS",
]

#: documented sweep schema; one row per drive point
SWEEP_COLUMNS = [
    "pbo_db",
    "i_main",
    "i_aux",
    "re_z_main",
    "im_z_main",
    "re_z_aux",
    "im_z_aux",
    "eta_passive",
    "eta_drain",
    "am_am_db",
    "am_pm_deg",
]

ITR_COLUMNS = ["pbo_db", "i_main", "i_aux", "itr_conv", "itr_intro"]


def float_digits() -> int:
    raw = os.environ.get("DOHERTYLAB_PRECISION", "")
    try:
        digits = int(raw)
    except ValueError:
        return 9
    return digits if 1 <= digits <= 17 else 9


def fmt(value, digits: int | None = None) -> str:
    """Fixed-precision rendering; empty string for None/NaN cells."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isnan(v):
        return ""
    if v == 0.0:
        v = 0.0  # fold -0.0
    d = digits if digits is not None else float_digits()
    return f"{v:.{d}g}"


def csv_text(header: list[str], rows: list[list]) -> str:
    digits = float_digits()
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(cell, digits) for cell in row))
    return "\n".join(lines) + "\n"


def _round_floats(obj, digits: int):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj), digits)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def json_text(doc: dict) -> str:
    return json.dumps(_round_floats(doc, float_digits()), indent=2, sort_keys=True) + "\n"


def _c(x: complex):
    return (None, None) if (x != x) else (x.real, x.imag)  # NaN check works on complex


def load_mod_rows(sweep: LoadModulationSweep) -> list[list]:
    rows = []
    for k in range(len(sweep.profile)):
        re_za, im_za = _c(sweep.z_aux[k])
        rows.append(
            [
                sweep.pbo_db[k],
                sweep.profile.i_main[k],
                sweep.profile.i_aux[k],
                sweep.z_main[k].real,
                sweep.z_main[k].imag,
                re_za,
                im_za,
                sweep.eta_passive[k],
                None,
                None,
                None,
            ]
        )
    return rows


def pa_sim_rows(sim: PASimResult) -> list[list]:
    rows = []
    for k in range(len(sim.v)):
        re_zm, im_zm = _c(sim.z_main[k])
        re_za, im_za = _c(sim.z_aux[k])
        rows.append(
            [
                sim.pbo_db[k],
                sim.i_main[k],
                sim.i_aux[k],
                re_zm,
                im_zm,
                re_za,
                im_za,
                None,
                sim.eta[k],
                sim.am_am_db[k],
                sim.am_pm_deg[k],
            ]
        )
    return rows


def itr_curve_rows(alpha: float, r_opt: float, r_l: float, n_points: int = 121) -> list[list]:
    lo = 2.0 / (1.0 + alpha) ** 2
    hi = 2.0 / (1.0 + alpha)
    rows = []
    for i_main in np.linspace(lo, hi, n_points)[::-1]:
        rows.append(
            [
                pbo_level(alpha, i_main),
                i_main,
                current_profile(alpha, i_main),
                itr_conv(alpha, i_main),
                itr_intro(alpha, i_main, r_opt, r_l),
            ]
        )
    return rows
