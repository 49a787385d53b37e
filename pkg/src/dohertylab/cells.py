"""Conduction-angle current cells for behavioral PA simulation.

The active device is a transconductor producing a truncated sinusoid
i(theta) = max(0, I_q + I_p*cos(theta)); drive scales I_p linearly.
Standard Fourier integrals of the clipped waveform give the DC component
and the fundamental phasor:

    I_dc   = (I_q*t + I_p*sin(t)) / pi
    I_fund = (2*I_q*sin(t) + I_p*(t + sin(t)*cos(t))) / pi

with t the conduction half-angle, cos(t) = -I_q/I_p (clamped to full or
zero conduction).  A cell is parameterized by its conduction angle at
full drive: pi is class-B, above class-AB (conducts the whole cycle at
small drive), below class-C (dead until the drive crosses a threshold).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ideal import DohertyConfig, current_profile

__all__ = ["ActiveCellModel", "IdealMainCell", "IdealAuxCell", "ideal_doherty_cells"]


@dataclass(frozen=True)
class ActiveCellModel:
    """Truncated-sinusoid cell; ``phi_rad`` is the conduction angle at
    full drive, ``i_max`` the waveform peak at full drive."""

    phi_rad: float
    i_max: float
    v_dc: float
    v_knee: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.phi_rad <= 2.0 * math.pi:
            raise ValueError(f"conduction angle must lie in (0, 2*pi], got {self.phi_rad}")
        if self.i_max <= 0 or self.v_dc <= 0:
            raise ValueError("i_max and v_dc must be positive")
        if not 0.0 <= self.v_knee < self.v_dc:
            raise ValueError("knee voltage must lie in [0, v_dc)")

    @property
    def bias_class(self) -> str:
        if abs(self.phi_rad - math.pi) < 1e-12:
            return "class-B"
        return "class-AB" if self.phi_rad > math.pi else "class-C"

    @property
    def _iq_ip(self) -> tuple[float, float]:
        cos_half = math.cos(self.phi_rad / 2.0)
        i_p1 = self.i_max / (1.0 - cos_half)
        return -i_p1 * cos_half, i_p1

    @property
    def turn_on_drive(self) -> float:
        """Drive level below which the cell passes no current (class-C
        only; 0 for class-B and class-AB)."""
        i_q, i_p1 = self._iq_ip
        return max(0.0, -i_q / i_p1)

    def currents(self, v: float) -> tuple[float, complex]:
        """(I_dc, fundamental phasor) at normalized drive ``v`` in [0, 1]."""
        if not 0.0 <= v <= 1.0 + 1e-12:
            raise ValueError(f"drive must lie in [0, 1], got {v}")
        i_q, i_p1 = self._iq_ip
        i_p = v * i_p1
        if i_p <= 0.0:
            return (max(i_q, 0.0), 0j)
        ratio = -i_q / i_p
        if ratio >= 1.0:  # never conducts at this drive
            return (0.0, 0j)
        if ratio <= -1.0:  # conducts the whole cycle, no clipping
            return (i_q, complex(i_p))
        t = math.acos(ratio)
        i_dc = (i_q * t + i_p * math.sin(t)) / math.pi
        i_fund = (2.0 * i_q * math.sin(t) + i_p * (t + math.sin(t) * math.cos(t))) / math.pi
        return (i_dc, complex(i_fund))

    @classmethod
    def class_b(cls, i_max: float, v_dc: float, v_knee: float = 0.0) -> "ActiveCellModel":
        return cls(math.pi, i_max, v_dc, v_knee)

    @classmethod
    def class_c_turn_on(
        cls, turn_on: float, i_max: float, v_dc: float, v_knee: float = 0.0
    ) -> "ActiveCellModel":
        """Class-C cell that starts conducting at drive ``turn_on``.

        The full-drive conduction angle follows from cos(phi/2) = turn_on.
        """
        if not 0.0 < turn_on < 1.0:
            raise ValueError(f"turn-on drive must lie in (0, 1), got {turn_on}")
        return cls(2.0 * math.acos(turn_on), i_max, v_dc, v_knee)


@dataclass(frozen=True)
class IdealMainCell:
    """Textbook main path: fundamental current linear in drive, class-B
    DC law I_dc = (2/pi) * I_fund."""

    alpha: float
    i_scale: float
    v_dc: float
    v_knee: float = 0.0

    def currents(self, v: float) -> tuple[float, complex]:
        i = v * 2.0 / (1.0 + self.alpha) * self.i_scale
        return (2.0 / math.pi) * i, complex(i)


@dataclass(frozen=True)
class IdealAuxCell:
    """Textbook auxiliary path: fundamental current follows the ideal
    load-modulation ramp of the main drive, class-B DC law."""

    alpha: float
    i_scale: float
    v_dc: float
    v_knee: float = 0.0

    def currents(self, v: float) -> tuple[float, complex]:
        i_main_norm = v * 2.0 / (1.0 + self.alpha)
        i = current_profile(self.alpha, i_main_norm) * self.i_scale
        return (2.0 / math.pi) * i, complex(i)


def ideal_doherty_cells(cfg: DohertyConfig, v_dc: float) -> tuple[IdealMainCell, IdealAuxCell]:
    """Cell pair scaled so the main device saturates (|V| = v_dc) exactly
    at peak drive into its load-pull target."""
    i_scale = v_dc / cfg.r_opt
    return (
        IdealMainCell(cfg.alpha, i_scale, v_dc),
        IdealAuxCell(cfg.alpha, i_scale, v_dc),
    )
