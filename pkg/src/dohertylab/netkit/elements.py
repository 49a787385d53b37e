"""Linear AC element models.

Components carry values only; wiring them into a circuit is the job of
:class:`~dohertylab.netkit.netlist.Netlist`.  All values are SI (ohms,
henries, farads, hertz, amperes) and phasors are peak amplitudes, so the
average power in a resistor is |V|^2 / (2R).

Loss model: a finite-Q inductor is a series resistance R = wL/Q and a
finite-Q capacitor a shunt conductance G = wC/Q, both evaluated at the
analysis frequency (Q is held constant over frequency).  Transmission
lines take a uniform attenuation in dB per quarter wavelength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Resistor",
    "Inductor",
    "Capacitor",
    "CoupledInductors",
    "IdealTransformer",
    "TransmissionLine",
    "CurrentSource",
    "Component",
    "impedance",
    "admittance",
]

_DB_TO_NEPER = math.log(10.0) / 20.0


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class Resistor:
    ohms: float

    def __post_init__(self):
        _require(self.ohms > 0, f"resistance must be positive, got {self.ohms}")


@dataclass(frozen=True)
class Inductor:
    henries: float
    q: float = math.inf

    def __post_init__(self):
        _require(self.henries > 0, f"inductance must be positive, got {self.henries}")
        _require(self.q > 0, f"Q must be positive or inf, got {self.q}")


@dataclass(frozen=True)
class Capacitor:
    farads: float
    q: float = math.inf

    def __post_init__(self):
        _require(self.farads > 0, f"capacitance must be positive, got {self.farads}")
        _require(self.q > 0, f"Q must be positive or inf, got {self.q}")


@dataclass(frozen=True)
class CoupledInductors:
    """Magnetically coupled winding pair.

    ``l_p`` is the primary inductance, ``n`` the turn ratio (secondary
    inductance is n^2 * l_p) and ``k`` the coupling coefficient, so the
    mutual inductance is k * n * l_p.  A finite ``q`` applies the standard
    inductor rule (series R = wL/Q) to the two inductors of the pair's
    exact decomposition - series leakage (1-k^2)*l_p and shunt magnetizing
    k^2*l_p ahead of an ideal n/k transformer - so the pair and its
    decomposition stay interchangeable at any Q.
    """

    l_p: float
    n: float
    k: float
    q: float = math.inf

    def __post_init__(self):
        _require(self.l_p > 0, f"primary inductance must be positive, got {self.l_p}")
        _require(self.n > 0, f"turn ratio must be positive, got {self.n}")
        _require(0.0 < self.k < 1.0, f"coupling must lie in (0, 1), got {self.k}")
        _require(self.q > 0, f"Q must be positive or inf, got {self.q}")

    @property
    def l_s(self) -> float:
        return self.n * self.n * self.l_p

    @property
    def l_mutual(self) -> float:
        return self.k * self.n * self.l_p

    @property
    def l_leak(self) -> float:
        """Series leakage inductance of the equivalent-circuit decomposition."""
        return (1.0 - self.k * self.k) * self.l_p

    @property
    def l_mag(self) -> float:
        """Shunt magnetizing inductance of the equivalent-circuit decomposition."""
        return self.k * self.k * self.l_p

    @property
    def ideal_ratio(self) -> float:
        """Turns ratio of the ideal transformer closing the decomposition."""
        return self.n / self.k

    def z_matrix(self, freq: float) -> tuple[complex, complex, complex]:
        """(z11, z12, z22) of the pair at ``freq``, loss included.

        Built from the decomposition so that the lossless entries are the
        textbook jw(L_p, M, L_s) and finite Q enters through the leakage
        and magnetizing inductors.
        """
        w = 2.0 * math.pi * freq
        r_per_l = 0.0 if math.isinf(self.q) else w / self.q
        z_leak = complex(r_per_l * self.l_leak, w * self.l_leak)
        z_mag = complex(r_per_l * self.l_mag, w * self.l_mag)
        ratio = self.ideal_ratio
        return z_leak + z_mag, ratio * z_mag, ratio * ratio * z_mag


@dataclass(frozen=True)
class IdealTransformer:
    """Lossless ideal transformer, ``n`` = secondary/primary voltage ratio."""

    n: float

    def __post_init__(self):
        _require(self.n > 0, f"turn ratio must be positive, got {self.n}")


@dataclass(frozen=True)
class TransmissionLine:
    """Uniform line: ``theta_deg`` electrical length at ``f_ref`` hertz.

    Electrical length scales linearly with frequency.  Loss, when present,
    is ``loss_db_per_quarter`` dB per 90 degrees of electrical length.
    """

    z0: float
    theta_deg: float
    f_ref: float
    loss_db_per_quarter: float = 0.0

    def __post_init__(self):
        _require(self.z0 > 0, f"characteristic impedance must be positive, got {self.z0}")
        _require(self.theta_deg > 0, f"electrical length must be positive, got {self.theta_deg}")
        _require(self.f_ref > 0, f"reference frequency must be positive, got {self.f_ref}")
        _require(self.loss_db_per_quarter >= 0, "line loss cannot be negative")

    def gamma_length(self, freq: float) -> complex:
        """Propagation constant times length, alpha*l + j*beta*l, at ``freq``."""
        theta = math.radians(self.theta_deg) * freq / self.f_ref
        alpha_l = self.loss_db_per_quarter * _DB_TO_NEPER * (theta / (math.pi / 2.0))
        return complex(alpha_l, theta)


@dataclass(frozen=True)
class CurrentSource:
    """AC current source; ``amps`` is the complex peak current pushed into
    the first attachment node (and pulled out of the second)."""

    amps: complex


Component = (
    Resistor
    | Inductor
    | Capacitor
    | CoupledInductors
    | IdealTransformer
    | TransmissionLine
    | CurrentSource
)


def impedance(comp: Resistor | Inductor | Capacitor, freq: float) -> complex:
    """Series impedance of a two-terminal component at ``freq``, loss included."""
    w = 2.0 * math.pi * freq
    if isinstance(comp, Resistor):
        return complex(comp.ohms)
    if isinstance(comp, Inductor):
        r_series = 0.0 if math.isinf(comp.q) else w * comp.henries / comp.q
        return complex(r_series, w * comp.henries)
    if isinstance(comp, Capacitor):
        # Shunt-G loss model expressed as the equivalent series impedance.
        return 1.0 / admittance(comp, freq)
    raise TypeError(f"no series impedance for {type(comp).__name__}")


def admittance(comp: Resistor | Inductor | Capacitor, freq: float) -> complex:
    """Admittance of a two-terminal component at ``freq``, loss included."""
    w = 2.0 * math.pi * freq
    if isinstance(comp, Capacitor):
        g_shunt = 0.0 if math.isinf(comp.q) else w * comp.farads / comp.q
        return complex(g_shunt, w * comp.farads)
    if isinstance(comp, (Resistor, Inductor)):
        return 1.0 / impedance(comp, freq)
    raise TypeError(f"no admittance for {type(comp).__name__}")
