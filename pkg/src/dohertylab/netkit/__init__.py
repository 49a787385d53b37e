"""General linear AC multiport network engine.

Element models, modified nodal analysis, two-port conversions, power
accounting and Touchstone I/O.  This is the simulation substrate used to
cross-check every closed-form combiner result in the rest of the package.
"""

from .elements import (
    Capacitor,
    Component,
    CoupledInductors,
    CurrentSource,
    IdealTransformer,
    Inductor,
    Resistor,
    TransmissionLine,
    admittance,
    impedance,
)
from .mna import AnalysisResult, SingularSystemError, assemble, solve
from .netlist import Netlist, NetworkTopologyError, Placed
from .touchstone import (
    TouchstoneData,
    export_touchstone,
    read_touchstone,
    s_parameters,
    write_touchstone,
)
from .twoport import Series, Shunt, TwoPortMatrix, input_impedance, two_port_matrix

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
    "Netlist",
    "Placed",
    "NetworkTopologyError",
    "AnalysisResult",
    "SingularSystemError",
    "assemble",
    "solve",
    "passive_efficiency",
    "Series",
    "Shunt",
    "TwoPortMatrix",
    "two_port_matrix",
    "input_impedance",
    "s_parameters",
    "export_touchstone",
    "write_touchstone",
    "read_touchstone",
    "TouchstoneData",
]


class EfficiencyUndefinedError(ValueError):
    """Raised when passive efficiency is requested with no injected power."""


def passive_efficiency(netlist, freq, excitations, load_port):
    """Fraction of injected power that reaches the load-port termination.

    Equals 1.0 for lossless networks.  ``load_port`` must carry a resistive
    termination element; raises :class:`EfficiencyUndefinedError` when the
    total injected power is not positive.
    """
    if load_port not in netlist.ports:
        raise ValueError(f"unknown load port '{load_port}'")
    work = netlist.copy()
    work.load_port = load_port
    from .mna import _load_termination_names

    if not _load_termination_names(work):
        raise ValueError(f"load port '{load_port}' has no resistive termination")
    result = solve(work, freq, excitations)
    injected = result.total_injected()
    if injected <= 0.0:
        raise EfficiencyUndefinedError(
            f"total injected power {injected:.3e} W; efficiency undefined"
        )
    return result.load_power / injected
