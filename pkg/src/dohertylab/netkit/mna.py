"""Complex-valued modified nodal analysis at a single frequency.

Unknowns are the non-ground node voltages plus auxiliary branch currents
for elements that are awkward or singular as pure admittance stamps:

* transmission lines get two branch currents and are stamped through
  their chain (ABCD) relation, which stays regular at any electrical
  length (a Y stamp blows up at multiples of 180 degrees);
* coupled windings get two branch currents and are stamped through the
  2x2 impedance relation, which stays regular as k -> 1;
* ideal transformers get one branch current and a voltage-relation row,
  so they remain solvable where an impedance stamp does not exist.

Sign conventions: KCL rows sum currents *leaving* each node through
elements; sources and port excitations enter on the right-hand side.
Phasors are peak amplitudes (P = |V|^2 / 2R).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .elements import (
    Capacitor,
    CoupledInductors,
    CurrentSource,
    IdealTransformer,
    Inductor,
    Resistor,
    TransmissionLine,
    admittance,
)
from .netlist import Netlist

__all__ = ["AnalysisResult", "SingularSystemError", "solve", "assemble", "MnaSystem"]

#: relative KCL residual above which a solution is rejected as unreliable
RESIDUAL_TOL = 1e-9


class SingularSystemError(RuntimeError):
    """The MNA matrix could not be solved reliably."""

    def __init__(self, msg: str, node: str | None = None, element: str | None = None):
        super().__init__(msg)
        self.node = node
        self.element = element


@dataclass
class AnalysisResult:
    """Solution of one AC operating point.

    ``branch_currents`` maps element name to per-winding/per-port currents
    flowing *into* the element at its first node of each terminal pair.
    Powers are time-averaged watts.
    """

    freq: float
    node_voltages: dict[str, complex]
    branch_currents: dict[str, tuple[complex, ...]]
    element_power: dict[str, float]
    port_injected_power: dict[str, float]
    load_power: float
    kcl_residual: float

    def voltage(self, node: str) -> complex:
        return self.node_voltages[node]

    def port_voltage(self, netlist: Netlist, port: str) -> complex:
        plus, minus = netlist.ports[port]
        return self.node_voltages[plus] - self.node_voltages[minus]

    def total_injected(self) -> float:
        return sum(self.port_injected_power.values())

    def total_dissipated(self) -> float:
        return sum(self.element_power.values())

    def power_balance_residual(self) -> float:
        """Relative imbalance of injected = dissipated + delivered."""
        injected = self.total_injected()
        out = self.total_dissipated() + self.load_power
        scale = max(abs(injected), abs(out), 1e-300)
        return abs(injected - out) / scale


@dataclass
class MnaSystem:
    """Assembled matrix with its index bookkeeping."""

    netlist: Netlist
    freq: float
    matrix: np.ndarray
    source_rhs: np.ndarray  # contributions from current-source elements
    node_index: dict[str, int]
    aux_index: dict[str, tuple[int, ...]]  # element name -> aux unknown rows
    names: list[str]  # unknown labels, for diagnostics

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def rhs(self, excitations: dict[str, complex]) -> np.ndarray:
        b = self.source_rhs.copy()
        for port, current in excitations.items():
            if port not in self.netlist.ports:
                raise ValueError(f"unknown port '{port}'")
            plus, minus = self.netlist.ports[port]
            ip = self.node_index.get(plus, -1)
            im = self.node_index.get(minus, -1)
            if ip >= 0:
                b[ip] += current
            if im >= 0:
                b[im] -= current
        return b


def assemble(netlist: Netlist, freq: float) -> MnaSystem:
    """Build the MNA matrix of ``netlist`` at ``freq`` hertz."""
    if freq <= 0:
        raise ValueError(f"analysis frequency must be positive, got {freq}")
    netlist.validate()

    nodes = netlist.nodes()
    node_index = {n: i for i, n in enumerate(nodes)}
    names = [f"V({n})" for n in nodes]

    aux_index: dict[str, tuple[int, ...]] = {}
    next_row = len(nodes)
    for e in netlist.elements:
        if isinstance(e.component, (TransmissionLine, CoupledInductors)):
            aux_index[e.name] = (next_row, next_row + 1)
            names += [f"I({e.name}:1)", f"I({e.name}:2)"]
            next_row += 2
        elif isinstance(e.component, IdealTransformer):
            aux_index[e.name] = (next_row,)
            names.append(f"I({e.name})")
            next_row += 1

    n = next_row
    A = np.zeros((n, n), dtype=complex)
    b = np.zeros(n, dtype=complex)

    def idx(node: str) -> int:
        return node_index.get(node, -1)  # ground -> -1

    def stamp_admittance(n1: int, n2: int, y: complex) -> None:
        if n1 >= 0:
            A[n1, n1] += y
        if n2 >= 0:
            A[n2, n2] += y
        if n1 >= 0 and n2 >= 0:
            A[n1, n2] -= y
            A[n2, n1] -= y

    for e in netlist.elements:
        comp = e.component
        if isinstance(comp, (Resistor, Inductor, Capacitor)):
            stamp_admittance(idx(e.nodes[0]), idx(e.nodes[1]), admittance(comp, freq))

        elif isinstance(comp, CurrentSource):
            n1, n2 = idx(e.nodes[0]), idx(e.nodes[1])
            if n1 >= 0:
                b[n1] += comp.amps
            if n2 >= 0:
                b[n2] -= comp.amps

        elif isinstance(comp, TransmissionLine):
            n1, n2 = idx(e.nodes[0]), idx(e.nodes[1])
            a1, a2 = aux_index[e.name]
            gl = comp.gamma_length(freq)
            ch, sh = cmath.cosh(gl), cmath.sinh(gl)
            # chain relation with i1 into port 1, i2 into port 2:
            #   V1 = ch*V2 + z0*sh*(-i2)
            #   i1 = (sh/z0)*V2 + ch*(-i2)
            if n1 >= 0:
                A[n1, a1] += 1.0
                A[a1, n1] += 1.0
            if n2 >= 0:
                A[n2, a2] += 1.0
                A[a1, n2] -= ch
                A[a2, n2] -= sh / comp.z0
            A[a1, a2] += comp.z0 * sh
            A[a2, a1] += 1.0
            A[a2, a2] += ch

        elif isinstance(comp, CoupledInductors):
            p1, p2, s1, s2 = (idx(nd) for nd in e.nodes)
            ap, as_ = aux_index[e.name]
            zp, zm, zs = comp.z_matrix(freq)
            for node, aux, sign in ((p1, ap, 1.0), (p2, ap, -1.0), (s1, as_, 1.0), (s2, as_, -1.0)):
                if node >= 0:
                    A[node, aux] += sign
            # (Vp1 - Vp2) = zp*ip + zm*is ; (Vs1 - Vs2) = zm*ip + zs*is
            if p1 >= 0:
                A[ap, p1] += 1.0
            if p2 >= 0:
                A[ap, p2] -= 1.0
            A[ap, ap] -= zp
            A[ap, as_] -= zm
            if s1 >= 0:
                A[as_, s1] += 1.0
            if s2 >= 0:
                A[as_, s2] -= 1.0
            A[as_, ap] -= zm
            A[as_, as_] -= zs

        elif isinstance(comp, IdealTransformer):
            p1, p2, s1, s2 = (idx(nd) for nd in e.nodes)
            (a,) = aux_index[e.name]
            # aux unknown j = current delivered out of the secondary; the
            # primary then draws n*j.  Row a enforces Vs = n*Vp.
            for node, sign in ((p1, comp.n), (p2, -comp.n), (s1, -1.0), (s2, 1.0)):
                if node >= 0:
                    A[node, a] += sign
            if s1 >= 0:
                A[a, s1] += 1.0
            if s2 >= 0:
                A[a, s2] -= 1.0
            if p1 >= 0:
                A[a, p1] -= comp.n
            if p2 >= 0:
                A[a, p2] += comp.n

        else:
            raise TypeError(f"unsupported component {type(comp).__name__}")

    return MnaSystem(netlist, freq, A, b, node_index, aux_index, names)


def _diagnose_singular(system: MnaSystem) -> SingularSystemError:
    A = system.matrix
    for i in range(system.size):
        if not np.any(A[i, :]) or not np.any(A[:, i]):
            label = system.names[i]
            node = label[2:-1] if label.startswith("V(") else None
            element = label[2:-1].split(":")[0] if label.startswith("I(") else None
            return SingularSystemError(
                f"singular system: no constraints for unknown {label}",
                node=node,
                element=element,
            )
    return SingularSystemError(
        "singular system: the network contains a degenerate (all-ideal) loop "
        "or an unconstrained node"
    )


def _solve_columns(system: MnaSystem, rhs: np.ndarray) -> np.ndarray:
    try:
        x = np.linalg.solve(system.matrix, rhs)
    except np.linalg.LinAlgError:
        raise _diagnose_singular(system) from None
    residual = np.abs(system.matrix @ x - rhs).max()
    scale = max(np.abs(rhs).max(), 1.0)
    if not np.isfinite(residual) or residual > 1e-6 * scale:
        raise _diagnose_singular(system)
    return x


def solve(
    netlist: Netlist,
    freq: float,
    excitations: dict[str, complex] | None = None,
) -> AnalysisResult:
    """Solve ``netlist`` at ``freq`` with per-port current drives.

    ``excitations`` maps port names to complex peak currents injected into
    the port plus node.  Current-source elements in the netlist contribute
    as well.  Raises :class:`SingularSystemError` on degenerate systems.
    """
    excitations = dict(excitations or {})
    system = assemble(netlist, freq)
    if not excitations and not any(
        isinstance(e.component, CurrentSource) for e in netlist.elements
    ):
        raise ValueError("no excitation: provide port currents or source elements")
    b = system.rhs(excitations)
    x = _solve_columns(system, b)

    kcl_residual = float(np.abs(system.matrix @ x - b).max() / max(np.abs(b).max(), 1e-300))
    if kcl_residual > RESIDUAL_TOL:
        raise SingularSystemError(
            f"solution rejected: KCL residual {kcl_residual:.2e} exceeds {RESIDUAL_TOL}"
        )
    return _package(system, excitations, x, kcl_residual)


def _package(
    system: MnaSystem,
    excitations: dict[str, complex],
    x: np.ndarray,
    kcl_residual: float,
) -> AnalysisResult:
    netlist, freq = system.netlist, system.freq

    def v(node: str) -> complex:
        i = system.node_index.get(node, -1)
        return complex(x[i]) if i >= 0 else 0j

    node_voltages = {n: complex(x[i]) for n, i in system.node_index.items()}
    node_voltages[netlist.ground] = 0j

    branch_currents: dict[str, tuple[complex, ...]] = {}
    element_power: dict[str, float] = {}
    load_resistors = _load_termination_names(netlist)
    load_power = 0.0

    for e in netlist.elements:
        comp = e.component
        if isinstance(comp, (Resistor, Inductor, Capacitor)):
            dv = v(e.nodes[0]) - v(e.nodes[1])
            i_in = admittance(comp, freq) * dv
            branch_currents[e.name] = (i_in,)
            p = 0.5 * (dv * i_in.conjugate()).real
        elif isinstance(comp, CurrentSource):
            dv = v(e.nodes[0]) - v(e.nodes[1])
            branch_currents[e.name] = (comp.amps,)
            # a source *delivers* 0.5*Re(V I*); count it with the ports
            p = 0.0
        elif isinstance(comp, TransmissionLine):
            a1, a2 = system.aux_index[e.name]
            i1, i2 = complex(x[a1]), complex(x[a2])
            branch_currents[e.name] = (i1, i2)
            p = 0.5 * (v(e.nodes[0]) * i1.conjugate() + v(e.nodes[1]) * i2.conjugate()).real
        elif isinstance(comp, CoupledInductors):
            ap, as_ = system.aux_index[e.name]
            ip_, is_ = complex(x[ap]), complex(x[as_])
            branch_currents[e.name] = (ip_, is_)
            dvp = v(e.nodes[0]) - v(e.nodes[1])
            dvs = v(e.nodes[2]) - v(e.nodes[3])
            p = 0.5 * (dvp * ip_.conjugate() + dvs * is_.conjugate()).real
        elif isinstance(comp, IdealTransformer):
            (a,) = system.aux_index[e.name]
            j = complex(x[a])
            branch_currents[e.name] = (comp.n * j, -j)
            p = 0.0  # lossless by construction
        else:  # pragma: no cover - assemble() already rejects these
            raise TypeError(type(comp).__name__)

        if e.name in load_resistors:
            load_power += p
        else:
            element_power[e.name] = p

    port_injected: dict[str, float] = {}
    for port, current in excitations.items():
        plus, minus = netlist.ports[port]
        vp = v(plus) - v(minus)
        port_injected[port] = 0.5 * (vp * current.conjugate()).real
    for e in netlist.elements:
        if isinstance(e.component, CurrentSource):
            dv = v(e.nodes[0]) - v(e.nodes[1])
            port_injected[f"source:{e.name}"] = 0.5 * (dv * e.component.amps.conjugate()).real

    return AnalysisResult(
        freq=freq,
        node_voltages=node_voltages,
        branch_currents=branch_currents,
        element_power=element_power,
        port_injected_power=port_injected,
        load_power=load_power,
        kcl_residual=kcl_residual,
    )


def _load_termination_names(netlist: Netlist) -> set[str]:
    """Resistors sitting directly across the designated load port."""
    if netlist.load_port is None:
        return set()
    plus, minus = netlist.ports[netlist.load_port]
    return {
        e.name
        for e in netlist.elements
        if isinstance(e.component, Resistor) and set(e.nodes) == {plus, minus}
    }
