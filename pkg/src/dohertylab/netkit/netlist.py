"""Netlist container: placed elements, named ports, JSON round-trip."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .elements import (
    Capacitor,
    Component,
    CoupledInductors,
    CurrentSource,
    IdealTransformer,
    Inductor,
    Resistor,
    TransmissionLine,
)

__all__ = ["Placed", "Netlist", "NetworkTopologyError"]


class NetworkTopologyError(ValueError):
    """Raised when a netlist is structurally unsound (floating nodes,
    missing port nodes, duplicate element names)."""

    def __init__(self, msg: str, node: str | None = None, element: str | None = None):
        super().__init__(msg)
        self.node = node
        self.element = element


@dataclass(frozen=True)
class Placed:
    name: str
    component: Component
    nodes: tuple[str, ...]

    def __post_init__(self):
        want = 4 if isinstance(self.component, (CoupledInductors, IdealTransformer)) else 2
        if len(self.nodes) != want:
            raise NetworkTopologyError(
                f"{type(self.component).__name__} '{self.name}' needs {want} nodes, "
                f"got {len(self.nodes)}",
                element=self.name,
            )


@dataclass
class Netlist:
    """Multiport linear AC circuit.

    Ports are (plus, minus) node pairs; the minus node defaults to ground.
    ``load_port`` marks the port whose resistive termination counts as the
    delivered-power destination in solver results.
    """

    f0: float
    ground: str = "0"
    elements: list[Placed] = field(default_factory=list)
    ports: dict[str, tuple[str, str]] = field(default_factory=dict)
    load_port: str | None = None

    def add(self, name: str, component: Component, *nodes: str) -> Placed:
        if any(e.name == name for e in self.elements):
            raise NetworkTopologyError(f"duplicate element name '{name}'", element=name)
        placed = Placed(name, component, tuple(nodes))
        self.elements.append(placed)
        return placed

    def add_port(self, name: str, plus: str, minus: str | None = None) -> None:
        self.ports[name] = (plus, minus if minus is not None else self.ground)

    def element(self, name: str) -> Placed:
        for e in self.elements:
            if e.name == name:
                return e
        raise KeyError(name)

    def nodes(self) -> list[str]:
        """All node names, ground excluded, in sorted order."""
        seen = set()
        for e in self.elements:
            seen.update(e.nodes)
        for plus, minus in self.ports.values():
            seen.add(plus)
            seen.add(minus)
        seen.discard(self.ground)
        return sorted(seen)

    def copy(self) -> "Netlist":
        return Netlist(
            f0=self.f0,
            ground=self.ground,
            elements=list(self.elements),
            ports=dict(self.ports),
            load_port=self.load_port,
        )

    def validate(self) -> None:
        """Check structural invariants; raises NetworkTopologyError."""
        if self.f0 <= 0:
            raise NetworkTopologyError(f"reference frequency must be positive, got {self.f0}")
        node_set = set(self.nodes()) | {self.ground}
        for pname, (plus, minus) in self.ports.items():
            for n in (plus, minus):
                if n not in node_set:
                    raise NetworkTopologyError(
                        f"port '{pname}' references unknown node '{n}'", node=n
                    )
        if self.load_port is not None and self.load_port not in self.ports:
            raise NetworkTopologyError(f"load port '{self.load_port}' is not a port")

        # Every node must reach ground through the element graph, otherwise
        # its potential is undetermined and the MNA matrix is singular.
        adjacency: dict[str, set[str]] = {n: set() for n in node_set}

        def link(a: str, b: str) -> None:
            adjacency[a].add(b)
            adjacency[b].add(a)

        for e in self.elements:
            comp = e.component
            if isinstance(comp, (CoupledInductors, IdealTransformer)):
                link(e.nodes[0], e.nodes[1])
                link(e.nodes[2], e.nodes[3])
            elif isinstance(comp, TransmissionLine):
                # A line is a grounded two-port: both terminals tie to ground.
                link(e.nodes[0], e.nodes[1])
                link(e.nodes[0], self.ground)
                link(e.nodes[1], self.ground)
            else:
                link(e.nodes[0], e.nodes[1])

        reached = {self.ground}
        stack = [self.ground]
        while stack:
            for neighbor in adjacency[stack.pop()]:
                if neighbor not in reached:
                    reached.add(neighbor)
                    stack.append(neighbor)
        floating = sorted(node_set - reached)
        if floating:
            raise NetworkTopologyError(
                f"node '{floating[0]}' has no path to ground (floating subcircuit)",
                node=floating[0],
            )

    # ------------------------------------------------------------------
    # JSON round-trip (schema documented in dohertylab.cli)
    # ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        out = {
            "f0_hz": self.f0,
            "ground": self.ground,
            "ports": {k: list(v) for k, v in self.ports.items()},
            "elements": [_element_to_json(e) for e in self.elements],
        }
        if self.load_port is not None:
            out["load_port"] = self.load_port
        return out

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Netlist":
        net = cls(f0=float(doc["f0_hz"]), ground=str(doc.get("ground", "0")))
        for name, (plus, minus) in doc.get("ports", {}).items():
            net.add_port(str(name), str(plus), str(minus))
        net.load_port = doc.get("load_port")
        for entry in doc.get("elements", []):
            net.add(str(entry["name"]), _component_from_json(entry), *entry["nodes"])
        net.validate()
        return net


def _maybe_q(comp) -> dict:
    return {} if math.isinf(comp.q) else {"q": comp.q}


def _element_to_json(e: Placed) -> dict:
    comp = e.component
    base = {"name": e.name, "nodes": list(e.nodes)}
    if isinstance(comp, Resistor):
        return base | {"kind": "resistor", "ohms": comp.ohms}
    if isinstance(comp, Inductor):
        return base | {"kind": "inductor", "henries": comp.henries} | _maybe_q(comp)
    if isinstance(comp, Capacitor):
        return base | {"kind": "capacitor", "farads": comp.farads} | _maybe_q(comp)
    if isinstance(comp, CoupledInductors):
        return base | {
            "kind": "coupled_inductors",
            "l_p_henries": comp.l_p,
            "n": comp.n,
            "k": comp.k,
        } | _maybe_q(comp)
    if isinstance(comp, IdealTransformer):
        return base | {"kind": "ideal_transformer", "n": comp.n}
    if isinstance(comp, TransmissionLine):
        out = base | {
            "kind": "tline",
            "z0_ohm": comp.z0,
            "theta_deg": comp.theta_deg,
            "f_ref_hz": comp.f_ref,
        }
        if comp.loss_db_per_quarter:
            out["loss_db_per_quarter"] = comp.loss_db_per_quarter
        return out
    if isinstance(comp, CurrentSource):
        return base | {"kind": "current_source", "amps": [comp.amps.real, comp.amps.imag]}
    raise TypeError(f"cannot serialize {type(comp).__name__}")


def _component_from_json(entry: dict) -> Component:
    kind = entry.get("kind")
    q = float(entry.get("q", math.inf))
    if kind == "resistor":
        return Resistor(float(entry["ohms"]))
    if kind == "inductor":
        return Inductor(float(entry["henries"]), q=q)
    if kind == "capacitor":
        return Capacitor(float(entry["farads"]), q=q)
    if kind == "coupled_inductors":
        return CoupledInductors(
            float(entry["l_p_henries"]), float(entry["n"]), float(entry["k"]), q=q
        )
    if kind == "ideal_transformer":
        return IdealTransformer(float(entry["n"]))
    if kind == "tline":
        return TransmissionLine(
            float(entry["z0_ohm"]),
            float(entry["theta_deg"]),
            float(entry["f_ref_hz"]),
            loss_db_per_quarter=float(entry.get("loss_db_per_quarter", 0.0)),
        )
    if kind == "current_source":
        re_i, im_i = entry["amps"]
        return CurrentSource(complex(float(re_i), float(im_i)))
    raise NetworkTopologyError(f"unknown element kind '{kind}'", element=entry.get("name"))
