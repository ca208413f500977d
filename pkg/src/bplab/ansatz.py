"""Benchmark circuit families and the variational cost function.

Two families: the hardware-efficient ansatz (HEA, RY-RX-RY rotations per
qubit then a CZ chain, d = 3*N*L parameters) and the random Pauli ansatz
(RPA, fixed RY(pi/4) layer then one randomly axis-chosen rotation per qubit
per layer plus the CZ chain, d = N*L parameters).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .sim import (
    Gate,
    PauliObservable,
    StateVector,
    apply_circuit,
    expectation,
    expectation_batch,
    init_zero_state,
    run_batch,
)

FAMILY_HEA = "HEA"
FAMILY_RPA = "RPA"
FAMILY_CUSTOM = "CUSTOM"
FAMILIES = (FAMILY_HEA, FAMILY_RPA, FAMILY_CUSTOM)

RPA_FIXED_ANGLE = np.pi / 4

_CIRCUIT_SCHEMA = 1


@dataclass(frozen=True)
class RpaStructure:
    """The RPA's random axis choices: a layers x qubits grid of X/Y/Z labels."""

    choices: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(str(p).upper() for p in row) for row in self.choices)
        if not rows or not rows[0]:
            raise ValueError("structure must have at least one layer and one qubit")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged structure rows")
            for p in row:
                if p not in ("X", "Y", "Z"):
                    raise ValueError(f"unknown Pauli label {p!r}")
        object.__setattr__(self, "choices", rows)

    @property
    def layers(self) -> int:
        return len(self.choices)

    @property
    def n_qubits(self) -> int:
        return len(self.choices[0])

    @classmethod
    def random(cls, n_qubits: int, layers: int, seed) -> "RpaStructure":
        """Draw axes i.i.d. uniform from {X, Y, Z}; same seed, same structure."""
        rng = np.random.default_rng(seed)
        codes = rng.integers(0, 3, size=(layers, n_qubits))
        labels = np.array(["X", "Y", "Z"])
        return cls(tuple(tuple(labels[c] for c in row) for row in codes))


@dataclass(frozen=True)
class Circuit:
    """Immutable ordered gate list with parameter-slot metadata."""

    n_qubits: int
    gates: tuple[Gate, ...]
    param_count: int
    family: str
    layers: int | None = None
    structure_seed: int | None = None
    structure: RpaStructure | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        slots = Counter(
            g.param_slot for g in self.gates if g.param_slot is not None
        )
        if sorted(slots) != list(range(self.param_count)) or any(
            v != 1 for v in slots.values()
        ):
            raise ValueError("parameter slots must cover 0..d-1 exactly once")
        for g in self.gates:
            if any(q >= self.n_qubits for q in g.targets):
                raise ValueError(f"gate targets {g.targets} out of range")


def _cz_chain(n_qubits):
    return [Gate.cz(j, j + 1) for j in range(n_qubits - 1)]


def build_hea(n_qubits: int, layers: int) -> Circuit:
    """Hardware-efficient ansatz: per layer, RY-RX-RY on each qubit, then CZs.

    Slots are numbered in application order, so slot 0 is qubit 0's first RY
    of layer 0.
    """
    if n_qubits < 1 or layers < 1:
        raise ValueError("n_qubits and layers must be >= 1")
    gates: list[Gate] = []
    slot = 0
    for _ in range(layers):
        for q in range(n_qubits):
            for kind in ("RY", "RX", "RY"):
                gates.append(Gate.rotation(kind, q, slot=slot))
                slot += 1
        gates.extend(_cz_chain(n_qubits))
    return Circuit(
        n_qubits=n_qubits,
        gates=tuple(gates),
        param_count=slot,
        family=FAMILY_HEA,
        layers=layers,
    )


def build_rpa_from_structure(
    structure: RpaStructure, structure_seed=None
) -> Circuit:
    """Assemble the RPA circuit for a given axis-choice grid."""
    n_qubits = structure.n_qubits
    gates: list[Gate] = [
        Gate.rotation("RY", q, angle=RPA_FIXED_ANGLE) for q in range(n_qubits)
    ]
    slot = 0
    for row in structure.choices:
        for q, pauli in enumerate(row):
            gates.append(Gate.rotation("R" + pauli, q, slot=slot))
            slot += 1
        gates.extend(_cz_chain(n_qubits))
    return Circuit(
        n_qubits=n_qubits,
        gates=tuple(gates),
        param_count=slot,
        family=FAMILY_RPA,
        layers=structure.layers,
        structure_seed=structure_seed,
        structure=structure,
    )


def build_rpa(n_qubits: int, layers: int, structure_seed) -> Circuit:
    """Random Pauli ansatz with axes drawn deterministically from structure_seed."""
    if n_qubits < 1 or layers < 1:
        raise ValueError("n_qubits and layers must be >= 1")
    structure = RpaStructure.random(n_qubits, layers, structure_seed)
    return build_rpa_from_structure(structure, structure_seed=structure_seed)


def build_family(family: str, n_qubits: int, layers: int, structure_seed=None) -> Circuit:
    if family == FAMILY_HEA:
        return build_hea(n_qubits, layers)
    if family == FAMILY_RPA:
        return build_rpa(n_qubits, layers, structure_seed)
    raise ValueError(f"cannot build family {family!r}")


def cost(circuit: Circuit, params, obs: PauliObservable) -> float:
    """C(theta) = <0|U(theta)^dag H U(theta)|0>."""
    state = init_zero_state(circuit.n_qubits)
    apply_circuit(state, circuit, params)
    return expectation(state, obs)


def cost_batch(circuit: Circuit, params_batch, obs: PauliObservable) -> np.ndarray:
    """Vectorized cost over a (B, d) batch of parameter vectors."""
    amps = run_batch(circuit, params_batch)
    return expectation_batch(amps, circuit.n_qubits, obs)


# ---------------------------------------------------------------------------
# JSON serialization, bit-exact on reload
# ---------------------------------------------------------------------------

def circuit_to_json(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        entry = {"kind": g.kind, "targets": list(g.targets)}
        if g.param_slot is not None:
            entry["param_slot"] = g.param_slot
        if g.fixed_angle is not None:
            entry["fixed_angle"] = g.fixed_angle
        gates.append(entry)
    return {
        "schema_version": _CIRCUIT_SCHEMA,
        "n_qubits": circuit.n_qubits,
        "layers": circuit.layers,
        "family": circuit.family,
        "structure_seed": circuit.structure_seed,
        "structure": [list(row) for row in circuit.structure.choices]
        if circuit.structure is not None
        else None,
        "param_count": circuit.param_count,
        "gates": gates,
    }


def circuit_from_json(data: dict) -> Circuit:
    gates = tuple(
        Gate(
            kind=g["kind"],
            targets=tuple(g["targets"]),
            param_slot=g.get("param_slot"),
            fixed_angle=g.get("fixed_angle"),
        )
        for g in data["gates"]
    )
    structure = data.get("structure")
    return Circuit(
        n_qubits=data["n_qubits"],
        gates=gates,
        param_count=data["param_count"],
        family=data["family"],
        layers=data.get("layers"),
        structure_seed=data.get("structure_seed"),
        structure=RpaStructure(tuple(tuple(r) for r in structure))
        if structure is not None
        else None,
    )
