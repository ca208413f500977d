"""Dense statevector simulation of few-qubit circuits and Pauli expectation values.

Conventions: qubit 0 is the least significant bit of the basis index, rotation
gates are R_P(theta) = exp(-i * theta/2 * P), and CZ flips the sign of the
|11> component. All arithmetic is complex double precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 20

ROTATION_KINDS = ("RX", "RY", "RZ")
GATE_KINDS = ROTATION_KINDS + ("CZ",)
PAULI_LABELS = ("X", "Y", "Z")

_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """One circuit element: a single-qubit rotation or a CZ entangler.

    Rotations carry exactly one of ``param_slot`` (index into the parameter
    vector) or ``fixed_angle`` (radians). CZ carries neither.
    """

    kind: str
    targets: tuple[int, ...]
    param_slot: int | None = None
    fixed_angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        if any(q < 0 for q in self.targets):
            raise ValueError(f"negative qubit index in {self.targets}")
        if self.kind == "CZ":
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ValueError("CZ needs two distinct target qubits")
            if self.param_slot is not None or self.fixed_angle is not None:
                raise ValueError("CZ takes no parameter slot or angle")
        else:
            if len(self.targets) != 1:
                raise ValueError("rotation gates act on exactly one qubit")
            if (self.param_slot is None) == (self.fixed_angle is None):
                raise ValueError(
                    "rotation gates need exactly one of param_slot / fixed_angle"
                )
            if self.param_slot is not None and self.param_slot < 0:
                raise ValueError("param_slot must be nonnegative")

    @classmethod
    def rotation(cls, kind, qubit, slot=None, angle=None):
        return cls(kind, (qubit,), param_slot=slot, fixed_angle=angle)

    @classmethod
    def cz(cls, a, b):
        return cls("CZ", (a, b))


@dataclass
class StateVector:
    """Dense amplitude vector over the 2**n_qubits computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm_squared(self) -> float:
        a = self.amplitudes
        return float(np.sum(a.real * a.real + a.imag * a.imag))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


def init_zero_state(n_qubits: int) -> StateVector:
    """All-qubits-|0> state: unit amplitude on basis index 0."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


# ---------------------------------------------------------------------------
# Gate kernels. They accept amplitude arrays of shape (..., 2**n) so a single
# code path serves both one state and a batch of states; the per-row
# arithmetic is identical regardless of batch size, which keeps sampled
# results independent of how work is chunked across workers.
# ---------------------------------------------------------------------------

def _rotation_views(amps, n, qubit):
    shape = amps.shape[:-1] + (2 ** (n - 1 - qubit), 2, 2**qubit)
    view = amps.reshape(shape)
    return view, view[..., 0, :], view[..., 1, :]


def _broadcast_coeff(c, extra_dims):
    if np.ndim(c) == 0:
        return c
    return c.reshape(c.shape + (1,) * extra_dims)


def apply_rotation_kernel(amps, n, kind, qubit, theta):
    """In-place R_P(theta) on `qubit`; theta may be a scalar or a batch vector.

    Per-row arithmetic does not depend on the batch size, so splitting a
    batch into chunks reproduces the unsplit results exactly.
    """
    half = np.multiply(theta, 0.5)
    c = np.cos(half)
    s = np.sin(half)
    view, a0, a1 = _rotation_views(amps, n, qubit)
    if kind == "RZ":
        a0 *= _broadcast_coeff(c - 1j * s, 2)
        a1 *= _broadcast_coeff(c + 1j * s, 2)
        return
    # one batched 2x2 matmul along the qubit axis
    stack = np.empty(np.shape(theta) + (1, 2, 2), dtype=np.complex128)
    u = stack[..., 0, :, :]
    if kind == "RY":
        u[..., 0, 0] = c
        u[..., 0, 1] = -s
        u[..., 1, 0] = s
        u[..., 1, 1] = c
    elif kind == "RX":
        u[..., 0, 0] = c
        u[..., 0, 1] = -1j * s
        u[..., 1, 0] = -1j * s
        u[..., 1, 1] = c
    else:
        raise ValueError(f"not a rotation kind: {kind!r}")
    view[:] = np.matmul(stack if np.ndim(theta) else u, view)


def apply_cz_kernel(amps, n, qa, qb):
    """In-place CZ between qubits qa and qb: negate amplitudes with both bits set."""
    hi, lo = (qa, qb) if qa > qb else (qb, qa)
    shape = amps.shape[:-1] + (
        2 ** (n - 1 - hi),
        2,
        2 ** (hi - lo - 1),
        2,
        2**lo,
    )
    view = amps.reshape(shape)
    view[..., 1, :, 1, :] *= -1.0


def apply_gate(state: StateVector, gate: Gate, angle: float | None = None) -> StateVector:
    """Apply one gate to `state` in place and return it.

    `angle` must be supplied iff the gate has a param_slot.
    """
    n = state.n_qubits
    if any(q >= n for q in gate.targets):
        raise ValueError(f"gate targets {gate.targets} out of range for {n} qubits")
    if gate.kind == "CZ":
        if angle is not None:
            raise ValueError("CZ takes no angle")
        apply_cz_kernel(state.amplitudes, n, *gate.targets)
        return state
    if gate.param_slot is not None:
        if angle is None:
            raise ValueError("parameterized rotation needs an angle")
        theta = float(angle)
    else:
        if angle is not None:
            raise ValueError("fixed-angle rotation takes no explicit angle")
        theta = gate.fixed_angle
    apply_rotation_kernel(state.amplitudes, n, gate.kind, gate.targets[0], theta)
    return state


def apply_circuit(state: StateVector, circuit, params) -> StateVector:
    """Apply every gate of `circuit` in order, reading angles from `params`."""
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.param_count,):
        raise ValueError(
            f"expected {circuit.param_count} parameters, got shape {params.shape}"
        )
    n = state.n_qubits
    if circuit.n_qubits != n:
        raise ValueError("circuit and state disagree on qubit count")
    amps = state.amplitudes
    for gate in circuit.gates:
        if gate.kind == "CZ":
            apply_cz_kernel(amps, n, *gate.targets)
        elif gate.param_slot is not None:
            apply_rotation_kernel(amps, n, gate.kind, gate.targets[0], params[gate.param_slot])
        else:
            apply_rotation_kernel(amps, n, gate.kind, gate.targets[0], gate.fixed_angle)
    return state


def run_batch(circuit, params_batch) -> np.ndarray:
    """Run `circuit` from |0...0> for a batch of parameter vectors.

    params_batch has shape (B, d); returns a (B, 2**n) amplitude array.
    """
    params = np.asarray(params_batch, dtype=float)
    if params.ndim != 2 or params.shape[1] != circuit.param_count:
        raise ValueError(
            f"expected batch of {circuit.param_count}-vectors, got shape {params.shape}"
        )
    n = circuit.n_qubits
    amps = np.zeros((params.shape[0], 2**n), dtype=np.complex128)
    amps[:, 0] = 1.0
    for gate in circuit.gates:
        if gate.kind == "CZ":
            apply_cz_kernel(amps, n, *gate.targets)
        elif gate.param_slot is not None:
            apply_rotation_kernel(amps, n, gate.kind, gate.targets[0], params[:, gate.param_slot])
        else:
            apply_rotation_kernel(amps, n, gate.kind, gate.targets[0], gate.fixed_angle)
    return amps


# ---------------------------------------------------------------------------
# Pauli-string observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PauliObservable:
    """Weighted sum of Pauli strings: sum_k c_k * prod_j P_j.

    Each term is (coefficient, ((qubit, label), ...)) with labels in X/Y/Z;
    identity factors are omitted, so an empty string is the identity.
    """

    terms: tuple[tuple[float, tuple[tuple[int, str], ...]], ...]

    def __post_init__(self):
        norm = []
        for coeff, string in self.terms:
            pairs = tuple(sorted((int(q), str(p).upper()) for q, p in string))
            seen = set()
            for q, p in pairs:
                if q < 0:
                    raise ValueError(f"negative qubit index {q}")
                if p not in PAULI_LABELS:
                    raise ValueError(f"unknown Pauli label {p!r}")
                if q in seen:
                    raise ValueError(f"duplicate qubit {q} in Pauli string")
                seen.add(q)
            norm.append((float(coeff), pairs))
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def from_terms(cls, terms) -> "PauliObservable":
        """Build from [(coeff, {qubit: label, ...}), ...]."""
        return cls(tuple((c, tuple(m.items())) for c, m in terms))

    @property
    def max_qubit(self) -> int:
        qubits = [q for _, string in self.terms for q, _ in string]
        return max(qubits) if qubits else -1

    def to_json(self) -> list:
        return [[c, {str(q): p for q, p in string}] for c, string in self.terms]

    @classmethod
    def from_json(cls, data) -> "PauliObservable":
        return cls.from_terms((float(c), {int(q): p for q, p in m.items()}) for c, m in data)


def zz_observable(i: int = 0, j: int = 1) -> PauliObservable:
    """The two-qubit benchmark observable Z_i Z_j."""
    return PauliObservable.from_terms([(1.0, {i: "Z", j: "Z"})])


_Z_SIGN_CACHE: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}


def _z_signs(n, zqubits):
    key = (n, zqubits)
    signs = _Z_SIGN_CACHE.get(key)
    if signs is None:
        idx = np.arange(2**n, dtype=np.int64)
        parity = np.zeros(2**n, dtype=bool)
        for q in zqubits:
            parity ^= ((idx >> q) & 1).astype(bool)
        signs = np.where(parity, -1.0, 1.0)
        _Z_SIGN_CACHE[key] = signs
    return signs


def _apply_pauli_string(amps2d, n, string):
    phi = amps2d.copy()
    for q, p in string:
        view = phi.reshape(phi.shape[0], 2 ** (n - 1 - q), 2, 2**q)
        if p == "Z":
            view[:, :, 1, :] *= -1.0
        elif p == "X":
            a0 = view[:, :, 0, :].copy()
            view[:, :, 0, :] = view[:, :, 1, :]
            view[:, :, 1, :] = a0
        else:  # Y
            a0 = view[:, :, 0, :].copy()
            view[:, :, 0, :] = -1j * view[:, :, 1, :]
            view[:, :, 1, :] = 1j * a0
    return phi


def expectation_batch(amps, n_qubits: int, obs: PauliObservable) -> np.ndarray:
    """<psi|H|psi> for each row of a (..., 2**n) amplitude array."""
    if obs.max_qubit >= n_qubits:
        raise ValueError(
            f"observable touches qubit {obs.max_qubit}, state has {n_qubits}"
        )
    lead = amps.shape[:-1]
    flat = amps.reshape(-1, amps.shape[-1])
    values = np.zeros(flat.shape[0], dtype=float)
    for coeff, string in obs.terms:
        if all(p == "Z" for _, p in string):
            signs = _z_signs(n_qubits, tuple(q for q, _ in string))
            probs = flat.real**2 + flat.imag**2
            values += coeff * np.einsum("bi,i->b", probs, signs)
        else:
            phi = _apply_pauli_string(flat, n_qubits, string)
            term = np.einsum("bi,bi->b", flat.conj(), phi)
            residue = float(np.max(np.abs(term.imag))) if term.size else 0.0
            if residue >= _IMAG_TOL:
                raise ValueError(
                    f"expectation has imaginary residue {residue:.3e} >= {_IMAG_TOL}"
                )
            values += coeff * term.real
    return values.reshape(lead)


def expectation(state: StateVector, obs: PauliObservable) -> float:
    """Exact real expectation value of `obs` in `state`."""
    return float(expectation_batch(state.amplitudes[None, :], state.n_qubits, obs)[0])
