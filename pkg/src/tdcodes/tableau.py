"""Stabilizer-state simulation for H / CNOT / X / Z circuits.

A state on ``n`` qubits is kept as ``n`` commuting generators.  Row ``r`` is the
Pauli ``i**phase[r] * prod_j sigma_j`` where ``sigma_j`` is the Hermitian letter
encoded by ``(x[r, j], z[r, j])``.  Physical generators always have an even
phase; the two-bit phase exists so that a wrong update rule shows up as an
odd phase instead of a silently wrong sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .circuit import Circuit, Gate, Layer
from .errors import DimensionMismatch, InternalConsistencyError, InvalidSize
from .model import TdModel
from .pauli import PauliOp, phase_exponent


class Tableau:
    __slots__ = ("n", "x", "z", "phase", "_canon")

    def __init__(self, x: np.ndarray, z: np.ndarray, phase: np.ndarray):
        self.x = np.asarray(x, dtype=np.uint8)
        self.z = np.asarray(z, dtype=np.uint8)
        self.phase = np.asarray(phase, dtype=np.uint8) % 4
        self.n = self.x.shape[1]
        if self.x.shape != (self.n, self.n) or self.z.shape != self.x.shape or self.phase.shape != (self.n,):
            raise DimensionMismatch("a tableau needs n generators on n qubits")
        self._canon: Tableau | None = None

    @classmethod
    def zero(cls, n: int) -> "Tableau":
        if n < 1:
            raise InvalidSize(f"need at least one qubit, got {n}")
        return cls(np.zeros((n, n), np.uint8), np.eye(n, dtype=np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def from_paulis(cls, ops: Iterable[PauliOp]) -> "Tableau":
        ops = list(ops)
        return cls(
            np.array([p.x for p in ops]),
            np.array([p.z for p in ops]),
            np.array([0 if p.sign > 0 else 2 for p in ops]),
        )

    def copy(self) -> "Tableau":
        return Tableau(self.x.copy(), self.z.copy(), self.phase.copy())

    def generators(self) -> list[PauliOp]:
        self._check_real()
        return [PauliOp(self.x[r], self.z[r], 1 if self.phase[r] == 0 else -1) for r in range(self.n)]

    def __repr__(self) -> str:
        if self.n <= 12:
            return "Tableau(" + ", ".join(p.label() for p in self.generators()) + ")"
        return f"Tableau(n={self.n})"

    # Gates -------------------------------------------------------------------

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} outside 0..{self.n - 1}")

    def h(self, q: int) -> "Tableau":
        self._check_qubit(q)
        self.phase = (self.phase + 2 * (self.x[:, q] & self.z[:, q])) % 4
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()
        self._canon = None
        return self

    def cnot(self, c: int, t: int) -> "Tableau":
        self._check_qubit(c)
        self._check_qubit(t)
        if c == t:
            raise ValueError("CNOT control equals target")
        xc, zc, xt, zt = self.x[:, c], self.z[:, c], self.x[:, t], self.z[:, t]
        self.phase = (self.phase + 2 * (xc & zt & (xt ^ zc ^ 1))) % 4
        self.x[:, t] = xt ^ xc
        self.z[:, c] = zc ^ zt
        self._canon = None
        return self

    def pauli_x(self, q: int) -> "Tableau":
        self._check_qubit(q)
        self.phase = (self.phase + 2 * self.z[:, q]) % 4
        self._canon = None
        return self

    def pauli_z(self, q: int) -> "Tableau":
        self._check_qubit(q)
        self.phase = (self.phase + 2 * self.x[:, q]) % 4
        self._canon = None
        return self

    def apply_gate(self, g: Gate) -> "Tableau":
        if g.kind == "H":
            return self.h(g.qubits[0])
        if g.kind == "CNOT":
            return self.cnot(*g.qubits)
        if g.kind == "X":
            return self.pauli_x(g.qubits[0])
        if g.kind == "Z":
            return self.pauli_z(g.qubits[0])
        raise ValueError(f"unsupported gate {g.kind}")

    def apply(self, item: Gate | Layer | Circuit | Iterable[Gate]) -> "Tableau":
        if isinstance(item, Gate):
            return self.apply_gate(item)
        if isinstance(item, Circuit):
            if item.n_qubits != self.n:
                raise DimensionMismatch(f"circuit on {item.n_qubits} qubits, state on {self.n}")
            gates: Iterable[Gate] = item.gates()
        elif isinstance(item, Layer):
            gates = item.gates
        else:
            gates = item
        for g in gates:
            self.apply_gate(g)
        self._check_real()
        return self

    def apply_pauli(self, P: PauliOp) -> "Tableau":
        """Apply the Pauli operator ``P`` as a gate (its sign is a global phase)."""
        self._check_length(P)
        flips = (self.x.astype(np.int64) @ P.z + self.z.astype(np.int64) @ P.x) % 2
        self.phase = (self.phase + 2 * flips.astype(np.uint8)) % 4
        self._canon = None
        return self

    def _check_real(self) -> None:
        if (self.phase & 1).any():
            raise InternalConsistencyError("a generator acquired an imaginary phase")

    def _check_length(self, P: PauliOp) -> None:
        if P.n != self.n:
            raise DimensionMismatch(f"Pauli on {P.n} qubits, state on {self.n}")

    # Canonical form and queries ------------------------------------------------

    def canonical(self) -> "Tableau":
        """Generators in reduced row echelon form over columns x_0..x_{n-1}, z_0..z_{n-1}."""
        if self._canon is None:
            self._canon = _canonicalize(self)
        return self._canon

    def pivots(self) -> list[int]:
        canon = self.canonical()
        bits = np.hstack([canon.x, canon.z])
        return [int(np.flatnonzero(row)[0]) for row in bits]

    def expectation(self, P: PauliOp) -> int:
        """+1 or -1 if ``+P`` or ``-P`` stabilizes the state, 0 otherwise."""
        self._check_length(P)
        anti = (self.x.astype(np.int64) @ P.z + self.z.astype(np.int64) @ P.x) % 2
        if anti.any():
            return 0
        canon = self.canonical()
        bits = np.hstack([canon.x, canon.z])
        v = np.concatenate([P.x, P.z])
        chosen = np.flatnonzero(v[self.pivots()])
        acc_x = np.zeros(self.n, np.uint8)
        acc_z = np.zeros(self.n, np.uint8)
        acc_phase = 0
        for r in chosen:
            acc_phase += int(canon.phase[r]) + int(phase_exponent(acc_x, acc_z, canon.x[r], canon.z[r]).sum())
            acc_x ^= canon.x[r]
            acc_z ^= canon.z[r]
        if not (np.array_equal(acc_x, P.x) and np.array_equal(acc_z, P.z)):
            raise InternalConsistencyError("commuting Pauli not in the stabilizer group of a pure state")
        acc_phase %= 4
        if acc_phase & 1:
            raise InternalConsistencyError("stabilizer product with imaginary phase")
        target = 0 if P.sign > 0 else 2
        return 1 if acc_phase == target else -1

    def independent(self) -> bool:
        from .gf2 import BitMatrix, rank

        return rank(BitMatrix.from_dense(np.hstack([self.x, self.z]))) == self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tableau):
            return NotImplemented
        return states_equal(self, other)

    __hash__ = None  # type: ignore[assignment]


def _canonicalize(state: Tableau) -> Tableau:
    n = state.n
    bits = np.hstack([state.x, state.z]).astype(np.uint8)
    phase = state.phase.astype(np.int64).copy()
    r = 0
    for col in range(2 * n):
        if r == n:
            break
        hits = np.flatnonzero(bits[r:, col])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            bits[[r, p]] = bits[[p, r]]
            phase[[r, p]] = phase[[p, r]]
        mask = bits[:, col].astype(bool)
        mask[r] = False
        if mask.any():
            extra = phase_exponent(bits[r, :n], bits[r, n:], bits[mask, :n], bits[mask, n:]).sum(axis=1)
            phase[mask] = (phase[mask] + phase[r] + extra) % 4
            bits[mask] ^= bits[r]
        r += 1
    if r != n:
        raise InternalConsistencyError("generators are not independent")
    out = Tableau(bits[:, :n].copy(), bits[:, n:].copy(), phase % 4)
    out._check_real()
    out._canon = out
    return out


def new_zero(n: int) -> Tableau:
    return Tableau.zero(n)


def apply(state: Tableau, item) -> Tableau:
    return state.apply(item)


def run(circuit: Circuit, state: Tableau | None = None) -> Tableau:
    """Run ``circuit`` from ``|0...0>`` (or a copy of ``state``)."""
    out = Tableau.zero(circuit.n_qubits) if state is None else state.copy()
    return out.apply(circuit)


def pauli_expectation(state: Tableau, P: PauliOp) -> int:
    return state.expectation(P)


def canonical(state: Tableau) -> Tableau:
    return state.canonical()


def states_equal(a: Tableau, b: Tableau) -> bool:
    if a.n != b.n:
        return False
    ca, cb = a.canonical(), b.canonical()
    return (
        np.array_equal(ca.x, cb.x) and np.array_equal(ca.z, cb.z) and np.array_equal(ca.phase, cb.phase)
    )


def conjugate(P: PauliOp, gate: Gate) -> PauliOp:
    """Heisenberg image ``U P U^dagger`` of ``P`` under a single gate."""
    t = Tableau.__new__(Tableau)
    t.n = P.n
    t.x = P.x.reshape(1, -1).copy()
    t.z = P.z.reshape(1, -1).copy()
    t.phase = np.array([0 if P.sign > 0 else 2], dtype=np.uint8)
    t._canon = None
    t.apply_gate(gate)
    return PauliOp(t.x[0], t.z[0], 1 if t.phase[0] == 0 else -1)


def propagate(P: PauliOp, circuit: Circuit) -> PauliOp:
    """Heisenberg image of ``P`` under the whole circuit."""
    for g in circuit.gates():
        P = conjugate(P, g)
    return P


@dataclass
class VerificationReport:
    a_values: list[int]
    b_values: list[int]
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "a_terms": len(self.a_values),
            "b_terms": len(self.b_values),
            "violations": self.violations,
            "pass": self.passed,
        }


def verify_code_state(state: Tableau, model: TdModel, qubit_map: list[int] | None = None) -> VerificationReport:
    """Expectation of every A and B term; passing means all of them are +1.

    ``qubit_map`` sends model qubits to state qubits when the state lives on a
    larger register.
    """
    n = state.n

    def lift(support) -> list[int]:
        return [qubit_map[q] for q in support] if qubit_map is not None else list(support)

    a_values, b_values, violations = [], [], []
    for i, (cube, support) in enumerate(zip(model.a_cubes, model.a_supports)):
        value = state.expectation(PauliOp.from_supports(n, x_support=lift(support)))
        a_values.append(value)
        if value != 1:
            violations.append({"term": "A", "index": i, "cube": list(cube), "value": value})
    for i, ((node, leaf), support) in enumerate(zip(model.b_keys, model.b_supports)):
        value = state.expectation(PauliOp.from_supports(n, z_support=lift(support)))
        b_values.append(value)
        if value != 1:
            violations.append(
                {"term": "B", "index": i, "node": list(node), "axes": sorted(leaf.axes), "value": value}
            )
    return VerificationReport(a_values, b_values, violations)
