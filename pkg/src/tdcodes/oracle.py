"""Dense state-vector oracle for small registers.

Amplitude index bit ``q`` is qubit ``q``.  Everything here is deliberately
independent of the tableau code so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .errors import DimensionMismatch, InternalConsistencyError, SeedSetViolation, TooManyQubits
from .model import TdModel, redundancy_formula
from . import gf2
from .pauli import PauliOp
from .tableau import Tableau

DEFAULT_CAP = 22


@dataclass(frozen=True)
class SingleQubitUnitary:
    qubit: int
    matrix: np.ndarray


class DenseState:
    __slots__ = ("n", "amplitudes")

    def __init__(self, n: int, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << n,):
            raise DimensionMismatch(f"{n} qubits need {1 << n} amplitudes")
        self.n = n
        self.amplitudes = amplitudes

    @classmethod
    def basis(cls, n: int, index: int = 0, cap: int = DEFAULT_CAP) -> "DenseState":
        _check_cap(n, cap)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes / self.norm())

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes.copy())


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise TooManyQubits(f"{n} qubits exceed the dense cap of {cap}")


def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _mask(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m ^= 1 << int(q)
    return m


def _apply_single(amps: np.ndarray, n: int, q: int, matrix: np.ndarray) -> np.ndarray:
    view = amps.reshape(1 << (n - q - 1), 2, 1 << q)
    return np.einsum("ij,ajb->aib", matrix, view).reshape(-1)


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def apply_gate(state: DenseState, g: Gate | SingleQubitUnitary) -> DenseState:
    n, amps = state.n, state.amplitudes
    if isinstance(g, SingleQubitUnitary):
        return DenseState(n, _apply_single(amps, n, g.qubit, np.asarray(g.matrix, dtype=np.complex128)))
    for q in g.qubits:
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} outside 0..{n - 1}")
    if g.kind == "H":
        return DenseState(n, _apply_single(amps, n, g.qubits[0], _H))
    idx = _indices(n)
    if g.kind == "X":
        return DenseState(n, amps[idx ^ (1 << g.qubits[0])])
    if g.kind == "Z":
        signs = 1 - 2 * ((idx >> g.qubits[0]) & 1)
        return DenseState(n, amps * signs)
    if g.kind == "CNOT":
        c, t = g.qubits
        return DenseState(n, amps[idx ^ (((idx >> c) & 1) << t)])
    raise ValueError(f"unsupported gate {g.kind}")


def dense_run(
    circuit: Circuit | Sequence[Gate | SingleQubitUnitary],
    init: DenseState | int = 0,
    *,
    n_qubits: int | None = None,
    seed_qubits: Iterable[int] | None = None,
    cap: int = DEFAULT_CAP,
) -> DenseState:
    """Apply gates one by one.  Arbitrary single-qubit unitaries must sit on seeds."""
    if isinstance(circuit, Circuit):
        n = circuit.n_qubits
        ops: list = list(circuit.gates())
    else:
        ops = list(circuit)
        n = n_qubits if n_qubits is not None else (init.n if isinstance(init, DenseState) else None)
        if n is None:
            raise ValueError("n_qubits is required for a bare gate list")
    _check_cap(n, cap)
    allowed = set(seed_qubits) if seed_qubits is not None else None
    state = DenseState.basis(n, init, cap) if isinstance(init, int) else init.copy()
    if state.n != n:
        raise DimensionMismatch("initial state size differs from the circuit")
    for g in ops:
        if isinstance(g, SingleQubitUnitary) and (allowed is None or g.qubit not in allowed):
            raise SeedSetViolation(f"single-qubit unitary on qubit {g.qubit}, which is not a seed")
        state = apply_gate(state, g)
    return state


def apply_pauli(state: DenseState, P: PauliOp) -> DenseState:
    """``P |psi>`` with ``P = sign * prod sigma_j`` and ``Y = i X Z``."""
    if P.n != state.n:
        raise DimensionMismatch("Pauli and state sizes differ")
    idx = _indices(state.n)
    zmask = _mask(P.z_support)
    xmask = _mask(P.x_support)
    parity = np.zeros_like(idx)
    masked = idx & zmask
    while masked.any():
        parity ^= masked & 1
        masked >>= 1
    amps = state.amplitudes * (1 - 2 * parity)
    amps = amps[idx ^ xmask]
    n_y = int(np.count_nonzero(P.x & P.z))
    return DenseState(state.n, amps * (1j**n_y) * P.sign)


def fidelity(a: DenseState, b: DenseState) -> float:
    if a.n != b.n:
        raise DimensionMismatch("states have different sizes")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def tableau_crosscheck(state: Tableau, dense: DenseState, tol: float = 1e-10) -> bool:
    """True iff ``dense`` is a +1 eigenvector of every tableau generator."""
    if state.n != dense.n:
        raise DimensionMismatch("tableau and dense state sizes differ")
    for P in state.generators():
        image = apply_pauli(dense, P)
        if np.linalg.norm(image.amplitudes - dense.amplitudes) > tol:
            return False
    return True


def _flip_sum(amps: np.ndarray, idx: np.ndarray, masks: Iterable[int]) -> np.ndarray:
    for m in masks:
        amps = amps + amps[idx ^ m]
    return amps


def ewsc_norm(model: TdModel, cap: int = DEFAULT_CAP) -> tuple[float, float]:
    """(measured, predicted) norm of ``prod_A (1 + A) |0...0>``.

    Each group element appears ``2**R`` times in the expanded product, where ``R``
    is the number of independent A-term redundancies, so the norm is
    ``sqrt(2) ** (#A + R)``.
    """
    n = model.n_qubits
    _check_cap(n, cap)
    idx = _indices(n)
    amps = np.zeros(1 << n, dtype=np.float64)
    amps[0] = 1.0
    amps = _flip_sum(amps, idx, (_mask(s) for s in model.a_supports))
    if model.lattice.fully_periodic:
        redundancies = redundancy_formula(model.params.d_s, model.lattice.L)
    else:
        redundancies = len(model.a_supports) - gf2.rank(model.gx)
    predicted = np.sqrt(2.0) ** (len(model.a_supports) + redundancies)
    return float(np.linalg.norm(amps)), float(predicted)


def dense_ewsc(
    model: TdModel,
    region: Iterable[int] | None = None,
    rep_map: dict[int, int] | None = None,
    cap: int = DEFAULT_CAP,
    tol: float = 1e-10,
) -> DenseState:
    """Equal-weight superposition of closed configurations on a set of D-cubes.

    ``region=None`` means every D-cube; then the norm before normalization must
    equal the closed form of :func:`ewsc_norm`.  For a partial region, the
    representatives of cubes outside it (``rep_map``) start in ``|+>``.
    """
    n = model.n_qubits
    _check_cap(n, cap)
    idx = _indices(n)
    if region is None:
        measured, predicted = ewsc_norm(model, cap)
        if abs(measured / predicted - 1.0) > tol:
            raise InternalConsistencyError(f"EWSC norm {measured} differs from closed form {predicted}")
        cubes = range(len(model.a_supports))
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
    else:
        cubes = sorted(set(region))
        if rep_map is None:
            raise ValueError("a partial region needs the representative map")
        inside = {q for c in cubes for q in model.a_supports[c]}
        plus = [q for c, q in rep_map.items() if c not in set(cubes)]
        if inside & set(plus):
            raise ValueError("a representative of an outside cube lies in the region")
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        state = DenseState(n, amps)
        for q in plus:
            state = apply_gate(state, Gate("H", (q,)))
        amps = state.amplitudes
    amps = _flip_sum(amps, idx, (_mask(model.a_supports[c]) for c in cubes))
    return DenseState(n, amps).normalized()


def dense_logical_state(base: DenseState, logicals: Sequence[PauliOp], coefficients: dict[tuple[int, ...], complex]):
    """``sum_b c_b prod_a X_a^{b_a} |base>`` for the given bit patterns ``b``."""
    amps = np.zeros_like(base.amplitudes)
    for bits, coeff in coefficients.items():
        state = base
        for op, b in zip(logicals, bits):
            if b:
                state = apply_pauli(state, op)
        amps = amps + coeff * state.amplitudes
    return DenseState(base.n, amps).normalized()
