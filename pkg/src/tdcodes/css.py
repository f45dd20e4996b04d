"""Seed finding for generic CSS codes with a Hadamard + CNOT preparation plan.

A plan assigns each X check ``i`` a representative qubit ``c(i)`` in its
support and an order in which the checks are fanned out.  The plan is valid
when no check targets a representative that still has to act as a control,
i.e. ``K[j, j'] = Gx[i_j, c(i_j')]`` is unit lower triangular.  Given a valid
plan, every logical X class has exactly one member that vanishes on all
representatives, and a row reduction of those members exposes ``k`` seed
qubits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .circuit import CX, Circuit, Gate, Layer, synth_uc
from .errors import DependentGenerators, InvalidPlan, NotCss
from .gf2 import BitMatrix
from .model import TdModel
from .pauli import PauliOp


@dataclass
class CssCode:
    gx: BitMatrix
    gz: BitMatrix

    @property
    def n(self) -> int:
        return self.gx.cols

    @property
    def r(self) -> int:
        return self.gx.rows

    @property
    def k(self) -> int:
        return self.n - gf2.rank(self.gx) - gf2.rank(self.gz)


def load_css(gx: BitMatrix, gz: BitMatrix) -> CssCode:
    """Validate orthogonality and row independence of the check matrices."""
    if gx.rows == 0 and gx.cols == 0:
        gx = BitMatrix(0, gz.cols)
    if gz.rows == 0 and gz.cols == 0:
        gz = BitMatrix(0, gx.cols)
    if gx.cols != gz.cols:
        raise NotCss(f"Gx has {gx.cols} columns, Gz has {gz.cols}")
    if gx.rows and gz.rows and not (gx @ gz.transpose()).is_zero():
        raise NotCss("some X check anticommutes with some Z check")
    if gf2.rank(gx) != gx.rows:
        raise DependentGenerators("rows of Gx are dependent")
    if gf2.rank(gz) != gz.rows:
        raise DependentGenerators("rows of Gz are dependent")
    return CssCode(gx, gz)


@dataclass
class PrepPlan:
    representatives: list[int]
    order: list[int]

    def to_json(self) -> str:
        return json.dumps({"representatives": self.representatives, "order": self.order}) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PrepPlan":
        data = json.loads(text)
        unknown = set(data) - {"representatives", "order"}
        if unknown:
            raise InvalidPlan(f"unknown plan keys {sorted(unknown)}")
        reps = [int(c) for c in data["representatives"]]
        order = [int(i) for i in data.get("order", range(len(reps)))]
        return cls(reps, order)


def _check_shape(code: CssCode, plan: PrepPlan) -> None:
    r = code.r
    if len(plan.representatives) != r:
        raise InvalidPlan(f"plan has {len(plan.representatives)} representatives for {r} checks")
    if sorted(plan.order) != list(range(r)):
        raise InvalidPlan("plan order is not a permutation of the X checks")
    if len(set(plan.representatives)) != r:
        raise InvalidPlan("representatives are not distinct")
    if any(not 0 <= c < code.n for c in plan.representatives):
        raise InvalidPlan("representative outside the qubit range")


def plan_matrix(code: CssCode, plan: PrepPlan) -> np.ndarray:
    """``K[j, j'] = Gx[i_j, c(i_j')]`` under the plan order."""
    _check_shape(code, plan)
    dense = code.gx.to_dense()
    cols = [plan.representatives[i] for i in plan.order]
    return dense[np.ix_(plan.order, cols)]


def validate_plan(code: CssCode, plan: PrepPlan) -> bool:
    K = plan_matrix(code, plan)
    if K.size == 0:
        return True
    return bool(np.all(np.diag(K) == 1) and not np.triu(K, 1).any())


def from_td(model: TdModel) -> tuple[CssCode, PrepPlan]:
    """Checks of cubes that have a representative, plus an independent set of Z checks.

    The plan order is the order in which the cube-filling circuit fires each fan-out.
    """
    circ, rep_map = synth_uc(model)
    cubes = sorted(rep_map)
    gx = BitMatrix.from_supports([model.a_supports[c] for c in cubes], model.n_qubits)
    keep = gf2.independent_rows(model.gz)
    gz = model.gz.select_rows(keep)
    row_of_control = {rep_map[c]: i for i, c in enumerate(cubes)}
    order: list[int] = []
    seen = set()
    for g in circ.gates():
        if g.kind == "CNOT" and g.qubits[0] not in seen:
            seen.add(g.qubits[0])
            order.append(row_of_control[g.qubits[0]])
    return load_css(gx, gz), PrepPlan([rep_map[c] for c in cubes], order)


def greedy_plan(code: CssCode) -> tuple[CssCode, PrepPlan]:
    """Find a plan by peeling off checks that own a qubit no other remaining check uses.

    If peeling stalls, the X checks are replaced by their reduced row echelon
    form (same stabilizer group), whose pivot columns always form a valid plan.
    """
    dense = code.gx.to_dense().astype(np.int64)
    remaining = list(range(code.r))
    counts = dense.sum(axis=0)
    reps: dict[int, int] = {}
    peeled: list[int] = []
    while remaining:
        pick = None
        for i in remaining:
            owned = np.flatnonzero((dense[i] == 1) & (counts == 1))
            if owned.size:
                pick = (i, int(owned[0]))
                break
        if pick is None:
            break
        i, c = pick
        reps[i] = c
        peeled.append(i)
        remaining.remove(i)
        counts -= dense[i]
    if not remaining:
        return code, PrepPlan([reps[i] for i in range(code.r)], peeled[::-1])
    R, pivots, _ = gf2.rref(code.gx)
    reduced = CssCode(R.select_rows(range(len(pivots))), code.gz)
    return reduced, PrepPlan(list(pivots), list(range(len(pivots))))


def synth_prep(code: CssCode, plan: PrepPlan) -> Circuit:
    """Hadamards on representatives, then one fan-out layer per check in plan order."""
    if not validate_plan(code, plan):
        raise InvalidPlan("plan matrix is not unit lower triangular")
    if code.r == 0:
        return Circuit(code.n, [], {})
    layers = [Layer([Gate("H", (c,)) for c in sorted(plan.representatives)], {"kind": "h"})]
    for i in plan.order:
        c = plan.representatives[i]
        targets = [int(t) for t in np.flatnonzero(code.gx.row(i)) if t != c]
        layers.append(Layer([CX(c, t) for t in targets], {"kind": "prep", "check": i}))
    return Circuit(code.n, layers, {})


def logical_x_basis(code: CssCode) -> BitMatrix:
    """``k`` pure-X logicals: kernel of Gz completed modulo the row space of Gx."""
    kernel = gf2.right_kernel(code.gz) if code.gz.rows else BitMatrix.identity(code.n)
    stacked = code.gx.vstack(kernel)
    picked = [i - code.r for i in gf2.independent_rows(stacked) if i >= code.r]
    return kernel.select_rows(picked)


@dataclass
class SeedReport:
    seeds: list[int]
    logical_x_tilde: BitMatrix
    logical_x_unreduced: BitMatrix
    u_g_prime: Circuit
    certificates: dict = field(default_factory=dict)

    def logical_ops(self) -> list[PauliOp]:
        n = self.logical_x_tilde.cols
        return [PauliOp(self.logical_x_tilde.row(a), np.zeros(n, np.uint8)) for a in range(len(self.seeds))]

    def to_dict(self) -> dict:
        return {
            "k": len(self.seeds),
            "seeds": self.seeds,
            "logical_x": [np.flatnonzero(self.logical_x_tilde.row(a)).tolist() for a in range(len(self.seeds))],
            "certificates": self.certificates,
        }


def find_seeds(code: CssCode, plan: PrepPlan, logicals: BitMatrix | None = None) -> SeedReport:
    if not validate_plan(code, plan):
        raise InvalidPlan("plan matrix is not unit lower triangular")
    n, reps = code.n, plan.representatives
    logicals = logical_x_basis(code) if logicals is None else logicals
    k = logicals.rows
    if code.r:
        R, pivots, _ = gf2.rref(code.gx, prefer=[reps[i] for i in plan.order])
        if sorted(pivots) != sorted(reps):
            raise InvalidPlan("representative columns of Gx are not independent")
        # Clear every representative column using the reduced check with that unit column.
        cleared = []
        for a in range(k):
            v = logicals.row(a)
            cleared.append(v ^ R.left_mul_vec(v[pivots]))
        tilde = BitMatrix.from_dense(np.array(cleared, dtype=np.uint8).reshape(k, n))
    else:
        tilde = logicals.copy()
    reduced, seeds, _ = gf2.rref(tilde)
    dense = reduced.to_dense()
    no_rep = not dense[:, reps].any() if reps else True
    identity = bool(np.array_equal(dense[:, seeds], np.eye(k, dtype=np.uint8)))
    gates = [
        CX(q, int(t)) for a, q in enumerate(seeds) for t in np.flatnonzero(dense[a]) if t != q
    ]
    u_g = Circuit(n, [Layer(gates, {"kind": "u_g"})] if gates else [], {})
    report = SeedReport(list(seeds), reduced, tilde, u_g)
    report.certificates = {
        "seed_count_matches_k": len(seeds) == code.k,
        "no_representative": bool(no_rep),
        "identity_block": identity,
        "uniqueness": uniqueness_check(code, plan, report),
    }
    return report


def uniqueness_check(code: CssCode, plan: PrepPlan, report: SeedReport | None = None) -> bool:
    """No nonzero product of X checks vanishes on all representative columns."""
    if code.r == 0:
        return True
    if len(plan.representatives) != code.r:
        return False
    k0 = code.gx.select_columns(plan.representatives)
    if gf2.rank(k0) != code.r:
        return False
    if report is not None:
        dense = report.logical_x_tilde.to_dense()
        if dense[:, plan.representatives].any():
            return False
    return True


def seeded_preparation(code: CssCode, plan: PrepPlan, report: SeedReport, bits: Sequence[int]) -> Circuit:
    """X on the chosen seeds, the seed fan-out, then the preparation circuit."""
    flips = [Gate("X", (q,)) for q, b in zip(report.seeds, bits) if b]
    head = Circuit(code.n, [Layer(flips, {"kind": "seed_entangler"})] if flips else [], {})
    return head + report.u_g_prime + synth_prep(code, plan)


def steane_code() -> CssCode:
    """The [[7,1,3]] code with Hamming(7,4) checks for both X and Z."""
    h = BitMatrix.from_dense(
        [
            [1, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ]
    )
    return load_css(h, h.copy())


def code_stabilizers(code: CssCode) -> list[PauliOp]:
    n = code.n
    zeros = np.zeros(n, np.uint8)
    ops = [PauliOp(code.gx.row(i), zeros) for i in range(code.gx.rows)]
    ops += [PauliOp(zeros, code.gz.row(i)) for i in range(code.gz.rows)]
    return ops
