"""TD stabilizer models: generators, counting, and redundancy classes.

A model ``[d_n, d_s, d_l, D]`` places qubits on the d_s-cubes of a D-dimensional
lattice.  Each D-cube carries an X check on its d_s-faces.  Each pair of a
d_n-cube (the node) and a d_l-dimensional leaf through it carries a Z check on
the d_s-cubes that contain the node and lie in the leaf.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import gf2
from .errors import (
    DimensionMismatch,
    InternalConsistencyError,
    InvalidParams,
    NotAStabilizerCode,
    RedundancyCheckFailed,
    UnsupportedModel,
)
from .gf2 import BitMatrix
from .lattice import STAR, Cube, Lattice, Leaf
from .pauli import PauliOp


@dataclass(frozen=True)
class TdParams:
    d_n: int
    d_s: int
    d_l: int
    D: int

    def __post_init__(self) -> None:
        if not 0 <= self.d_n <= self.d_s <= self.d_l <= self.D:
            raise InvalidParams(f"need 0 <= d_n <= d_s <= d_l <= D, got {self.as_tuple()}")

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> "TdParams":
        values = [int(v) for v in text.split(",")] if isinstance(text, str) else [int(v) for v in text]
        if len(values) != 4:
            raise InvalidParams(f"expected four integers, got {values}")
        return cls(*values)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.d_n, self.d_s, self.d_l, self.D)

    @property
    def in_family(self) -> bool:
        """True for the ``[d-1, d, d+1, D]`` family."""
        return self.d_n == self.d_s - 1 and self.d_l == self.d_s + 1

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.as_tuple()) + "]"


def is_stabilizer_code(params: TdParams) -> bool:
    """Every X check overlaps every Z check evenly iff this binomial is even."""
    return math.comb(params.d_l - params.d_n, params.d_s - params.d_n) % 2 == 0


class TdModel:
    """A lattice plus all A (X-type) and B (Z-type) terms.

    Qubit ``q`` is the ``q``-th d_s-cube in canonical lattice order.  On open
    directions, Z terms keep whichever of their cofaces exist; terms left
    with no qubit at all are dropped.
    """

    def __init__(self, lattice: Lattice, params: TdParams):
        if lattice.D != params.D:
            raise DimensionMismatch(f"lattice has D={lattice.D}, params have D={params.D}")
        self.lattice = lattice
        self.params = params
        self.qubits = lattice.cubes(params.d_s)
        self.n_qubits = len(self.qubits)
        index = lattice.index_of

        self.a_cubes: list[Cube] = list(lattice.cubes(params.D))
        self.a_supports: list[tuple[int, ...]] = [
            tuple(sorted(index(f) for f in lattice.faces(c, params.d_s))) for c in self.a_cubes
        ]
        self.b_keys: list[tuple[Cube, Leaf]] = []
        self.b_supports: list[tuple[int, ...]] = []
        for node in lattice.cubes(params.d_n):
            for leaf in lattice.leaves_through(node, params.d_l):
                support = tuple(sorted(index(c) for c in lattice.cofaces_in_leaf(node, params.d_s, leaf)))
                if support:
                    self.b_keys.append((node, leaf))
                    self.b_supports.append(support)

    def __repr__(self) -> str:
        return f"TdModel({self.params}, {self.lattice!r})"

    @property
    def is_stabilizer(self) -> bool:
        return is_stabilizer_code(self.params)

    @cached_property
    def a_terms(self) -> list[tuple[Cube, PauliOp]]:
        return [(c, PauliOp.from_supports(self.n_qubits, x_support=s)) for c, s in zip(self.a_cubes, self.a_supports)]

    @cached_property
    def b_terms(self) -> list[tuple[Cube, Leaf, PauliOp]]:
        return [
            (node, leaf, PauliOp.from_supports(self.n_qubits, z_support=s))
            for (node, leaf), s in zip(self.b_keys, self.b_supports)
        ]

    @cached_property
    def gx(self) -> BitMatrix:
        return BitMatrix.from_supports(self.a_supports, self.n_qubits)

    @cached_property
    def gz(self) -> BitMatrix:
        return BitMatrix.from_supports(self.b_supports, self.n_qubits)

    def qubit_of(self, cube: Sequence[int]) -> int:
        return self.lattice.index_of(cube)

    def a_index(self, cube: Sequence[int]) -> int:
        return self.lattice.index_of(cube)


def build_model(lat: Lattice, params: TdParams) -> TdModel:
    return TdModel(lat, params)


@dataclass
class CommutationReport:
    commuting: bool
    violating_pairs: list[tuple[int, int]]


def check_commutation(model: TdModel) -> CommutationReport:
    """Overlap parity of every (A term, B term) pair."""
    if not model.a_supports or not model.b_supports:
        return CommutationReport(True, [])
    overlap = (model.gx @ model.gz.transpose()).to_dense()
    pairs = [(int(a), int(b)) for a, b in zip(*np.nonzero(overlap))]
    return CommutationReport(not pairs, pairs)


def _require_code(model: TdModel) -> None:
    if not model.is_stabilizer:
        raise NotAStabilizerCode(f"{model.params} does not define commuting checks")


def log2_gsd(model: TdModel) -> int:
    """Number of logical qubits, ``n - rank(G_X) - rank(G_Z)``."""
    _require_code(model)
    return model.n_qubits - gf2.rank(model.gx) - gf2.rank(model.gz)


def redundancy_formula(d: int, dims: Sequence[int]) -> int:
    """Count of D-cubes with at least d+1 coordinates at -1/2 on a periodic box."""
    D = len(dims)
    total = 0
    for p in range(D - d):
        for subset in itertools.combinations(range(D), p):
            total += math.prod(dims[i] - 1 for i in subset)
    return total


def a_redundancy_count(model: TdModel) -> int:
    """Independent products of A terms equal to the identity.

    The closed form is cross-checked against ``#A - rank(G_X)``.
    """
    if not model.lattice.fully_periodic:
        raise UnsupportedModel("the redundancy formula assumes a fully periodic lattice")
    formula = redundancy_formula(model.params.d_s, model.lattice.L)
    by_rank = len(model.a_supports) - gf2.rank(model.gx)
    if formula != by_rank:
        raise InternalConsistencyError(f"redundancy formula gives {formula}, rank gives {by_rank}")
    return formula


@dataclass
class ReClass:
    """A set of A terms, given by a star pattern, whose product is the identity."""

    pattern: tuple[int | str, ...]
    cubes: list[Cube]
    residual_weight: int


def enumerate_re_classes(model: TdModel) -> list[ReClass]:
    """Slabs fixed at half-integers in ``D-d-1`` directions and free elsewhere."""
    lat = model.lattice
    if not lat.fully_periodic:
        raise UnsupportedModel("redundancy classes are enumerated on periodic lattices only")
    D, d = lat.D, model.params.d_s
    classes = []
    for fixed in itertools.combinations(range(D), D - d - 1):
        for values in itertools.product(*(range(1, 2 * lat.L[i], 2) for i in fixed)):
            pattern: list[int | str] = [STAR] * D
            for i, v in zip(fixed, values):
                pattern[i] = v
            cubes = lat.star_expand(pattern, dim=D)
            acc = np.zeros(model.n_qubits, dtype=np.uint8)
            for c in cubes:
                acc[list(model.a_supports[lat.index_of(c)])] ^= 1
            weight = int(acc.sum())
            if weight:
                raise RedundancyCheckFailed(f"A terms on {pattern} multiply to weight {weight}")
            classes.append(ReClass(tuple(pattern), cubes, weight))
    return classes


def seed_count(params: TdParams, dims: Sequence[int]) -> int:
    """Number of seed qubits: sum over m > d and m-subsets S of C(m, d) * prod_{i not in S}(L_i - 1)."""
    d, D = params.d_s, len(dims)
    if D != params.D:
        raise DimensionMismatch("dims length does not match D")
    total = 0
    for m in range(d + 1, D + 1):
        for subset in itertools.combinations(range(D), m):
            rest = [i for i in range(D) if i not in subset]
            total += math.comb(m, d) * math.prod(dims[i] - 1 for i in rest)
    return total


def seed_count_sum_variant(params: TdParams, dims: Sequence[int]) -> int:
    """Same as :func:`seed_count` with the inner product replaced by a sum.

    Kept only for comparison: it undercounts whenever ``D - d >= 2``.
    """
    d, D = params.d_s, len(dims)
    total = 0
    for m in range(d + 1, D + 1):
        for subset in itertools.combinations(range(D), m):
            rest = [i for i in range(D) if i not in subset]
            total += math.comb(m, d) * sum(dims[i] - 1 for i in rest)
    return total


def gsd_closed_form(params: TdParams, dims: Sequence[int]) -> int | None:
    """Known logical-qubit counts on periodic boxes, or ``None`` if not tabulated."""
    key = params.as_tuple()
    L = list(dims)
    if key == (0, 1, 2, 2):
        return 2
    if key == (0, 1, 2, 3):
        return 2 * sum(L) - 3
    if key == (0, 1, 2, 4):
        pairs = sum(L[i] * L[j] for i, j in itertools.combinations(range(4), 2))
        return 2 * pairs - 3 * sum(L) + 4
    if key == (1, 2, 3, 3):
        return 3
    if key == (1, 2, 3, 4):
        return 3 * sum(L) - 6
    if key == (2, 3, 4, 4):
        return 4
    return None


def export_model(model: TdModel) -> tuple[str, str, str]:
    """Return (G_X text, G_Z text, JSON sidecar) for the model."""
    lat = model.lattice
    header = f"td {','.join(map(str, model.params.as_tuple()))} dims {','.join(map(str, lat.L))}"
    gx_text = gf2.write_matrix(model.gx, header + " X checks")
    gz_text = gf2.write_matrix(model.gz, header + " Z checks")
    sidecar = {
        "params": list(model.params.as_tuple()),
        "dims": list(lat.L),
        "boundary": list(lat.boundary),
        "n_qubits": model.n_qubits,
        "qubits": [list(c) for c in model.qubits],
        "x_checks": [list(c) for c in model.a_cubes],
        "z_checks": [{"node": list(node), "axes": sorted(leaf.axes)} for node, leaf in model.b_keys],
        "coordinates": "doubled",
    }
    return gx_text, gz_text, json.dumps(sidecar, indent=1) + "\n"
