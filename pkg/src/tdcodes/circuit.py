"""Circuit IR and synthesis of the sequential preparation circuits.

The cube-filling circuit puts one Hadamard on a representative qubit of every
D-cube that has one, then fans each representative out over the other
d-faces of its cube.  Cubes are processed in steps: step ``k+1`` handles cubes
whose coordinate is -1/2 exactly along a k-subset ``S`` of directions (one
*part* per subset), sweeping the remaining coordinates from the far corner
back to the origin.  The seed-growing circuit copies an X on each seed qubit
onto a logical X operator spanning a d-torus.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    CircuitFormatError,
    InternalConsistencyError,
    InvalidSeeds,
    MissingTags,
    NotRepresentable,
    SeedSetViolation,
    UnsupportedModel,
)
from .lattice import STAR, Cube, Lattice, LatticeSpec
from .model import TdModel, build_model
from .pauli import PauliOp

GATE_ARITY = {"H": 1, "X": 1, "Z": 1, "CNOT": 2}
_TEXT_NAME = {"H": "H", "X": "X", "Z": "Z", "CNOT": "CX"}
_FROM_TEXT = {v: k for k, v in _TEXT_NAME.items()}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    part: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {GATE_ARITY[self.kind]} qubit(s)")
        if self.kind == "CNOT" and self.qubits[0] == self.qubits[1]:
            raise ValueError("CNOT control equals target")
        if self.part is not None:
            object.__setattr__(self, "part", tuple(sorted(self.part)))


def H(q: int, part=None) -> Gate:
    return Gate("H", (q,), part)


def CX(c: int, t: int, part=None) -> Gate:
    return Gate("CNOT", (c, t), part)


def gates_commute(a: Gate, b: Gate) -> bool:
    """Whether the two gates conjugate Paulis identically in either order."""
    shared = set(a.qubits) & set(b.qubits)
    if not shared:
        return True
    if a == b:
        return True
    kinds = {a.kind, b.kind}
    if kinds <= {"X", "Z"}:
        return True
    if "H" in kinds:
        return False
    if a.kind == "CNOT" and b.kind == "CNOT":
        return a.qubits[0] != b.qubits[1] and a.qubits[1] != b.qubits[0]
    cnot, single = (a, b) if a.kind == "CNOT" else (b, a)
    q = single.qubits[0]
    if single.kind == "X":
        return q == cnot.qubits[1]
    return q == cnot.qubits[0]


@dataclass
class Layer:
    gates: list[Gate]
    tag: dict = field(default_factory=dict)

    @property
    def parts(self) -> list[tuple[int, ...]]:
        return sorted({g.part for g in self.gates if g.part is not None}, key=lambda p: (len(p), p))

    def is_commuting(self) -> bool:
        by_qubit: dict[int, list[Gate]] = defaultdict(list)
        for g in self.gates:
            for q in g.qubits:
                by_qubit[q].append(g)
        for group in by_qubit.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    if not gates_commute(group[i], group[j]):
                        return False
        return True


@dataclass
class Circuit:
    n_qubits: int
    layers: list[Layer] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for layer in self.layers:
            for g in layer.gates:
                if any(not 0 <= q < self.n_qubits for q in g.qubits):
                    raise IndexError(f"gate {g} outside {self.n_qubits} qubits")

    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer.gates

    def __add__(self, other: "Circuit") -> "Circuit":
        """``a + b`` applies ``a`` first, then ``b``."""
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits on different qubit counts")
        return Circuit(self.n_qubits, list(self.layers) + list(other.layers), {**other.metadata, **self.metadata})

    def layers_of(self, kind: str) -> list[Layer]:
        return [layer for layer in self.layers if layer.tag.get("kind") == kind]

    def cnot_layer_count(self) -> int:
        return sum(1 for layer in self.layers if any(g.kind == "CNOT" for g in layer.gates))

    def gate_count(self, kind: str | None = None) -> int:
        return sum(1 for g in self.gates() if kind is None or g.kind == kind)

    def to_text(self) -> str:
        return write_circuit(self)


# Text format -----------------------------------------------------------------


def _part_text(part: tuple[int, ...] | None) -> str:
    return "-" if not part else ",".join(str(i) for i in part)


def write_circuit(circ: Circuit) -> str:
    """Serialize to the line-based text format (deterministic, newline-terminated)."""
    lines = [f"qubits {circ.n_qubits}"]
    if circ.metadata:
        lines.append("# meta " + json.dumps(circ.metadata, sort_keys=True, separators=(",", ":")))
    for k, layer in enumerate(circ.layers):
        if k:
            lines.append("==")
        lines.append("# layer " + json.dumps(layer.tag, sort_keys=True, separators=(",", ":")))
        current = None
        for g in layer.gates:
            if g.part != current:
                lines.append("# part " + ("none" if g.part is None else _part_text(g.part)))
                current = g.part
            lines.append(_TEXT_NAME[g.kind] + " " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + "\n"


def read_circuit(text: str) -> Circuit:
    if not text.endswith("\n"):
        raise CircuitFormatError("circuit text must end with a newline")
    raw = text.split("\n")[:-1]
    if not raw or not raw[0].startswith("qubits "):
        raise CircuitFormatError("first line must be 'qubits <N>'")
    try:
        n = int(raw[0].split()[1])
    except (IndexError, ValueError):
        raise CircuitFormatError("bad qubit count line") from None
    metadata: dict = {}
    layers: list[Layer] = []
    gates: list[Gate] = []
    tag: dict = {}
    part: tuple[int, ...] | None = None
    started = False

    def flush() -> None:
        layers.append(Layer(gates, tag))

    for line_no, line in enumerate(raw[1:], 2):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped == "==":
            flush()
            gates, tag, part = [], {}, None
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            try:
                if body.startswith("meta "):
                    metadata = json.loads(body[5:])
                elif body.startswith("layer "):
                    tag = json.loads(body[6:])
                elif body.startswith("part "):
                    value = body[5:].strip()
                    if value == "none":
                        part = None
                    elif value == "-":
                        part = ()
                    else:
                        part = tuple(int(v) for v in value.split(","))
            except ValueError as exc:
                raise CircuitFormatError(f"line {line_no}: {exc}") from None
            continue
        fields = stripped.split()
        kind = _FROM_TEXT.get(fields[0])
        if kind is None:
            raise CircuitFormatError(f"line {line_no}: unknown gate {fields[0]!r}")
        try:
            gates.append(Gate(kind, tuple(int(v) for v in fields[1:]), part))
        except ValueError as exc:
            raise CircuitFormatError(f"line {line_no}: {exc}") from None
        started = True
    if started or gates or tag or layers:
        flush()
    try:
        return Circuit(n, layers, metadata)
    except IndexError as exc:
        raise CircuitFormatError(str(exc)) from None


# Cube-filling circuit ---------------------------------------------------------


def part_depth(lat: Lattice, d: int, S: Iterable[int]) -> int:
    """Number of CNOT layers used by part ``S``."""
    comp = [i for i in range(lat.D) if i not in set(S)]
    return sum(lat.L[i] - 2 for i in comp[: lat.D - d]) + 1


def predicted_depth(D: int, d: int, L: int) -> int:
    """Total CNOT-layer count on an equal-size periodic box."""
    return ((D - d) * (L - 2) + 1) * (d + 1)


def representative(lat: Lattice, gamma: Sequence[int], S: Iterable[int], d: int) -> Cube:
    """The d-face of ``gamma`` that controls its fan-out when ``gamma`` is in part ``S``.

    Moves ``gamma`` by -1/2 along the ``D - d`` smallest directions outside ``S``.
    """
    gamma = Cube(gamma)
    S = sorted(set(S))
    if len(S) > d or gamma.dim != lat.D:
        raise NotRepresentable(f"part {S} cannot hold a representative of dimension {d}")
    for i in S:
        if not lat.periodic[i] or gamma[i] != lat.minus_half(i):
            raise NotRepresentable(f"{gamma!r} is not at -1/2 along direction {i}")
    comp = [i for i in range(lat.D) if i not in S]
    coords = list(gamma)
    for i in comp[: lat.D - d]:
        coords[i] -= 1
    face = lat.normalize(coords)
    if face is None:
        raise NotRepresentable(f"representative of {gamma!r} leaves the lattice")
    return face


def _part_cubes(lat: Lattice, d: int, S: tuple[int, ...]) -> dict[int, list[Cube]]:
    """Cubes of part ``S`` bucketed by layer number (1 = applied first)."""
    comp = [i for i in range(lat.D) if i not in S]
    swept = set(comp[: lat.D - d])
    depth = part_depth(lat, d, S)
    ranges = []
    for i in range(lat.D):
        if i in S:
            ranges.append((lat.minus_half(i),))
        else:
            ranges.append(range(1, 2 * lat.L[i] - 2, 2))
    buckets: dict[int, list[Cube]] = defaultdict(list)
    for coords in itertools.product(*ranges):
        total = sum((coords[i] - 1) // 2 for i in swept)
        buckets[depth - total].append(Cube(coords))
    return buckets


def uc_parts(D: int, d: int) -> list[tuple[int, ...]]:
    return [S for k in range(d + 1) for S in itertools.combinations(range(D), k)]


def _require_supported(model: TdModel) -> None:
    if not model.is_stabilizer:
        raise UnsupportedModel(f"{model.params} is not a stabilizer model")


def _synth_periodic(model: TdModel) -> tuple[Circuit, dict[int, int]]:
    lat = model.lattice
    d, D = model.params.d_s, lat.D
    index = lat.index_of
    rep_map: dict[int, int] = {}
    h_gates: list[Gate] = []
    cnot_layers: list[Layer] = []
    for k in range(d + 1):
        merged: dict[int, list[Gate]] = defaultdict(list)
        h_by_part: list[Gate] = []
        for S in itertools.combinations(range(D), k):
            part_h = []
            for alpha, cubes in sorted(_part_cubes(lat, d, S).items()):
                for gamma in cubes:
                    rep = representative(lat, gamma, S, d)
                    q = index(rep)
                    rep_map[index(gamma)] = q
                    part_h.append(q)
                    targets = sorted(index(f) for f in lat.faces(gamma, d) if f != rep)
                    merged[alpha].extend(CX(q, t, S) for t in targets)
            h_by_part.extend(H(q, S) for q in sorted(part_h))
        h_gates.extend(h_by_part)
        for alpha in sorted(merged):
            tag = {"kind": "uc", "step": k + 1, "alpha": alpha, "layer_index": len(cnot_layers) + 1}
            cnot_layers.append(Layer(merged[alpha], tag))
    layers = [Layer(h_gates, {"kind": "h", "step": 0, "layer_index": 0})] + cnot_layers
    meta = {
        "td": list(model.params.as_tuple()),
        "dims": list(lat.L),
        "boundary": list(lat.boundary),
    }
    return Circuit(model.n_qubits, layers, meta), rep_map


def synth_uc(model: TdModel) -> tuple[Circuit, dict[int, int]]:
    """Cube-filling circuit and the map (D-cube index -> representative qubit).

    Open directions are handled by synthesizing on a periodic host with one
    extra cell per open direction, dropping the parts that touch the seam, and
    relabelling qubits onto the open lattice.
    """
    _require_supported(model)
    lat = model.lattice
    if lat.fully_periodic:
        return _synth_periodic(model)
    host_L = tuple(n + (0 if p else 1) for n, p in zip(lat.L, lat.periodic))
    host = build_model(Lattice(LatticeSpec(lat.D, host_L)), model.params)
    circ, host_reps = _synth_periodic(host)
    circ = truncate_uc(circ, lat.open_dirs)
    qubit_map = {}
    for q in {q for g in circ.gates() for q in g.qubits}:
        qubit_map[q] = model.qubit_of(host.qubits[q])
    kept_reps = {g.qubits[0] for g in circ.gates() if g.kind == "H"}
    rep_map = {}
    for cube_idx, q in host_reps.items():
        if q in kept_reps:
            rep_map[lat.index_of(host.a_cubes[cube_idx])] = qubit_map[q]
    layers = [
        Layer([Gate(g.kind, tuple(qubit_map[q] for q in g.qubits), g.part) for g in layer.gates], dict(layer.tag))
        for layer in circ.layers
    ]
    meta = {"td": list(model.params.as_tuple()), "dims": list(lat.L), "boundary": list(lat.boundary)}
    return Circuit(model.n_qubits, layers, meta), rep_map


def truncate_uc(circuit: Circuit, open_dirs: Iterable[int]) -> Circuit:
    """Drop every part that meets ``open_dirs``, with its Hadamards."""
    open_dirs = set(open_dirs)
    layers = []
    for layer in circuit.layers:
        if layer.tag.get("kind") not in ("h", "uc"):
            layers.append(layer)
            continue
        if any(g.part is None for g in layer.gates):
            raise MissingTags("cube-filling layers need per-gate part tags to truncate")
        kept = [g for g in layer.gates if not open_dirs & set(g.part)]
        if kept:
            layers.append(Layer(kept, dict(layer.tag)))
    meta = dict(circuit.metadata)
    if open_dirs:
        meta["truncated"] = sorted(open_dirs)
    return Circuit(circuit.n_qubits, layers, meta)


def representative_order_violations(circuit: Circuit, representatives: Iterable[int]) -> list[int]:
    """Representatives used as a CNOT control after having been a CNOT target."""
    reps = set(representatives)
    targeted: set[int] = set()
    bad = []
    for layer in circuit.layers:
        controls = {g.qubits[0] for g in layer.gates if g.kind == "CNOT"}
        bad.extend(sorted(q for q in controls & targeted & reps))
        targeted |= {g.qubits[1] for g in layer.gates if g.kind == "CNOT"}
    return bad


# Seeds and the seed-growing circuit ------------------------------------------


def _require_periodic(model: TdModel) -> None:
    if not model.lattice.fully_periodic:
        raise UnsupportedModel("seeds are defined on fully periodic lattices")


def seed_set(model: TdModel) -> list[Cube]:
    """Representatives of corner cubes taken along d of their -1/2 directions."""
    _require_supported(model)
    _require_periodic(model)
    lat = model.lattice
    d = model.params.d_s
    seeds = set()
    for gamma in lat.cubes(lat.D):
        at_edge = [i for i in range(lat.D) if gamma[i] == lat.minus_half(i)]
        if len(at_edge) < d + 1:
            continue
        for S in itertools.combinations(at_edge, d):
            seeds.add(representative(lat, gamma, S, d))
    return sorted(seeds)


def logical_x(seed: Sequence[int], model: TdModel) -> PauliOp:
    """X on every d-cube of the d-torus that extends ``seed`` along its own axes."""
    seed = Cube(seed)
    lat = model.lattice
    if seed.dim != model.params.d_s:
        raise InvalidSeeds(f"{seed!r} is not a {model.params.d_s}-cube")
    pattern = [STAR if c & 1 else c for c in seed]
    cells = lat.star_expand(pattern, dim=model.params.d_s)
    return PauliOp.from_supports(model.n_qubits, x_support=[lat.index_of(c) for c in cells])


def _grow_layers(lat: Lattice, seed: Cube) -> list[list[tuple[Cube, Cube]]]:
    """CNOT layers spreading an X on ``seed`` over its d-torus, first layer first."""
    axes = seed.half_axes
    layers = []
    for t, ax in enumerate(axes):
        swept = axes[:t]
        for x in range(lat.L[ax] - 1):
            layer = []
            for shifts in itertools.product(*(range(lat.L[a]) for a in swept)):
                coords = list(seed)
                for a, s in zip(swept, shifts):
                    coords[a] -= 2 * s
                coords[ax] -= 2 * x
                control = lat.normalize(coords)
                coords[ax] -= 2
                layer.append((control, lat.normalize(coords)))
            layers.append(layer)
    return layers


def synth_ug(model: TdModel, seeds: Sequence[Sequence[int]]) -> Circuit:
    """Seed-growing circuit; all seeds advance together, one shared layer per sweep position."""
    allowed = set(seed_set(model))
    seeds = [Cube(s) for s in seeds]
    if any(s not in allowed for s in seeds) or len(set(seeds)) != len(seeds):
        raise InvalidSeeds("seeds must be distinct members of the canonical seed set")
    lat = model.lattice
    merged: dict[int, list[Gate]] = defaultdict(list)
    for seed in sorted(seeds):
        for k, layer in enumerate(_grow_layers(lat, seed)):
            merged[k].extend(CX(lat.index_of(c), lat.index_of(t)) for c, t in layer)
    layers = [Layer(merged[k], {"kind": "u_g", "layer_index": k}) for k in sorted(merged)]
    return Circuit(model.n_qubits, layers, {})


@dataclass
class SeedPlan:
    seeds: list[int]
    seed_cubes: list[Cube]
    logical_x: list[PauliOp]
    u_g: Circuit


def seed_plan(model: TdModel, rep_map: dict[int, int] | None = None) -> SeedPlan:
    """Seeds, their logical X operators and the growing circuit, with support checks."""
    cubes = seed_set(model)
    if rep_map is None:
        _, rep_map = synth_uc(model)
    reps = set(rep_map.values())
    logicals = [logical_x(c, model) for c in cubes]
    for c, op in zip(cubes, logicals):
        if reps & set(op.x_support):
            raise InternalConsistencyError(f"logical X of seed {c!r} touches a representative")
    qubits = [model.qubit_of(c) for c in cubes]
    return SeedPlan(qubits, cubes, logicals, synth_ug(model, cubes))


def seed_entangler(
    kind: str,
    seeds: Sequence[int],
    n_qubits: int,
    *,
    bits: Sequence[int] | str | None = None,
    circuit: Circuit | None = None,
) -> Circuit:
    """Prepare a state on the seed qubits before the growing circuit.

    ``basis_pattern`` flips the seeds selected by ``bits``; ``ghz`` builds a GHZ
    state with a CNOT chain in the given seed order; ``ghz_tree`` does the same
    with a doubling tree; ``custom_clifford`` passes a caller circuit through
    after checking it only touches seeds.
    """
    seeds = list(seeds)
    tag = {"kind": "seed_entangler"}
    if kind == "basis_pattern":
        if isinstance(bits, str):
            bits = [int(ch) for ch in bits]
        if bits is None or len(bits) != len(seeds):
            raise ValueError(f"need one bit per seed ({len(seeds)})")
        gates = [Gate("X", (q,)) for q, b in zip(seeds, bits) if b]
        layers = [Layer(gates, dict(tag))] if gates else []
    elif kind == "ghz":
        layers = [Layer([H(seeds[0])], dict(tag))] if seeds else []
        layers += [Layer([CX(a, b)], dict(tag)) for a, b in zip(seeds, seeds[1:])]
    elif kind == "ghz_tree":
        layers = [Layer([H(seeds[0])], dict(tag))] if seeds else []
        span = 1
        while span < len(seeds):
            gates = [CX(seeds[i], seeds[i + span]) for i in range(span) if i + span < len(seeds)]
            layers.append(Layer(gates, dict(tag)))
            span *= 2
    elif kind == "custom_clifford":
        if circuit is None:
            raise ValueError("custom_clifford needs a circuit")
        if circuit.n_qubits != n_qubits:
            raise SeedSetViolation("custom circuit is defined on a different qubit count")
        stray = {q for g in circuit.gates() for q in g.qubits} - set(seeds)
        if stray:
            raise SeedSetViolation(f"custom circuit touches non-seed qubits {sorted(stray)}")
        layers = [Layer(list(layer.gates), {**layer.tag, **tag}) for layer in circuit.layers]
    else:
        raise ValueError(f"unknown entangler kind {kind!r}")
    return Circuit(n_qubits, layers, {})


def preparation_circuit(model: TdModel, entangler: Circuit | None = None) -> Circuit:
    """Entangler (optional), then the seed-growing circuit, then the cube-filling circuit."""
    uc, reps = synth_uc(model)
    if entangler is None:
        return uc
    plan = seed_plan(model, reps)
    return entangler + plan.u_g + uc
