"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 unsupported model, 4 malformed CSS input.  Directions given to ``--open``
are numbered from 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import css as css_mod
from . import gf2
from .circuit import (
    Circuit,
    part_depth,
    predicted_depth,
    read_circuit,
    seed_entangler,
    seed_plan,
    synth_uc,
    uc_parts,
)
from .errors import (
    CircuitFormatError,
    DependentGenerators,
    InternalConsistencyError,
    InvalidLattice,
    InvalidParams,
    InvalidPlan,
    NotAStabilizerCode,
    NotCss,
    SeedSetViolation,
    TdError,
    TooManyQubits,
    UnsupportedModel,
)
from .lattice import OPEN, PERIODIC, Lattice, LatticeSpec
from .model import (
    TdModel,
    TdParams,
    a_redundancy_count,
    build_model,
    check_commutation,
    enumerate_re_classes,
    export_model,
    gsd_closed_form,
    log2_gsd,
    seed_count,
    seed_count_sum_variant,
)
from .oracle import (
    DEFAULT_CAP,
    dense_ewsc,
    dense_logical_state,
    dense_run,
    fidelity,
    tableau_crosscheck,
)
from .tableau import run, states_equal, verify_code_state

DEFAULT_RNG_SEED = 20240607

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3
EXIT_CSS = 4


class ConfigError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _build(args) -> TdModel:
    params = TdParams.parse(args.td)
    dims = _int_list(args.dims)
    open_dirs = set()
    if args.open:
        open_dirs = {i - 1 for i in _int_list(args.open)}
        if any(not 0 <= i < len(dims) for i in open_dirs):
            raise ConfigError("--open directions must lie in 1..D")
    boundary = tuple(OPEN if i in open_dirs else PERIODIC for i in range(len(dims)))
    lat = Lattice(LatticeSpec(len(dims), tuple(dims), boundary))
    return build_model(lat, params)


def _pattern_text(pattern) -> str:
    def one(v):
        if v == "*":
            return "*"
        return str(v // 2) if v % 2 == 0 else f"{v}/2"

    return "[" + ",".join(one(v) for v in pattern) + "]"


def _counts(model: TdModel) -> dict:
    """Logical-qubit, redundancy and seed counts, each ``None`` where undefined."""
    out = {"gsd_log2": None, "redundancy_count": None, "seed_count": None}
    if not model.is_stabilizer:
        return out
    out["gsd_log2"] = log2_gsd(model)
    if model.lattice.fully_periodic:
        out["redundancy_count"] = a_redundancy_count(model)
        if model.params.in_family:
            out["seed_count"] = seed_count(model.params, model.lattice.L)
    return out


def _base_report(model: TdModel) -> dict:
    return {
        "model": str(model.params),
        "dims": list(model.lattice.L),
        "boundary": list(model.lattice.boundary),
        "n_qubits": model.n_qubits,
    }


def cmd_model(args) -> int:
    model = _build(args)
    comm = check_commutation(model)
    report = _base_report(model)
    report.update(
        {
            "a_terms": len(model.a_supports),
            "b_terms": len(model.b_supports),
            "stabilizer_code": model.is_stabilizer,
            "commuting": comm.commuting,
            "violating_pairs": len(comm.violating_pairs),
        }
    )
    if model.is_stabilizer:
        report.update(_counts(model))
        report["gsd_closed_form"] = (
            gsd_closed_form(model.params, model.lattice.L) if model.lattice.fully_periodic else None
        )
        if model.lattice.fully_periodic and model.params.in_family:
            report["seed_count_sum_variant"] = seed_count_sum_variant(model.params, model.lattice.L)
            report["re_classes"] = [_pattern_text(c.pattern) for c in enumerate_re_classes(model)]
    else:
        report.update({"gsd_log2": None, "redundancy_count": None, "seed_count": None})
        report["gsd_error"] = f"{model.params} is not a stabilizer code"
    if model.lattice.open_dirs:
        report["boundary_z_terms"] = "truncated to existing qubits"
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        gx, gz, sidecar = export_model(model)
        (out / "gx.txt").write_text(gx)
        (out / "gz.txt").write_text(gz)
        (out / "model.json").write_text(sidecar)
    _emit(report, args.output)
    return EXIT_OK


def _entangler(spec: str, seeds: list[int], n: int, rng: np.random.Generator) -> tuple[Circuit, dict]:
    if spec.startswith("basis:"):
        bits = [int(ch) for ch in spec[6:]]
        if set(bits) - {0, 1} or len(bits) != len(seeds):
            raise ConfigError(f"basis pattern needs {len(seeds)} bits of 0/1")
        return seed_entangler("basis_pattern", seeds, n, bits=bits), {"kind": "basis", "bits": bits}
    if spec == "random":
        bits = [int(b) for b in rng.integers(0, 2, len(seeds))]
        return seed_entangler("basis_pattern", seeds, n, bits=bits), {"kind": "basis", "bits": bits}
    if spec in ("ghz", "ghz_tree"):
        return seed_entangler(spec, seeds, n), {"kind": spec}
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"--seeds must be basis:<bits>, random, ghz, ghz_tree or a circuit file; got {spec!r}")
    custom = read_circuit(path.read_text())
    return seed_entangler("custom_clifford", seeds, n, circuit=custom), {"kind": "custom", "file": str(path)}


def _synthesize(model: TdModel, seeds_spec: str | None, rng) -> tuple[Circuit, dict, dict | None]:
    uc, reps = synth_uc(model)
    if not seeds_spec:
        return uc, reps, None
    plan = seed_plan(model, reps)
    ent, info = _entangler(seeds_spec, plan.seeds, model.n_qubits, rng)
    info["plan"] = plan
    return ent + plan.u_g + uc, reps, info


def _layer_summary(model: TdModel, circ: Circuit) -> dict:
    kinds: dict[str, int] = {}
    for layer in circ.layers:
        kind = layer.tag.get("kind", "untagged")
        kinds[kind] = kinds.get(kind, 0) + 1
    summary = {"by_kind": kinds, "cnot_layers": circ.cnot_layer_count(), "gates": circ.gate_count()}
    lat = model.lattice
    if lat.fully_periodic:
        d = model.params.d_s
        summary["part_depths"] = {
            ",".join(map(str, S)) or "-": part_depth(lat, d, S) for S in uc_parts(lat.D, d)
        }
        if len(set(lat.L)) == 1:
            summary["predicted_uc_cnot_layers"] = predicted_depth(lat.D, d, lat.L[0])
        summary["uc_cnot_layers"] = len(circ.layers_of("uc"))
    return summary


def cmd_synth(args) -> int:
    model = _build(args)
    rng = np.random.default_rng(args.rng_seed)
    circ, _, _ = _synthesize(model, args.seeds, rng)
    text = circ.to_text()
    summary = _layer_summary(model, circ)
    if args.output:
        Path(args.output).write_text(text)
        print(json.dumps(summary, indent=1, sort_keys=True))
    else:
        sys.stdout.write(text)
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    model = _build(args)
    rng = np.random.default_rng(args.rng_seed)
    info = None
    reps = None
    if args.circuit:
        circ = read_circuit(Path(args.circuit).read_text())
        if circ.n_qubits != model.n_qubits:
            raise ConfigError(f"circuit has {circ.n_qubits} qubits, model has {model.n_qubits}")
    else:
        circ, reps, info = _synthesize(model, args.seeds, rng)
    state = run(circ)
    check = verify_code_state(state, model)
    report = _base_report(model)
    report["layers"] = len(circ.layers)
    report["violations"] = check.violations
    report.update(_counts(model) if model.is_stabilizer else {})
    checks: dict = {"code_state": check.passed}

    if info is not None:
        plan = info["plan"]
        if info["kind"] == "basis":
            uc_state = run(synth_uc(model)[0])
            for op, b in zip(plan.logical_x, info["bits"]):
                if b:
                    uc_state.apply_pauli(op)
            checks["logical_pattern"] = states_equal(state, uc_state)
        elif info["kind"] == "ghz":
            tree = seed_entangler("ghz_tree", plan.seeds, model.n_qubits)
            checks["ghz_chain_equals_tree"] = states_equal(state, run(tree + plan.u_g + synth_uc(model)[0]))

    if args.oracle:
        if model.n_qubits > args.oracle_cap:
            report["oracle"] = f"skipped: {model.n_qubits} qubits above cap {args.oracle_cap}"
        else:
            dense = dense_run(circ, cap=args.oracle_cap)
            checks["oracle_tableau_agree"] = tableau_crosscheck(state, dense)
            if info is None and not args.circuit and model.lattice.fully_periodic:
                checks["oracle_ewsc_fidelity"] = fidelity(dense, dense_ewsc(model, cap=args.oracle_cap)) >= 1 - 1e-10
            if info is not None and info["kind"] in ("basis", "ghz"):
                base = dense_run(synth_uc(model)[0], cap=args.oracle_cap)
                k = len(info["plan"].seeds)
                if info["kind"] == "basis":
                    coeffs = {tuple(info["bits"]): 1.0}
                else:
                    coeffs = {(0,) * k: 1.0, (1,) * k: 1.0}
                target = dense_logical_state(base, info["plan"].logical_x, coeffs)
                checks["oracle_logical_fidelity"] = fidelity(dense, target) >= 1 - 1e-10
    report["checks"] = checks
    report["pass"] = all(bool(v) for v in checks.values())
    _emit(report, args.output)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def cmd_css(args) -> int:
    try:
        gx = gf2.read_matrix(Path(args.gx).read_text())
        gz = gf2.read_matrix(Path(args.gz).read_text())
        # Redundant checks are dropped before loading; they generate nothing new.
        dropped = (gx.rows - gf2.rank(gx), gz.rows - gf2.rank(gz))
        gx = gx.select_rows(gf2.independent_rows(gx))
        gz = gz.select_rows(gf2.independent_rows(gz))
        code = css_mod.load_css(gx, gz)
    except (ValueError, NotCss, DependentGenerators) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CSS
    if args.plan:
        plan = css_mod.PrepPlan.from_json(Path(args.plan).read_text())
        source = "given"
    else:
        code, plan = css_mod.greedy_plan(code)
        source = "greedy"
    report = {
        "n": code.n,
        "k": code.k,
        "r": code.r,
        "plan_source": source,
        "dropped_dependent_rows": {"x": dropped[0], "z": dropped[1]},
    }
    if not css_mod.validate_plan(code, plan):
        report["pass"] = False
        report["error"] = "plan matrix is not unit lower triangular"
        _emit(report, args.output)
        return EXIT_VERIFY
    seeds = css_mod.find_seeds(code, plan)
    report.update(seeds.to_dict())
    report["uniqueness"] = css_mod.uniqueness_check(code, plan, seeds)
    rng = np.random.default_rng(args.rng_seed)
    base = run(css_mod.synth_prep(code, plan))
    stabilized = all(base.expectation(P) == 1 for P in css_mod.code_stabilizers(code))
    patterns = [[0] * code.k, [1] * code.k] + [list(rng.integers(0, 2, code.k)) for _ in range(args.patterns)]
    end_to_end = True
    for bits in patterns:
        got = run(css_mod.seeded_preparation(code, plan, seeds, bits))
        want = base.copy()
        for op, b in zip(seeds.logical_ops(), bits):
            if b:
                want.apply_pauli(op)
        end_to_end &= states_equal(got, want)
    report["code_state"] = stabilized
    report["end_to_end"] = bool(end_to_end)
    report["pass"] = bool(stabilized and end_to_end and all(seeds.certificates.values()))
    _emit(report, args.output)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=1, sort_keys=True, default=_json_default) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdcodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def lattice_args(p):
        p.add_argument("--td", required=True, help="model parameters d_n,d_s,d_l,D")
        p.add_argument("--dims", required=True, help="cells per direction, e.g. 4,4")
        p.add_argument("--open", default="", help="open directions, numbered from 1")
        p.add_argument("--rng-seed", type=int, default=DEFAULT_RNG_SEED)
        p.add_argument("-o", "--output", help="write the result here instead of stdout")

    p = sub.add_parser("model", help="stabilizer counts, degeneracy and redundancy report")
    lattice_args(p)
    p.add_argument("--export", help="directory for gx.txt, gz.txt and model.json")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("synth", help="write the preparation circuit")
    lattice_args(p)
    p.add_argument("--seeds", help="basis:<bits> | random | ghz | ghz_tree | <circuit file>")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="simulate and check every stabilizer")
    lattice_args(p)
    p.add_argument("--seeds", help="basis:<bits> | random | ghz | ghz_tree | <circuit file>")
    p.add_argument("--circuit", help="verify this circuit file instead of synthesizing one")
    p.add_argument("--oracle", action="store_true", help="also run the dense oracle within the cap")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("css", help="seed finding for a CSS code given by two check matrices")
    p.add_argument("--gx", required=True)
    p.add_argument("--gz", required=True)
    p.add_argument("--plan", help="JSON file with representatives and order")
    p.add_argument("--patterns", type=int, default=8, help="random seed patterns to verify")
    p.add_argument("--rng-seed", type=int, default=DEFAULT_RNG_SEED)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_css)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UnsupportedModel, NotAStabilizerCode) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (NotCss, DependentGenerators) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CSS
    except InternalConsistencyError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (
        ConfigError,
        InvalidLattice,
        InvalidParams,
        InvalidPlan,
        CircuitFormatError,
        SeedSetViolation,
        TooManyQubits,
        TdError,
        OSError,
        ValueError,
    ) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
