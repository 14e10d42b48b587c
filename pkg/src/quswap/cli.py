"""Command line front end: ``quswap verify | measure | enumerate | dump-basis``.

Exit codes: 0 success, 1 verification failure (``verify`` only), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from . import __version__
from .gbell import GBellLabel, MultiEntangledSpec, enumerate_basis, make_entangled
from .harness import LabelRecord, relabel, verify_scenario
from .measurement import MeasurementSpec, collapse_all, project, sample
from .predict import InfeasibleOutcomeError, SwapScenario, predict_general
from .state import (
    DEFAULT_MAX_AMPLITUDES,
    StateVector,
    amplitude_limit,
    check_size,
    fidelity_up_to_phase,
    tensor_all,
)

REPORT_FORMAT = "quswap-report"
REPORT_VERSION = 1


class InputError(Exception):
    """Bad scenario file or arguments; maps to exit code 2."""


def load_schema(name: str) -> dict:
    text = resources.files("quswap").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def bundled_scenarios() -> list[str]:
    folder = resources.files("quswap").joinpath("scenarios")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def _read_scenario_text(path: str) -> str:
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    name = p.name[:-5] if p.name.endswith(".json") else p.name
    if name in bundled_scenarios() and not p.exists():
        return resources.files("quswap").joinpath("scenarios", f"{name}.json").read_text()
    raise InputError(f"{path}: no such file or bundled scenario")


@dataclass
class LoadedScenario:
    dimension: int
    systems: tuple[MultiEntangledSpec, ...]
    particles: list[list[int]]
    outcome: GBellLabel | None
    seed: int | None

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(p for block in self.particles for p in block)

    @property
    def num_qudits(self) -> int:
        return sum(s.num_particles for s in self.systems)

    def swap_scenario(self) -> SwapScenario | None:
        """Canonical scenario for the predictor, or None if some system is fully measured."""
        counts = tuple(len(block) for block in self.particles)
        if any(a >= s.num_particles for a, s in zip(counts, self.systems)):
            return None
        return SwapScenario(self.dimension, self.systems, counts)

    def describe(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "systems": [str(s) for s in self.systems],
            "particles": [list(block) for block in self.particles],
        }


def parse_scenario(text: str, source: str = "<scenario>") -> LoadedScenario:
    """Parse and validate scenario JSON; raises InputError with a located message."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(load_schema("scenario"))
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "(top level)"
        raise InputError(f"{source}: field {where}: {err.message}")

    D = raw["dimension"]
    systems = tuple(MultiEntangledSpec(D, s["l"], tuple(s["k"])) for s in raw["systems"])
    for j, spec in enumerate(systems):
        if spec.num_particles < 2:
            raise InputError(f"{source}: field systems/{j}/k: a system needs at least two particles")
    try:
        check_size(D, sum(s.num_particles for s in systems))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None

    starts, pos = [], 0
    for spec in systems:
        starts.append(pos)
        pos += spec.num_particles

    measure = raw["measure"]
    if measure["mode"] == "last":
        counts = measure["counts"]
        if len(counts) != len(systems):
            raise InputError(f"{source}: field measure/counts: expected {len(systems)} entries, got {len(counts)}")
        particles = []
        for j, (a, start, spec) in enumerate(zip(counts, starts, systems)):
            if a < 1:
                raise InputError(f"{source}: field measure/counts/{j}: each system must contribute at least one measured particle")
            if a > spec.num_particles:
                raise InputError(f"{source}: field measure/counts/{j}: system has only {spec.num_particles} particles")
            n = spec.num_particles
            particles.append(list(range(start + n - a, start + n)))
    else:
        particles = [list(block) for block in measure["particles"]]
        if len(particles) != len(systems):
            raise InputError(f"{source}: field measure/particles: expected {len(systems)} lists, got {len(particles)}")
        for j, (block, start, spec) in enumerate(zip(particles, starts, systems)):
            if not block:
                raise InputError(f"{source}: field measure/particles/{j}: each system must contribute at least one measured particle")
            if len(set(block)) != len(block):
                raise InputError(f"{source}: field measure/particles/{j}: repeated particle index")
            outside = [p for p in block if not start <= p < start + spec.num_particles]
            if outside:
                raise InputError(
                    f"{source}: field measure/particles/{j}: particles {outside} are not in "
                    f"system {j} (indices {start}..{start + spec.num_particles - 1})"
                )

    outcome = None
    if "outcome" in raw:
        n_meas = sum(len(b) for b in particles)
        s = raw["outcome"]["s"]
        if len(s) != n_meas - 1:
            raise InputError(f"{source}: field outcome/s: expected {n_meas - 1} entries for {n_meas} measured particles, got {len(s)}")
        outcome = GBellLabel(D, raw["outcome"]["r"], tuple(s))
    return LoadedScenario(D, systems, particles, outcome, raw.get("seed"))


def load_scenario(path: str) -> LoadedScenario:
    return parse_scenario(_read_scenario_text(path), source=path)


def _complex_list(state: StateVector | None) -> list[list[float]] | None:
    if state is None:
        return None
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]


def _predict(loaded: LoadedScenario, label: GBellLabel) -> tuple[bool | None, MultiEntangledSpec | None]:
    scenario = loaded.swap_scenario()
    if scenario is None:
        return None, None
    canonical = relabel(scenario, loaded.particles)
    try:
        return True, predict_general(canonical, label).result
    except InfeasibleOutcomeError:
        return False, None


def _record(loaded: LoadedScenario, label: GBellLabel, probability: float,
            post: StateVector | None, dump_state: bool) -> dict[str, Any]:
    predicted_feasible, predicted = _predict(loaded, label)
    scenario = loaded.swap_scenario()
    expected = None
    if scenario is not None:
        expected = 1.0 / loaded.dimension ** scenario.q if predicted_feasible else 0.0
    fidelity = None
    if post is not None and predicted is not None:
        fidelity = fidelity_up_to_phase(post, make_entangled(predicted))
    rec = {
        "label": str(label),
        "r": label.r,
        "s": list(label.s),
        "probability": probability,
        "feasible": post is not None,
        "predicted_feasible": predicted_feasible,
        "expected_probability": expected,
        "predicted": None if predicted is None else str(predicted),
        "fidelity": fidelity,
    }
    if dump_state:
        rec["unmeasured_particles"] = list(MeasurementSpec(loaded.flat).unmeasured(loaded.num_qudits))
        rec["post_state"] = _complex_list(post)
    return rec


def _verify_record(rec: LabelRecord) -> dict[str, Any]:
    return {
        "label": str(rec.label),
        "r": rec.label.r,
        "s": list(rec.label.s),
        "probability": rec.probability,
        "feasible": rec.oracle_feasible,
        "predicted_feasible": rec.predicted_feasible,
        "expected_probability": rec.expected_probability,
        "predicted": None if rec.predicted is None else str(rec.predicted),
        "fidelity": rec.fidelity,
    }


def _header(command: str) -> dict[str, Any]:
    return {"format": REPORT_FORMAT, "version": REPORT_VERSION, "command": command}


def _fmt(x: float | None) -> str:
    return "-" if x is None else f"{x:.12g}"


def _table(rows: Sequence[Sequence[str]], headers: Sequence[str]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(headers, *rows)]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _record_rows(records: Sequence[dict[str, Any]]) -> list[list[str]]:
    rows = []
    for rec in records:
        rows.append([
            rec["label"],
            _fmt(rec["probability"]),
            "yes" if rec["feasible"] else "no",
            rec["predicted"] or "-",
            _fmt(rec["fidelity"]),
        ])
    return rows


_RECORD_HEADERS = ["outcome", "probability", "feasible", "predicted", "fidelity"]


def _scenario_lines(loaded: LoadedScenario) -> list[str]:
    return [
        f"dimension: {loaded.dimension}",
        "systems:   " + " (x) ".join(str(s) for s in loaded.systems),
        f"measured:  {list(loaded.flat)}",
    ]


def cmd_verify(args) -> tuple[int, dict[str, Any], str]:
    loaded = load_scenario(args.file)
    scenario = loaded.swap_scenario()
    if scenario is None:
        raise InputError(f"{args.file}: verify needs at least one unmeasured particle in every system")
    try:
        report = verify_scenario(scenario, particles=loaded.particles)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    records = [_verify_record(rec) for rec in report.records]
    summary = {
        "labels": len(report.records),
        "feasible": report.num_feasible,
        "total_probability": report.total_probability,
        "max_fidelity_deviation": report.max_fidelity_deviation,
        "max_probability_deviation": report.max_probability_deviation,
        "passed": report.passed,
        "wall_time_s": report.wall_time,
    }
    payload = _header("verify") | {
        "scenario": loaded.describe(),
        "measured_particles": list(loaded.flat),
        "records": records,
        "summary": summary,
    }
    text = "\n".join(_scenario_lines(loaded) + [
        "",
        _table(_record_rows(records), _RECORD_HEADERS),
        "",
        f"feasible outcomes: {report.num_feasible} of {len(records)}",
        f"max fidelity deviation:    {report.max_fidelity_deviation:.3e}",
        f"max probability deviation: {report.max_probability_deviation:.3e}",
        f"result: {'PASS' if report.passed else 'FAIL'}",
    ])
    return (0 if report.passed else 1), payload, text


def cmd_measure(args) -> tuple[int, dict[str, Any], str]:
    loaded = load_scenario(args.file)
    state = product_state_of(loaded)
    spec = MeasurementSpec(loaded.flat)
    seed = args.seed if args.seed is not None else loaded.seed
    if loaded.outcome is not None:
        mode = "explicit"
        res = project(state, spec, loaded.outcome)
        seed = None
    else:
        if seed is None:
            raise InputError(f"{args.file}: sampling needs a seed (scenario 'seed' field or --seed)")
        if not 0 <= seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        mode = "sampled"
        res = sample(state, spec, seed)
    rec = _record(loaded, res.label, res.probability, res.post_state, args.dump_state)
    payload = _header("measure") | {
        "scenario": loaded.describe(),
        "measured_particles": list(loaded.flat),
        "mode": mode,
        "seed": seed,
        "outcome": rec,
    }
    lines = _scenario_lines(loaded) + [
        f"mode:        {mode}" + (f" (seed {seed})" if seed is not None else ""),
        f"outcome:     {rec['label']}",
        f"probability: {_fmt(rec['probability'])}",
        f"feasible:    {'true' if rec['feasible'] else 'false'}",
        f"predicted:   {rec['predicted'] or '-'}",
        f"fidelity:    {_fmt(rec['fidelity'])}",
    ]
    if args.dump_state and res.post_state is not None:
        lines.append(f"post state on particles {rec['unmeasured_particles']}:")
        lines.extend(f"  |{''.join(map(str, d))}>  {a.real:+.12f}{a.imag:+.12f}j"
                     for d, a in res.post_state.support())
    return 0, payload, "\n".join(lines)


def cmd_enumerate(args) -> tuple[int, dict[str, Any], str]:
    loaded = load_scenario(args.file)
    state = product_state_of(loaded)
    try:
        results = collapse_all(state, MeasurementSpec(loaded.flat))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    records = [_record(loaded, r.label, r.probability, r.post_state, args.dump_state) for r in results]
    feasible = sum(rec["feasible"] for rec in records)
    total = float(sum(r.probability for r in results))
    payload = _header("enumerate") | {
        "scenario": loaded.describe(),
        "measured_particles": list(loaded.flat),
        "records": records,
        "summary": {"labels": len(records), "feasible": feasible, "total_probability": total},
    }
    text = "\n".join(_scenario_lines(loaded) + [
        "",
        _table(_record_rows(records), _RECORD_HEADERS),
        "",
        f"feasible outcomes: {feasible} of {len(records)}; total probability {_fmt(total)}",
    ])
    return 0, payload, text


def cmd_dump_basis(args) -> tuple[int, dict[str, Any], str]:
    D, M = args.dimension, args.particles
    if D < 2 or M < 1:
        raise InputError("need --dimension >= 2 and --particles >= 1")
    try:
        check_size(D, 2 * M, what="basis listing")
        labels = list(enumerate_basis(D, M))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    basis, rows = [], []
    for label in labels:
        support = make_entangled(label).support()
        basis.append({
            "label": str(label),
            "r": label.r,
            "s": list(label.s),
            "support": [{"digits": list(d), "amplitude": [a.real, a.imag]} for d, a in support],
        })
        kets = " + ".join(f"({a.real:+.6f}{a.imag:+.6f}j)|{''.join(map(str, d))}>" for d, a in support)
        rows.append([str(label), kets])
    payload = _header("dump-basis") | {"dimension": D, "particles": M, "basis": basis}
    return 0, payload, _table(rows, ["label", "state"])


def product_state_of(loaded: LoadedScenario) -> StateVector:
    return tensor_all(make_entangled(s) for s in loaded.systems)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit the machine-readable report")
    common.add_argument("--max-amplitudes", type=int, default=argparse.SUPPRESS, metavar="N",
                        help=f"size guard (default {DEFAULT_MAX_AMPLITUDES})")

    parser = argparse.ArgumentParser(prog="quswap", parents=[common],
                                     description="Entanglement swapping between maximally entangled qudit systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check every outcome against the closed form")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("measure", parents=[common], help="one outcome: given in the file, or sampled")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dump-state", action="store_true")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("enumerate", parents=[common], help="full outcome distribution")
    p.add_argument("file")
    p.add_argument("--dump-state", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("dump-basis", parents=[common], help="list the generalized Bell basis")
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.set_defaults(func=cmd_dump_basis)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    limit = getattr(args, "max_amplitudes", DEFAULT_MAX_AMPLITUDES)
    try:
        with amplitude_limit(limit):
            code, payload, text = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
