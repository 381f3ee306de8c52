"""Command-line front end.

Subcommands: create, analyze, tables, validate, sample, run. ``--format
machine`` switches any of them to JSON output. Exit codes: 0 success, 1 a
check failed, 2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from typing import Callable

from . import __version__
from .circuitdoc import CircuitDocError, InputSpec, circuit_to_doc, complex_to_json, load_doc
from .circuits import (
    Circuit,
    Device,
    bell_analyzer,
    bell_creator,
    mapping_report,
    trace_circuit,
)
from .elements import TwoModeGate
from .detection import COINCIDENCE_FOR, Outcome, identify_bell, outcome_distribution, sample_shots
from .oracle import error_scaling_study
from .state import (
    BellLabel,
    PairState,
    RectLabel,
    bell_components,
    bell_vector,
    make_downconversion_state,
    rect_vector,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXPONENT_RANGE = (1.8, 2.2)


class UsageError(Exception):
    pass


def fmt_complex(z: complex) -> str:
    z = complex(z)
    re, im = z.real + 0.0, z.imag + 0.0
    sign = "-" if im < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}j"


def state_json(state: PairState) -> dict:
    return {"vacuum_amp": complex_to_json(state.vacuum_amp),
            "pair_amps": [complex_to_json(z) for z in state.pair_amps]}


def state_text(state: PairState) -> str:
    pairs = "  ".join(f"{k.name}={fmt_complex(state.pair_amps[k])}" for k in RectLabel)
    return f"vacuum={fmt_complex(state.vacuum_amp)}  {pairs}"


def element_desc(element) -> str:
    if isinstance(element, TwoModeGate):
        return element.name
    return f"switch({fmt_complex(element.injection)} on {element.target.name})"


def identify_pair(state: PairState) -> tuple[BellLabel | None, complex]:
    """Bell label whose vector carries (to 1e-9 of the weight) the whole pair part."""
    comps = bell_components(state.pair_amps)
    weight = state.pair_norm_sq
    if weight == 0:
        return None, 0j
    for label, c in comps.items():
        if abs(c) ** 2 >= (1 - 1e-9) * weight:
            return label, c
    return None, 0j


def identify_rect(state: PairState) -> RectLabel | None:
    """Rectilinear label carrying (to 1e-9 of the weight) the whole pair part."""
    weight = state.pair_norm_sq
    if weight == 0:
        return None
    k = max(RectLabel, key=lambda k: abs(state.pair_amps[k]))
    return k if abs(state.pair_amps[k]) ** 2 >= (1 - 1e-9) * weight else None


def trace_payload(state: PairState, circuit: Circuit) -> list[dict]:
    states = trace_circuit(state, circuit)
    steps = [{"step": "input", "state": states[0]}]
    for el, st in zip(circuit, states[1:]):
        steps.append({"step": f"after {element_desc(el)}", "state": st})
    return steps


# -- commands: each returns (exit code, machine record, text lines) ----------

def cmd_create(args) -> tuple[int, dict, list[str]]:
    label = args.input
    eps = _nonzero_epsilon(args.epsilon)
    circuit = bell_creator(eps)
    start = make_downconversion_state(eps, rect_vector(label))
    steps = trace_payload(start, circuit)
    final = steps[-1]["state"]
    bell, coeff = identify_pair(final)
    record = {
        "command": "create",
        "input": label.name,
        "epsilon": complex_to_json(eps),
        "trace": [{"step": s["step"], "state": state_json(s["state"])} for s in steps],
        "final": state_json(final),
        "bell": bell.value if bell else None,
        "bell_coefficient": complex_to_json(coeff),
    }
    lines = [f"Bell creator, eps = {fmt_complex(eps)}, input |0> + eps|{label.name}>"]
    lines += [f"  {s['step']:<32} {state_text(s['state'])}" for s in steps]
    lines.append(f"final: {state_text(final)}")
    if bell:
        lines.append(f"identified: |0> + ({fmt_complex(coeff)})|{bell.symbol}>  [{bell.value}]")
    else:
        lines.append("identified: none")
    return EXIT_OK, record, lines


def cmd_analyze(args) -> tuple[int, dict, list[str]]:
    bell = args.bell
    eps = _nonzero_epsilon(args.epsilon)
    circuit = bell_analyzer(eps)
    start = make_downconversion_state(-eps, bell_vector(bell))
    steps = trace_payload(start, circuit)
    final = steps[-1]["state"]
    dist = outcome_distribution(final)
    label, prob = identify_bell(start, eps)
    verdict = identify_rect(final) if label is not None else None
    record = {
        "command": "analyze",
        "bell": bell.value,
        "epsilon": complex_to_json(eps),
        "trace": [{"step": s["step"], "state": state_json(s["state"])} for s in steps],
        "final": state_json(final),
        "distribution": {o.value: dist.p[o] for o in Outcome},
        "verdict": verdict.name if verdict is not None else None,
        "identified_bell": label.value if label else None,
        "success_probability": prob,
        "success_probability_unnormalized": abs(eps) ** 2,
    }
    lines = [f"Bell analyzer, eps = {fmt_complex(eps)}, input |0> - eps|{bell.symbol}>"]
    lines += [f"  {s['step']:<32} {state_text(s['state'])}" for s in steps]
    lines.append(f"final: {state_text(final)}")
    for o in Outcome:
        lines.append(f"  p({o.value}) = {dist.p[o]!r}")
    if verdict is not None:
        lines.append(f"verdict: {verdict.name} ({COINCIDENCE_FOR[verdict].value}) -> {label.value}, "
                     f"probability {prob!r} (|eps|^2 = {abs(eps) ** 2!r})")
    else:
        lines.append("verdict: none")
    return EXIT_OK, record, lines


def cmd_tables(args) -> tuple[int, dict, list[str]]:
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    reports = [mapping_report(d, args.epsilon, args.tol) for d in Device]
    ok = all(r.passed for r in reports)
    record = {"command": "tables", "tol": args.tol, "epsilon": complex_to_json(args.epsilon),
              "passed": ok, "reports": []}
    lines = []
    for rep in reports:
        rows = []
        lines.append(f"{rep.device.value} table (eps = {fmt_complex(rep.epsilon)}, tol = {args.tol:g})")
        for row in rep.rows:
            status = "PASS" if row.passed(args.tol) else "FAIL"
            rows.append({"input": row.input_desc, "expected": row.expected_desc,
                         "computed": state_json(row.computed), "deviation": row.deviation,
                         "passed": row.passed(args.tol)})
            lines.append(f"  {status}  {row.input_desc:<18} -> {row.expected_desc:<18} "
                         f"max deviation {row.deviation:.3e}")
        for note in rep.notes:
            lines.append(f"  note: {note}")
        record["reports"].append({"device": rep.device.value, "passed": rep.passed,
                                  "rows": rows, "notes": list(rep.notes)})
    lines.append("ALL PASS" if ok else "FAILED")
    return (EXIT_OK if ok else EXIT_FAIL), record, lines


def cmd_validate(args) -> tuple[int, dict, list[str]]:
    study = error_scaling_study(args.scales, n_max=args.nmax)
    lo, hi = EXPONENT_RANGE
    ok = study.exact or study.within(lo, hi)
    record = {"command": "validate", "n_max": args.nmax,
              "rows": [{"scale": s, "max_deviation": d} for s, d in study.rows()],
              "exponent": study.exponent, "exact": study.exact, "passed": ok}
    lines = [f"first-order switch vs exact propagation (n_max = {args.nmax})",
             f"  {'scale':>10}  {'max deviation':>14}"]
    lines += [f"  {s:>10.3g}  {d:>14.6e}" for s, d in study.rows()]
    if study.exact:
        lines.append("exponent: undefined (all deviations zero; model exact)")
    else:
        lines.append(f"exponent: {study.exponent:.4f} (accepted range [{lo}, {hi}]) "
                     f"{'PASS' if ok else 'FAIL'}")
    return (EXIT_OK if ok else EXIT_FAIL), record, lines


def cmd_sample(args) -> tuple[int, dict, list[str]]:
    if args.shots < 0:
        raise UsageError("--shots must be nonnegative")
    bell, eps = args.bell, _nonzero_epsilon(args.epsilon)
    start = make_downconversion_state(-eps, bell_vector(bell))
    final = trace_circuit(start, bell_analyzer(eps))[-1]
    dist = outcome_distribution(final)
    rec = sample_shots(dist, args.shots, args.seed)
    p = dist.coincidence_probability
    hits = sum(n for o, n in rec.counts.items() if o is not Outcome.NO_COINCIDENCE)
    rate = hits / args.shots if args.shots else 0.0
    sigma = math.sqrt(args.shots * p * (1 - p))
    z = (hits - args.shots * p) / sigma if sigma > 0 else 0.0
    record = {"command": "sample", "bell": bell.value, "epsilon": complex_to_json(eps),
              "shots": args.shots, "seed": args.seed,
              "counts": {o.value: n for o, n in rec.counts.items()},
              "empirical_rate": rate, "expected_rate": p,
              "expected_rate_unnormalized": abs(eps) ** 2, "z_score": z}
    lines = [f"sampled {args.shots} shots of the analyzer on |0> - eps|{bell.symbol}> "
             f"(eps = {fmt_complex(eps)}, seed = {args.seed})"]
    lines += [f"  {o.value:<15} {rec.counts.get(o, 0)}" for o in Outcome]
    lines.append(f"coincidence rate: empirical {rate!r}, expected {p!r} "
                 f"(|eps|^2 = {abs(eps) ** 2!r}), z = {z:.3f}")
    return EXIT_OK, record, lines


def cmd_run(args) -> tuple[int, dict, list[str]]:
    try:
        doc = load_doc(args.path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from None
    circuit = doc.build_circuit()
    start = doc.build_input()
    steps = trace_payload(start, circuit)
    final = steps[-1]["state"]
    bell, coeff = identify_pair(final)
    rect = identify_rect(final)
    record = {"command": "run", "path": str(args.path), "epsilon": complex_to_json(doc.epsilon),
              "trace": [{"step": s["step"], "state": state_json(s["state"])} for s in steps],
              "final": state_json(final), "bell": bell.value if bell else None,
              "bell_coefficient": complex_to_json(coeff),
              "rectilinear": rect.name if rect is not None else None}
    lines = [f"circuit from {args.path}: {len(circuit)} elements"]
    lines += [f"  {s['step']:<32} {state_text(s['state'])}" for s in steps]
    lines.append(f"final: {state_text(final)}")
    if bell:
        lines.append(f"identified: |0> + ({fmt_complex(coeff)})|{bell.symbol}>  [{bell.value}]")
    elif rect is not None:
        lines.append(f"identified: rectilinear {rect.name} "
                     f"({COINCIDENCE_FOR[rect].value}, amplitude {fmt_complex(final.pair_amps[rect])})")
    else:
        lines.append("identified: none")
    return EXIT_OK, record, lines


def cmd_export(args) -> tuple[int, dict, list[str]]:
    """Write the built-in creator or analyzer as a circuit document."""
    eps = _nonzero_epsilon(args.epsilon)
    if args.device == "creator":
        circuit = bell_creator(eps)
        spec = InputSpec("rectilinear", (args.input or "HH").upper())
        if spec.label not in RectLabel.__members__:
            raise UsageError(f"unknown rectilinear label {args.input!r}")
    else:
        circuit = bell_analyzer(eps)
        spec = InputSpec("bell", BellLabel.parse(args.input or "phi_plus").value)
    doc = circuit_to_doc(circuit, eps, spec)
    return EXIT_OK, doc.to_json(), doc.dumps().splitlines()


# -- argument parsing -------------------------------------------------------

def _nonzero_epsilon(eps: complex) -> complex:
    if eps == 0:
        raise UsageError("epsilon must be nonzero (switch amplitude undefined)")
    return eps


def _rect(text: str) -> RectLabel:
    try:
        return RectLabel.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bell(text: str) -> BellLabel:
    try:
        return BellLabel.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex(text: str) -> complex:
    try:
        z = complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError("epsilon must be finite")
    return z


def _scales(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad scale list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS,
                     help="output format (default: text)")

    parser = argparse.ArgumentParser(prog="bellswitch", parents=[fmt],
                                     description="Bell-state creation and detection with a "
                                                 "pumped-crystal conditional-phase switch.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("create", parents=[fmt], help="run the Bell creator on a rectilinear input")
    p.add_argument("--input", type=_rect, required=True, help="HH, HV, VH or VV")
    p.add_argument("--epsilon", type=_complex, default=0.01)
    p.set_defaults(func=cmd_create)

    p = sub.add_parser("analyze", parents=[fmt], help="run the Bell analyzer and detectors")
    p.add_argument("--bell", type=_bell, required=True, help="psi-plus, psi-minus, phi-plus, phi-minus")
    p.add_argument("--epsilon", type=_complex, default=0.01)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("tables", parents=[fmt], help="check both mapping tables")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--epsilon", type=_complex, default=0.01)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("validate", parents=[fmt], help="first-order switch vs exact propagation")
    p.add_argument("--scales", type=_scales, default=[1e-2, 1e-3, 1e-4],
                   help="comma-separated descending amplitude scales")
    p.add_argument("--nmax", type=int, default=2, help="photons per mode kept in the Fock basis")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sample", parents=[fmt], help="seeded detector shots behind the analyzer")
    p.add_argument("--bell", type=_bell, required=True)
    p.add_argument("--epsilon", type=_complex, default=0.01)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("run", parents=[fmt], help="execute a JSON circuit document")
    p.add_argument("path")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("export", parents=[fmt], help="print a built-in device as a circuit document")
    p.add_argument("device", choices=("creator", "analyzer"))
    p.add_argument("--input", default=None, help="input label for the document")
    p.add_argument("--epsilon", type=_complex, default=0.01)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        # argparse prints help and usage errors itself
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command: Callable = args.func
    try:
        code, record, lines = command(args)
    except (UsageError, CircuitDocError, ValueError) as exc:
        print(f"bellswitch {args.command}: error: {exc}", file=err)
        return EXIT_USAGE
    if getattr(args, "format", "text") == "machine":
        out.write(json.dumps(record, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main_entry() -> None:
    sys.exit(main())
