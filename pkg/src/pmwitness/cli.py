"""Command-line front end.

Subcommands:

- witness: read one scenario's statistics from a structured input file
  (coordinates, probabilities, or counts per preparation) and write the
  full witness report as deterministic JSON.
- sweep: write the bound curves on a delta grid as CSV.
- verify: run the randomized bound checks (or, with --region, the
  certified-verdict checks) on a seeded noise ensemble and print
  pass/fail lines with worst margins.
- thresholds: print the five computed noise thresholds next to their
  rounded reference values.

Exit codes: 0 success (verify: all checks passed); 1 verification
failure or internal error; 2 usage error (bad flag values); 3 input
parse error; 4 degenerate scenario; 5 noise level outside every
certified region.

Output files are written atomically (temp file, then rename), numbers
are serialized to 12 significant digits, and no timestamps are embedded,
so identical inputs produce byte-identical outputs.  With --plot, the
witness and sweep commands additionally render a PNG figure next to the
output file; the JSON/CSV remain the machine-readable contract.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys

from .geometry import (
    DegenerateScenarioError,
    InputDomainError,
    LABELS,
    PrepPoint,
    Scenario,
    ScenarioError,
    coords_from_probs,
    diagonal_intersection,
    decomposition_weights,
    ideal_points,
    parity_mixtures,
)
from .pom import pom_analysis
from .sweeps import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    NOISE_MODELS,
    NoiseEnsemble,
    RegionPreconditionError,
    SweepRow,
    sweep_curves,
    threshold_root,
    verify_lemmas,
    verify_theorem_regions,
)
from .witnesses import full_report
from . import __version__

INPUT_FORMAT_VERSION = "1"

# (name, reference value, match tolerance) for the thresholds command.
THRESHOLD_REFERENCES = (
    ("pusey", 0.06, 0.005),
    ("marvian", 0.1, 0.005),
    ("combined", 0.007, 0.001),
    ("depolarizing_pusey", 0.07, 0.005),
    ("depolarizing_combined", 0.02, 0.003),
)

__all__ = ["InputFileError", "main", "parse_input_document"]


class InputFileError(ScenarioError):
    """The input document is malformed; the message names the offending field."""


def _round12(value: float) -> float | None:
    """Round to 12 significant digits for serialization; infinities become None."""
    if value is None or math.isinf(value):
        return None
    return float(f"{value:.12g}")


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.12g}"


def _point(value: PrepPoint) -> list[float]:
    return [_round12(value.x), _round12(value.y)]


def _atomic_write(path: str, data: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as handle:
        handle.write(data)
    os.replace(tmp, path)


def _parse_prep(label: str, entry: object) -> PrepPoint:
    """One preparation from its {coords|probs|counts} mapping."""
    where = f"preparations.{label}"
    if not isinstance(entry, dict):
        raise InputFileError(f"{where}: expected a mapping, got {type(entry).__name__}")
    keys = set(entry)
    if len(keys) != 1 or not keys <= {"coords", "probs", "counts"}:
        raise InputFileError(
            f"{where}: expected exactly one of 'coords', 'probs', 'counts', got {sorted(keys)}"
        )
    kind, values = next(iter(entry.items()))
    if not isinstance(values, (list, tuple)):
        raise InputFileError(f"{where}.{kind}: expected an array")
    try:
        if kind == "coords":
            if len(values) != 2:
                raise InputFileError(f"{where}.coords: expected [x, y]")
            return PrepPoint(float(values[0]), float(values[1]))
        if kind == "probs":
            if len(values) != 2:
                raise InputFileError(f"{where}.probs: expected [p0x, p0y]")
            return coords_from_probs(float(values[0]), float(values[1]))
        if len(values) != 4:
            raise InputFileError(f"{where}.counts: expected [n0x, n1x, n0y, n1y]")
        counts = []
        for v in values:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputFileError(
                    f"{where}.counts: entries must be nonnegative integers, got {v!r}"
                )
            counts.append(v)
        n0x, n1x, n0y, n1y = counts
        if n0x + n1x == 0 or n0y + n1y == 0:
            raise InputFileError(f"{where}.counts: zero total for a measurement")
        return coords_from_probs(n0x / (n0x + n1x), n0y / (n0y + n1y))
    except InputDomainError as exc:
        raise InputFileError(f"{where}.{kind}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InputFileError(f"{where}.{kind}: {exc}") from exc


def parse_input_document(text: str) -> tuple[Scenario, str | None]:
    """Parse an input document into a scenario and its optional noise annotation.

    The document is JSON with fields "version" (must be "1"),
    "preparations" (exactly the four labels, each with one of coords,
    probs or counts) and optionally "noiseModel" ("box" or
    "depolarizing").

    Raises
    ------
    InputFileError
        On any malformed content, naming the offending field.
    DegenerateScenarioError
        When the parsed statistics have no valid equivalence structure.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise InputFileError("top level: expected a mapping")
    unknown = set(document) - {"version", "preparations", "noiseModel"}
    if unknown:
        raise InputFileError(f"top level: unknown fields {sorted(unknown)}")
    if document.get("version") != INPUT_FORMAT_VERSION:
        raise InputFileError(
            f"version: expected {INPUT_FORMAT_VERSION!r}, got {document.get('version')!r}"
        )
    preps_field = document.get("preparations")
    if not isinstance(preps_field, dict):
        raise InputFileError("preparations: expected a mapping")
    if set(preps_field) != set(LABELS):
        raise InputFileError(
            f"preparations: expected exactly labels {list(LABELS)}, got {sorted(preps_field)}"
        )
    noise_model = document.get("noiseModel")
    if noise_model is not None and noise_model not in NOISE_MODELS:
        raise InputFileError(
            f"noiseModel: expected one of {list(NOISE_MODELS)}, got {noise_model!r}"
        )
    points = {label: _parse_prep(label, preps_field[label]) for label in LABELS}
    return Scenario.from_mapping(points), noise_model


def _report_document(scenario: Scenario, input_bytes: bytes) -> dict:
    """The full witness report as a JSON-ready mapping with fixed field order."""
    report = full_report(scenario)
    weights = decomposition_weights(scenario)
    pom = pom_analysis(scenario, parity_gap_value=report.d_min)
    return {
        "tool": {"name": "pmwitness", "version": __version__},
        "input_sha256": hashlib.sha256(input_bytes).hexdigest(),
        "tolerances": {
            "geometry": 1e-9,
            "degenerate_determinant": 1e-12,
            "linear_program": 1e-9,
            "parity_gap": 1e-9,
            "classical_margin": 1e-9,
        },
        "weights": {
            "c": _point(weights.c),
            "p": _round12(weights.p),
            "q": _round12(weights.q),
            "r_plus": _round12(weights.r_plus),
            "r_minus": _round12(weights.r_minus),
            "r": _round12(weights.r),
            "p_plus_prime": _point(weights.p_plus_prime),
            "p_minus_prime": _point(weights.p_minus_prime),
        },
        "witnesses": {
            "s": _round12(report.s),
            "s_orbit_max": _round12(report.s_orbit_max),
            "gamma": _round12(report.gamma),
            "beta_min": _round12(report.beta_min),
            "alpha1": _round12(report.alpha1),
            "alpha2": _round12(report.alpha2),
            "alpha3": _round12(report.alpha3),
            "d_min": _round12(report.d_min),
            "epsilon": _round12(report.epsilon),
            "s_o": _round12(report.s_o),
            "delta": _round12(report.delta),
            "pnc_feasible": report.pnc_feasible,
            "pusey_violated": report.pusey_violated,
            "marvian_witness": report.marvian_witness,
            "parity_violated": report.parity_violated,
            "gamma_exceeds_alpha_ratio": report.gamma_exceeds_alpha_ratio,
            "d_min_exceeds_alpha3": report.d_min_exceeds_alpha3,
        },
        "pom": {
            "success_probability": _round12(pom.success_probability),
            "epsilon": _round12(pom.epsilon),
            "classical_bound": _round12(pom.classical_bound),
            "exceeds_classical": pom.exceeds_classical,
        },
    }


def _plot_path(output: str) -> str:
    return os.path.splitext(output)[0] + ".png"


def _plot_witness(scenario: Scenario, path: str) -> None:
    """Render the scenario geometry: preparations, diagonals, intersection."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.plot([-1, 1, 1, -1, -1], [-1, -1, 1, 1, -1], color="0.6", linewidth=1.0)
    ideal = ideal_points()
    ax.scatter([p.x for p in ideal.values()], [p.y for p in ideal.values()],
               facecolors="none", edgecolors="0.4", s=60, label="ideal")
    for pair, style in ((("00", "11"), "C0-"), (("01", "10"), "C1-")):
        a, b = scenario.preps[pair[0]], scenario.preps[pair[1]]
        ax.plot([a.x, b.x], [a.y, b.y], style, linewidth=1.2)
    for label in LABELS:
        point = scenario.preps[label]
        ax.scatter([point.x], [point.y], color="C3", s=35, zorder=3)
        ax.annotate(label, (point.x, point.y), textcoords="offset points",
                    xytext=(5, 5), fontsize=9)
    c = diagonal_intersection(scenario)
    mixtures = parity_mixtures(scenario)
    ax.scatter([c.x], [c.y], marker="x", color="k", s=50, zorder=4, label="intersection")
    ax.scatter([mixtures.p_plus.x, mixtures.p_minus.x],
               [mixtures.p_plus.y, mixtures.p_minus.y],
               marker="+", color="C2", s=60, zorder=4, label="parity mixtures")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_sweep(rows: list[SweepRow], model: str, path: str) -> None:
    """Render the bound curves against delta."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = [("pusey_bound", lambda r: r.pusey_bound),
              ("marvian_bound", lambda r: r.marvian_bound),
              ("alpha_ratio_bound", lambda r: r.alpha_ratio_bound),
              ("alpha3_bound", lambda r: r.alpha3_bound)]
    if model == "depolarizing":
        series.append(("depol_pusey_bound", lambda r: r.depol_pusey_bound))
        series.append(("depol_alpha_ratio_bound", lambda r: r.depol_alpha_ratio_bound))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, pick in series:
        xs = [r.delta for r in rows if pick(r) is not None]
        ys = [pick(r) for r in rows if pick(r) is not None]
        if xs:
            ax.plot(xs, ys, label=name)
    ax.axhline(0.0, color="0.5", linewidth=0.8)
    ax.set_xlabel("delta")
    ax.set_ylabel("bound value")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _cmd_witness(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise InputFileError(f"cannot read {args.input}: {exc}") from exc
    scenario, _ = parse_input_document(raw.decode("utf-8"))
    document = _report_document(scenario, raw)
    _atomic_write(args.output, json.dumps(document, indent=2) + "\n")
    if args.plot:
        _plot_witness(scenario, _plot_path(args.output))
    witnesses = document["witnesses"]
    print(f"wrote {args.output}")
    print(f"delta={_fmt(witnesses['delta'])} s_orbit_max={_fmt(witnesses['s_orbit_max'])} "
          f"gamma={_fmt(witnesses['gamma'])} d_min={_fmt(witnesses['d_min'])}")
    print(f"verdicts: pusey_violated={witnesses['pusey_violated']} "
          f"marvian_witness={witnesses['marvian_witness']} "
          f"parity_violated={witnesses['parity_violated']}")
    return 0


def _sweep_csv(rows: list[SweepRow], model: str) -> str:
    buffer = io.StringIO()
    columns = ["delta", "pusey_bound", "marvian_bound", "alpha_ratio_bound", "alpha3_bound"]
    if model == "depolarizing":
        columns += ["depol_pusey_bound", "depol_alpha_ratio_bound"]
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        record = [_fmt(row.delta), _fmt(row.pusey_bound), _fmt(row.marvian_bound),
                  _fmt(row.alpha_ratio_bound), _fmt(row.alpha3_bound)]
        if model == "depolarizing":
            record += [_fmt(row.depol_pusey_bound), _fmt(row.depol_alpha_ratio_bound)]
        writer.writerow(record)
    return buffer.getvalue()


def _cmd_sweep(args: argparse.Namespace) -> int:
    rows = sweep_curves(args.delta_max, args.steps, args.noise_model)
    _atomic_write(args.output, _sweep_csv(rows, args.noise_model))
    if args.plot:
        _plot_sweep(rows, args.noise_model, _plot_path(args.output))
    print(f"wrote {args.output} ({len(rows)} rows, model={args.noise_model})")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    ensemble = NoiseEnsemble(model=args.noise_model, delta=args.delta,
                             seed=args.seed, samples=args.samples)
    mode = "theorem-regions" if args.region else "bound-checks"
    report = (verify_theorem_regions(ensemble) if args.region
              else verify_lemmas(ensemble))
    print(f"ensemble: model={ensemble.model} delta={_fmt(ensemble.delta)} "
          f"samples={ensemble.samples} seed={ensemble.seed} "
          f"scenarios={report.scenario_count} mode={mode}")
    for check in report.checks:
        status = "PASS" if check.passed == check.applied else "FAIL"
        print(f"{status} {check.name:<24} applied={check.applied} "
              f"passed={check.passed} worst_margin={_fmt(check.worst_margin)}")
    if report.all_passed:
        if args.region and len(report.checks) == 3:
            print("all three criteria violated on every sample")
        print("result: all checks passed")
        return 0
    print(f"result: {len(report.failures)} check(s) failed")
    return 1


def _cmd_thresholds(_: argparse.Namespace) -> int:
    for name, reference, tolerance in THRESHOLD_REFERENCES:
        root = threshold_root(name)
        status = "MATCH" if abs(root - reference) <= tolerance else "MISMATCH"
        print(f"{name:<24} {root:.12g}  reference {reference:g}  "
              f"tolerance {tolerance:g}  {status}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmwitness",
        description="Nonclassicality witnesses for the four-preparation, "
                    "two-measurement scenario.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    witness = sub.add_parser("witness", help="evaluate all witnesses on one input file")
    witness.add_argument("--input", required=True, help="input document (JSON)")
    witness.add_argument("--output", required=True, help="report path (JSON)")
    witness.add_argument("--plot", action="store_true",
                         help="also render the scenario geometry as PNG")

    sweep = sub.add_parser("sweep", help="tabulate the bound curves over delta")
    sweep.add_argument("--delta-max", type=float, default=0.12)
    sweep.add_argument("--steps", type=int, default=121)
    sweep.add_argument("--noise-model", choices=NOISE_MODELS, default="box")
    sweep.add_argument("--output", required=True, help="CSV path")
    sweep.add_argument("--plot", action="store_true",
                       help="also render the curves as PNG")

    verify = sub.add_parser("verify", help="run randomized checks on a noise ensemble")
    verify.add_argument("--noise-model", choices=NOISE_MODELS, default="box")
    verify.add_argument("--delta", type=float, required=True)
    verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--region", action="store_true",
                        help="check certified verdicts instead of bound inequalities")

    sub.add_parser("thresholds", help="print the computed noise thresholds")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "witness": _cmd_witness,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
        "thresholds": _cmd_thresholds,
    }
    try:
        return handlers[args.command](args)
    except InputFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DegenerateScenarioError as exc:
        print(f"error: degenerate scenario: {exc}", file=sys.stderr)
        return 4
    except RegionPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except InputDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
