"""Command-line entry point: ``sagnac-depol {split-scan,bloch-sweep,qpt,validate}``.

Exit codes: 0 ok, 1 invariant failure, 2 I/O error, 3 parameter error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import montecarlo, svg, validation
from .errors import SagnacDepolError
from .qstate import CANONICAL_LABELS, PAULI_LABELS
from .serialization import ConfigReadError, config_to_dict, dumps, load_config, write_csv, write_json

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_IO = 2
EXIT_PARAM = 3

SCAN_HEADER = (
    ["theta_deg", "p", "trial", "avg_a", "avg_b"]
    + [f"a_{lab.value}" for lab in CANONICAL_LABELS]
    + [f"b_{lab.value}" for lab in CANONICAL_LABELS]
    + [f"count_{m}_{lab.value}" for lab in CANONICAL_LABELS for m in ("a", "b")]
)
SWEEP_HEADER = ["label", "p", "trial", "rx", "ry", "rz", "purity", "fidelity"]
CHI_HEADER = ["row", *PAULI_LABELS]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sagnac-depol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("split-scan", "splitting ratio of the Sagnac vs plate angle"),
        ("bloch-sweep", "reconstructed output states vs p"),
        ("qpt", "process tomography of the apparatus vs p"),
        ("validate", "run the analytic invariant suite"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", type=Path, help="JSON or TOML experiment config")
        sp.add_argument("--out", type=Path, default=Path("results"), help="output directory")
        sp.add_argument("--seed", type=_u64)
        sp.add_argument("--counts", type=int, help="counts per measurement setting")
        sp.add_argument("--infinite-n", action="store_true", help="exact probabilities, no sampling")
        sp.add_argument("--svg", action="store_true", help="also write SVG figures")
        sp.add_argument("--json", action="store_true", help="print a JSON summary to stdout")
    return parser


def _p_tag(p: float) -> str:
    return f"{p:g}"


def cmd_split_scan(cfg: montecarlo.ExperimentConfig, out: Path, want_svg: bool) -> dict:
    rows = montecarlo.run_splitting_scan(cfg)
    csv_rows = []
    for r in rows:
        counts = []
        for lab in CANONICAL_LABELS:
            counts += list(r.counts[lab]) if r.counts else ["", ""]
        csv_rows.append(
            [math.degrees(r.theta), r.p, r.trial, r.avg_a, r.avg_b]
            + [r.per_state_a[lab] for lab in CANONICAL_LABELS]
            + [r.per_state_b[lab] for lab in CANONICAL_LABELS]
            + counts
        )
    write_csv(out / "splitting_scan.csv", SCAN_HEADER, csv_rows)
    deviation = max(abs(r.avg_a - (1 - r.p)) for r in rows)
    spread = max(max(r.per_state_a.values()) - min(r.per_state_a.values()) for r in rows)
    summary = {
        "command": "split-scan",
        "config": config_to_dict(cfg),
        "n_rows": len(rows),
        "max_linearity_deviation": deviation,
        "max_input_spread": spread,
    }
    write_json(out / "splitting_scan_summary.json", summary)
    if want_svg:
        ps = [r.p for r in rows]
        fig = svg.scatter(
            [("A", ps, [r.avg_a for r in rows]), ("B", ps, [r.avg_b for r in rows])],
            xlabel="p = sin^2(2 theta)",
            ylabel="normalized output",
            title="Sagnac splitting ratio",
            lines=[([0, 1], [1, 0]), ([0, 1], [0, 1])],
        )
        (out / "splitting_scan.svg").write_text(fig, encoding="utf-8")
    return summary


def cmd_bloch_sweep(cfg: montecarlo.ExperimentConfig, out: Path, want_svg: bool) -> dict:
    points = montecarlo.run_depolarization_sweep(cfg)
    write_csv(
        out / "bloch_sweep.csv",
        SWEEP_HEADER,
        [[pt.label.value, pt.p, pt.trial, pt.bloch.rx, pt.bloch.ry, pt.bloch.rz, pt.purity, pt.fidelity] for pt in points],
    )
    per_p = []
    for p in cfg.p_grid:
        group = [pt for pt in points if pt.p == p]
        norms = [pt.bloch_norm for pt in group]
        purities = [pt.purity for pt in group]
        per_p.append(
            {
                "p": p,
                "mean_bloch_norm": float(np.mean(norms)),
                "purity_spread": max(purities) - min(purities),
                "min_fidelity": min(pt.fidelity for pt in group),
            }
        )
    summary = {
        "command": "bloch-sweep",
        "config": config_to_dict(cfg),
        "per_p": per_p,
        "points": [
            {
                "label": pt.label.value,
                "p": pt.p,
                "trial": pt.trial,
                "bloch": pt.bloch.to_json(),
                "purity": pt.purity,
                "fidelity": pt.fidelity,
                "counts": [r.to_json() for r in pt.records] if pt.records else None,
                "tomography": pt.tomography.to_json(),
            }
            for pt in points
        ],
    }
    write_json(out / "bloch_sweep.json", summary)
    if want_svg:
        fig = svg.bloch_sections(
            [(f"p={_p_tag(pt.p)}", pt.bloch.rx, pt.bloch.ry, pt.bloch.rz) for pt in points],
            radii=sorted({1 - p for p in cfg.p_grid}),
        )
        (out / "bloch_sweep.svg").write_text(fig, encoding="utf-8")
    return {k: v for k, v in summary.items() if k != "points"}


def cmd_qpt(cfg: montecarlo.ExperimentConfig, out: Path, want_svg: bool) -> dict:
    runs = montecarlo.run_process_sweep(cfg)
    entries = []
    for run in runs:
        stem = f"chi_p{_p_tag(run.p)}" + (f"_t{run.trial}" if cfg.trials > 1 else "")
        doc = {"p": run.p, "trial": run.trial, "process_fidelity": run.fidelity, **run.tomography.to_json()}
        write_json(out / f"{stem}.json", doc)
        write_csv(out / f"{stem}.csv", CHI_HEADER, run.chi.real_part_rows())
        if want_svg:
            labels = [a + b for a in PAULI_LABELS for b in PAULI_LABELS]
            fig = svg.bar_chart(labels, list(np.asarray(run.chi).real.ravel()), title=f"Re chi, p = {_p_tag(run.p)}")
            (out / f"{stem}.svg").write_text(fig, encoding="utf-8")
        entries.append({"p": run.p, "trial": run.trial, "file": f"{stem}.json", "process_fidelity": run.fidelity})
    summary = {
        "command": "qpt",
        "config": config_to_dict(cfg),
        "runs": entries,
        "min_process_fidelity": min(e["process_fidelity"] for e in entries),
    }
    write_json(out / "qpt_summary.json", summary)
    return summary


def cmd_validate(as_json: bool) -> int:
    results = validation.run_all()
    ok = all(r.passed for r in results)
    if as_json:
        sys.stdout.write(dumps({"passed": ok, "checks": [r.to_json() for r in results]}))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
        print("all invariants hold" if ok else "invariant failure")
    return EXIT_OK if ok else EXIT_INVARIANT


COMMANDS = {"split-scan": cmd_split_scan, "bloch-sweep": cmd_bloch_sweep, "qpt": cmd_qpt}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"sagnac-depol: error: {exc}", file=sys.stderr)
        return EXIT_PARAM

    if args.command == "validate":
        return cmd_validate(args.json)

    try:
        cfg = load_config(args.config).with_overrides(
            rng_seed=args.seed,
            counts_per_setting=args.counts,
            infinite_n=True if args.infinite_n else None,
        )
    except ConfigReadError as exc:
        print(f"sagnac-depol: {exc}", file=sys.stderr)
        return EXIT_IO
    except SagnacDepolError as exc:
        print(f"sagnac-depol: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAM

    try:
        args.out.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](cfg, args.out, args.svg)
    except SagnacDepolError as exc:
        print(f"sagnac-depol: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"sagnac-depol: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.json:
        sys.stdout.write(dumps(summary))
    else:
        print(f"{args.command}: wrote results to {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
