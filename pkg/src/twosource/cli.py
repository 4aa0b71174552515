"""Command-line entry point: ``twosource {run,sweep,verify,decompose}``."""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from . import labeled, oracle
from .experiment import (
    ExperimentConfig,
    CoincidenceClass,
    all_patterns,
    closed_form,
    representation_deviation,
    run_experiment,
)
from .fock import Statistics

CSV_COLUMNS = [
    "stats",
    "phi",
    "w_both_v",
    "w_both_e",
    "w_one_each",
    "p_same_cond",
    "p_cross_cond",
    "p_same_closed",
    "p_cross_closed",
    "max_pattern_dev",
]

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class RunSpec:
    command: str
    stats: tuple[Statistics, ...]
    phis: tuple[float, ...]
    out: str | None = None
    tol: float = DEFAULT_TOL
    verify: bool = False
    raw: bool = False
    labeled: bool = False


@dataclass(frozen=True)
class Row:
    stats: Statistics
    phi: float
    table: object
    closed: tuple[float, float]
    oracle_dev: float | None
    labeled_dev: float | None

    @property
    def closed_dev(self) -> float:
        return abs(self.table.p_same_cond - self.closed[0])

    def passed(self, tol: float) -> bool:
        devs = [self.closed_dev, self.oracle_dev, self.labeled_dev]
        return all(d < tol for d in devs if d is not None)


def parse_phi(text: str) -> tuple[float, ...]:
    """``a:b:n`` is n points from a (inclusive) to b (exclusive); otherwise a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed grid {text!r}") from None
        if count < 1:
            raise argparse.ArgumentTypeError("grid count must be at least 1")
        step = (stop - start) / count
        phis = tuple(start + i * step for i in range(count))
    else:
        try:
            phis = tuple(float(x) for x in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed phase {text!r}") from None
    if not all(math.isfinite(p) for p in phis):
        raise argparse.ArgumentTypeError("phases must be finite")
    return phis


def parse_stats(text: str) -> tuple[Statistics, ...]:
    try:
        return tuple(Statistics.parse(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_tol(text: str) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed tolerance {text!r}") from None
    if not tol > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return tol


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twosource",
        description="Coincidence statistics for two particles from independent sources.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    all_stats = ",".join(s.value for s in Statistics)
    full_turn = f"0:{2 * math.pi!r}:64"

    def common(p, phi_default, stats_default):
        p.add_argument("--stats", type=parse_stats, default=parse_stats(stats_default),
                       help=f"comma list of {all_stats}")
        p.add_argument("--phi", type=parse_phi, default=parse_phi(phi_default),
                       help="phase in radians, comma list, or grid start:stop:count")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--tol", type=parse_tol, default=DEFAULT_TOL)
        p.add_argument("--verify", action="store_true",
                       help="check against path enumeration; exit 1 on any deviation")
        p.add_argument("--raw", action="store_true",
                       help="append per-pattern probability columns to the CSV")
        p.add_argument("--labeled", action="store_true",
                       help="cross-check against the source-labeled projection")

    common(sub.add_parser("run", help="single phase"), "0", all_stats)
    common(sub.add_parser("sweep", help="phase grid"), full_turn, all_stats)
    common(sub.add_parser("verify", help="sweep with all cross-checks on"), full_turn, all_stats)

    dec = sub.add_parser("decompose", help="print labeled term tables at one phase")
    dec.add_argument("--phi", type=float, default=0.0)
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunSpec:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "decompose":
        return RunSpec(command="decompose", stats=(), phis=(ns.phi,))
    if not ns.stats:
        parser.error("no statistics selected")
    if ns.command == "run" and len(ns.phi) != 1:
        parser.error("run takes a single phase; use sweep for a grid")
    forced = ns.command == "verify"
    return RunSpec(
        command=ns.command,
        stats=ns.stats,
        phis=ns.phi,
        out=ns.out,
        tol=ns.tol,
        verify=ns.verify or forced,
        raw=ns.raw,
        labeled=ns.labeled or forced,
    )


def compute_rows(spec: RunSpec) -> list[Row]:
    rows = []
    for stats in spec.stats:
        for phi in spec.phis:
            table = run_experiment(ExperimentConfig(phi, stats))
            rows.append(
                Row(
                    stats=stats,
                    phi=phi,
                    table=table,
                    closed=closed_form(phi, stats),
                    oracle_dev=(
                        oracle.verify(table, phi, stats, spec.tol).max_deviation
                        if spec.verify else None
                    ),
                    labeled_dev=representation_deviation(table) if spec.labeled else None,
                )
            )
    return rows


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.17g}"


def write_csv(rows: Sequence[Row], stream: TextIO, raw: bool = False) -> None:
    patterns = all_patterns()
    writer = csv.writer(stream, lineterminator="\n")
    header = list(CSV_COLUMNS)
    if raw:
        header += ["p[" + "|".join(p) + "]" for p in patterns]
    writer.writerow(header)
    for row in rows:
        t = row.table
        w = t.class_weights
        line = [
            row.stats.value,
            _fmt(row.phi),
            _fmt(w[CoincidenceClass.BOTH_V]),
            _fmt(w[CoincidenceClass.BOTH_E]),
            _fmt(w[CoincidenceClass.ONE_EACH]),
            _fmt(t.p_same_cond),
            _fmt(t.p_cross_cond),
            _fmt(row.closed[0]),
            _fmt(row.closed[1]),
            _fmt(row.oracle_dev),
        ]
        if raw:
            line += [_fmt(t.per_pattern.get(p, 0.0)) for p in patterns]
        writer.writerow(line)


def write_report(rows: Sequence[Row], spec: RunSpec, stream: TextIO) -> bool:
    ok = True
    for stats in spec.stats:
        mine = [r for r in rows if r.stats is stats]
        passed = all(r.passed(spec.tol) for r in mine)
        ok &= passed
        parts = [
            f"{stats.value:<15}",
            f"points={len(mine)}",
            f"max|simulated-closed_form|={max(r.closed_dev for r in mine):.3e}",
        ]
        if spec.verify:
            parts.append(f"max|simulated-oracle|={max(r.oracle_dev for r in mine):.3e}")
        if spec.labeled:
            parts.append(f"max|fock-labeled|={max(r.labeled_dev for r in mine):.3e}")
        parts.append(("PASS" if passed else "FAIL") + f" (tol {spec.tol:g})")
        print("  ".join(parts), file=stream)
        if spec.command == "run":
            r = mine[0]
            w = r.table.class_weights
            print(
                f"  phi={r.phi:g}  both_v={w[CoincidenceClass.BOTH_V]:.6f}"
                f"  both_e={w[CoincidenceClass.BOTH_E]:.6f}"
                f"  one_each={w[CoincidenceClass.ONE_EACH]:.6f}"
                f"  p_same|one_each={r.table.p_same_cond:.6f}"
                f"  p_cross|one_each={r.table.p_cross_cond:.6f}",
                file=stream,
            )
    return ok


def print_decomposition(phi: float, stream: TextIO | None = None) -> None:
    stream = stream or sys.stdout
    split = labeled.split_regions(labeled.build_initial(phi))
    psi2 = labeled.evolve_labeled(split.psi2)
    psi11 = labeled.evolve_labeled(split.psi11)
    sections = [
        ("same-region component at the detectors", psi2),
        ("one-each component at the detectors", psi11),
        ("one-each, symmetric part", labeled.project(psi11, labeled.Parity.SYMMETRIC)),
        ("one-each, antisymmetric part", labeled.project(psi11, labeled.Parity.ANTISYMMETRIC)),
    ]
    print(f"phi = {phi:g}; slots are (particle from L, particle from R)", file=stream)
    print(f"weights: same-region {split.w2:.6f}, one-each {split.w11:.6f}", file=stream)
    for title, state in sections:
        print(f"\n{title}:", file=stream)
        swapped = labeled.exchange(state)
        for (l, r), amp in sorted(state.terms.items()):
            partner = swapped.amplitude(l, r)
            if abs(partner - amp) < 1e-12:
                tag = "sym"
            elif abs(partner + amp) < 1e-12:
                tag = "anti"
            else:
                tag = ""
            print(
                f"  {l + '^L':>5} {r + '^R':>5}  {amp.real:+.6f} {amp.imag:+.6f}i  {tag}",
                file=stream,
            )


def execute(spec: RunSpec) -> int:
    if spec.command == "decompose":
        print_decomposition(spec.phis[0])
        return 0

    rows = compute_rows(spec)
    buf = io.StringIO()
    write_csv(rows, buf, raw=spec.raw)

    if spec.out is not None:
        try:
            with open(spec.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            print(f"twosource: cannot write {spec.out}: {exc}", file=sys.stderr)
            return 2
        report_stream = sys.stdout
    elif spec.command == "run":
        report_stream = sys.stdout
    else:
        sys.stdout.write(buf.getvalue())
        report_stream = sys.stderr

    ok = write_report(rows, spec, report_stream)
    if spec.verify or spec.labeled:
        return 0 if ok else 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return execute(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
