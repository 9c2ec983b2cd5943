"""Batch command line interface.

Verbs: check, enumerate, prym-scan, property-p, homology, presets.  Exit
code 0 means the verdict was computed, 1 flags an invariant violation in
the input, 2 a usage or parse error.  Reports go to standard output as
canonical JSON (the default, also forced by --json) or as a short text
summary with --summary; diagnostics go to standard error.
"""

from __future__ import annotations

import json
import sys

import click

from .jsonio import canonical_dumps
from .reports import (
    InputError,
    InvariantError,
    check_report,
    enumerate_report,
    homology_full_report,
    presets_report,
    property_p_report,
    prym_scan_report,
)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2


def output_format(f):
    f = click.option("--summary", "fmt", flag_value="summary",
                     help="short text rendering")(f)
    f = click.option("--json", "fmt", flag_value="json", default=True,
                     help="canonical JSON (default)")(f)
    return f


def _load_source(ref: str):
    """A preset id, or a path to a diagram JSON file."""
    if ref.endswith(".json") or "/" in ref:
        try:
            with open(ref, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {ref}: {exc}") from None
    return ref


def _run(builder, fmt: str, summary_lines):
    try:
        report = builder()
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except InvariantError as exc:
        click.echo(f"invalid input: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)
    if fmt == "summary":
        for line in summary_lines(report):
            click.echo(line)
    else:
        sys.stdout.write(canonical_dumps(report))
    if report.get("valid") is False:
        sys.exit(EXIT_INVARIANT)
    sys.exit(EXIT_OK)


@click.group()
def main() -> None:
    """Exact certificates for cylinder decompositions."""


@main.command()
@click.argument("source")
@click.option("--metric", default="unit-rational", show_default=True,
              help="preset metric name or path to a metric file")
@output_format
def check(source: str, metric: str, fmt: str) -> None:
    """Validate a diagram or preset and report its stratum."""

    def lines(r):
        status = "ok" if r["valid"] else "INVALID"
        yield f"{r.get('id', 'diagram')}: {status}"
        if "kappa" in r:
            yield f"kappa={tuple(r['kappa'])} genus={r['genus']} ns={r['n_saddle_connections']}"
        for v in r["violations"]:
            yield f"violation: {v}"

    _run(lambda: check_report(_load_source(source), metric), fmt, lines)


@main.command()
@click.option("--base", required=True, help="base preset id or JSON path")
@click.option("--fixed-cylinders", default=2, show_default=True, type=int)
@click.option("--kind", type=click.Choice(["first", "second"]), default=None)
@output_format
def enumerate(base: str, fixed_cylinders: int, kind, fmt: str) -> None:
    """Classify all matchings on a base prediagram."""

    def lines(r):
        yield f"survivors: {', '.join(s['matching'] for s in r['survivors'])}"
        yield f"total candidates: {r['counts']['total']}"

    _run(
        lambda: enumerate_report(_load_source(base), fixed_cylinders, kind),
        fmt,
        lines,
    )


@main.command("prym-scan")
@click.argument("source")
@click.option("--metric", default="unit-rational", show_default=True)
@output_format
def prym_scan(source: str, metric: str, fmt: str) -> None:
    """List the combinatorial Prym involutions of a diagram."""

    def lines(r):
        yield f"involutions: {r['count']}"
        for inv in r["involutions"]:
            yield (f"fixed_counts={tuple(inv['fixed_counts'])} "
                   f"cylinder_cycles={inv['cylinder_cycles']} "
                   f"class={inv['conjugacy_class']}")

    _run(lambda: prym_scan_report(_load_source(source), metric), fmt, lines)


@main.command("property-p")
@click.argument("source")
@click.option("--metric", default="golden-irrational", show_default=True)
@click.option("--locus", default="prym", show_default=True,
              help="full, prym, or explicit:<path to basis JSON>")
@output_format
def property_p(source: str, metric: str, locus: str, fmt: str) -> None:
    """Compute the twist kernel and the property-P verdict."""
    explicit_basis = None
    locus_name = locus
    if locus.startswith("explicit:"):
        locus_name = "explicit"
        path = locus.split(":", 1)[1]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                explicit_basis = json.load(fh)["basis"]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            click.echo(f"error: cannot read basis {path}: {exc}", err=True)
            sys.exit(EXIT_USAGE)

    def lines(r):
        v = r["property_p"]
        yield f"property P: {v['holds']} ({v['reason']})"
        yield f"kernel dim: {len(r['kernel_basis'])}"
        yield f"rank bound: {r['dimension_certificate']['rank_bound']}"

    _run(
        lambda: property_p_report(_load_source(source), metric, locus_name, explicit_basis),
        fmt,
        lines,
    )


@main.command()
@click.argument("source")
@click.option("--metric", default="unit-rational", show_default=True)
@output_format
def homology(source: str, metric: str, fmt: str) -> None:
    """Betti numbers and core classes of the cylinder CW complex."""

    def lines(r):
        yield f"genus {r['genus']}, betti1 {r['betti1']}, kappa {tuple(r['kappa'])}"

    _run(lambda: homology_full_report(_load_source(source), metric), fmt, lines)


@main.command()
@output_format
def presets(fmt: str) -> None:
    """List the bundled models."""

    def lines(r):
        for p in r["presets"]:
            yield f"{p['id']}: {p['note']}"

    _run(presets_report, fmt, lines)


if __name__ == "__main__":
    main()
