"""Report builders shared by the CLI and the HTTP service.

Every function takes already-parsed inputs and returns a plain dict ready
for canonical JSON serialization.  Input resolution (preset id vs file
payload, metric selection) lives here so both front ends behave
identically.
"""

from __future__ import annotations

from typing import Optional

from .diagram import SeparatrixDiagram, diagram_from_json, prediagram_from_json
from .enumerator import NamedBase, SearchSpec, enumerate_matchings
from .exactalg import QuadraticNumber
from .presets import PresetEntry, list_presets, load_preset
from .prym import find_prym_involutions, involution_report
from .surface import homology_report, stratum_signature
from .twistspace import (
    ExplicitLocus,
    FullStratum,
    PrymLocus,
    best_transverse_bound,
    dimension_certificate,
    has_property_p,
    minimal_deformations,
    twist_kernel,
)


class InputError(ValueError):
    """Invalid payload or unknown preset: exit code 2 territory."""


class InvariantError(ValueError):
    """Structurally broken input: exit code 1 territory."""


def _metric_from_path(path: str) -> dict:
    """Load {"d": n, "lengths": {sid: value}} from a metric file."""
    import json

    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        return {sid: QuadraticNumber.from_json(v) for sid, v in obj["lengths"].items()}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read metric {path}: {exc}") from None


def resolve_diagram(source: str | dict, metric: str = "unit-rational") -> tuple[SeparatrixDiagram, Optional[PresetEntry]]:
    """A diagram from a preset id or a diagram JSON payload.

    ``metric`` names a preset metric, or points at a metric file when it
    looks like a path.
    """
    if isinstance(source, str):
        try:
            entry = load_preset(source)
        except KeyError as exc:
            raise InputError(str(exc)) from None
        if entry.matching is None:
            raise InputError(f"preset {source!r} has no matching; it is a bare prediagram")
        if metric.endswith(".json") or "/" in metric:
            lengths = _metric_from_path(metric)
            D = SeparatrixDiagram(entry.prediagram, entry.matching, tuple(sorted(lengths.items())))
            return D, entry
        if metric not in entry.metrics:
            raise InputError(
                f"preset {source!r} has no metric {metric!r}; available: {sorted(entry.metrics)}"
            )
        return entry.diagram(metric), entry
    try:
        return diagram_from_json(source), None
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed diagram payload: {exc}") from None


def _prediagram_only_report(P, pid: Optional[str]) -> dict:
    problems = P.validate()
    report = {
        "valid": not problems,
        "violations": problems,
        "stable": P.is_stable() if not problems else None,
    }
    if pid is not None:
        report["id"] = pid
    if not problems:
        sig = stratum_signature(P)
        report.update(
            {"kappa": list(sig.kappa), "genus": sig.genus,
             "n_saddle_connections": sig.n_saddle_connections}
        )
    return report


def check_report(source: str | dict, metric: str = "unit-rational") -> dict:
    if isinstance(source, str):
        try:
            entry = load_preset(source)
        except KeyError as exc:
            raise InputError(str(exc)) from None
        if entry.matching is None:
            return _prediagram_only_report(entry.prediagram, entry.id)
    elif "matching" not in source:
        try:
            P = prediagram_from_json(source)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"malformed prediagram payload: {exc}") from None
        return _prediagram_only_report(P, source.get("id"))
    D, entry = resolve_diagram(source, metric)
    problems = D.validate()
    report = {
        "valid": not problems,
        "violations": problems,
        "stable": D.prediagram.is_stable(),
    }
    if entry is not None:
        report["id"] = entry.id
    if not D.prediagram.validate():
        sig = stratum_signature(D.prediagram)
        report.update(
            {"kappa": list(sig.kappa), "genus": sig.genus,
             "n_saddle_connections": sig.n_saddle_connections}
        )
    return report


def named_base(source: str | dict) -> NamedBase:
    if isinstance(source, str):
        try:
            entry = load_preset(source)
        except KeyError as exc:
            raise InputError(str(exc)) from None
        if not entry.names:
            raise InputError(f"preset {source!r} carries no component names")
        return NamedBase(
            prediagram=entry.prediagram,
            names=tuple(sorted(entry.names.items())),
            base_involution=entry.involution,
        )
    try:
        P = prediagram_from_json(source)
        names = tuple(sorted(source["component_names"].items()))
        involution = tuple(source["involution"]) if "involution" in source else None
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed base payload: {exc}") from None
    return NamedBase(P, names, involution)


def enumerate_report(source: str | dict, fixed_cylinders: int = 2,
                     kind: Optional[str] = None) -> dict:
    base = named_base(source)
    if base.prediagram.validate():
        raise InvariantError("base prediagram violates its invariants")
    spec = SearchSpec(base, required_fixed_cylinders=fixed_cylinders, kind_filter=kind)
    return enumerate_matchings(spec).to_json()


def prym_scan_report(source: str | dict, metric: str = "unit-rational") -> dict:
    from .prym import conjugacy_classes

    D, _ = resolve_diagram(source, metric)
    if D.validate():
        raise InvariantError("diagram violates its invariants")
    involutions = find_prym_involutions(D)
    labels = conjugacy_classes(D, involutions)
    reports = []
    for inv, label in zip(involutions, labels):
        r = involution_report(D, inv)
        r["conjugacy_class"] = label
        reports.append(r)
    return {"count": len(involutions), "involutions": reports}


def _locus_for(D: SeparatrixDiagram, locus: str, explicit_basis=None):
    if locus == "full":
        return FullStratum()
    if locus == "prym":
        involutions = find_prym_involutions(D)
        if not involutions:
            raise InvariantError("no involution available for the prym locus")
        from .prym import cylinder_permutation

        return PrymLocus.from_mapping(cylinder_permutation(involutions[0]))
    if locus == "explicit":
        if not explicit_basis:
            raise InputError("explicit locus requires a basis")
        d = D.base
        basis = tuple(
            tuple(QuadraticNumber.from_json(x) for x in row) for row in explicit_basis
        )
        return ExplicitLocus(basis)
    raise InputError(f"unknown locus {locus!r}")


def property_p_report(source: str | dict, metric: str = "golden-irrational",
                      locus: str = "prym", explicit_basis=None) -> dict:
    D, entry = resolve_diagram(source, metric)
    if D.validate():
        raise InvariantError("diagram violates its invariants")
    loc = _locus_for(D, locus, explicit_basis)
    k = twist_kernel(D, loc)
    verdict = has_property_p(D, loc)
    cert = dimension_certificate(k)
    mins = minimal_deformations(k)
    bound, chosen = best_transverse_bound(mins)
    report = {
        "locus": locus,
        "metric": metric,
        "cylinders": [p for p, _ in D.cylinders()],
        "circumferences": [D.circumference(p).to_json() for p, _ in D.cylinders()],
        "kernel_basis": [[x.to_json() for x in v] for v in k],
        "minimal_deformations": [dv.to_json() for dv in mins],
        "property_p": verdict.to_json(),
        "dimension_certificate": cert.to_json(),
        "transverse_rank_bound": {
            "bound": bound,
            "deformations": list(chosen),
            "inequality": "rank >= sum of degrees of transverse minimal deformations",
        },
    }
    if entry is not None:
        report["id"] = entry.id
    return report


def homology_full_report(source: str | dict, metric: str = "unit-rational") -> dict:
    D, entry = resolve_diagram(source, metric)
    if D.validate():
        raise InvariantError("diagram violates its invariants")
    report = homology_report(D)
    if entry is not None:
        report["id"] = entry.id
    return report


def presets_report() -> dict:
    out = []
    for pid in list_presets():
        entry = load_preset(pid)
        item = {
            "id": pid,
            "note": entry.note,
            "has_matching": entry.matching is not None,
            "metrics": sorted(entry.metrics),
        }
        if entry.matching is not None:
            sig = stratum_signature(entry.prediagram)
            item.update({"kappa": list(sig.kappa), "genus": sig.genus,
                         "cylinders": len(entry.matching.pairs)})
        out.append(item)
    return {"presets": out}
