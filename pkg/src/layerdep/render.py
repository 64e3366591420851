"""Renders an :class:`AnalysisBundle` for people (text) or for tools (JSON, CSV)."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from .formula import render as render_formula
from .pipeline import AnalysisBundle
from .reliability import ReliabilityReport

SECTIONS = ("flows", "expressions", "sets", "reliability", "truth-table", "plan", "all")
FORMATS = ("text", "json", "csv")
_CSV_SECTIONS = ("flows", "sets", "reliability", "truth-table")


def _fmt_path(path) -> str:
    return "[" + ", ".join(path) + "]"


def _num(x: float | None, digits: int = 10) -> str:
    return "n/a" if x is None else f"{x:.{digits}f}"


def _tol(k) -> int | str:
    return "unconstrained" if k == math.inf else k


# -- machine-readable dictionaries ----------------------------------------


def flows_data(b: AnalysisBundle) -> list[dict[str, Any]]:
    out = []
    for (req, n), ps in sorted(b.flows.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
        out.append({
            "requirement": req,
            "layer": n,
            "layer_name": b.model.layer(n).name,
            "flows": [
                {"source": pair.source, "destination": pair.destination,
                 "anchor": list(pair.anchor), "paths": [list(p) for p in paths]}
                for pair, paths in ps.flows
            ],
        })
    return out


def _clauses(f) -> list[list[str]]:
    return [sorted(c) for c in f.clauses]


def sets_data(b: AnalysisBundle, ascii: bool = False) -> list[dict[str, Any]]:
    out = []
    for n in sorted(b.profiles, reverse=True):
        p = b.profiles[n]
        out.append({
            "layer": n,
            "layer_name": b.model.layer(n).name,
            "expression": render_formula(b.cnfs[n], ascii),
            "clauses": _clauses(b.cnfs[n]),
            "expression_before_elimination": render_formula(b.reduced[n], ascii),
            "clauses_before_elimination": _clauses(b.reduced[n]),
            "access_points_removed": sorted(p.access_points_removed),
            "spof": sorted(p.spof),
            "recovery_groups": [{"members": sorted(g.members), "quorum": g.quorum} for g in p.groups],
            "recovery_members": sorted(p.recovery_members),
            "tolerance": _tol(p.tolerance),
            "clause_count": p.clause_count,
            "min_clause_size": p.min_clause_size,
            "graph_discrepancies": list(b.discrepancies.get(n, [])),
        })
    return out


def reliability_data(r: ReliabilityReport) -> dict[str, Any]:
    return {
        "layer": r.layer,
        "m": r.m,
        "variables": list(r.variables),
        "exact": r.exact,
        "closed_form": r.closed_form if r.closed_form is not None else "inapplicable",
        "limited": {str(k): v for k, v in sorted(r.limited.items())},
        "deviation_percent": {str(k): v for k, v in sorted(r.deviation.items())},
        "counts": {
            "universal": r.counts.universal,
            "per_group": r.counts.per_group,
            "single": r.counts.single,
            "double": r.counts.double,
        },
        "rows": None if r.rows is None else [
            {"assignment": dict(row.assignment), "status": row.status, "probability": row.probability}
            for row in r.rows
        ],
        "notes": list(r.notes),
    }


def template_data(t) -> dict[str, Any]:
    return {
        "id": t.id,
        "layer": t.layer,
        "kind": t.kind,
        "targets": list(t.targets),
        "steps": [{"phase": s.phase, "description": s.description, "conditional": s.conditional}
                  for s in t.steps],
        "expected_state": t.expected_state,
    }


def plan_data(b: AnalysisBundle) -> dict[str, Any]:
    plan = b.plan
    bounds = plan.bounds
    return {
        "model": plan.model,
        "tolerance": plan.tolerance,
        "templates": [template_data(t) for t in plan.templates],
        "counts": {str(k): v for k, v in sorted(plan.counts.items())},
        "total": plan.total,
        "excluded": [{"layer": n, "targets": list(t)} for n, t in plan.excluded],
        "notes": list(plan.notes),
        "bounds": None if bounds is None else {
            "layers": [vars(lb) | {"consistent": lb.consistent} for lb in bounds.layers],
            "total": bounds.total,
            "upper_single": bounds.upper_single,
            "upper_double": bounds.upper_double,
            "discrepancies": list(bounds.discrepancies),
        },
    }


def bundle_data(b: AnalysisBundle, ascii: bool = False) -> dict[str, Any]:
    return {
        "model": b.model.name,
        "flows": flows_data(b),
        "sets": sets_data(b, ascii),
        "reliability": [reliability_data(b.reliability[n]) for n in sorted(b.reliability)],
        "plan": plan_data(b),
    }


# -- text ------------------------------------------------------------------


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(headers, *rows)]
    lines = ["  ".join(str(h).ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines)


def flows_text(b: AnalysisBundle) -> str:
    blocks = []
    for req in b.model.requirements:
        rows = []
        for i, layer in enumerate(sorted(b.model.layers, key=lambda x: -x.index), 1):
            ps = b.flows.get((req.name, layer.index))
            paths = ps.paths if ps else ()
            if not paths:
                rows.append([str(i), layer.name, "-"])
            for j, path in enumerate(paths):
                rows.append([str(i) if j == 0 else "", layer.name if j == 0 else "", _fmt_path(path)])
        src = "|".join(req.source)
        dst = "|".join(req.destination)
        blocks.append(f"REQUIREMENT {req.name}: [{src}, {dst}]\n" + _table(["N/N", "Model layer", "Data Flows"], rows))
    return "\n\n".join(blocks)


def expressions_text(b: AnalysisBundle, ascii: bool = False) -> str:
    rows = []
    for i, d in enumerate(sets_data(b, ascii), 1):
        rows.append([str(i), d["layer_name"], d["expression"], ", ".join(d["spof"]) or "-",
                     ", ".join(d["recovery_members"]) or "-"])
    return _table(["N/N", "Model layer", "Boolean Expression", "Single Points of Failure", "Recovery Groups"], rows)


def sets_text(b: AnalysisBundle, ascii: bool = False) -> str:
    lines = []
    for d in sets_data(b, ascii):
        lines.append(f"Layer {d['layer']} ({d['layer_name']})")
        lines.append(f"  expression:        {d['expression']}")
        lines.append(f"  SPOF:              {', '.join(d['spof']) or '-'}")
        if d["spof"]:
            lines.append("                     (disaster-recovery documentation required, not tests)")
        groups = [f"{g['quorum']}-of-{len(g['members'])} {{{', '.join(g['members'])}}}" for g in d["recovery_groups"]]
        lines.append(f"  recovery groups:   {'; '.join(groups) or '-'}")
        lines.append(f"  tolerance k:       {d['tolerance']} (clauses l = {d['clause_count']}, "
                     f"min r_i = {d['min_clause_size'] if d['min_clause_size'] is not None else '-'})")
        lines.append(f"  access points:     {', '.join(d['access_points_removed']) or '-'}")
        lines.append(f"  graph check:       {'; '.join(d['graph_discrepancies']) or 'consistent'}")
    return "\n".join(lines)


def reliability_text(r: ReliabilityReport) -> str:
    c = r.counts
    lines = [
        f"Layer {r.layer}: m = {r.m} ({', '.join(r.variables) or 'no variables'})",
        f"  exact R:             {_num(r.exact)}",
        f"  closed-form R:       {_num(r.closed_form) if r.closed_form is not None else 'inapplicable'}",
        f"  R_L1 (<=1 failure):  {_num(r.limited.get(1))}",
        f"  R_L2 (<=2 failures): {_num(r.limited.get(2))}",
        f"  deviation D1:        {_num(r.deviation.get(1), 6)} %",
        f"  deviation D2:        {_num(r.deviation.get(2), 6)} %",
        f"  combinations:        universal {c.universal}, per-group {c.per_group}, "
        f"single {c.single if c.single is not None else 'n/a'}, "
        f"double {c.double if c.double is not None else 'n/a'}",
    ]
    lines += [f"  note: {n}" for n in r.notes]
    return "\n".join(lines)


def truth_table_text(r: ReliabilityReport) -> str:
    if r.rows is None:
        return f"Layer {r.layer}: truth table not emitted ({r.m} variables)"
    rows = []
    for i, row in enumerate(r.rows, 1):
        rows.append([str(i)] + ["1" if row.assignment[v] == "OS" else "0" for v in r.variables]
                    + [row.status, f"{row.probability:.10f}"])
    total = math.fsum(row.probability for row in r.rows)
    rows.append([""] * (len(r.variables) + 2) + [f"{total:.10f}"])
    return f"Layer {r.layer}\n" + _table(["N/N", *r.variables, "Status", "Probability"], rows)


def plan_text(b: AnalysisBundle) -> str:
    plan = b.plan
    lines = [f"Fault-injection plan for {plan.model!r}, tolerance {plan.tolerance}: {plan.total} templates"]
    if not plan.templates:
        lines.append("no recovery groups; see SPOF disaster-recovery list")
    for t in plan.templates:
        lines.append(f"{t.id}  [{t.kind}] layer {t.layer} targets {', '.join(t.targets)}")
        for s in t.steps:
            lines.append(f"    {s.phase:<9} {s.description}{' (conditional)' if s.conditional else ''}")
    lines.append("per-layer counts: " + ", ".join(f"L{n}={c}" for n, c in sorted(plan.counts.items())))
    for n, targets in plan.excluded:
        lines.append(f"not survivable, excluded: layer {n} {{{', '.join(targets)}}}")
    if plan.bounds:
        for lb in plan.bounds.layers:
            lines.append(f"layer {lb.layer}: 2|RG| = {lb.templates_from_groups}, "
                         f"2(|V|-|SPOF|-|A|) = 2({lb.components}-{lb.spof}-{lb.access_points}) = "
                         f"{lb.templates_from_components}{'' if lb.consistent else '  <- forms disagree'}")
        lines.append(f"bounds: total {plan.bounds.total}; single-fault upper bound {plan.bounds.upper_single}; "
                     f"double-fault upper bound {plan.bounds.upper_double}")
    lines += [f"note: {n}" for n in plan.notes]
    return "\n".join(lines)


# -- csv -------------------------------------------------------------------


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _csv_section(b: AnalysisBundle, section: str, layer: int | None) -> str:
    if section == "flows":
        rows = [[d["requirement"], d["layer"], f["source"], f["destination"], " ".join(p)]
                for d in flows_data(b) for f in d["flows"] for p in f["paths"]]
        return _csv(["requirement", "layer", "source", "destination", "path"], rows)
    if section == "sets":
        rows = [[d["layer"], " ".join(d["spof"]), ";".join(" ".join(g["members"]) for g in d["recovery_groups"]),
                 d["tolerance"]] for d in sets_data(b, True)]
        return _csv(["layer", "spof", "recovery_groups", "tolerance"], rows)
    if section == "reliability":
        rows = []
        for r in _reports(b, layer):
            rows.append([r.layer, r.m, repr(r.exact), repr(r.closed_form), repr(r.limited[1]), repr(r.limited[2]),
                         repr(r.deviation.get(1)), repr(r.deviation.get(2)), r.counts.universal,
                         r.counts.per_group, r.counts.single, r.counts.double])
        return _csv(["layer", "m", "exact", "closed_form", "limited_1", "limited_2", "deviation_1",
                     "deviation_2", "universal", "per_group", "single", "double"], rows)
    r = b.reliability[layer or min(b.reliability)]
    rows = [[i, *(row.assignment[v] for v in r.variables), row.status, repr(row.probability)]
            for i, row in enumerate(r.rows or (), 1)]
    return _csv(["row", *r.variables, "status", "probability"], rows)


def _reports(b: AnalysisBundle, layer: int | None) -> list[ReliabilityReport]:
    if layer is not None:
        return [b.reliability[layer]]
    return [b.reliability[n] for n in sorted(b.reliability)]


def render(b: AnalysisBundle, section: str = "all", fmt: str = "text", ascii: bool = False,
           layer: int | None = None, header: bool = True) -> str:
    """Render one section of the bundle. Output is deterministic for a given bundle."""
    if section not in SECTIONS:
        raise ValueError(f"unknown section {section!r}; expected one of {', '.join(SECTIONS)}")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if layer is not None and layer not in b.reliability:
        raise ValueError(f"layer {layer} was not analyzed")

    if fmt == "json":
        if section == "all":
            data: Any = bundle_data(b, ascii)
        elif section == "flows":
            data = flows_data(b)
        elif section in ("expressions", "sets"):
            data = sets_data(b, ascii)
        elif section in ("reliability", "truth-table"):
            data = [reliability_data(r) for r in _reports(b, layer)]
        else:
            data = [template_data(t) for t in b.plan.templates]
        return json.dumps(data, indent=2, ensure_ascii=False)

    if fmt == "csv":
        if section not in _CSV_SECTIONS:
            raise ValueError(f"section {section!r} has no csv form")
        return _csv_section(b, section, layer)

    parts = []
    if header:
        parts.append(f"# model {b.model.name!r}, layers {b.model.depth}")
    if section in ("flows", "all"):
        parts.append(flows_text(b))
    if section in ("expressions", "all"):
        parts.append(expressions_text(b, ascii))
    if section in ("sets", "all"):
        parts.append(sets_text(b, ascii))
    if section in ("reliability", "all"):
        parts.extend(reliability_text(r) for r in _reports(b, layer))
    if section == "truth-table":
        parts.append(truth_table_text(b.reliability[layer or min(b.reliability)]))
    elif section == "all":
        parts.extend(truth_table_text(r) for r in _reports(b, layer) if r.rows is not None and r.m)
    if section in ("plan", "all"):
        parts.append(plan_text(b))
    return "\n\n".join(parts)
