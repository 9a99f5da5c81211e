"""End-to-end analysis of one knot, recorded stage by stage."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .approximation import (
    approximate,
    compare_quadrisecant_sets,
    find_self_intersections,
    polygon_to_json,
)
from .classify import MAX_CROSSINGS, classify
from .errors import InputError, QuadlabError
from .knot import check_general_position, is_simple, knot_to_json
from .quadrisecants import EnumerationStats, find_all_quadrisecants, quadrisecants_to_json

STAGES = (
    "input",
    "general_position",
    "quadrisecants",
    "approximation",
    "self_intersections",
    "classification",
    "comparison",
)


@dataclass
class PipelineReport:
    """Stage results in dependency order; an aborted stage keeps its error."""

    stages: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    verdict: str = "INCONCLUSIVE"
    exit_code: int = 0

    def to_json(self, include_timing: bool = True) -> dict:
        out = {name: self.stages[name] for name in STAGES if name in self.stages}
        if self.errors:
            out["errors"] = dict(self.errors)
        out["verdict"] = self.verdict
        if include_timing:
            out["timing_seconds"] = {k: round(v, 6) for k, v in self.timing.items()}
        return out


def conjecture_verdict(embedded: bool | None, classes: tuple | None, comparison: str | None) -> str:
    if embedded is False:
        return "FAILS-embedding"
    if classes is not None and classes[0] != classes[1]:
        return "FAILS-type"
    if comparison == "differs":
        return "FAILS-quadset"
    if comparison == "equal" and classes is not None:
        return "HOLDS"
    return "INCONCLUSIVE"


def run_pipeline(knot, *, skip_classify: bool = False, max_crossings: int = MAX_CROSSINGS,
                 workers: int | None = 1, seed: int = 0) -> PipelineReport:
    report = PipelineReport()
    clock = time.perf_counter

    def stage(name, fn):
        start = clock()
        try:
            report.stages[name] = fn()
            return True
        except QuadlabError as exc:
            report.errors[name] = f"{type(exc).__name__}: {exc}"
            if not report.exit_code:
                report.exit_code = getattr(exc, "exit_code", 1)
            return False
        finally:
            report.timing[name] = clock() - start

    def describe_input():
        if knot.n < 4:
            raise InputError(f"analysis needs n > 3 edges, got {knot.n}")
        simple = is_simple(knot)
        if not simple.simple:
            raise InputError(f"input knot is not embedded (edges {simple.witness[0]}, {simple.witness[1]})")
        return {"name": knot.name, "edges": knot.n, **knot_to_json(knot)}

    if not stage("input", describe_input):
        return report

    def general_position():
        gp = check_general_position(knot)
        out = gp.to_json()
        if not gp.passed:
            raise InputError(f"general position fails: {out}")
        return out

    if not stage("general_position", general_position):
        return report

    found = {}

    def quadrisecants():
        stats = EnumerationStats()
        found["quads"] = find_all_quadrisecants(knot, workers=workers, stats=stats)
        return {"count": len(found["quads"]), "quadruples": stats.quadruples,
                "lines": quadrisecants_to_json(found["quads"])}

    if not stage("quadrisecants", quadrisecants):
        return report

    def approximation():
        found["polygon"] = approximate(knot, found["quads"])
        poly = found["polygon"]
        return {"vertices": poly.n, "is_identity": poly.is_identity,
                "polygon": polygon_to_json(poly)["vertices"], "exact": poly.is_rational}

    stage("approximation", approximation)

    def self_intersections():
        found["embedding"] = find_self_intersections(found["polygon"])
        return found["embedding"].to_json()

    stage("self_intersections", self_intersections)
    embedded = found["embedding"].is_embedded if "embedding" in found else None

    classes = None
    if skip_classify:
        report.stages["classification"] = {"skipped": True}
    else:

        def classification():
            out = {"knot": classify(knot, seed=seed, max_crossings=max_crossings).to_json()}
            if embedded:
                out["approximation"] = classify(found["polygon"], seed=seed, max_crossings=max_crossings,
                                                check_embedded=False).to_json()
            else:
                out["approximation"] = None
            return out

        if stage("classification", classification) and report.stages["classification"]["approximation"]:
            c = report.stages["classification"]
            classes = (c["knot"]["verdict"], c["approximation"]["verdict"])
            if classes[0] == classes[1] == "other" and c["knot"]["jones"] != c["approximation"]["jones"]:
                classes = ("other", "other (different Jones polynomial)")

    comparison = None

    def compare():
        result = compare_quadrisecant_sets(knot, found["polygon"], found["quads"], found.get("embedding"))
        return result.to_json()

    if "polygon" in found and stage("comparison", compare):
        comparison = report.stages["comparison"]["status"]
    report.verdict = conjecture_verdict(embedded, classes, comparison)
    return report


def render_text(data: dict) -> str:
    """Human-readable summary derived from the report JSON."""
    lines = []
    inp = data.get("input")
    if inp:
        lines.append(f"knot {inp.get('name') or '(unnamed)'}: {inp['edges']} edges")
    gp = data.get("general_position")
    if gp:
        lines.append(f"general position: {'ok' if gp['passed'] else 'FAILED'}")
    qs = data.get("quadrisecants")
    if qs:
        lines.append(f"quadrisecants: {qs['count']} (from {qs['quadruples']} edge quadruples)")
        for line in qs["lines"]:
            lines.append(f"  edges {tuple(line['edges'])}")
    ap = data.get("approximation")
    if ap:
        lines.append(f"approximation: {ap['vertices']} vertices" + (" (equals the knot)" if ap["is_identity"] else ""))
    si = data.get("self_intersections")
    if si:
        if si["is_embedded"]:
            lines.append("approximation is embedded")
        else:
            kinds = sorted({c["kind"] for c in si["crossings"]})
            lines.append(f"approximation self-intersects: {len(si['crossings'])} contacts ({', '.join(kinds)})")
    cl = data.get("classification")
    if cl and not cl.get("skipped"):
        lines.append(f"knot: {cl['knot']['verdict']}  V(t) = {cl['knot']['jones_text']}")
        if cl.get("approximation"):
            a = cl["approximation"]
            lines.append(f"approximation: {a['verdict']}  V(t) = {a['jones_text']}")
    cmp_ = data.get("comparison")
    if cmp_:
        lines.append(f"quadrisecant sets: {cmp_['status']}" + (f" ({cmp_['reason']})" if cmp_["reason"] else ""))
    for name, err in data.get("errors", {}).items():
        lines.append(f"error in {name}: {err}")
    lines.append(f"verdict: {data['verdict']}")
    return "\n".join(lines)
