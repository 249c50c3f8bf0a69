"""Serializable reports and polygon documents.

JSON conventions: keys sorted, floats in Python's shortest round-trip form,
complex numbers as ``[re, im]``, infinite exponents and diameters' radii as
``null``.  The same inputs always produce the same bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, is_dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .domains import (
    CaseId,
    FuchsianPolygon,
    PoincareReport,
    geodesic_action,
    poincare_verify,
    subgroup_presentation,
    verify_identities,
)
from .errors import CherbolicError
from .groups import FAMILIES, PresentationReport, TriangleGroup, ambient_presentation, verify_presentation
from .isometry import classify_isometry, projective_order
from .plane import ComplexGeodesic, DiskChart, disk_chart

SCHEMA_VERSION = 1


def jsonable(x):
    """Recursively convert to JSON-ready values."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if math.isinf(x) or math.isnan(x) else x
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if is_dataclass(x) and not isinstance(x, type):
        return {f.name: jsonable(getattr(x, f.name)) for f in fields(x)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _complex(pair) -> complex:
    return complex(pair[0], pair[1])


# -- polygon documents -------------------------------------------------------------


@dataclass(frozen=True)
class DocVertex:
    label: str
    coord: complex
    ideal: bool
    rule: str
    source: str


@dataclass(frozen=True)
class DocSide:
    number: int
    start: str
    end: str
    center: complex | None  # None for a diameter
    radius: float | None


@dataclass(frozen=True)
class DocPairing:
    name: str
    word: str
    source: int
    target: int
    endpoint_map: tuple[tuple[str, str], ...]
    orientation: str
    passed: bool


@dataclass(frozen=True)
class DocCycle:
    members: tuple[str, ...]
    transformation: str
    word: str
    ideal: bool
    angle_sum: float
    order: int | None
    order_pu: int | None
    classification: str
    passed: bool


@dataclass(frozen=True)
class PolygonDocument:
    case: str
    p: int
    chart_basis: tuple[complex, ...]  # negative basis vector, then positive
    orientation: int
    vertices: tuple[DocVertex, ...]
    sides: tuple[DocSide, ...]
    pairings: tuple[DocPairing, ...]
    cycles: tuple[DocCycle, ...]
    passed: bool
    errors: tuple[str, ...] = ()

    @property
    def case_id(self) -> CaseId:
        return CaseId(self.case, self.p)

    def to_json(self) -> str:
        return dumps(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PolygonDocument":
        return cls(
            case=d["case"],
            p=d["p"],
            chart_basis=tuple(_complex(c) for c in d["chart_basis"]),
            orientation=d["orientation"],
            vertices=tuple(
                DocVertex(v["label"], _complex(v["coord"]), v["ideal"], v["rule"], v["source"]) for v in d["vertices"]
            ),
            sides=tuple(
                DocSide(
                    s["number"],
                    s["start"],
                    s["end"],
                    None if s["center"] is None else _complex(s["center"]),
                    s["radius"],
                )
                for s in d["sides"]
            ),
            pairings=tuple(
                DocPairing(
                    q["name"],
                    q["word"],
                    q["source"],
                    q["target"],
                    tuple(tuple(e) for e in q["endpoint_map"]),
                    q["orientation"],
                    q["passed"],
                )
                for q in d["pairings"]
            ),
            cycles=tuple(
                DocCycle(
                    tuple(c["members"]),
                    c["transformation"],
                    c["word"],
                    c["ideal"],
                    c["angle_sum"],
                    c["order"],
                    c["order_pu"],
                    c["classification"],
                    c["passed"],
                )
                for c in d["cycles"]
            ),
            passed=d["passed"],
            errors=tuple(d.get("errors", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "PolygonDocument":
        return cls.from_dict(json.loads(text))

    def chart(self, g: TriangleGroup, tol: Tolerances = DEFAULT) -> DiskChart:
        """Rebuild the stored chart on the group's base geodesic."""
        base = g.polar(self.case_id.spec.base)
        neg = np.array(self.chart_basis[:3], dtype=complex)
        pos = np.array(self.chart_basis[3:], dtype=complex)
        return DiskChart(ComplexGeodesic.of(base, g.form, tol), neg, pos, g.form)


def polygon_document(report: PoincareReport) -> PolygonDocument:
    poly: FuchsianPolygon | None = report.polygon
    case = report.case
    if poly is None:
        return PolygonDocument(case.name, case.p, (), 0, (), (), (), (), False, tuple(report.errors))
    labels = [v.label for v in poly.vertices]
    return PolygonDocument(
        case=case.name,
        p=case.p,
        chart_basis=tuple(complex(z) for z in (*poly.chart.basis_neg, *poly.chart.basis_pos)),
        orientation=poly.orientation,
        vertices=tuple(DocVertex(v.label, complex(v.coord), v.ideal, v.rule, v.source) for v in poly.vertices),
        sides=tuple(
            DocSide(
                s.number,
                labels[s.start],
                labels[s.end],
                None if s.arc.is_diameter else complex(s.arc.center),
                None if s.arc.is_diameter else float(s.arc.radius),
            )
            for s in poly.sides
        ),
        pairings=tuple(
            DocPairing(q.name, q.word, q.source, q.target, q.endpoint_map, q.orientation, q.passed)
            for q in report.pairings
        ),
        cycles=tuple(
            DocCycle(
                c.members,
                c.transformation,
                c.word,
                c.ideal,
                c.angle_sum,
                c.order,
                c.order_pu,
                c.classification,
                c.passed,
            )
            for c in report.cycles
        ),
        passed=report.passed,
        errors=tuple(report.errors),
    )


def reverify(doc: PolygonDocument, tol: Tolerances = DEFAULT) -> PolygonDocument:
    """Rebuild the group and polygon from a document's case, p and chart, then verify again."""
    case = doc.case_id
    g = case.group(tol)
    chart = doc.chart(g, tol) if doc.chart_basis else None
    return polygon_document(poincare_verify(g, case, tol, chart=chart))


# -- verification reports ---------------------------------------------------------------


def presentation_section(rep: PresentationReport) -> list[dict]:
    out = [
        {
            "kind": "relator",
            "label": r.label,
            "word": r.word,
            "formula": r.formula,
            "expected": r.expected,
            "measured": r.measured,
            "removed": r.removed,
            "holds": r.holds,
            "pass": r.passed,
        }
        for r in rep.relators
    ]
    out += [{"kind": "braid", "label": b.label, "holds": b.holds, "pass": b.passed} for b in rep.braids]
    return out


def _order_or_error(m, tol):
    try:
        return projective_order(m, tol.max_order, tol)
    except CherbolicError as exc:
        return f"{type(exc).__name__}: {exc}"


def subgroup_section(case: CaseId, g: TriangleGroup, tol: Tolerances) -> dict:
    spec = case.spec
    rep = verify_presentation(g, subgroup_presentation(case, g), tol, lenient=True)
    chart = disk_chart(ComplexGeodesic.of(g.polar(spec.base), g.form, tol), g.form, tol)
    rows = presentation_section(rep)
    for row, rel in zip(rows, rep.relators):
        m = g.eval(rel.word)
        row["order_on_geodesic"] = geodesic_action(m, chart, tol).order
    generators = []
    for pr in spec.pairings:
        m = g.eval(pr.word)
        generators.append(
            {
                "name": pr.name,
                "word": pr.word,
                "order": _order_or_error(m, tol),
                "order_on_geodesic": geodesic_action(m, chart, tol).order,
                "class": str(classify_isometry(m, tol)),
            }
        )
    probes = [{"word": w, "order": _order_or_error(g.eval(w), tol)} for w in spec.probes]
    return {
        "relators": rows,
        "removed": rep.removed,
        "generators": generators,
        "probes": probes,
        "pass": rep.passed,
    }


def poincare_section(report: PoincareReport) -> dict:
    return {
        "pairings": [
            {
                "name": q.name,
                "word": q.word,
                "source": q.source,
                "target": q.target,
                "endpoint_map": q.endpoint_map,
                "orientation": q.orientation,
                "fixes_base": q.fixes_base,
                "endpoints_match": q.endpoints_match,
                "half_plane": q.half_plane,
                "outside": q.outside,
                "samples": q.samples,
                "detail": q.detail,
                "pass": q.passed,
            }
            for q in report.pairings
        ],
        "cycles": [
            {
                "members": c.members,
                "transformation": c.transformation,
                "ideal": c.ideal,
                "angle_sum": c.angle_sum,
                "angle_sum_check": c.angle_sum_check,
                "order": c.order,
                "order_pu": c.order_pu,
                "action": c.action,
                "classification": c.classification,
                "detail": c.detail,
                "pass": c.passed,
            }
            for c in report.cycles
        ],
        "simple": report.simple,
        "disjoint": report.disjoint,
        "named_cycles_found": report.named_cycles_found,
        "errors": report.errors,
        "pass": report.passed,
    }


def case_report(case: CaseId, tol: Tolerances = DEFAULT) -> dict:
    """Full verification of one case: ambient group, polygon, Poincare conditions, subgroup."""
    g = case.group(tol)
    family_name = case.spec.family
    ambient = verify_presentation(g, ambient_presentation(family_name), tol)
    poincare = poincare_verify(g, case, tol)
    subgroup = subgroup_section(case, g, tol)
    identities = [asdict(r) | {"pass": r.holds} for r in verify_identities(case, g, tol)]
    ambient_rows = presentation_section(ambient)
    passed = (
        ambient.passed
        and poincare.passed
        and subgroup["pass"]
        and all(r["pass"] for r in identities)
    )
    return {
        "schema": SCHEMA_VERSION,
        "case": case.name,
        "p": case.p,
        "family": FAMILIES[family_name].catalog_id(case.p),
        "ambient_presentation": ambient_rows,
        "polygon": jsonable(polygon_document(poincare)),
        "poincare": poincare_section(poincare),
        "subgroup_presentation": subgroup,
        "identities": identities,
        "pass": passed,
    }


def failure_report(case_text: str, p, exc: Exception) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "case": case_text,
        "p": p,
        "error": {"type": type(exc).__name__, "message": str(exc)},
        "pass": False,
    }


@dataclass
class Summary:
    reports: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r["pass"] for r in self.reports)

    def to_json(self) -> str:
        return dumps({"schema": SCHEMA_VERSION, "reports": self.reports, "pass": self.passed})
