"""Fundamental polygons of the stabilizers of a mirror, checked with Poincare's theorem.

Each case fixes a base complex geodesic (the mirror of R_1, or of R_3 for the
second Thompson case), lists polygon vertices as points of that geodesic,
and names the side-pairing elements.  Everything is recomputed from the
group; nothing numeric is stored.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    CherbolicError,
    CycleClosureFailure,
    NonCatalogParameter,
    NonSimplePolygon,
    PairingFailed,
    UnresolvedVertexClass,
    VertexOffGeodesic,
)
from .groups import (
    FAMILIES,
    PresentationReport,
    TriangleGroup,
    make_presentation,
    verify_presentation,
)
from .isometry import (
    Isometry,
    IsometryClass,
    Tag,
    classify_isometry,
    fixed_points_on,
    projective_order,
    relative_gap,
)
from .linalg import box_product, herm_inner
from .plane import (
    ComplexGeodesic,
    DiskChart,
    GeodesicArc,
    PointClass,
    ProjectivePoint,
    bergman_distance,
    disk_chart,
    geodesic_arc,
    normalized_norm2,
    point_along,
    projective_distance,
    triangle_angle,
)
from .words import ExponentFormula, absratio, const, parse_word

# -- case catalog ---------------------------------------------------------------


@dataclass(frozen=True)
class Lift:
    """Vertex P(n_base box (word . n_polar)), corrected to the base geodesic."""

    word: str
    polar: int

    def describe(self) -> str:
        return f"{self.word} n{self.polar}".strip()


@dataclass(frozen=True)
class FixedBy:
    """Vertex at the interior fixed point, on the base geodesic, of an element."""

    word: str

    def describe(self) -> str:
        return f"fixed point of {self.word}"


VertexSpec = Union[Lift, FixedBy]


@dataclass(frozen=True)
class PairingSpec:
    name: str
    word: str
    source: int  # side numbers are 1-based, side i joins order[i-1] and order[i]
    target: int


@dataclass(frozen=True)
class VectorIdentity:
    """eval(lhs) n_lhs_polar and eval(rhs) n_rhs_polar meet the base geodesic in one point.

    Comparison happens after intersecting with the base line: the reflection
    fixing that line pointwise may be inserted freely on the left.
    """

    lhs: str
    lhs_polar: int
    rhs: str
    rhs_polar: int


@dataclass(frozen=True)
class CaseSpec:
    name: str
    family: str
    base: int
    order: tuple[str, ...]
    vertices: dict[str, VertexSpec]
    pairings: tuple[PairingSpec, ...]
    presentations: tuple[tuple[tuple[int, ...] | None, tuple[tuple[str, ExponentFormula], ...]], ...]
    named_cycles: tuple[frozenset[str], ...] = ()
    identities: tuple[tuple[str, str], ...] = ()
    vector_identities: tuple[VectorIdentity, ...] = ()
    probes: tuple[str, ...] = ()  # extra words whose orders are reported

    @property
    def lattice_p(self) -> tuple[int, ...]:
        return FAMILIES[self.family].lattice_p

    def relators(self, p: int) -> tuple[tuple[str, ExponentFormula], ...]:
        for ps, rels in self.presentations:
            if ps is None or p in ps:
                return rels
        raise NonCatalogParameter(f"no subgroup presentation for {self.name} at p = {p}")

    def expand(self, expr: str) -> str:
        """Replace pairing names (g1, h4, ...) in ``expr`` by their words."""
        words = {pr.name: pr.word for pr in self.pairings}
        return re.sub(r"[gh]\d+", lambda m: f"({words[m.group(0)]})", expr)


def _ratio(a, b, c):
    return absratio(a, b, c)


_TAU1 = CaseSpec(
    name="tau1",
    family="tau1",
    base=1,
    order=tuple(f"x{i}" for i in range(10)),
    vertices={
        "x0": Lift("3' 2'", 3),
        "x1": Lift("3'", 2),
        "x2": Lift("3' 2 3 1", 3),
        "x3": Lift("", 3),
        "x4": Lift("3 1", 2),
        "x5": Lift("2' 1'", 3),
        "x6": Lift("2' 1' 3 1 2 1", 2),
        "x7": Lift("", 2),
        "x8": Lift("2", 3),
        "x9": Lift("2 3", 2),
    },
    pairings=(
        PairingSpec("g1", "(1 3' 2 3)^2", 1, 2),
        PairingSpec("g2", "(1 3)^3", 3, 4),
        PairingSpec("g3", "(1 2)^3", 7, 8),
        PairingSpec("g4", "(1 2 3 2')^2 (1 2)^3", 6, 9),
        PairingSpec("g5", "(1 2 3 2 3' 2')^3 (1 2 3 2')^2 (1 2)^3", 5, 10),
    ),
    presentations=(
        (
            (3, 4),
            (
                ("g1", _ratio(2, 1, -4)),
                ("g2", _ratio(1, 1, -3)),
                ("g3", _ratio(1, 1, -3)),
                ("g5 g2 g1", _ratio(2, 1, -2)),
                ("g5 g4'", _ratio(2, 1, -4)),
                ("g4 g3'", _ratio(2, 1, -4)),
            ),
        ),
        ((6,), (("g1", const(6)), ("g2", const(2)), ("g3", const(2)), ("g4 g3'", const(6)))),
    ),
    named_cycles=(frozenset({"x0", "x2", "x4"}), frozenset({"x5", "x9"}), frozenset({"x6", "x8"})),
    identities=(("(1 2 3)^3", "1 J"),),
    vector_identities=(
        VectorIdentity("1' 1' g4 2' 1'", 3, "2 3", 2),
        VectorIdentity("1'^3 g5 1' 3 1", 2, "1 3' 2'", 3),
    ),
    # g1 is the square of this element; both orders go into the report
    probes=("1 3' 2 3",),
)

_TAU2 = CaseSpec(
    name="tau2",
    family="tau2",
    base=1,
    order=("x1", "x0", "x2", "x3", "x4", "x5"),
    vertices={
        "x0": FixedBy("2 3 2' P^2"),
        "x1": Lift("2", 3),
        "x2": Lift("3'", 2),
        "x3": Lift("", 3),
        "x4": Lift("3 1", 2),
        "x5": Lift("", 2),
    },
    pairings=(
        PairingSpec("g1", "(1 2)^2", 5, 6),
        PairingSpec("g2", "2 3 2' P^2", 1, 2),
        PairingSpec("g3", "(1 3)^2", 3, 4),
    ),
    presentations=(
        (
            None,
            (
                ("g1", _ratio(2, 1, -4)),
                ("g2", _ratio(2, 0, 1)),
                ("g3", _ratio(2, 1, -4)),
                ("g1 g3 g2", _ratio(2, 1, -6)),
            ),
        ),
    ),
    named_cycles=(frozenset({"x1", "x2", "x4"}),),
    identities=(("g2 g2", "1'"), ("g1 g3 g2", "1^3 (2 3' 2' 1')^3")),
)

_TAU4 = CaseSpec(
    name="tau4",
    family="tau4",
    base=1,
    order=tuple(f"x{i}" for i in range(6)),
    vertices={
        "x0": Lift("3' 2'", 3),
        "x1": Lift("3'", 2),
        "x2": Lift("", 3),
        "x3": Lift("3 1", 2),
        "x4": Lift("", 2),
        "x5": Lift("2", 3),
    },
    pairings=(
        PairingSpec("g1", "1 3' 2' 3 2 3", 6, 1),
        PairingSpec("g2", "1 3 1 2 1' 3'", 3, 4),
        PairingSpec("g3", "(1 3' 2 3)^3 1 3' 2' 3 2 3", 5, 2),
    ),
    presentations=(
        (
            None,
            (
                ("g1", _ratio(1, 0, 1)),
                ("g2", _ratio(1, 0, 1)),
                ("g3 g2", _ratio(2, 3, -10)),
                ("g3' g1", _ratio(2, 1, -6)),
            ),
        ),
    ),
    named_cycles=(frozenset({"x1", "x5"}), frozenset({"x2", "x4"})),
    identities=(("g3 g2", "1^5 (1' 3')^5"), ("g1' g3", "(1 2 3 2')^3")),
)

_S2 = CaseSpec(
    name="s2_l1",
    family="S2",
    base=1,
    order=tuple(f"x{i}" for i in range(10)),
    vertices={
        "x0": FixedBy("3' 1' Q' 2 Q^3 1 3"),
        "x1": Lift("3' 1' 2'", 1),
        "x2": Lift("3' 1' 2' 1", 3),
        "x3": Lift("3' 1'", 2),
        "x4": Lift("3' 1' 2 3", 1),
        "x5": Lift("3' 1' 2 3 1 2", 3),
        "x6": Lift("3' 1' 2 3 1 2 3 2'", 1),
        "x7": Lift("", 3),
        "x8": Lift("", 2),
        "x9": Lift("2", 3),
    },
    pairings=(
        PairingSpec("g1", "(1 3)^3", 7, 8),
        PairingSpec("g2", "(1 3' 1' 2 1 3)^3", 3, 4),
        PairingSpec("g3", "(1 3' 1' 2 3 1 3' 2' 1 3)^2 (1 3' 1' 2 1 3)^3", 2, 5),
        PairingSpec("g4", "(1 2)^2 (1 3)^3", 6, 9),
        PairingSpec("g5", "3' 1' Q' 2 Q^3 1 3", 10, 1),
    ),
    presentations=(
        (
            None,
            (
                ("g1", _ratio(2, 1, -6)),
                ("g2", _ratio(2, 1, -6)),
                ("g5", _ratio(2, 0, 1)),
                ("g2 g3'", _ratio(2, 1, -4)),
                ("g1 g4'", _ratio(2, 1, -4)),
            ),
        ),
    ),
    identities=(("g2 g3'", "1^3 (2 3' 2' 1')^2"),),
)

_E2_L1 = CaseSpec(
    name="e2_l1",
    family="E2",
    base=1,
    order=("x1", "x0", "x2", "x3", "x4", "x5"),
    vertices={
        "x0": FixedBy("3 Q^3 3'"),
        "x1": Lift("3 1", 2),
        "x2": Lift("2' 1'", 3),
        "x3": Lift("", 2),
        "x4": Lift("2", 3),
        "x5": Lift("", 3),
    },
    pairings=(
        PairingSpec("g1", "3 Q^3 3'", 1, 2),
        PairingSpec("g2", "(1 2)^2", 3, 4),
        PairingSpec("g3", "(1 3)^2", 5, 6),
    ),
    presentations=(
        (
            None,
            (
                ("g1", const(2)),
                ("g2", _ratio(2, 1, -4)),
                ("g3", _ratio(2, 1, -4)),
                ("g2 g1' g3", _ratio(2, 1, -4)),
            ),
        ),
    ),
)

_E2_L3 = CaseSpec(
    name="e2_l3",
    family="E2",
    base=3,
    order=tuple(f"y{i}" for i in range(8)),
    vertices={
        "y0": Lift("", 2),
        "y1": Lift("2 3", 1),
        "y2": Lift("1' 3'", 2),
        "y3": Lift("", 1),
        "y4": Lift("1", 2),
        "y5": Lift("2'", 1),
        "y6": Lift("2' 1", 3),
        "y7": Lift("2' 3' 2'", 1),
    },
    pairings=(
        PairingSpec("h1", "(2 3)^3", 8, 1),
        PairingSpec("h2", "(1 3)^2", 3, 4),
        PairingSpec("h3", "(2' 1 2 3)^2", 5, 6),
        PairingSpec("h4", "(2 3 1 3' 2' 3)^2 (2 3)^3", 7, 2),
    ),
    presentations=(
        (
            None,
            (
                ("h1", _ratio(2, 1, -6)),
                ("h2", _ratio(2, 1, -4)),
                ("h3", _ratio(2, 1, -4)),
                ("h4 h1'", _ratio(2, 1, -4)),
                ("h2 h4 h3", _ratio(1, 1, -3)),
            ),
        ),
    ),
    identities=(("h2 h4 h3", "3^6 (3' 1 2' 1')"),),
    vector_identities=(VectorIdentity("h4 2' 1", 3, "3^4 1' 3'", 2),),
)

CASES: dict[str, CaseSpec] = {c.name: c for c in (_TAU1, _TAU2, _TAU4, _S2, _E2_L1, _E2_L3)}


@dataclass(frozen=True, order=True)
class CaseId:
    name: str
    p: int

    def __post_init__(self):
        if self.name not in CASES:
            raise NonCatalogParameter(f"unknown case {self.name!r}")
        if self.p not in CASES[self.name].lattice_p:
            raise NonCatalogParameter(
                f"p = {self.p} is not a lattice value for {self.name} "
                f"(expected one of {', '.join(map(str, CASES[self.name].lattice_p))})"
            )

    @property
    def spec(self) -> CaseSpec:
        return CASES[self.name]

    def __str__(self):
        return f"{self.name}:p{self.p}"

    @classmethod
    def parse(cls, text: str) -> "CaseId":
        """Parse ``tau1:p3`` (or ``tau1:3``)."""
        name, sep, p = text.partition(":")
        if not sep:
            raise NonCatalogParameter(f"case id {text!r} needs a ':p<N>' suffix")
        try:
            value = int(p[1:] if p.startswith("p") else p)
        except ValueError:
            raise NonCatalogParameter(f"malformed p in {text!r}") from None
        return cls(name.lower(), value)

    def group(self, tol: Tolerances = DEFAULT) -> TriangleGroup:
        return FAMILIES[self.spec.family].build(self.p, tol)


def all_cases() -> list[CaseId]:
    return [CaseId(name, p) for name, spec in CASES.items() for p in spec.lattice_p]


# -- polygons -------------------------------------------------------------------

# normalized norms this close to zero (but outside the zero threshold) are refused
_VERTEX_BAND = 1e-5


@dataclass(frozen=True, eq=False)
class PolygonVertex:
    label: str
    point: ProjectivePoint
    coord: complex
    ideal: bool
    rule: str  # "negative", "foot", "ideal" or "fixed"
    source: str


@dataclass(frozen=True, eq=False)
class Side:
    number: int
    start: int  # vertex indices into the polygon's order
    end: int
    arc: GeodesicArc


@dataclass(frozen=True, eq=False)
class FuchsianPolygon:
    case: CaseId
    geodesic: ComplexGeodesic
    chart: DiskChart
    vertices: tuple[PolygonVertex, ...]
    sides: tuple[Side, ...]
    orientation: int  # +1 counterclockwise in the chart, -1 clockwise

    def index(self, label: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.label == label:
                return i
        raise KeyError(label)

    def side(self, number: int) -> Side:
        return self.sides[number - 1]

    def klein(self) -> np.ndarray:
        return to_klein(np.array([v.coord for v in self.vertices]))


def to_klein(u):
    """Poincare-disk coordinate(s) to the Klein model, where geodesics are chords."""
    return 2 * u / (1 + np.abs(u) ** 2)


def from_klein(k):
    return k / (1 + np.sqrt(np.maximum(0.0, 1 - np.abs(k) ** 2)))


def _classify_band(z, g: TriangleGroup, tol: Tolerances) -> PointClass:
    q = normalized_norm2(z, g.form)
    if tol.zero < abs(q) <= _VERTEX_BAND:
        raise UnresolvedVertexClass(f"normalized norm {q:.3g} is too close to the null cone to decide")
    if q < -tol.zero:
        return PointClass.NEGATIVE
    if q > tol.zero:
        return PointClass.POSITIVE
    return PointClass.NULL


def resolve_vertex(
    g: TriangleGroup, base: np.ndarray, L: ComplexGeodesic, spec: VertexSpec, tol: Tolerances
) -> tuple[ProjectivePoint, str]:
    if isinstance(spec, FixedBy):
        m = g.eval(spec.word)
        candidates = [pt for pt in fixed_points_on(m, L, tol) if pt.cls is not PointClass.POSITIVE]
        inner = [pt for pt in candidates if pt.cls is PointClass.NEGATIVE]
        chosen = inner or candidates
        if len(chosen) != 1:
            raise UnresolvedVertexClass(f"{spec.word} has {len(chosen)} candidate fixed points on the geodesic")
        return chosen[0], "fixed"
    w = box_product(base, g.eval(spec.word)(g.polar(spec.polar)), g.form)
    kind = _classify_band(w, g, tol)
    if kind is PointClass.POSITIVE:
        # the two geodesics are ultraparallel: use the foot of their common perpendicular
        w = box_product(base, w, g.form)
        kind = _classify_band(w, g, tol)
        if kind is not PointClass.NEGATIVE:
            raise UnresolvedVertexClass("foot of the common perpendicular is not an interior point")
        return ProjectivePoint.of(w, g.form, tol), "foot"
    rule = "negative" if kind is PointClass.NEGATIVE else "ideal"
    return ProjectivePoint.of(w, g.form, tol), rule


def _segments_cross(a, b, c, d, eps=1e-12) -> bool:
    def orient(p, q, r):
        return (q - p).real * (r - p).imag - (q - p).imag * (r - p).real

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    return o1 * o2 < -eps and o3 * o4 < -eps


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts.real, pts.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def winding_numbers(polygon_klein: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Winding number of the closed Klein polygon around each point."""
    rel = polygon_klein[None, :] - points[:, None]
    turn = np.angle(np.roll(rel, -1, axis=1) / rel)
    return np.rint(turn.sum(axis=1) / (2 * math.pi)).astype(int)


def build_polygon(
    g: TriangleGroup, case: CaseId, tol: Tolerances = DEFAULT, chart: DiskChart | None = None
) -> FuchsianPolygon:
    spec = case.spec
    base = g.polar(spec.base)
    L = ComplexGeodesic.of(base, g.form, tol)
    chart = chart or disk_chart(L, g.form, tol)
    vertices = []
    for label in spec.order:
        vs = spec.vertices[label]
        pt, rule = resolve_vertex(g, base, L, vs, tol)
        if not L.contains(pt.lift, g.form, tol):
            raise VertexOffGeodesic(f"{label} is not on the base geodesic")
        coord = chart.coordinate(pt.lift, tol)
        ideal = pt.cls is PointClass.NULL
        vertices.append(PolygonVertex(label, pt, coord, ideal, rule, vs.describe()))
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i - 1], vertices[i]
        if a.point.same_as(b.point, tol):
            raise NonSimplePolygon(f"consecutive vertices {a.label} and {b.label} coincide")
    sides = tuple(
        Side(i, (i - 1) % n, i % n, geodesic_arc(vertices[(i - 1) % n].coord, vertices[i % n].coord))
        for i in range(1, n + 1)
    )
    k = to_klein(np.array([v.coord for v in vertices]))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(i - j) in (1, n - 1):
                continue
            if _segments_cross(k[i - 1], k[i], k[j - 1], k[j]):
                raise NonSimplePolygon(f"sides l{i or n} and l{j} cross")
    area = _signed_area(k)
    if abs(area) < 1e-9:
        raise NonSimplePolygon("polygon is degenerate")
    return FuchsianPolygon(case, L, chart, tuple(vertices), sides, 1 if area > 0 else -1)


def interior_grid(poly: FuchsianPolygon, n: int = 32) -> np.ndarray:
    """Chart coordinates of the points of an n x n Klein-model grid inside the polygon."""
    k = poly.klein()
    xs = np.linspace(k.real.min(), k.real.max(), n + 2)[1:-1]
    ys = np.linspace(k.imag.min(), k.imag.max(), n + 2)[1:-1]
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    pts = pts[np.abs(pts) < 1 - 1e-9]
    inside = winding_numbers(k, pts) != 0
    return from_klein(pts[inside])


# -- angles ---------------------------------------------------------------------


def interior_angle(poly: FuchsianPolygon, i: int) -> float:
    """Interior angle at vertex ``i`` from the tangents of the two sides (0 at ideal vertices)."""
    v = poly.vertices[i]
    if v.ideal:
        return 0.0
    prev = poly.vertices[i - 1].coord
    nxt = poly.vertices[(i + 1) % len(poly.vertices)].coord
    t_prev = geodesic_arc(v.coord, prev).tangent_at_start()
    t_next = geodesic_arc(v.coord, nxt).tangent_at_start()
    turn = cmath.phase(t_prev / t_next) % (2 * math.pi)
    return turn if poly.orientation > 0 else (2 * math.pi - turn) % (2 * math.pi)


def cosine_rule_angle(poly: FuchsianPolygon, i: int, form, tol: Tolerances = DEFAULT) -> float:
    """Unsigned angle at vertex ``i`` from Bergman distances alone.

    Points at distance 1 along both sides are built in C^3 and the angle of
    the isosceles triangle is read off the hyperbolic cosine rule.
    """
    n = len(poly.vertices)
    v = poly.vertices[i].point.lift
    a = point_along(v, poly.vertices[i - 1].point.lift, 1.0, form)
    b = point_along(v, poly.vertices[(i + 1) % n].point.lift, 1.0, form)
    return triangle_angle(1.0, 1.0, bergman_distance(a, b, form, tol), tol)


# -- action on the base geodesic -----------------------------------------------


@dataclass(frozen=True)
class GeodesicAction:
    kind: str  # "identity", "elliptic", "parabolic" or "hyperbolic"
    order: int | None
    rotation: float  # rotation angle about the fixed point, elliptic only


def restriction(m: Isometry, chart: DiskChart) -> np.ndarray:
    """2x2 matrix of ``m`` on the chart basis (negative, positive)."""
    f = chart.form
    cols = []
    for v in (chart.basis_neg, chart.basis_pos):
        w = m(v)
        cols.append([-herm_inner(w, chart.basis_neg, f), herm_inner(w, chart.basis_pos, f)])
    return np.array(cols, dtype=complex).T


def geodesic_action(m: Isometry, chart: DiskChart, tol: Tolerances = DEFAULT) -> GeodesicAction:
    """How an element preserving the chart's geodesic acts on it.

    The order is the order of the induced disk automorphism, which can be
    smaller than the order in PU(2,1) when a power is a reflection in the
    geodesic itself.
    """
    a = restriction(m, chart)
    a = a / cmath.sqrt(np.linalg.det(a))
    t = abs(a.trace())
    scalar = np.linalg.norm(a - a[0, 0] * np.eye(2)) <= 1e-9 * np.linalg.norm(a)
    if scalar:
        return GeodesicAction("identity", 1, 0.0)
    if t > 2 + 1e-7:
        return GeodesicAction("hyperbolic", None, 0.0)
    if t >= 2 - 1e-7:
        return GeodesicAction("parabolic", None, 0.0)
    lam = np.linalg.eigvals(a)
    rotation = abs(cmath.phase(lam[0] / lam[1]))
    frac = Fraction(rotation / (2 * math.pi)).limit_denominator(3 * tol.max_order)
    order = None
    if abs(float(frac) - rotation / (2 * math.pi)) <= 1e-9 and frac.denominator <= tol.max_order:
        n = frac.denominator
        an = np.linalg.matrix_power(a, n)
        if np.linalg.norm(an - an[0, 0] * np.eye(2)) <= 1e-7 * np.linalg.norm(an):
            order = n
    return GeodesicAction("elliptic", order, rotation)


# -- pairings -------------------------------------------------------------------


@dataclass(frozen=True)
class PairingVerdict:
    name: str
    word: str
    source: int
    target: int
    endpoint_map: tuple[tuple[str, str], ...]  # (source vertex, image vertex)
    orientation: str  # "forward" if start maps to start, else "reversed"
    fixes_base: bool
    endpoints_match: bool
    half_plane: bool
    outside: bool
    samples: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.fixes_base and self.endpoints_match and self.half_plane and self.outside


def case_pairings(case: CaseId | str) -> tuple[PairingSpec, ...]:
    name = case.name if isinstance(case, CaseId) else case
    return CASES[name].pairings


def _chart_coords(chart: DiskChart, lifts: np.ndarray) -> np.ndarray:
    h = chart.form.matrix
    a = (chart.basis_pos.conj() @ h) @ lifts
    b = -(chart.basis_neg.conj() @ h) @ lifts
    return a / b


def verify_pairings(
    poly: FuchsianPolygon,
    pairings,
    g: TriangleGroup,
    tol: Tolerances = DEFAULT,
    strict: bool = False,
    grid: int = 32,
) -> list[PairingVerdict]:
    """Check each pairing: base polar fixed, endpoints matched, image of the polygon outside.

    The disjointness test maps interior sample points of the polygon and asks
    that every image lies strictly beyond the target side and outside the
    polygon.
    """
    base = g.polar(poly.case.spec.base)
    samples = interior_grid(poly, grid)
    lifts = np.array([poly.chart.lift(u) for u in samples]).T
    k_poly = poly.klein()
    verdicts = []
    for pr in pairings:
        m = g.eval(pr.word)
        fixes = projective_distance(m(base), base) <= tol.projective
        src, tgt = poly.side(pr.source), poly.side(pr.target)
        s0, s1 = poly.vertices[src.start], poly.vertices[src.end]
        t0, t1 = poly.vertices[tgt.start], poly.vertices[tgt.end]
        im0, im1 = m(s0.point.lift), m(s1.point.lift)

        def hit(x, y):
            return projective_distance(x, y.point.lift) <= tol.projective

        if hit(im0, t0) and hit(im1, t1):
            emap, orient, ok = ((s0.label, t0.label), (s1.label, t1.label)), "forward", True
        elif hit(im0, t1) and hit(im1, t0):
            emap, orient, ok = ((s0.label, t1.label), (s1.label, t0.label)), "reversed", True
        else:
            emap, orient, ok = (), "none", False
        detail = "" if ok else (
            f"images of {s0.label},{s1.label} miss {t0.label},{t1.label} "
            f"(distances {projective_distance(im0, t0.point.lift):.3g}, "
            f"{projective_distance(im0, t1.point.lift):.3g})"
        )
        half, outside = False, False
        if fixes and len(samples):
            img = to_klein(_chart_coords(poly.chart, m.matrix @ lifts))
            ka, kb = k_poly[tgt.start], k_poly[tgt.end]
            d = kb - ka
            rel = img - ka
            cross = d.real * rel.imag - d.imag * rel.real
            half = bool(np.all(cross * poly.orientation < 0))
            outside = bool(np.all(winding_numbers(k_poly, img) == 0))
            if ok and not (half and outside):
                detail = "image of the polygon meets the polygon"
        verdict = PairingVerdict(
            pr.name, pr.word, pr.source, pr.target, emap, orient, fixes, ok, half, outside, len(samples), detail
        )
        if strict and not verdict.passed:
            raise PairingFailed(f"l{pr.source}", verdict.detail or "base polar not fixed")
        verdicts.append(verdict)
    return verdicts


# -- cycles ---------------------------------------------------------------------


@dataclass(frozen=True)
class CycleVerdict:
    members: tuple[str, ...]
    transformation: str  # composed pairing names, rightmost applied first
    word: str
    ideal: bool
    angle_sum: float
    angle_sum_check: float  # same sum from the cosine rule
    order: int | None  # order of the induced disk map
    order_pu: int | None  # order in PU(2,1)
    action: str
    classification: str
    passed: bool
    detail: str = ""


def _incident_sides(n: int, i: int) -> tuple[int, int]:
    """Side numbers meeting at vertex index i (side k joins k-1 and k)."""
    return (i if i else n), i + 1


def analyze_cycles(
    poly: FuchsianPolygon,
    pairings,
    g: TriangleGroup,
    verdicts: list[PairingVerdict] | None = None,
    tol: Tolerances = DEFAULT,
) -> list[CycleVerdict]:
    """Vertex cycles and their Poincare conditions."""
    verdicts = verdicts or verify_pairings(poly, pairings, g, tol)
    n = len(poly.vertices)
    moves: dict[tuple[int, int], tuple[int, int, str, str]] = {}
    for pr, vd in zip(pairings, verdicts):
        if not vd.endpoints_match:
            raise CycleClosureFailure(f"pairing {pr.name} has no endpoint map")
        for a, b in vd.endpoint_map:
            ia, ib = poly.index(a), poly.index(b)
            moves[(pr.source, ia)] = (pr.target, ib, pr.name, pr.word)
            moves[(pr.target, ib)] = (pr.source, ia, pr.name + "'", f"({pr.word})'")
    for k in range(1, n + 1):
        if not any(key[0] == k for key in moves):
            raise CycleClosureFailure(f"side l{k} is not paired")

    angles = [interior_angle(poly, i) for i in range(n)]
    seen: set[int] = set()
    cycles = []
    for start in range(n):
        if start in seen:
            continue
        side = _incident_sides(n, start)[0]
        v, s = start, side
        members, names, words = [], [], []
        for _ in range(4 * n + 1):
            members.append(v)
            if (s, v) not in moves:
                raise CycleClosureFailure(f"no pairing leaves l{s} at {poly.vertices[v].label}")
            s2, v2, name, word = moves[(s, v)]
            names.append(name)
            words.append(word)
            a, b = _incident_sides(n, v2)
            s, v = (b if s2 == a else a), v2
            if (v, s) == (start, side):
                break
        else:
            raise CycleClosureFailure(f"cycle through {poly.vertices[start].label} does not close")
        seen.update(members)
        cycles.append(_cycle_verdict(poly, g, members, names, words, angles, tol))
    return cycles


def _cycle_verdict(poly, g, members, names, words, angles, tol) -> CycleVerdict:
    labels = tuple(poly.vertices[i].label for i in members)
    # T = g_k ... g_1: the first pairing applied is rightmost
    name = " ".join(reversed(names))
    word = " ".join(reversed(words))
    t = g.eval(word)
    ideal = any(poly.vertices[i].ideal for i in members)
    action = geodesic_action(t, poly.chart, tol)
    try:
        cls = str(classify_isometry(t, tol))
    except CherbolicError as exc:
        cls = f"unresolved: {exc}"
    try:
        order_pu = projective_order(t, tol.max_order, tol)
    except CherbolicError:
        order_pu = None
    total = sum(angles[i] for i in members)
    check = 0.0
    detail = ""
    if ideal:
        passed = (
            all(poly.vertices[i].ideal for i in members)
            and action.kind == "parabolic"
            and cls in (Tag.ELLIPTO_PARABOLIC.value, Tag.UNIPOTENT_PARABOLIC.value)
        )
        if not passed:
            detail = f"ideal cycle transformation acts as {action.kind}, classified {cls}"
    else:
        check = sum(cosine_rule_angle(poly, i, g.form, tol) for i in members)
        unsigned = sum(min(angles[i], 2 * math.pi - angles[i]) for i in members)
        agree = abs(unsigned - check) <= tol.angular * len(members)
        ok_order = action.order is not None and abs(total * action.order - 2 * math.pi) <= 1e-5
        passed = agree and ok_order and action.kind in ("elliptic", "identity")
        if not agree:
            detail = f"angle methods disagree ({unsigned:.12g} vs {check:.12g})"
        elif not ok_order:
            detail = f"angle sum {total:.12g} times order {action.order} is not 2 pi"
    return CycleVerdict(
        labels, name, word, ideal, total, check, action.order, order_pu, action.kind, cls, passed, detail
    )


# -- whole verification ----------------------------------------------------------


@dataclass
class PoincareReport:
    case: CaseId
    polygon: FuchsianPolygon | None = None
    pairings: list[PairingVerdict] = field(default_factory=list)
    cycles: list[CycleVerdict] = field(default_factory=list)
    named_cycles_found: bool = True
    simple: bool = True
    errors: list[str] = field(default_factory=list)

    @property
    def disjoint(self) -> bool:
        return bool(self.pairings) and all(p.half_plane and p.outside for p in self.pairings)

    @property
    def passed(self) -> bool:
        return (
            not self.errors
            and self.polygon is not None
            and self.simple
            and all(p.passed for p in self.pairings)
            and bool(self.cycles)
            and all(c.passed for c in self.cycles)
            and self.named_cycles_found
        )


def poincare_verify(
    g: TriangleGroup,
    case: CaseId,
    tol: Tolerances = DEFAULT,
    pairings=None,
    chart: DiskChart | None = None,
) -> PoincareReport:
    """Build, pair and close up the polygon; mathematical failures land in the report."""
    report = PoincareReport(case)
    pairings = case_pairings(case) if pairings is None else tuple(pairings)
    try:
        poly = build_polygon(g, case, tol, chart)
    except NonSimplePolygon as exc:
        report.simple = False
        report.errors.append(f"{type(exc).__name__}: {exc}")
        return report
    except CherbolicError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        return report
    report.polygon = poly
    try:
        report.pairings = verify_pairings(poly, pairings, g, tol)
        if all(p.endpoints_match for p in report.pairings):
            report.cycles = analyze_cycles(poly, pairings, g, report.pairings, tol)
        else:
            report.errors.extend(
                f"PairingFailed: {p.name}: {p.detail}" for p in report.pairings if not p.endpoints_match
            )
    except CherbolicError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        return report
    found = {frozenset(c.members) for c in report.cycles}
    missing = [sorted(c) for c in case.spec.named_cycles if c not in found]
    if missing:
        report.named_cycles_found = False
        report.errors.append(f"named cycles not found: {missing}")
    return report


def subgroup_presentation(case: CaseId, g: TriangleGroup | None = None):
    """The case's subgroup presentation with pairing names expanded into words."""
    spec = case.spec
    g = g or case.group()
    rels = [(spec.expand(label), e) for label, e in spec.relators(case.p)]
    pres = make_presentation(g.kind, [pr.name for pr in spec.pairings], rels)
    # keep the readable labels
    relabeled = tuple(
        type(r)(label, r.base, r.exponent) for r, (label, _) in zip(pres.relators, spec.relators(case.p))
    )
    return type(pres)(pres.generators, relabeled, ())


def verify_subgroup_presentation(
    case: CaseId, g: TriangleGroup | None = None, tol: Tolerances = DEFAULT
) -> PresentationReport:
    g = g or case.group(tol)
    return verify_presentation(g, subgroup_presentation(case, g), tol, lenient=True)


# -- word identities ---------------------------------------------------------------


@dataclass(frozen=True)
class IdentityResult:
    lhs: str
    rhs: str
    gap: float
    holds: bool


def verify_identities(case: CaseId, g: TriangleGroup | None = None, tol: Tolerances = DEFAULT) -> list[IdentityResult]:
    """Check the case's projective word identities and vertex identities."""
    spec = case.spec
    g = g or case.group(tol)
    out = []
    for lhs, rhs in spec.identities:
        a = g.eval(spec.expand(lhs))
        b = g.eval(spec.expand(rhs))
        gap = relative_gap(a.matrix, b.matrix)
        out.append(IdentityResult(lhs, rhs, gap, gap <= tol.algebraic))
    base = g.polar(spec.base)
    for v in spec.vector_identities:
        a = g.eval(spec.expand(v.lhs)).matrix @ g.polar(v.lhs_polar)
        b = g.eval(spec.expand(v.rhs)).matrix @ g.polar(v.rhs_polar)
        gap = projective_distance(box_product(base, a, g.form), box_product(base, b, g.form))
        out.append(IdentityResult(f"{v.lhs} n{v.lhs_polar}", f"{v.rhs} n{v.rhs_polar}", gap, gap <= tol.algebraic))
    return out
