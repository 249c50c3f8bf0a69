"""Points, complex geodesics and the unit-disk chart of a complex geodesic."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    DegenerateForm,
    DegenerateTriangle,
    NotATriangle,
    NotInteriorPoint,
    NotOnGeodesic,
    SameGeodesic,
    ZeroVector,
)
from .linalg import HermitianForm, box_product, herm_inner, vec


class PointClass(enum.Enum):
    NEGATIVE = "Negative"
    NULL = "Null"
    POSITIVE = "Positive"


def normalized_norm2(z, form: HermitianForm) -> float:
    """<z,z> scaled to be independent of the lift and of the form's size."""
    z = np.asarray(z, dtype=complex)
    n = np.linalg.norm(z)
    if n == 0:
        raise ZeroVector("the zero vector has no projective class")
    return herm_inner(z, z, form).real / (n * n * form.scale)


def classify_vector(z, form: HermitianForm, tol: Tolerances = DEFAULT) -> PointClass:
    q = normalized_norm2(z, form)
    if q < -tol.zero:
        return PointClass.NEGATIVE
    if q > tol.zero:
        return PointClass.POSITIVE
    return PointClass.NULL


def canonical_lift(z) -> np.ndarray:
    """Unit Euclidean norm, first non-negligible entry real positive."""
    z = np.asarray(z, dtype=complex)
    z = z / np.linalg.norm(z)
    k = int(np.argmax(np.abs(z) > 1e-12))
    return z * (abs(z[k]) / z[k])


def projective_distance(a, b) -> float:
    """Sine of the angle between the complex lines spanned by ``a`` and ``b``."""
    a = np.asarray(a, dtype=complex) / np.linalg.norm(a)
    b = np.asarray(b, dtype=complex) / np.linalg.norm(b)
    return float(np.linalg.norm(a - np.vdot(b, a) * b))


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    lift: np.ndarray
    cls: PointClass

    @classmethod
    def of(cls, z, form: HermitianForm, tol: Tolerances = DEFAULT) -> "ProjectivePoint":
        z = vec(z)
        kind = classify_vector(z, form, tol)
        lift = canonical_lift(z)
        lift.setflags(write=False)
        return cls(lift, kind)

    def same_as(self, other: "ProjectivePoint", tol: Tolerances = DEFAULT) -> bool:
        return projective_distance(self.lift, other.lift) <= tol.projective


@dataclass(frozen=True, eq=False)
class ComplexGeodesic:
    """The complex geodesic polar to a positive vector."""

    polar: np.ndarray

    @classmethod
    def of(cls, polar, form: HermitianForm, tol: Tolerances = DEFAULT) -> "ComplexGeodesic":
        polar = vec(polar)
        if classify_vector(polar, form, tol) is not PointClass.POSITIVE:
            raise DegenerateForm("a polar vector must be positive")
        polar = canonical_lift(polar)
        polar.setflags(write=False)
        return cls(polar)

    def contains(self, z, form: HermitianForm, tol: Tolerances = DEFAULT) -> bool:
        z = np.asarray(z, dtype=complex)
        s = abs(herm_inner(z, self.polar, form)) / (np.linalg.norm(z) * form.scale)
        return s <= tol.projective


# -- distances ------------------------------------------------------------------


def _as_lift(z) -> np.ndarray:
    return z.lift if isinstance(z, ProjectivePoint) else np.asarray(z, dtype=complex)


def cosh2_half_distance(z, w, form: HermitianForm) -> float:
    z, w = _as_lift(z), _as_lift(w)
    zw = herm_inner(z, w, form)
    return (zw * zw.conjugate()).real / (herm_inner(z, z, form).real * herm_inner(w, w, form).real)


def bergman_distance(z, w, form: HermitianForm, tol: Tolerances = DEFAULT) -> float:
    for pt in (z, w):
        if classify_vector(_as_lift(pt), form, tol) is not PointClass.NEGATIVE:
            raise NotInteriorPoint("Bergman distance needs two negative points")
    z, w = _as_lift(z), _as_lift(w)
    # sinh^2(d/2) through the box product: avoids the cancellation in cosh^2 - 1 for close points
    zw = box_product(z, w, form)
    s2 = -herm_inner(zw, zw, form).real / (form.det * herm_inner(z, z, form).real * herm_inner(w, w, form).real)
    return 2.0 * math.asinh(math.sqrt(max(s2, 0.0)))


# -- relative position of two complex geodesics -------------------------------


@dataclass(frozen=True, eq=False)
class Intersecting:
    point: ProjectivePoint


@dataclass(frozen=True, eq=False)
class Asymptotic:
    boundary_point: ProjectivePoint


@dataclass(frozen=True, eq=False)
class Ultraparallel:
    common_perpendicular_polar: np.ndarray


GeodesicRelation = Union[Intersecting, Asymptotic, Ultraparallel]


def geodesic_relation(
    a: ComplexGeodesic, b: ComplexGeodesic, form: HermitianForm, tol: Tolerances = DEFAULT
) -> GeodesicRelation:
    if projective_distance(a.polar, b.polar) <= tol.projective:
        raise SameGeodesic("polar vectors are proportional")
    z = box_product(a.polar, b.polar, form)
    kind = classify_vector(z, form, tol)
    if kind is PointClass.NEGATIVE:
        return Intersecting(ProjectivePoint.of(z, form, tol))
    if kind is PointClass.NULL:
        return Asymptotic(ProjectivePoint.of(z, form, tol))
    return Ultraparallel(canonical_lift(z))


# -- the disk chart -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiskChart:
    geodesic: ComplexGeodesic
    basis_neg: np.ndarray
    basis_pos: np.ndarray
    form: HermitianForm

    def coordinate(self, z, tol: Tolerances = DEFAULT) -> complex:
        return chart_map(self, z, tol)

    def lift(self, u: complex) -> np.ndarray:
        """A lift of the point with disk coordinate ``u``."""
        return u * self.basis_pos + self.basis_neg

    def moved(self, shift: complex, rotation: float = 0.0) -> "DiskChart":
        """The chart precomposed with a disk automorphism.

        The new origin is the old point ``shift`` and the new positive axis is
        turned by ``rotation``.  Used to test that results are chart-free.
        """
        if abs(shift) >= 1:
            raise ValueError("shift must lie inside the unit disk")
        s = math.sqrt(1 - abs(shift) ** 2)
        neg = (self.basis_neg + shift * self.basis_pos) / s
        pos = cmath.exp(1j * rotation) * (self.basis_pos + shift.conjugate() * self.basis_neg) / s
        return DiskChart(self.geodesic, neg, pos, self.form)

    def check(self, tol: Tolerances = DEFAULT) -> None:
        f, n, p = self.form, self.basis_neg, self.basis_pos
        s = f.scale
        ok = (
            abs(herm_inner(n, n, f) + 1) <= tol.algebraic * s
            and abs(herm_inner(p, p, f) - 1) <= tol.algebraic * s
            and abs(herm_inner(n, p, f)) <= tol.algebraic * s
            and self.geodesic.contains(n, f, tol)
            and self.geodesic.contains(p, f, tol)
        )
        if not ok:
            raise DegenerateForm("chart basis fails its orthonormality checks")


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12 * np.abs(v).max()))
    return v * (abs(v[k]) / v[k])


def disk_chart(L: ComplexGeodesic, form: HermitianForm, tol: Tolerances = DEFAULT) -> DiskChart:
    """Orthonormal basis (one negative, one positive vector) of the polar's complement.

    The two standard basis vectors projected off the polar that come first and
    are independent span the complement; the 2x2 Gram matrix is diagonalised
    there, which makes the construction deterministic.
    """
    n = L.polar
    nn = herm_inner(n, n, form)
    spans = []
    for k in range(3):
        e = np.zeros(3, dtype=complex)
        e[k] = 1.0
        v = e - herm_inner(e, n, form) / nn * n
        if np.linalg.norm(v) < 1e-9:
            continue
        if spans and projective_distance(spans[0], v) < 1e-9:
            continue
        spans.append(v)
        if len(spans) == 2:
            break
    B = np.array(spans).T
    gram = B.conj().T @ form.matrix @ B
    lam, C = np.linalg.eigh((gram + gram.conj().T) / 2)
    cut = tol.zero * np.abs(lam).max()
    if not (lam[0] < -cut and lam[1] > cut):
        raise DegenerateForm("orthogonal complement of the polar is not of signature (1,1)")
    pos = _fix_phase(B @ C[:, 1] / math.sqrt(lam[1]))
    neg = _fix_phase(B @ C[:, 0] / math.sqrt(-lam[0]))
    for v in (pos, neg):
        v.setflags(write=False)
    chart = DiskChart(L, neg, pos, form)
    chart.check(tol)
    return chart


def chart_map(chart: DiskChart, z, tol: Tolerances = DEFAULT) -> complex:
    z = _as_lift(z)
    f = chart.form
    if not chart.geodesic.contains(z, f, tol):
        raise NotOnGeodesic("point does not lie on the chart's complex geodesic")
    a = herm_inner(z, chart.basis_pos, f)
    b = -herm_inner(z, chart.basis_neg, f)
    kind = classify_vector(z, f, tol)
    if kind is PointClass.POSITIVE or abs(b) == 0:
        raise NotInteriorPoint("positive points have no disk coordinate")
    u = a / b
    if kind is PointClass.NULL:
        u = u / abs(u)
    return complex(u)


# -- hyperbolic trigonometry and the disk model -------------------------------


def triangle_angle(a: float, b: float, c: float, tol: Tolerances = DEFAULT) -> float:
    """Angle opposite side ``c`` in a hyperbolic triangle with sides a, b, c."""
    if a <= tol.angular or b <= tol.angular:
        raise DegenerateTriangle("adjacent sides must have positive length")
    cos_g = (math.cosh(a) * math.cosh(b) - math.cosh(c)) / (math.sinh(a) * math.sinh(b))
    if abs(cos_g) > 1 + tol.angular:
        raise NotATriangle(f"side lengths violate the triangle inequality (cos={cos_g:.6g})")
    return math.acos(min(1.0, max(-1.0, cos_g)))


def disk_distance(u: complex, v: complex) -> float:
    r = abs((u - v) / (1 - u.conjugate() * v))
    return 2.0 * math.atanh(min(r, 1.0))


def mobius_to_origin(u: complex, z: complex) -> complex:
    """The disk automorphism sending ``u`` to 0, positive derivative at ``u``."""
    return (z - u) / (1 - u.conjugate() * z)


@dataclass(frozen=True)
class GeodesicArc:
    start: complex
    end: complex
    center: complex | None  # None for a diameter
    radius: float  # math.inf for a diameter

    @property
    def is_diameter(self) -> bool:
        return self.center is None

    def tangent_at_start(self) -> complex:
        """Unit tangent at ``start`` pointing along the arc."""
        chord = self.end - self.start
        if self.is_diameter:
            return chord / abs(chord)
        t = 1j * (self.start - self.center)
        if (t.conjugate() * chord).real < 0:
            t = -t
        return t / abs(t)

    def reversed(self) -> "GeodesicArc":
        return GeodesicArc(self.end, self.start, self.center, self.radius)

    def points(self, n: int = 64) -> np.ndarray:
        if self.is_diameter:
            return np.linspace(self.start, self.end, n)
        a0 = cmath.phase(self.start - self.center)
        a1 = cmath.phase(self.end - self.center)
        d = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
        angles = a0 + d * np.linspace(0.0, 1.0, n)
        return self.center + self.radius * np.exp(1j * angles)


def geodesic_arc(u: complex, v: complex, collinear_tol: float = 1e-10) -> GeodesicArc:
    """Circle orthogonal to the unit circle through ``u`` and ``v`` (or a diameter)."""
    u, v = complex(u), complex(v)
    cross = u.real * v.imag - u.imag * v.real
    if abs(cross) <= collinear_tol * max(abs(u), abs(v), 1e-300):
        return GeodesicArc(u, v, None, math.inf)
    # orthogonality to the unit circle: 2 Re(conj(z) c) = |z|^2 + 1 for z on the circle
    ru, rv = (abs(u) ** 2 + 1) / 2, (abs(v) ** 2 + 1) / 2
    cx = (ru * v.imag - rv * u.imag) / cross
    cy = (rv * u.real - ru * v.real) / cross
    center = complex(cx, cy)
    return GeodesicArc(u, v, center, abs(u - center))


def disk_angle(at: complex, toward_a: complex, toward_b: complex) -> float:
    """Unsigned angle in [0, pi] at ``at`` between the geodesics to the two points."""
    ta = geodesic_arc(at, toward_a).tangent_at_start()
    tb = geodesic_arc(at, toward_b).tangent_at_start()
    return abs(cmath.phase(tb / ta))


# -- geodesics inside C^{2,1} ---------------------------------------------------


def point_along(x, y, distance: float, form: HermitianForm) -> np.ndarray:
    """Lift of the point at Bergman distance ``distance`` from ``x`` toward ``y``.

    ``x`` must be negative; ``y`` may be negative or null.  The path lies in
    the complex line through x and y.
    """
    x = _as_lift(x).astype(complex)
    y = _as_lift(y).astype(complex)
    x = x / math.sqrt(-herm_inner(x, x, form).real)
    yx = herm_inner(y, x, form)
    w = (y + yx * x) / (-yx)
    w = w / math.sqrt(herm_inner(w, w, form).real)
    s = distance / 2
    return math.cosh(s) * x + math.sinh(s) * w
