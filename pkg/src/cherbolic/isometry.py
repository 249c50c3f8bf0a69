"""Elements of SU(2,1) and their projective behaviour in PU(2,1)."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    IdentityElement,
    NonPositivePolar,
    NotAnIsometry,
    OrderDisagreement,
    UnresolvedBorderline,
)
from .linalg import CUBE_ROOTS, HermitianForm, box_product, eigenspaces, herm_inner, mat
from .plane import ComplexGeodesic, PointClass, ProjectivePoint, classify_vector


@dataclass(frozen=True, eq=False)
class Isometry:
    """A determinant-one matrix preserving ``form``."""

    matrix: np.ndarray
    form: HermitianForm

    def __post_init__(self):
        m = np.array(mat(self.matrix))
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def checked(cls, matrix, form: HermitianForm, tol: Tolerances = DEFAULT) -> "Isometry":
        iso = cls(matrix, form)
        iso.check(tol)
        return iso

    def check(self, tol: Tolerances = DEFAULT) -> None:
        m, h = self.matrix, self.form.matrix
        norm = np.linalg.norm(m)
        if abs(np.linalg.det(m) - 1) > tol.algebraic * max(1.0, norm**3):
            raise NotAnIsometry(f"determinant {np.linalg.det(m):.6g} is not 1")
        err = np.linalg.norm(m.conj().T @ h @ m - h)
        if err > tol.algebraic * np.linalg.norm(h) * max(1.0, norm**2):
            raise NotAnIsometry(f"matrix does not preserve the form (error {err:.3g})")

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.matrix @ other.matrix, self.form)

    def inverse(self) -> "Isometry":
        return Isometry(np.linalg.inv(self.matrix), self.form)

    def __pow__(self, n: int) -> "Isometry":
        base = self if n >= 0 else self.inverse()
        return Isometry(np.linalg.matrix_power(base.matrix, abs(n)), self.form)

    def __call__(self, z) -> np.ndarray:
        return self.matrix @ np.asarray(z, dtype=complex)

    @property
    def trace(self) -> complex:
        return complex(self.matrix.trace())

    @classmethod
    def identity(cls, form: HermitianForm) -> "Isometry":
        return cls(np.eye(3, dtype=complex), form)


def complex_reflection(n, p: int, form: HermitianForm, tol: Tolerances = DEFAULT) -> Isometry:
    """Order-p complex reflection in the geodesic polar to ``n``.

    ``n`` is multiplied by e^{2 i pi/p} (up to the determinant-one scalar
    e^{-2 i pi/(3p)}), its orthogonal complement by e^{-2 i pi/(3p)}.
    """
    n = np.asarray(n, dtype=complex)
    if p < 2:
        raise ValueError("reflection order must be at least 2")
    if classify_vector(n, form, tol) is not PointClass.POSITIVE:
        raise NonPositivePolar("complex reflections need a positive polar vector")
    phi = 2 * math.pi / p
    a = cmath.exp(-1j * phi / 3)
    b = cmath.exp(2j * phi / 3)
    nn = herm_inner(n, n, form)
    # z -> a z + (b - a) <z,n>/<n,n> n, with <z,n> = conj(n)^T H z
    m = a * np.eye(3) + (b - a) / nn * np.outer(n, n.conj() @ form.matrix)
    return Isometry.checked(m, form, tol)


def relative_gap(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    return min(np.linalg.norm(a - lam * b) for lam in CUBE_ROOTS) / scale


def proj_equal(a: Isometry, b: Isometry, tol: Tolerances = DEFAULT) -> bool:
    """Equality in PU(2,1): a = lambda*b with lambda a cube root of unity."""
    return relative_gap(a.matrix, b.matrix) <= tol.algebraic


def is_projective_identity(m, tol: Tolerances = DEFAULT, slack: float = 1.0) -> bool:
    m = m.matrix if isinstance(m, Isometry) else m
    return relative_gap(m, np.eye(3)) <= tol.algebraic * slack


def _power_slack(m: np.ndarray) -> float:
    # rounding in a product of powers grows with the conditioning of the base
    return max(1.0, float(np.linalg.cond(m)))


def power_is_identity(m: Isometry, n: int, tol: Tolerances = DEFAULT) -> bool:
    """Whether m^n is scalar, with the tolerance widened by the conditioning of m."""
    return is_projective_identity(np.linalg.matrix_power(m.matrix, n), tol, _power_slack(m.matrix))


# -- classification -------------------------------------------------------------


class Tag(enum.Enum):
    REGULAR_ELLIPTIC = "RegularElliptic"
    COMPLEX_REFLECTION = "ComplexReflection"
    ELLIPTO_PARABOLIC = "ElliptoParabolic"
    UNIPOTENT_PARABOLIC = "UnipotentParabolic"
    LOXODROMIC = "Loxodromic"
    IDENTITY = "Identity"


@dataclass(frozen=True)
class IsometryClass:
    tag: Tag
    reflection_kind: str | None = None  # "line" or "point" for complex reflections
    eigenvalues: tuple[complex, ...] = ()

    def __str__(self):
        if self.reflection_kind:
            return f"{self.tag.value}({self.reflection_kind})"
        return self.tag.value


@dataclass(frozen=True)
class _Structure:
    spaces: list
    diagonalizable: bool
    log_moduli: list[float]


def _structure(m: Isometry, tol: Tolerances) -> _Structure:
    spaces = eigenspaces(m.matrix, tol)
    scale = max(np.linalg.norm(m.matrix, 2), 1.0)
    diagonalizable = True
    for sp in spaces:
        if sp.multiplicity == 1:
            continue
        s = np.linalg.svd(m.matrix - sp.value * np.eye(3), compute_uv=False)
        # a diagonalizable repeated eigenvalue leaves `multiplicity` tiny singular values
        marker = s[3 - sp.multiplicity] / scale
        if marker <= 1e-9:
            continue
        if marker < tol.borderline * 10:
            raise UnresolvedBorderline(
                f"cannot decide diagonalizability (singular value ratio {marker:.3g})"
            )
        diagonalizable = False
    return _Structure(spaces, diagonalizable, [math.log(abs(sp.value)) for sp in spaces])


def _has_negative(space_basis: np.ndarray, form: HermitianForm, tol: Tolerances) -> bool:
    if len(space_basis) == 1:
        return classify_vector(space_basis[0], form, tol) is PointClass.NEGATIVE
    B = space_basis.T
    gram = B.conj().T @ form.matrix @ B
    ev = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    return bool(ev.min() < -tol.zero * form.scale)


def classify_isometry(m: Isometry, tol: Tolerances = DEFAULT) -> IsometryClass:
    """Classify by eigenstructure.

    Raises :class:`UnresolvedBorderline` instead of guessing when a modulus
    or diagonalizability test lands inside the tolerance band.
    """
    st = _structure(m, tol)
    values = tuple(sp.value for sp in st.spaces for _ in range(sp.multiplicity))
    off = max(abs(x) for x in st.log_moduli)
    if off > tol.borderline:
        if off < 10 * tol.borderline:
            raise UnresolvedBorderline(f"eigenvalue modulus off the unit circle by {off:.3g}")
        return IsometryClass(Tag.LOXODROMIC, eigenvalues=values)
    if len(st.spaces) == 1 and st.diagonalizable:
        return IsometryClass(Tag.IDENTITY, eigenvalues=values)
    if not st.diagonalizable:
        if len(st.spaces) == 1:
            return IsometryClass(Tag.UNIPOTENT_PARABOLIC, eigenvalues=values)
        return IsometryClass(Tag.ELLIPTO_PARABOLIC, eigenvalues=values)
    if not any(_has_negative(sp.basis, m.form, tol) for sp in st.spaces):
        raise UnresolvedBorderline("elliptic eigenvalues but no interior fixed point")
    if len(st.spaces) == 3:
        return IsometryClass(Tag.REGULAR_ELLIPTIC, eigenvalues=values)
    double = next(sp for sp in st.spaces if sp.multiplicity == 2)
    kind = "line" if _has_negative(double.basis, m.form, tol) else "point"
    return IsometryClass(Tag.COMPLEX_REFLECTION, kind, values)


# -- orders ---------------------------------------------------------------------


def order_by_powering(m: Isometry, max_order: int = 2000, tol: Tolerances = DEFAULT) -> int | None:
    """Least n <= max_order with m^n a scalar matrix, by repeated multiplication."""
    x = np.eye(3, dtype=complex)
    base = m.matrix
    bound = 1e8 * max(np.linalg.norm(base), 1.0)
    slack = _power_slack(base)
    for n in range(1, max_order + 1):
        x = x @ base
        if is_projective_identity(x, tol, slack):
            return n
        if np.linalg.norm(x) > bound:
            # powers of finite-order elements stay bounded
            return None
    return None


def order_by_eigenvalues(m: Isometry, max_order: int = 2000, tol: Tolerances = DEFAULT) -> int | None:
    """Order from the rationality of eigenvalue-ratio arguments.

    Candidate denominators come from continued-fraction convergents bounded by
    3*max_order; the resulting order is confirmed by binary powering.
    """
    try:
        st = _structure(m, tol)
    except UnresolvedBorderline:
        return None
    if not st.diagonalizable or max(abs(x) for x in st.log_moduli) > tol.borderline:
        return None
    ref = st.spaces[0].value
    n = 1
    for sp in st.spaces[1:]:
        theta = cmath.phase(sp.value / ref) / (2 * math.pi)
        frac = Fraction(theta).limit_denominator(3 * max_order)
        if abs(float(frac) - theta) > tol.algebraic * 10:
            return None
        n = math.lcm(n, frac.denominator)
        if n > max_order:
            return None
    if not power_is_identity(m, n, tol):
        return None
    return n


def projective_order(m: Isometry, max_order: int = 2000, tol: Tolerances = DEFAULT) -> int | None:
    """Order of ``m`` in PU(2,1), or None when it exceeds ``max_order``.

    Both routes are always run; a disagreement is an error, never a guess.
    """
    a = order_by_powering(m, max_order, tol)
    b = order_by_eigenvalues(m, max_order, tol)
    if a != b:
        raise OrderDisagreement(f"powering gives {a}, eigenvalues give {b}")
    return a


# -- fixed points ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FixedPoint:
    point: ProjectivePoint
    eigenvalue: complex
    eigenspace_dim: int


def fixed_points(m: Isometry, tol: Tolerances = DEFAULT) -> list[FixedPoint]:
    """Eigenvectors of ``m`` as classified projective points.

    A 2-dimensional eigenspace contributes an orthogonal pair of vectors
    spanning it; when it meets the ball it is a fixed complex geodesic, see
    :func:`fixed_geodesics`.
    """
    if is_projective_identity(m, tol):
        raise IdentityElement("every point is fixed by the identity")
    out = []
    for sp in eigenspaces(m.matrix, tol):
        for v in _orthogonal_basis(sp.basis, m.form):
            out.append(FixedPoint(ProjectivePoint.of(v, m.form, tol), sp.value, len(sp.basis)))
    return out


def _orthogonal_basis(rows: np.ndarray, form: HermitianForm) -> list[np.ndarray]:
    if len(rows) == 1:
        return [rows[0]]
    B = rows.T
    gram = B.conj().T @ form.matrix @ B
    _, C = np.linalg.eigh((gram + gram.conj().T) / 2)
    return [B @ C[:, k] for k in range(C.shape[1])]


def fixed_geodesics(m: Isometry, tol: Tolerances = DEFAULT) -> list[ComplexGeodesic]:
    """Complex geodesics fixed pointwise (2-dim eigenspaces meeting the ball)."""
    out = []
    for sp in eigenspaces(m.matrix, tol):
        if len(sp.basis) != 2 or not _has_negative(sp.basis, m.form, tol):
            continue
        # the polar is orthogonal to both spanning vectors
        a, b = sp.basis
        out.append(ComplexGeodesic.of(box_product(a, b, m.form), m.form, tol))
    return out


def fixed_points_on(m: Isometry, L: ComplexGeodesic, tol: Tolerances = DEFAULT) -> list[ProjectivePoint]:
    """Fixed points of ``m`` lying on ``L`` (m is assumed to preserve L)."""
    out = []
    n = L.polar
    for sp in eigenspaces(m.matrix, tol):
        if len(sp.basis) == 1:
            v = sp.basis[0]
            if L.contains(v, m.form, tol):
                out.append(ProjectivePoint.of(v, m.form, tol))
        else:
            a, b = sp.basis[0], sp.basis[1]
            v = herm_inner(b, n, m.form) * a - herm_inner(a, n, m.form) * b
            if np.linalg.norm(v) > 1e-9:
                out.append(ProjectivePoint.of(v, m.form, tol))
    return out
