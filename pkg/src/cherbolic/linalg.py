"""Complex 3-vectors, 3x3 matrices and Hermitian forms on C^3.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128`` with
shapes ``(3,)`` and ``(3, 3)``.  The Hermitian product follows the convention

    <z, w> = conj(w)^T H z,

which is linear in the first slot and makes <z, z> the usual quadratic form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import ConvergenceFailure, NotHermitian

OMEGA = cmath.exp(2j * math.pi / 3)
CUBE_ROOTS = (1.0 + 0j, OMEGA, OMEGA**2)


def vec(*entries) -> np.ndarray:
    v = np.asarray(entries if len(entries) > 1 else entries[0], dtype=complex)
    if v.shape != (3,):
        raise ValueError(f"expected 3 entries, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def mat(rows) -> np.ndarray:
    m = np.asarray(rows, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def basis(k: int) -> np.ndarray:
    e = np.zeros(3, dtype=complex)
    e[k] = 1.0
    return e


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class Signature(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int


def form_signature(m, tol: Tolerances = DEFAULT) -> Signature:
    """Count positive, negative and zero eigenvalues of a Hermitian matrix.

    An eigenvalue is zero when its magnitude is below ``tol.zero`` times the
    largest eigenvalue magnitude.
    """
    m = mat(m)
    scale = max(np.abs(m).max(), 1e-300)
    if np.abs(m - m.conj().T).max() > tol.algebraic * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    ev = np.linalg.eigvalsh((m + m.conj().T) / 2)
    cut = tol.zero * np.abs(ev).max()
    return Signature(
        int(np.sum(ev > cut)), int(np.sum(ev < -cut)), int(np.sum(np.abs(ev) <= cut))
    )


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """A Hermitian form on C^3 together with its cached signature."""

    matrix: np.ndarray
    signature: Signature = field(init=False)

    def __post_init__(self):
        m = _frozen(mat(self.matrix))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "signature", form_signature(m))

    @property
    def scale(self) -> float:
        """Largest eigenvalue magnitude; sets the size of 'zero'."""
        return float(np.abs(np.linalg.eigvalsh(self.matrix)).max())

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix).real)

    def inner(self, z, w) -> complex:
        return herm_inner(z, w, self)

    def norm2(self, z) -> float:
        return herm_inner(z, z, self).real


STANDARD_FORM = HermitianForm(np.diag([1.0, 1.0, -1.0]))


def herm_inner(z, w, form: HermitianForm) -> complex:
    return complex(np.conj(w) @ form.matrix @ z)


def box_product(a, b, form: HermitianForm) -> np.ndarray:
    """Hermitian cross product, orthogonal to both factors under ``form``."""
    h = form.matrix
    return np.cross(np.conj(a) @ h, np.conj(b) @ h)


# -- eigen-decomposition ------------------------------------------------------


class EigenPair(NamedTuple):
    value: complex
    vector: np.ndarray


class Eigenspace(NamedTuple):
    value: complex
    multiplicity: int  # algebraic
    basis: np.ndarray  # rows span the eigenspace; len(basis) is the geometric multiplicity


def _cubic_roots(a2: complex, a1: complex, a0: complex) -> list[complex]:
    """Roots of x^3 + a2 x^2 + a1 x + a0 by Cardano's formula."""
    shift = -a2 / 3
    p = a1 - a2 * a2 / 3
    q = 2 * a2**3 / 27 - a2 * a1 / 3 + a0
    s = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    big = -q / 2 + s
    if abs(-q / 2 - s) > abs(big):
        big = -q / 2 - s
    if abs(big) == 0:
        return [shift] * 3
    c = big ** (1 / 3)
    roots = []
    for k in range(3):
        ck = c * CUBE_ROOTS[k]
        roots.append(ck - p / (3 * ck) + shift)
    return roots


def _polish_root(x: complex, coeffs: tuple[complex, complex, complex]) -> complex:
    a2, a1, a0 = coeffs
    for _ in range(3):
        f = ((x + a2) * x + a1) * x + a0
        df = (3 * x + 2 * a2) * x + a1
        if abs(df) < 1e-8 * max(1.0, abs(x)) ** 2:
            break
        step = f / df
        x -= step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


def eigenvalues3(m) -> list[complex]:
    m = mat(m)
    tr = m.trace()
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = np.linalg.det(m)
    coeffs = (-tr, minors, -det)
    return [_polish_root(r, coeffs) for r in _cubic_roots(*coeffs)]


def _cluster(values: list[complex], tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        for g in groups:
            if abs(values[g[0]] - v) <= tol * max(1.0, abs(v)):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def eigenspaces(m, tol: Tolerances = DEFAULT) -> list[Eigenspace]:
    """Eigenvalues grouped by coincidence, with a basis of each eigenspace.

    Numerically split copies of a repeated eigenvalue are merged and replaced
    by the value the trace forces, which is accurate even for defective
    matrices.
    """
    m = mat(m)
    values = eigenvalues3(m)
    scale = max(np.linalg.norm(m, 2), 1.0)
    groups = _cluster(values, tol.cluster)
    simple = [values[g[0]] for g in groups if len(g) == 1]
    spaces = []
    for group in groups:
        if len(group) == 1:
            lam = values[group[0]]
        else:
            # the split copies of a repeated root are only sqrt(eps)-accurate;
            # the trace pins their mean to full precision
            lam = (m.trace() - sum(simple)) / len(group)
        _, s, vh = np.linalg.svd(m - lam * np.eye(3))
        # singular values come sorted descending; the small ones span the kernel
        null = int(np.sum(s <= 1e-7 * scale))
        null = min(max(null, 1), len(group))
        vecs = vh[3 - null:].conj()
        polished = []
        for v in vecs:
            if null == 1 and len(group) == 1:
                v = _inverse_iteration(m, lam, v)
            polished.append(v / np.linalg.norm(v))
        spaces.append(Eigenspace(complex(lam), len(group), np.array(polished)))
    return spaces


def _inverse_iteration(m, lam, v):
    shift = lam + 1e-10 * max(1.0, abs(lam))
    try:
        w = np.linalg.solve(m - shift * np.eye(3), v)
    except np.linalg.LinAlgError:
        return v
    n = np.linalg.norm(w)
    return w / n if np.isfinite(n) and n > 0 else v


def eigen3(m, tol: Tolerances = DEFAULT) -> list[EigenPair]:
    """Three eigenpairs of a 3x3 matrix.

    A defective eigenvalue repeats its single eigenvector so that exactly
    three pairs are always returned.
    """
    m = mat(m)
    pairs: list[EigenPair] = []
    for space in eigenspaces(m, tol):
        for k in range(space.multiplicity):
            v = space.basis[min(k, len(space.basis) - 1)]
            pairs.append(EigenPair(space.value, v))
    norm = max(np.linalg.norm(m, 2), 1.0)
    for lam, v in pairs:
        resid = np.linalg.norm(m @ v - lam * v)
        if resid > 1e-6 * norm * np.linalg.norm(v):
            raise ConvergenceFailure(f"eigenpair residual {resid:.3g} for eigenvalue {lam}")
    return pairs
