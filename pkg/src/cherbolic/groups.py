"""Sporadic and Thompson triangle groups, word evaluation and presentations."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import MacroUnavailable, NonCatalogParameter, NonIntegerExponent, WrongSignature
from .isometry import Isometry, power_is_identity, proj_equal, projective_order
from .linalg import HermitianForm, Signature, basis, box_product
from .plane import ProjectivePoint
from .words import (
    INFINITE,
    SPORADIC,
    THOMPSON,
    ExponentFormula,
    Word,
    absratio,
    const,
    parse_word,
)

# -- construction ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TriangleGroup:
    """Three order-p complex reflections (and J for sporadic groups) preserving ``form``.

    The reflection R_i has polar vector e_i, so the mirrors' polars are the
    standard basis in both normalizations.
    """

    kind: str
    p: int
    params: dict[str, complex]
    form: HermitianForm
    generators: dict[str, Isometry]
    _inverses: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name, g in self.generators.items():
            self._inverses[name] = np.linalg.inv(g.matrix)

    def polar(self, i: int) -> np.ndarray:
        """Polar vector of the mirror of R_i, i in {1, 2, 3}."""
        return basis(i - 1)

    def __getitem__(self, name: str) -> Isometry:
        return self.generators[name]

    def eval(self, word: Word | str) -> Isometry:
        return eval_word(self, word)

    def parse(self, text: str) -> Word:
        return parse_word(text, self.kind)


def _u(p: int) -> complex:
    return cmath.exp(2j * math.pi / (3 * p))


def _alpha(u: complex) -> float:
    return (2 - u**3 - u.conjugate() ** 3).real


def _require_lattice_signature(form: HermitianForm) -> None:
    if not form.det < 0 or form.signature != Signature(2, 1, 0):
        raise WrongSignature(
            f"form has signature {tuple(form.signature)} and determinant {form.det:.6g}; "
            "need (2, 1, 0)"
        )


def _generators(mats: dict[str, np.ndarray], form: HermitianForm, tol: Tolerances):
    return {k: Isometry.checked(m, form, tol) for k, m in mats.items()}


def sporadic_group(p: int, tau: complex, tol: Tolerances = DEFAULT) -> TriangleGroup:
    """Equilateral triangle group with tr(R1 J) = tau."""
    if p < 2:
        raise ValueError("p must be at least 2")
    tau = complex(tau)
    u = _u(p)
    ub = u.conjugate()
    a = _alpha(u)
    b = (ub**2 - u) * tau
    bc = b.conjugate()
    form = HermitianForm(np.array([[a, b, bc], [bc, a, b], [b, bc, a]]))
    _require_lattice_signature(form)
    r1 = np.array([[u**2, tau, -u * tau.conjugate()], [0, ub, 0], [0, 0, ub]])
    j = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    r2 = j @ r1 @ j.T
    r3 = j @ r2 @ j.T
    gens = _generators({"1": r1, "2": r2, "3": r3, "J": j}, form, tol)
    return TriangleGroup(SPORADIC, p, {"tau": tau}, form, gens)


def thompson_group(
    p: int, rho: complex, sigma: complex, tau: complex, tol: Tolerances = DEFAULT
) -> TriangleGroup:
    """Triangle group with three order-p reflections and parameters (rho, sigma, tau)."""
    if p < 2:
        raise ValueError("p must be at least 2")
    rho, sigma, tau = complex(rho), complex(sigma), complex(tau)
    u = _u(p)
    ub = u.conjugate()
    a = _alpha(u)
    k = ub**2 - u
    b1, b2, b3 = k * rho, k * sigma, k * tau
    form = HermitianForm(
        np.array(
            [
                [a, b1, b3.conjugate()],
                [b1.conjugate(), a, b2],
                [b3, b2.conjugate(), a],
            ]
        )
    )
    _require_lattice_signature(form)
    r1 = np.array([[u**2, rho, -u * tau.conjugate()], [0, ub, 0], [0, 0, ub]])
    r2 = np.array([[ub, 0, 0], [-u * rho.conjugate(), u**2, sigma], [0, 0, ub]])
    r3 = np.array([[ub, 0, 0], [0, ub, 0], [tau, -u * sigma.conjugate(), u**2]])
    gens = _generators({"1": r1, "2": r2, "3": r3}, form, tol)
    return TriangleGroup(THOMPSON, p, {"rho": rho, "sigma": sigma, "tau": tau}, form, gens)


def eval_word(g: TriangleGroup, word: Word | str) -> Isometry:
    """Left-to-right product of generator matrices."""
    if isinstance(word, str):
        word = parse_word(word, g.kind)
    m = np.eye(3, dtype=complex)
    for letter in word:
        if letter.generator not in g.generators:
            raise MacroUnavailable(f"generator {letter.generator} is not in a {g.kind} group")
        step = g._inverses[letter.generator] if letter.inverted else g.generators[letter.generator].matrix
        m = m @ step
    return Isometry(m, g.form)


def alternating(a: Word, b: Word, n: int) -> Word:
    out = Word()
    for k in range(n):
        out = out * (a if k % 2 == 0 else b)
    return out


def braid_holds(g: TriangleGroup, a: Word | str, b: Word | str, n: int, tol: Tolerances = DEFAULT) -> bool:
    """Whether the alternating products abab... and baba... of n factors agree projectively."""
    if n < 2:
        raise ValueError("braid length must be at least 2")
    a = g.parse(a) if isinstance(a, str) else a
    b = g.parse(b) if isinstance(b, str) else b
    return proj_equal(eval_word(g, alternating(a, b, n)), eval_word(g, alternating(b, a, n)), tol)


def triangle_vertices(g: TriangleGroup, tol: Tolerances = DEFAULT) -> list[ProjectivePoint]:
    """The points v_i = n_{i+1} box n_{i+2} where consecutive mirrors meet."""
    out = []
    for i in range(3):
        a, b = g.polar((i + 1) % 3 + 1), g.polar((i + 2) % 3 + 1)
        out.append(ProjectivePoint.of(box_product(a, b, g.form), g.form, tol))
    return out


# -- presentations --------------------------------------------------------------


@dataclass(frozen=True)
class Relator:
    label: str
    base: Word
    exponent: ExponentFormula


@dataclass(frozen=True)
class BraidClause:
    a: Word
    b: Word
    length: int

    @property
    def label(self) -> str:
        return f"br{self.length}({self.a}, {self.b})"


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Relator, ...]
    braids: tuple[BraidClause, ...] = ()


@dataclass(frozen=True)
class RelatorResult:
    label: str
    word: str
    formula: str
    expected: int | None  # None when the exponent is infinite
    measured: int | None
    removed: bool
    holds: bool  # base^expected is the identity (vacuously true when removed)

    @property
    def passed(self) -> bool:
        return self.holds and self.measured == self.expected


@dataclass(frozen=True)
class BraidResult:
    label: str
    holds: bool

    @property
    def passed(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class PresentationReport:
    relators: tuple[RelatorResult, ...]
    braids: tuple[BraidResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relators) and all(b.passed for b in self.braids)

    @property
    def removed(self) -> list[str]:
        return [r.label for r in self.relators if r.removed]


def verify_presentation(
    g: TriangleGroup, pres: Presentation, tol: Tolerances = DEFAULT, lenient: bool = False
) -> PresentationReport:
    """Check every relator and braid clause at the group's p.

    A relator passes when its base word raised to the evaluated exponent is
    projectively trivial and the measured order of the base equals that
    exponent.  Relators with infinite exponent are dropped from the relation
    check but their base is still measured: it must have no finite order.
    With ``lenient`` a non-integer exponent fails its relator instead of
    raising.
    """
    results = []
    for rel in pres.relators:
        base = eval_word(g, rel.base)
        measured = projective_order(base, tol.max_order, tol)
        try:
            e = rel.exponent.evaluate(g.p)
        except NonIntegerExponent:
            if not lenient:
                raise
            results.append(
                RelatorResult(rel.label, str(rel.base), str(rel.exponent), None, measured, False, False)
            )
            continue
        if e == INFINITE:
            results.append(
                RelatorResult(rel.label, str(rel.base), str(rel.exponent), None, measured, True, True)
            )
            continue
        holds = power_is_identity(base, e, tol)
        results.append(
            RelatorResult(rel.label, str(rel.base), str(rel.exponent), e, measured, False, holds)
        )
    braids = tuple(BraidResult(c.label, braid_holds(g, c.a, c.b, c.length, tol)) for c in pres.braids)
    return PresentationReport(tuple(results), braids)


def make_presentation(kind: str, generators, relators, braids=()) -> Presentation:
    """Build a presentation from (word text, exponent) and (a, b, n) tuples."""
    rels = tuple(Relator(text, parse_word(text, kind), e) for text, e in relators)
    brs = tuple(BraidClause(parse_word(a, kind), parse_word(b, kind), n) for a, b, n in braids)
    return Presentation(tuple(generators), rels, brs)


_SPORADIC_COMMON = [
    ("1", absratio(1, 0, 1)),
    ("J", const(3)),
    ("3' J 2 J'", const(1)),
    ("3' J' 1 J", const(1)),
]

_AMBIENT = {
    "tau1": (
        SPORADIC,
        _SPORADIC_COMMON
        + [
            ("1 J", const(8)),
            ("1 2", absratio(3, 1, -3)),
            ("1 2 3 2'", absratio(4, 1, -4)),
        ],
        [
            ("1", "2 3 2 3' 2'", 3),
            ("1", "2", 6),
            ("1", "2 3 2'", 4),
            ("1", "3' 2' 3 2 3", 3),
        ],
    ),
    "tau2": (
        SPORADIC,
        _SPORADIC_COMMON
        + [
            ("1 J", const(7)),
            ("1 2", absratio(4, 1, -4)),
            ("1 2 3 2'", absratio(6, 1, -6)),
        ],
        [("1", "2", 4), ("1", "2 3 2'", 3)],
    ),
    "tau4": (
        SPORADIC,
        _SPORADIC_COMMON
        + [
            ("1 J", const(5)),
            ("1 2", absratio(10, 3, -10)),
            ("1 2 3 2'", absratio(6, 1, -6)),
        ],
        [("1", "2", 5), ("1", "2 3 2'", 3)],
    ),
    "S2": (
        THOMPSON,
        [
            ("1", absratio(1, 0, 1)),
            ("2", absratio(1, 0, 1)),
            ("3", absratio(1, 0, 1)),
            ("1 2 3", const(5)),
            ("1 2", absratio(4, 1, -4)),
            ("1 2 3 2'", absratio(10, 3, -10)),
        ],
        [("1", "3", 3), ("2", "3", 3), ("1", "2", 4), ("1", "2 3 2'", 5)],
    ),
    "E2": (
        THOMPSON,
        [
            ("1", absratio(1, 0, 1)),
            ("2", absratio(1, 0, 1)),
            ("3", absratio(1, 0, 1)),
            ("1 2 3", const(6)),
            ("1 3", absratio(4, 1, -4)),
            ("1 2", absratio(4, 1, -4)),
            ("1 2 3 2'", absratio(4, 1, -4)),
            ("3 1 2 1'", absratio(3, 1, -3)),
        ],
        [
            ("2", "3", 3),
            ("3", "1", 4),
            ("1", "2", 4),
            ("1", "2 3 2'", 4),
            ("3", "1 2 1'", 6),
        ],
    ),
}


def ambient_presentation(family: str) -> Presentation:
    """Presentation of the ambient lattice for a catalog family."""
    try:
        kind, rels, braids = _AMBIENT[family]
    except KeyError:
        raise NonCatalogParameter(f"no presentation recorded for family {family!r}") from None
    gens = ("1", "2", "3", "J") if kind == SPORADIC else ("1", "2", "3")
    return make_presentation(kind, gens, rels, braids)


# -- catalog --------------------------------------------------------------------

GOLDEN = (1 + math.sqrt(5)) / 2

# Table value of sigma for E2 is e^{-2 pi i/3}; with this matrix normalization
# the group only satisfies its presentation for the negated value e^{i pi/3}.
E2_TABLE_SIGMA = cmath.exp(-2j * math.pi / 3)
E2_SIGMA = -E2_TABLE_SIGMA


@dataclass(frozen=True)
class Family:
    name: str
    kind: str
    params: tuple[complex, ...]  # (tau,) or (rho, sigma, tau)
    lattice_p: tuple[int, ...]
    has_presentation: bool
    q_order: int | None = None

    def build(self, p: int, tol: Tolerances = DEFAULT) -> TriangleGroup:
        if p not in self.lattice_p:
            raise NonCatalogParameter(
                f"p = {p} is not a lattice value for {self.name} "
                f"(expected one of {', '.join(map(str, self.lattice_p))})"
            )
        params = self.params
        if p < 0:
            params = tuple(c.conjugate() for c in params)
            p = -p
        if self.kind == SPORADIC:
            return sporadic_group(p, *params, tol=tol)
        return thompson_group(p, *params, tol=tol)

    def catalog_id(self, p: int) -> str:
        return f"{self.kind}:{self.name}:p{p}"


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family("tau1", SPORADIC, (complex(-1, math.sqrt(2)),), (3, 4, 6), True),
        Family("tau2", SPORADIC, (-complex(1, math.sqrt(7)) / 2,), (3, 4, 5, 6, 8, 12), True),
        Family(
            "tau3",
            SPORADIC,
            (cmath.exp(-1j * math.pi / 9) * (-cmath.exp(-2j * math.pi / 3) - (1 - math.sqrt(5)) / 2),),
            (2, 3, 4),
            False,
        ),
        Family("tau4", SPORADIC, (complex(GOLDEN),), (3, 4, 5, 10), True),
        Family(
            "S2",
            THOMPSON,
            (1 + GOLDEN * cmath.exp(2j * math.pi / 3), 1 + 0j, 1 + 0j),
            (3, 4, 5),
            True,
            5,
        ),
        Family("E2", THOMPSON, (complex(math.sqrt(2)), E2_SIGMA, complex(math.sqrt(2))), (3, 4, 6, 12), True, 6),
        Family(
            "H1",
            THOMPSON,
            (complex(-1, math.sqrt(7)) / 2, cmath.exp(-4j * math.pi / 7), cmath.exp(-4j * math.pi / 7)),
            (2, -7),
            False,
            42,
        ),
        Family(
            "H2",
            THOMPSON,
            (-1 - cmath.exp(-2j * math.pi / 5), cmath.exp(4j * math.pi / 5), cmath.exp(4j * math.pi / 5)),
            (2, 3, 5, 10, -5),
            False,
            15,
        ),
    )
}

# families whose ambient presentation is checked (the 20 verified combinations)
VERIFIED_FAMILIES = tuple(name for name, f in FAMILIES.items() if f.has_presentation)


def family(name: str) -> Family:
    for key, f in FAMILIES.items():
        if key.lower() == name.lower():
            return f
    raise NonCatalogParameter(f"unknown family {name!r}")


def catalog_ids(kind: str | None = None) -> list[str]:
    return [
        f.catalog_id(p)
        for f in FAMILIES.values()
        if kind is None or f.kind == kind
        for p in f.lattice_p
    ]


def parse_catalog_id(text: str) -> tuple[Family, int]:
    """Split an id like ``sporadic:tau1:p3`` or ``thompson:E2:p12``."""
    parts = text.split(":")
    if len(parts) != 3 or not parts[2].startswith("p"):
        raise NonCatalogParameter(f"malformed catalog id {text!r}")
    fam = family(parts[1])
    if fam.kind != parts[0]:
        raise NonCatalogParameter(f"{fam.name} is a {fam.kind} family, not {parts[0]}")
    try:
        p = int(parts[2][1:])
    except ValueError:
        raise NonCatalogParameter(f"malformed p in {text!r}") from None
    if p not in fam.lattice_p:
        raise NonCatalogParameter(f"p = {p} is not a lattice value for {fam.name}")
    return fam, p


def group_from_id(text: str, tol: Tolerances = DEFAULT) -> TriangleGroup:
    fam, p = parse_catalog_id(text)
    return fam.build(p, tol)
