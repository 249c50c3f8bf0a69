"""End-to-end acceptance checks, one test (plus strict xfails for known failures) per criterion.

Each criterion records a single PASS/FAIL line, printed in the terminal summary.
A FAIL line with a green suite means the failing part is pinned by a strict
xfail below it and explained in the decisions ledger.
"""

import dataclasses
import math

import numpy as np
import pytest

from cherbolic.cli import main
from cherbolic.domains import (
    CASES,
    CaseId,
    PairingSpec,
    all_cases,
    build_polygon,
    cosine_rule_angle,
    interior_angle,
    poincare_verify,
    restriction,
    verify_identities,
    verify_pairings,
    verify_subgroup_presentation,
)
from cherbolic.groups import (
    FAMILIES,
    VERIFIED_FAMILIES,
    ambient_presentation,
    sporadic_group,
    thompson_group,
    verify_presentation,
)
from cherbolic.isometry import Tag, classify_isometry, order_by_eigenvalues, order_by_powering, projective_order
from cherbolic.linalg import form_signature
from cherbolic.plane import bergman_distance, disk_distance
from cherbolic.words import Word, parse_word

COMBINATIONS = [(name, p) for name in VERIFIED_FAMILIES for p in FAMILIES[name].lattice_p]

# tolerances pinned by the acceptance text
TOL_RELATION = 1e-9
TOL_ANGLE_SUM = 1e-5
TOL_IDEAL = 1e-6
TOL_DISTANCE = 1e-8
TOL_ANGLE = 1e-6
ORDER_BOUND = 2000


@pytest.fixture(scope="module")
def ambient():
    return {(n, p): verify_presentation(FAMILIES[n].build(p), ambient_presentation(n)) for n, p in COMBINATIONS}


@pytest.fixture(scope="module")
def poincare():
    return {str(c): poincare_verify(c.group(), c) for c in all_cases()}


# -- 1 ----------------------------------------------------------------------------------


def test_criterion_1_ambient_presentations(ambient, record):
    failing = {k: [r.label for r in rep.relators if not r.passed] + [b.label for b in rep.braids if not b.passed]
               for k, rep in ambient.items() if not rep.passed}
    ok = len(ambient) - len(failing)
    record(1, not failing, f"{ok}/{len(ambient)} (family, p) presentations hold with exact orders; failing: {failing or 'none'}")
    assert set(failing) <= {("E2", 12)}


@pytest.mark.xfail(strict=True, reason="E2 p=12: (3 1 2 1') has order 12 where |3p/(p-3)| = 4")
def test_criterion_1_e2_p12(ambient):
    assert ambient[("E2", 12)].passed


# -- 2 ----------------------------------------------------------------------------------


def test_criterion_2_special_orders(record):
    want = {"tau1": ("P", 8), "tau2": ("P", 7), "tau4": ("P", 5), "S2": ("Q", 5), "E2": ("Q", 6)}
    bad = []
    for name, (word, order) in want.items():
        for p in FAMILIES[name].lattice_p:
            if projective_order(FAMILIES[name].build(p).eval(word)) != order:
                bad.append((name, p))
    for p in FAMILIES["E2"].lattice_p:
        q3 = FAMILIES["E2"].build(p).eval("Q^3")
        if classify_isometry(q3).tag is not Tag.COMPLEX_REFLECTION or projective_order(q3) != 2:
            bad.append(("E2 Q^3", p))
    record(2, not bad, "R1J orders 8/7/5, Q orders 5/6, E2 Q^3 an order-2 complex reflection" + (f"; bad {bad}" if bad else ""))
    assert not bad


# -- 3 ----------------------------------------------------------------------------------


def test_criterion_3_signature(record):
    bad = []
    for name, p in COMBINATIONS:
        g = FAMILIES[name].build(p)
        if not (g.form.det < 0 and tuple(form_signature(g.form.matrix)) == (2, 1, 0)):
            bad.append((name, p))
    record(3, not bad, f"det(H) < 0 and signature (2,1,0) for {len(COMBINATIONS) - len(bad)}/{len(COMBINATIONS)} combinations")
    assert not bad


# -- 4 ----------------------------------------------------------------------------------


def test_criterion_4_poincare(poincare, record):
    failing = sorted(k for k, r in poincare.items() if not r.passed)
    pairings_ok = all(all(q.passed for q in r.pairings) and r.simple and r.disjoint for r in poincare.values())
    record(
        4,
        not failing,
        f"{len(poincare) - len(failing)}/{len(poincare)} polygon cases verified; pairings, simplicity and "
        f"disjointness hold in all cases: {pairings_ok}; failing: {failing or 'none'}",
    )
    assert pairings_ok
    assert failing in ([], ["e2_l3:p12"])


@pytest.mark.xfail(strict=True, reason="e2_l3 p=12: cycle {y2,y6,y4} has angle sum 3pi/2 and order 4")
def test_criterion_4_e2_l3_p12(poincare):
    assert poincare["e2_l3:p12"].passed


# -- 5 ----------------------------------------------------------------------------------


def test_criterion_5_angle_at_x8(poincare, record):
    (cyc,) = [c for c in poincare["tau1:p3"].cycles if set(c.members) == {"x6", "x8"}]
    ok = abs(cyc.angle_sum - 2 * math.pi / 6) <= TOL_ANGLE_SUM and cyc.order == 6
    record(5, ok, f"tau1 p=3 cycle {{x6,x8}}: angle sum {cyc.angle_sum:.12f} (2pi/6 = {2 * math.pi / 6:.12f}), order {cyc.order}")
    assert ok


# -- 6 ----------------------------------------------------------------------------------


def _ideal_cycle(poincare, label):
    rep = poincare["tau1:p6"]
    return next(c for c in rep.cycles if label in c.members)


def test_criterion_6_ideal_vertices(poincare, record):
    rep = poincare["tau1:p6"]
    coords = {v.label: v for v in rep.polygon.vertices}
    null_ok = all(coords[x].ideal and abs(abs(coords[x].coord) - 1) <= TOL_IDEAL for x in ("x0", "x5"))
    c0, c5 = _ideal_cycle(poincare, "x0"), _ideal_cycle(poincare, "x5")
    ok = null_ok and c0.classification == c5.classification == "ElliptoParabolic"
    record(
        6,
        ok,
        f"tau1 p=6: x0, x5 null: {null_ok}; cycle through x0 {c0.classification}, cycle through x5 {c5.classification}",
    )
    assert null_ok
    assert c0.classification == "ElliptoParabolic"
    assert c5.action == "parabolic" and c5.classification in ("ElliptoParabolic", "UnipotentParabolic")


@pytest.mark.xfail(strict=True, reason="g5 g4^-1 at p=6 has a single eigenvalue: unipotent, not ellipto-parabolic")
def test_criterion_6_x5_is_ellipto_parabolic(poincare):
    assert _ideal_cycle(poincare, "x5").classification == "ElliptoParabolic"


# -- 7 ----------------------------------------------------------------------------------

IDENTITY_CASES = {
    "tau1": [("(1 2 3)^3", "1 J")],
    "tau2": [("g2 g2", "1'"), ("g1 g3 g2", "1^3 (2 3' 2' 1')^3")],
    "tau4": [("g3 g2", "1^5 (1' 3')^5"), ("g1' g3", "(1 2 3 2')^3")],
    "s2_l1": [("g2 g3'", "1^3 (2 3' 2' 1')^2")],
    "e2_l3": [("h2 h4 h3", "3^6 (3' 1 2' 1')")],
}
BROKEN_IDENTITIES = {"s2_l1", "e2_l3"}


def _identity_results():
    out = {}
    for name, pairs in IDENTITY_CASES.items():
        for p in CASES[name].lattice_p:
            results = {(r.lhs, r.rhs): r for r in verify_identities(CaseId(name, p))}
            for pair in pairs:
                out[(name, p, pair)] = results[pair].gap <= TOL_RELATION
    return out


def test_criterion_7_identities(record):
    res = _identity_results()
    failing = sorted({(k[0], k[2][0]) for k, ok in res.items() if not ok})
    record(
        7,
        not failing,
        f"{sum(res.values())}/{len(res)} (identity, p) checks hold; failing at every p: {failing or 'none'}; "
        "the tau4 identity is checked in the form (1 2 3 2')^3",
    )
    assert {name for name, _ in failing} <= BROKEN_IDENTITIES
    assert all(ok for k, ok in res.items() if k[0] not in BROKEN_IDENTITIES)


@pytest.mark.xfail(strict=True, reason="printed right-hand sides for S2 and E2-L3 are not conjugate to the left")
@pytest.mark.parametrize("name", sorted(BROKEN_IDENTITIES))
def test_criterion_7_broken_identities(name):
    assert all(r.holds for r in verify_identities(CaseId(name, CASES[name].lattice_p[0])))


# -- 8 ----------------------------------------------------------------------------------


def _catalog_words(case: CaseId):
    spec = case.spec
    words = [pr.word for pr in spec.pairings]
    words += [spec.expand(label) for label, _ in spec.relators(case.p)]
    words += [str(r.base) for r in ambient_presentation(spec.family).relators]
    for lhs, rhs in spec.identities:
        words += [spec.expand(lhs), spec.expand(rhs)]
    return words


def test_criterion_8_oracles(poincare, record):
    rng = np.random.default_rng(20240601)
    order_checks = dist_checks = angle_checks = 0
    order_bad, worst_dist, worst_angle = [], 0.0, 0.0
    for case in all_cases():
        g = case.group()
        for w in _catalog_words(case):
            m = g.eval(w)
            a = order_by_powering(m, ORDER_BOUND)
            b = order_by_eigenvalues(m, ORDER_BOUND)
            order_checks += 1
            if a != b:
                order_bad.append((str(case), w, a, b))
        poly = poincare[str(case)].polygon
        chart = poly.chart
        r = np.sqrt(rng.uniform(0, 0.95**2, (1000, 2)))
        t = rng.uniform(0, 2 * math.pi, (1000, 2))
        pts = r * np.exp(1j * t)
        for u, v in pts:
            d = bergman_distance(chart.lift(u), chart.lift(v), g.form)
            worst_dist = max(worst_dist, abs(d - disk_distance(u, v)) / max(1.0, d))
            dist_checks += 1
        for i, vert in enumerate(poly.vertices):
            if vert.ideal:
                continue
            a = interior_angle(poly, i)
            worst_angle = max(worst_angle, abs(min(a, 2 * math.pi - a) - cosine_rule_angle(poly, i, g.form)))
            angle_checks += 1
    ok = not order_bad and worst_dist <= TOL_DISTANCE and worst_angle <= TOL_ANGLE
    record(
        8,
        ok,
        f"{order_checks} word orders agree (bound {ORDER_BOUND}); {dist_checks} distance pairs, worst error "
        f"{worst_dist:.1e}; {angle_checks} vertex angles, worst disagreement {worst_angle:.1e}",
    )
    assert not order_bad
    assert worst_dist <= TOL_DISTANCE
    assert worst_angle <= TOL_ANGLE


# -- 9 ----------------------------------------------------------------------------------


def _perturbed_group(case: CaseId):
    fam = FAMILIES[case.spec.family]
    params = list(fam.params)
    params[-1] += 1e-3
    if fam.kind == "sporadic":
        return sporadic_group(case.p, *params)
    return thompson_group(case.p, *params)


def _corruptions(word: str, kind: str):
    w = parse_word(word, kind)
    for i in range(len(w)):
        dropped = list(w.letters)
        del dropped[i]
        yield str(Word(tuple(dropped)))
        flipped = list(w.letters)
        flipped[i] = flipped[i].inverse()
        yield str(Word(tuple(flipped)))


def _same_action(a, b, chart) -> bool:
    ra, rb = restriction(a, chart), restriction(b, chart)
    ra, rb = ra / np.sqrt(np.linalg.det(ra) + 0j), rb / np.sqrt(np.linalg.det(rb) + 0j)
    return min(np.linalg.norm(ra - rb), np.linalg.norm(ra + rb)) <= 1e-8 * np.linalg.norm(ra)


def _case_passes(case: CaseId, g) -> bool:
    return (
        verify_subgroup_presentation(case, g).passed
        and all(r.holds for r in verify_identities(case, g))
        and poincare_verify(g, case).passed
    )


@pytest.fixture(scope="module")
def corruption_survey():
    total, pairing_caught, same_action, undetected = 0, 0, 0, []
    for case in all_cases():
        g = case.group()
        poly = build_polygon(g, case)
        spec = CASES[case.name]
        for k, pr in enumerate(spec.pairings):
            original = g.eval(pr.word)
            for bad in _corruptions(pr.word, g.kind):
                total += 1
                verdict = verify_pairings(poly, [PairingSpec(pr.name, bad, pr.source, pr.target)], g)[0]
                if not verdict.passed:
                    pairing_caught += 1
                    continue
                same_action += _same_action(g.eval(bad), original, poly.chart)
                pairings = list(spec.pairings)
                pairings[k] = dataclasses.replace(pr, word=bad)
                CASES[case.name] = dataclasses.replace(spec, pairings=tuple(pairings))
                try:
                    if _case_passes(case, g):
                        undetected.append((str(case), pr.name, bad))
                finally:
                    CASES[case.name] = spec
    return total, pairing_caught, same_action, undetected


def test_criterion_9_negative_controls(corruption_survey, record):
    perturbed = []
    for case in all_cases():
        g = _perturbed_group(case)
        amb = verify_presentation(g, ambient_presentation(case.spec.family))
        perturbed.append(not amb.passed and not poincare_verify(g, case).passed)
    total, caught, same, undetected = corruption_survey
    survivors = total - caught
    record(
        9,
        all(perturbed) and not undetected,
        f"tau + 1e-3 fails in {sum(perturbed)}/{len(perturbed)} cases; letter corruptions: {total - len(undetected)}/{total} "
        f"fail, {caught} at the pairing check; all {survivors} pairing survivors act on the base line exactly as the "
        f"original ({same}/{survivors}); {len(undetected)} pass the whole case",
    )
    assert all(perturbed)
    # every corruption that changes the Fuchsian element is caught
    assert same == survivors


@pytest.mark.xfail(strict=True, reason="dropping an R1 letter can leave the element's action on L1 unchanged")
def test_criterion_9_every_letter_matters(corruption_survey):
    assert not corruption_survey[3]


# -- 10 ---------------------------------------------------------------------------------


def test_criterion_10_determinism(tmp_path, record):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    codes = [main(["verify", "all", "--json", str(a)]), main(["verify", "all", "--json", str(b)])]
    same = a.read_bytes() == b.read_bytes()
    record(10, same, f"two 'verify all --json' runs byte-identical: {same} ({a.stat().st_size} bytes, exit codes {codes})")
    assert same
