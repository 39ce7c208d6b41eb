"""Acceptance suite: every criterion at its stated bounds, exact arithmetic.

Each criterion prints one PASS/FAIL line (run with `pytest -s` to see them
on success).  All tolerances are zero: every comparison is exact equality
in the coefficient field.
"""

import functools

from imcrystal.qcoeff import Coeff
from imcrystal.qalgebra import Element, enumerate_all, normalize_word
from imcrystal.kashiwara import RELATIONS, check_kashiwara_relation
from imcrystal.pairing import pair
from imcrystal.verma import (
    HighestWeight,
    component_swap_map,
    direct_sum,
    verify_intertwining,
)
from imcrystal.crystal import (
    CrystalClass,
    LatticeDesc,
    canonical_split,
    corrupted_lattice,
    crystal_image_x,
    diagonal_control_split,
    split_converse_check,
    verify_crystal_axioms,
)
from imcrystal import pairing as pairing_mod
from imcrystal.cli import (
    suite_confluence,
    suite_crystal,
    suite_form,
    suite_module,
)


def _line(n: int, ok: bool, desc: str) -> None:
    print(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {n}: {desc}"


def test_criterion_1_serre_rewriting_and_confluence():
    exact = normalize_word((0, 1)) == Element({(1, 0): Coeff.q_power(4)})
    rep = suite_confluence(seed=1729, samples=200, max_length=5, window=(-3, 3))
    _line(
        1,
        exact and rep.passed,
        "Serre instance exact; 200-word confluence probe, two strategies, "
        "zero tolerance",
    )


def test_criterion_2_kashiwara_relations_formal_gamma():
    ok = True
    detail = []
    for rel in RELATIONS:
        rep = check_kashiwara_relation(rel, (-2, 2), max_length=2, window=(-2, 2))
        ok = ok and rep.passed
        detail.append(f"{rel}:{rep.checked}")
        if not rep.passed:
            detail.append(rep.failures[0].describe())
    _line(
        2,
        ok,
        "operator identities with formal gamma, components [-2,2], "
        "monomials length <= 2 window [-2,2] (" + ", ".join(detail) + ")",
    )


def test_criterion_3_closed_formula_oracle():
    from imcrystal.kashiwara import PSI, omega_mono, omega_psi_closed

    ok = True
    checked = 0
    for mono in enumerate_all(3, (-2, 2)):
        for p in range(-5, 6):
            checked += 1
            if omega_psi_closed(p, mono) != omega_mono(PSI, p, mono):
                ok = False
    _line(3, ok, f"deletion-slot formula equals recursion on {checked} cases, exact")


def test_criterion_4_bilinear_form():
    rep = suite_form(seed=1729, samples=200, max_length=3, window=(-2, 2))
    frozen = pair(Element.monomial((1, 1)), Element.monomial((1, 1))) == (
        Coeff.one() + Coeff.q_power(4)
    )
    _line(
        4,
        rep.passed and frozen,
        "symmetry/adjointness on 200 random pairs; Gram congruences for all "
        "weights length <= 3; cross-length zero; (x[1]x[1], x[1]x[1]) = 1+q^2",
    )


@functools.lru_cache(maxsize=1)
def _module_report():
    return suite_module(
        weights=(1, 2, -1), d=0, max_length=3, window=(-2, 2), comp_range=(-2, 2),
        nilpotency_range=(-3, 3),
    )


def test_criterion_5_module_relations():
    report = _module_report()
    relation_names = {
        "relation-h-h",
        "relation-h-xminus",
        "relation-K-conjugation",
        "relation-D-conjugation",
        "relation-xplus-xminus",
        "weight-decomposition",
    }
    ok = all(r.passed for r in report.results if r.name in relation_names)
    _line(
        5,
        ok,
        "Drinfeld defining relations as operator identities, length <= 3, "
        "window [-2,2], h in {1,2,-1}, exact",
    )


def test_criterion_6_local_nilpotency():
    res = {r.name: r for r in _module_report().results}
    ok = res["local-nilpotency"].passed and res["simplicity-probe"].passed
    _line(
        6,
        ok,
        "(x+_n)^(k+1) annihilates every length-k sample for n in [-3,3]; "
        "raising paths reach the highest weight",
    )


def test_criterion_7_crystal_axioms():
    rep = suite_crystal(
        weights=(1, 3), d=0, max_length=3, window=(-2, 2), m_range=(-3, 3)
    )
    lat = LatticeDesc((HighestWeight(1, 0),), 3, (-2, 2))
    signed = crystal_image_x(0, CrystalClass(1, (2,), 0), lat) == CrystalClass(
        -1, (1, 1), 0
    )
    names = {r.name: r for r in rep.results}
    ok = (
        names["axioms-h1"].passed
        and names["axioms-h3"].passed
        and names["axioms-direct-sum"].passed
        and signed
    )
    _line(
        7,
        ok,
        "crystal axioms for h in {1,3} and the two-component sum, length <= 3, "
        "window [-2,2], m in [-3,3]; signed image x~_0 class(x[2]) -> "
        "-class(x[1]x[1])",
    )


def test_criterion_8_converse_splitting():
    lat = LatticeDesc((HighestWeight(1, 0), HighestWeight(3, 0)), 3, (-2, 2))
    good = split_converse_check(lat, canonical_split(lat), (-3, 3))
    lat_eq = LatticeDesc((HighestWeight(1, 0), HighestWeight(1, 0)), 1, (-2, 2))
    control = split_converse_check(lat_eq, diagonal_control_split(lat_eq), (-3, 3))
    _line(
        8,
        good.passed and not control.compatible and bool(control.witnesses),
        "canonical split passes; diagonal sublattice control rejected with "
        "witness",
    )


def test_criterion_9_negative_controls():
    # scaled lattice
    bad_lat = corrupted_lattice(LatticeDesc((HighestWeight(1, 0),), 2, (-1, 1)))
    crystal_rep = verify_crystal_axioms(bad_lat, (-2, 2))
    lattice_ok = not crystal_rep.passed and bool(
        crystal_rep.result("lattice-stability").witnesses
    )

    # swapped-component map
    desc = direct_sum([HighestWeight(1, 0), HighestWeight(3, 0)])
    samples = [desc.inject(i, Element.monomial(m)) for m in enumerate_all(1, (-1, 1))
               for i in (0, 1)]
    swap_rep = verify_intertwining(component_swap_map(desc), samples, (-1, 1))
    swap_ok = not swap_rep.passed and bool(swap_rep.failures)

    # perturbed Gram entry
    from imcrystal.qalgebra import Weight

    g = pairing_mod.gram(Weight(2, 2), (0, 2))
    g.entries[0][0] = g.entries[0][0] + Coeff.q_power(2)
    ortho = pairing_mod.orthonormality_report(g)
    gram_ok = not ortho.passed and bool(ortho.failures)

    _line(
        9,
        lattice_ok and swap_ok and gram_ok,
        "corrupted fixtures each fail with a witness: scaled lattice, swapped "
        "map, perturbed Gram entry",
    )
