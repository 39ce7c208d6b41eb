"""Crystal lattices: reduction, signed images, axioms, and splitting."""

from fractions import Fraction

import pytest

from imcrystal.qcoeff import Coeff
from imcrystal.qalgebra import Element
from imcrystal.verma import HighestWeight
from imcrystal.crystal import (
    CrystalClass,
    LatticeDesc,
    NotInLatticeError,
    assemble_direct_sum_basis,
    canonical_split,
    corrupted_lattice,
    crystal_image_omega,
    crystal_image_x,
    diagonal_control_split,
    reduce_mod_q,
    split_converse_check,
    verify_crystal_axioms,
)


@pytest.fixture
def lat():
    return LatticeDesc((HighestWeight(1, 0),), 3, (-2, 2))


def vec(lat, mono, coeff=None):
    e = Element.monomial(mono, coeff)
    return lat.module().inject(0, e)


class TestReduce:
    def test_multiple_of_q_dies(self, lat):
        assert reduce_mod_q(vec(lat, (1, 0), Coeff.q_power(4)), lat) == {}

    def test_monomial_survives(self, lat):
        assert reduce_mod_q(vec(lat, (1, 0)), lat) == {(0, (1, 0)): Fraction(1)}

    def test_negative_constant_term(self, lat):
        c = Coeff.q_power(4) - Coeff.one()
        assert reduce_mod_q(vec(lat, (1, 1), c), lat) == {(0, (1, 1)): Fraction(-1)}

    def test_pole_reports_witness(self, lat):
        with pytest.raises(NotInLatticeError) as err:
            reduce_mod_q(vec(lat, (0,), Coeff.q_power(-2)), lat)
        assert err.value.witness == (0, (0,))


class TestImages:
    def test_signed_image(self, lat):
        img = crystal_image_x(0, CrystalClass(1, (2,), 0), lat)
        assert img == CrystalClass(-1, (1, 1), 0)

    def test_plain_image(self, lat):
        img = crystal_image_x(2, CrystalClass(1, (1, 0), 0), lat)
        assert img == CrystalClass(1, (2, 1, 0), 0)

    def test_image_zero(self, lat):
        assert crystal_image_x(0, CrystalClass(1, (1, 0), 0), lat) is None

    def test_omega_images(self, lat):
        b = CrystalClass(1, (1, 0), 0)
        assert crystal_image_omega(-1, b, lat) == CrystalClass(1, (0,), 0)
        assert crystal_image_omega(0, b, lat) is None
        assert crystal_image_omega(7, CrystalClass(1, (), 0), lat) is None

    def test_sign_propagates(self, lat):
        img = crystal_image_x(0, CrystalClass(-1, (2,), 0), lat)
        assert img == CrystalClass(1, (1, 1), 0)


class TestAxioms:
    def test_single_component_passes(self):
        lat = LatticeDesc((HighestWeight(1, 0),), 2, (-1, 1))
        rep = verify_crystal_axioms(lat, (-2, 2))
        assert rep.passed
        names = [r.name for r in rep.results]
        assert names == [
            "lattice-stability",
            "weight-grading",
            "image-xminus",
            "image-omega",
            "commutation",
        ]
        assert all(r.checked > 0 for r in rep.results)
        assert rep.observed_signs

    def test_two_component_passes(self):
        lat = LatticeDesc((HighestWeight(1, 0), HighestWeight(3, 0)), 2, (-1, 1))
        rep = verify_crystal_axioms(lat, (-2, 2))
        assert rep.passed

    def test_corrupted_lattice_fails_with_witness(self):
        lat = corrupted_lattice(LatticeDesc((HighestWeight(1, 0),), 2, (-1, 1)))
        rep = verify_crystal_axioms(lat, (-2, 2))
        assert not rep.passed
        stability = rep.result("lattice-stability")
        assert stability.witnesses and "pole at 0" in stability.witnesses[0]

    def test_report_serialization(self):
        lat = LatticeDesc((HighestWeight(1, 0),), 1, (0, 1))
        d = verify_crystal_axioms(lat, (-1, 1)).to_dict()
        assert d["status"] == "pass"
        assert d["bounds"]["m_range"] == [-1, 1]


class TestAssemble:
    def test_single(self):
        lat, basis = assemble_direct_sum_basis([HighestWeight(1, 0)], 1, (0, 1))
        assert {b.component for b in basis} == {0}
        assert len(basis) == 3  # (), (1,), (0,)

    def test_two_components_tagged(self):
        lat, basis = assemble_direct_sum_basis(
            [HighestWeight(1, 0), HighestWeight(3, 0)], 1, (0, 1)
        )
        assert {b.component for b in basis} == {0, 1}

    def test_empty(self):
        lat, basis = assemble_direct_sum_basis([], 2, (0, 1))
        assert basis == []


class TestSplit:
    def test_canonical_split_passes(self):
        lat = LatticeDesc((HighestWeight(1, 0), HighestWeight(3, 0)), 1, (-1, 1))
        rep = split_converse_check(lat, canonical_split(lat), (-1, 1))
        assert rep.compatible and rep.passed
        assert len(rep.part_reports) == 2

    def test_diagonal_control_rejected(self):
        lat = LatticeDesc((HighestWeight(1, 0), HighestWeight(1, 0)), 1, (-1, 1))
        rep = split_converse_check(lat, diagonal_control_split(lat), (-1, 1))
        assert not rep.compatible
        assert any("mixes components" in w for w in rep.witnesses)

    def test_degenerate_single_component(self):
        lat = LatticeDesc((HighestWeight(1, 0),), 1, (-1, 1))
        rep = split_converse_check(lat, canonical_split(lat), (-1, 1))
        assert rep.passed
        assert len(rep.part_reports) == 1

    def test_direct_sum_coherence(self):
        window, mrange = (-1, 1), (-2, 2)
        both = LatticeDesc((HighestWeight(1, 0), HighestWeight(3, 0)), 2, window)
        parts = [
            LatticeDesc((HighestWeight(1, 0),), 2, window),
            LatticeDesc((HighestWeight(3, 0),), 2, window),
        ]
        combined = verify_crystal_axioms(both, mrange).passed
        separate = all(verify_crystal_axioms(p, mrange).passed for p in parts)
        assert combined == separate
