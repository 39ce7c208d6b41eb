"""Bilinear form: frozen values, Gram matrices, membership probes."""

import random

import pytest

from imcrystal.qcoeff import Coeff
from imcrystal.qalgebra import Element, Weight, enumerate_all, enumerate_basis
from imcrystal.kashiwara import PSI, omega_apply
from imcrystal.pairing import (
    gram,
    lattice_membership_probe,
    orthonormality_report,
    pair,
)


def x(*indices):
    return Element.monomial(indices)


ONE = Coeff.one()
Q2 = Coeff.q_power(4)


class TestPairExamples:
    def test_unit(self):
        assert pair(Element.one(), Element.one()) == ONE

    def test_mismatched_degree(self):
        assert pair(x(0), x(1)).is_zero

    def test_frozen_value(self):
        assert pair(x(1, 1), x(1, 1)) == ONE + Q2

    def test_delta_blocked(self):
        assert pair(x(2, 0), x(1, 1)).is_zero

    def test_gamma_inputs_rejected(self):
        e = Element.monomial((0,), Coeff.gamma_power(2))
        with pytest.raises(ValueError):
            pair(e, x(0))


class TestGram:
    def test_singleton(self):
        g = gram(Weight(1, 0), (-1, 1))
        assert g.basis == [(0,)]
        assert g.entries == [[ONE]]

    def test_weight_2_2(self):
        g = gram(Weight(2, 2), (0, 2))
        assert g.basis == [(2, 0), (1, 1)]
        assert g.entries[0][0] == ONE
        assert g.entries[0][1].is_zero and g.entries[1][0].is_zero
        assert g.entries[1][1] == ONE + Q2
        assert orthonormality_report(g).passed

    def test_empty_weight(self):
        g = gram(Weight(1, 5), (0, 2))
        assert g.basis == [] and g.entries == []

    def test_symmetric(self):
        g = gram(Weight(3, 0), (-2, 2))
        n = len(g.basis)
        for i in range(n):
            for j in range(n):
                assert g.entries[i][j] == g.entries[j][i]

    def test_orthonormality_grid(self):
        # diagonal congruent to 1, off-diagonal to 0 mod q^2, all weights
        for k in range(1, 4):
            for d in range(-2 * k, 2 * k + 1):
                rep = orthonormality_report(gram(Weight(k, d), (-2, 2)))
                assert rep.passed, rep.to_dict()["witnesses"][:2]

    def test_perturbed_entry_fails(self):
        g = gram(Weight(2, 2), (0, 2))
        g.entries[0][1] = g.entries[0][1] + Coeff.q_power(2)
        rep = orthonormality_report(g)
        assert not rep.passed
        assert any("(0,1)" in w or "(1,0)" in w for w in rep.to_dict()["witnesses"])

    def test_nondegenerate_probe(self):
        # Gram determinant nonzero on a small window (2x2 diagonal blocks)
        g = gram(Weight(2, 2), (0, 2))
        det = g.entries[0][0] * g.entries[1][1] - g.entries[0][1] * g.entries[1][0]
        assert not det.is_zero

    def test_serialization(self):
        d = gram(Weight(2, 2), (0, 2)).to_dict()
        assert d["basis"] == ["x[2]x[0]", "x[1]x[1]"]
        assert d["residues_mod_q2"] == [["1", "0"], ["0", "1"]]


class TestProperties:
    def test_cross_length_zero(self):
        monos = enumerate_all(3, (-1, 1))
        for ma in monos:
            for mb in monos:
                if len(ma) != len(mb):
                    assert pair(
                        Element({ma: ONE}), Element({mb: ONE})
                    ).is_zero, (ma, mb)

    def _random_homogeneous(self, rng, k=None):
        k = k or rng.randint(1, 3)
        d = sum(rng.randint(-2, 2) for _ in range(k))
        basis = enumerate_basis(k, (-2, 2), d)
        e = Element.zero()
        for m in basis:
            if rng.random() < 0.6:
                e = e + Element({m: Coeff.q_power(rng.randint(-2, 2)) * rng.randint(-3, 3)})
        return e if not e.is_zero else Element({basis[0]: ONE})

    def test_symmetry_random(self):
        rng = random.Random(23)
        for _ in range(60):
            a = self._random_homogeneous(rng)
            w = a.weight()
            basis = enumerate_basis(w.length, (-2, 2), w.degree)
            b = Element.zero()
            for m in basis:
                if rng.random() < 0.6:
                    b = b + Element({m: Coeff.q_power(rng.randint(-2, 2)) * rng.randint(-2, 2)})
            assert pair(a, b) == pair(b, a)

    def test_adjointness_random(self):
        rng = random.Random(29)
        for _ in range(60):
            a = self._random_homogeneous(rng)
            b = self._random_homogeneous(rng)
            m = rng.randint(-2, 2)
            lhs = pair(Element.monomial((m,)) * a, b)
            rhs = pair(a, omega_apply(PSI, -m, b).specialize_gamma_one())
            assert lhs == rhs

    def test_weight_orthogonality(self):
        rng = random.Random(31)
        for _ in range(60):
            a = self._random_homogeneous(rng)
            b = self._random_homogeneous(rng)
            if a.weight() != b.weight():
                assert pair(a, b).is_zero


class TestMembership:
    def test_accepts_monomial_combination(self):
        assert lattice_membership_probe(x(1, 0), (-2, 2)).passed
        combo = x(1, 0) + x(0, 1) * Q2
        assert lattice_membership_probe(combo, (-2, 2)).passed

    def test_rejects_pole(self):
        rep = lattice_membership_probe(x(0) * Coeff.q_power(-2), (-2, 2))
        assert not rep.passed
        assert rep.witness[0] == (0,)

    def test_zero_passes(self):
        assert lattice_membership_probe(Element.zero(), (-2, 2)).passed

    def test_inhomogeneous_rejected(self):
        with pytest.raises(ValueError):
            lattice_membership_probe(x(0) + x(1, 1), (-2, 2))
