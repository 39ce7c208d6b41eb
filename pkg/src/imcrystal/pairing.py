"""The symmetric bilinear form on the lowering algebra.

The form is fixed by (1, 1) = 1 together with adjointness between left
multiplication and the psi-side annihilation operators:

    (x[m] a, b) = (a, psi(-m) b)

Evaluation peels the leftmost factor of the first argument and recurses;
the base case reads off the coefficient of the empty monomial.  Everything
here lives at gamma = 1.  Monomials of different weights pair to zero, the
Gram matrix of any fixed weight is congruent to the identity modulo q^2,
and an element u belongs to the crystal lattice exactly when all its
pairings against normal monomial vectors are regular at 0; the probe below
tests that on a finite index window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .qcoeff import Coeff, congruent_mod_q2, format_coeff
from .qalgebra import Element, Monomial, Weight, enumerate_basis
from .kashiwara import PSI, omega_mono

_PAIR_CACHE: dict[tuple[Monomial, Monomial], Coeff] = {}


def _pair_monos(ma: Monomial, mb: Monomial) -> Coeff:
    if not ma:
        # (1, w) reads off the coefficient of the empty monomial
        return Coeff.one() if not mb else Coeff.zero()
    key = (ma, mb)
    hit = _PAIR_CACHE.get(key)
    if hit is not None:
        return hit
    image = omega_mono(PSI, -ma[0], mb).specialize_gamma_one()
    out = Coeff.zero()
    for mono, c in image.items():
        out = out + c * _pair_monos(ma[1:], mono)
    _PAIR_CACHE[key] = out
    return out


def pair(a: Element, b: Element) -> Coeff:
    """Bilinear form value; inputs must be gamma-free (the gamma = 1 world)."""
    if not (a.is_gamma_free() and b.is_gamma_free()):
        raise ValueError("the form is evaluated at gamma = 1; specialize first")
    out = Coeff.zero()
    for ma, ca in a.items():
        for mb, cb in b.items():
            v = _pair_monos(ma, mb)
            if not v.is_zero:
                out = out + ca * cb * v
    return out


# ---------------------------------------------------------------------------
# Gram matrices


@dataclass
class GramMatrix:
    weight: Weight
    window: tuple[int, int]
    basis: list[Monomial]
    entries: list[list[Coeff]]

    def to_dict(self) -> dict:
        residues = []
        for row in self.entries:
            rrow = []
            for c in row:
                if c.is_regular_at_zero():
                    v = c.constant_at_zero()
                    rrow.append(str(v) if congruent_mod_q2(c, v) else None)
                else:
                    rrow.append(None)
            residues.append(rrow)
        return {
            "weight": [self.weight.length, self.weight.degree],
            "window": list(self.window),
            "basis": ["".join(f"x[{i}]" for i in m) or "1" for m in self.basis],
            "entries": [[format_coeff(c) for c in row] for row in self.entries],
            "residues_mod_q2": residues,
        }


def gram(weight: Weight, window: tuple[int, int]) -> GramMatrix:
    """Pairwise form values over the normal monomials of one weight."""
    basis = enumerate_basis(weight.length, window, weight.degree)
    n = len(basis)
    entries = [[Coeff.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = _pair_monos(basis[i], basis[j])
            entries[i][j] = v
            entries[j][i] = v
    return GramMatrix(weight, window, basis, entries)


@dataclass
class OrthonormalityReport:
    weight: Weight
    failures: list[tuple[int, int, Coeff]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "weight": [self.weight.length, self.weight.degree],
            "status": "pass" if self.passed else "fail",
            "witnesses": [
                f"entry ({i},{j}) = {format_coeff(c)} not congruent to "
                f"{1 if i == j else 0} mod q^2"
                for i, j, c in self.failures
            ],
        }


def orthonormality_report(g: GramMatrix) -> OrthonormalityReport:
    """Check each Gram entry against the Kronecker delta modulo q^2."""
    report = OrthonormalityReport(g.weight)
    for i, row in enumerate(g.entries):
        for j, c in enumerate(row):
            if not congruent_mod_q2(c, 1 if i == j else 0):
                report.failures.append((i, j, c))
    return report


# ---------------------------------------------------------------------------
# lattice membership probe


@dataclass
class MembershipReport:
    passed: bool
    witness: tuple[Monomial, Coeff] | None = None

    def describe(self) -> str:
        if self.passed:
            return "all probed pairings regular at 0"
        mono, c = self.witness
        mtext = "".join(f"x[{i}]" for i in mono) or "1"
        return f"pairing against {mtext} is {format_coeff(c)} (pole at 0)"


def lattice_membership_probe(u: Element, window: tuple[int, int]) -> MembershipReport:
    """Probe lattice membership of a homogeneous element: every pairing
    against a same-weight normal monomial in the window must be regular at
    0.  A finite probe, not a decision procedure."""
    if u.is_zero:
        return MembershipReport(True)
    w = u.weight()  # raises on inhomogeneous input
    for mono in enumerate_basis(w.length, window, w.degree):
        c = pair(u, Element({mono: Coeff.one()}))
        if not c.is_regular_at_zero():
            return MembershipReport(False, (mono, c))
    return MembershipReport(True)
