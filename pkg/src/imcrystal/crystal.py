"""Crystal lattices, mod-q reduction, and the crystal-basis axioms.

For a direct sum of reduced highest-weight modules the lattice is spanned,
over rational functions regular at 0, by the normal monomial vectors of
each component; the basis consists of their classes modulo q.  The checker
verifies, over an explicit finite probe (maximum length, index window,
operator range):

* stability: tilde operators keep lattice coordinates regular at 0;
* grading: every basis class is a K and D eigenvector of the expected
  weight, and classes are pairwise distinct;
* images: each tilde operator sends a class to a single signed class or
  to zero;
* commutation: whenever both the annihilation image and the lowering
  image of a class are nonzero, the two composites agree in L/qL.

All probed conditions quantify over infinite sets in general, so every
report carries its bounds.  A lattice may carry per-monomial scale factors
(coordinates divide by them); scaling one generator by a negative power of
q is the documented corrupted fixture that stability must reject.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .qcoeff import Coeff
from .qalgebra import Element, Monomial, enumerate_all, enumerate_basis
from .verma import (
    DirectSum,
    HighestWeight,
    VermaVector,
    act_D,
    act_K,
    act_xminus,
    direct_sum,
    format_vector,
    tilde_omega,
)

ClassKey = tuple[int, Monomial]  # (component id, normal monomial)


@dataclass(frozen=True)
class CrystalClass:
    """Signed normal monomial class in L/qL; zero is represented by None."""

    sign: int
    mono: Monomial
    component: int

    def __neg__(self) -> CrystalClass:
        return CrystalClass(-self.sign, self.mono, self.component)

    def describe(self) -> str:
        body = "".join(f"x[{i}]" for i in self.mono) or "1"
        return f"{'+' if self.sign > 0 else '-'}[{self.component}]{body}"


@dataclass
class LatticeDesc:
    """Finite probe of a crystal lattice for a direct sum of components."""

    weights: tuple[HighestWeight, ...]
    max_length: int
    window: tuple[int, int]
    scales: dict[ClassKey, Coeff] = field(default_factory=dict)

    def module(self) -> DirectSum:
        return direct_sum(self.weights)

    def scale(self, component: int, mono: Monomial) -> Coeff:
        return self.scales.get((component, mono), Coeff.one())

    def class_keys(self) -> list[ClassKey]:
        return [
            (i, mono)
            for i in range(len(self.weights))
            for mono in enumerate_all(self.max_length, self.window)
        ]

    def classes(self) -> list[CrystalClass]:
        return [CrystalClass(1, mono, i) for i, mono in self.class_keys()]

    def lift(self, b: CrystalClass) -> VermaVector:
        """Lattice generator representing the class: sign * scale * mono . v."""
        elem = Element({b.mono: self.scale(b.component, b.mono) * b.sign})
        return self.module().inject(b.component, elem)


class NotInLatticeError(ValueError):
    def __init__(self, witness: ClassKey, coeff: Coeff):
        comp, mono = witness
        body = "".join(f"x[{i}]" for i in mono) or "1"
        super().__init__(
            f"not in the lattice: coordinate of [{comp}]{body} has a pole at 0"
        )
        self.witness = witness
        self.coeff = coeff


def lattice_coordinates(v: VermaVector, lat: LatticeDesc) -> dict[ClassKey, Coeff]:
    """Coordinates of a vector over the lattice generators (coefficients
    divided by the generator scales)."""
    out: dict[ClassKey, Coeff] = {}
    for i, e in v.components.items():
        for mono, c in e.items():
            out[(i, mono)] = c / lat.scale(i, mono)
    return out


def reduce_mod_q(
    v: VermaVector, lat: LatticeDesc | None = None
) -> dict[ClassKey, Fraction]:
    """Image of a lattice vector in L/qL as a signed rational combination of
    monomial classes; raises NotInLatticeError with a witness on poles."""
    if lat is None:
        lat = LatticeDesc(v.ambient, 0, (0, 0))
    out: dict[ClassKey, Fraction] = {}
    for key, c in lattice_coordinates(v, lat).items():
        if not c.is_regular_at_zero():
            raise NotInLatticeError(key, c)
        r = c.constant_at_zero()
        if r:
            out[key] = r
    return out


@dataclass
class ImageViolation:
    operator: str
    index: int
    source: CrystalClass
    reduced: dict[ClassKey, Fraction] | None
    reason: str

    def describe(self) -> str:
        return (
            f"{self.operator}[{self.index}] on {self.source.describe()}: {self.reason}"
        )


def _classify(
    reduced: dict[ClassKey, Fraction], operator: str, index: int, b: CrystalClass
) -> CrystalClass | None | ImageViolation:
    if not reduced:
        return None
    if len(reduced) > 1:
        return ImageViolation(operator, index, b, reduced, "image is a multi-term combination")
    (key, value), = reduced.items()
    if abs(value) != 1:
        return ImageViolation(
            operator, index, b, reduced, f"image coefficient {value} is not a sign"
        )
    comp, mono = key
    return CrystalClass(1 if value > 0 else -1, mono, comp)


def crystal_image_x(
    m: int, b: CrystalClass, lat: LatticeDesc | None = None
) -> CrystalClass | None | ImageViolation:
    """Class of the lowering operator image in L/qL."""
    lat = lat or LatticeDesc((), 0, (0, 0))
    try:
        reduced = reduce_mod_q(act_xminus(m, lat.lift(b)), lat)
    except NotInLatticeError as err:
        return ImageViolation("xminus", m, b, None, str(err))
    return _classify(reduced, "xminus", m, b)


def crystal_image_omega(
    m: int, b: CrystalClass, lat: LatticeDesc | None = None
) -> CrystalClass | None | ImageViolation:
    """Class of the annihilation operator image in L/qL."""
    lat = lat or LatticeDesc((), 0, (0, 0))
    try:
        reduced = reduce_mod_q(tilde_omega(m, lat.lift(b)), lat)
    except NotInLatticeError as err:
        return ImageViolation("omega-psi", m, b, None, str(err))
    return _classify(reduced, "omega-psi", m, b)


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class AxiomResult:
    name: str
    checked: int = 0
    witnesses: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> dict:
        return {
            "axiom": self.name,
            "checked": self.checked,
            "status": "pass" if self.passed else "fail",
            "witnesses": self.witnesses,
        }


@dataclass
class CrystalReport:
    bounds: dict
    results: list[AxiomResult]
    observed_signs: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "bounds": self.bounds,
            "status": "pass" if self.passed else "fail",
            "axioms": [r.to_dict() for r in self.results],
            "observed_signs": self.observed_signs,
        }


def verify_crystal_axioms(lat: LatticeDesc, m_range: tuple[int, int]) -> CrystalReport:
    """Run the crystal-basis axiom checks over the lattice's finite probe."""
    lo, hi = m_range
    stability = AxiomResult("lattice-stability")
    grading = AxiomResult("weight-grading")
    images_x = AxiomResult("image-xminus")
    images_omega = AxiomResult("image-omega")
    commutation = AxiomResult("commutation")
    observed: list[str] = []

    classes = lat.classes()

    for b in classes:
        lift = lat.lift(b)
        lam = lat.weights[b.component]

        # weight grading: K and D eigenvector of the expected weight
        grading.checked += 1
        k, deg = len(b.mono), sum(b.mono)
        expect_k = lift * Coeff.q_power(2 * (lam.h - 2 * k))
        expect_d = lift * Coeff.q_power(2 * (lam.d + deg))
        if act_K(lift) != expect_k or act_D(lift) != expect_d:
            grading.witnesses.append(f"{b.describe()} is not in a single weight space")

        for m in range(lo, hi + 1):
            # lattice stability of both operator families
            for opname, image in (
                ("xminus", act_xminus(m, lift)),
                ("omega-psi", tilde_omega(m, lift)),
            ):
                stability.checked += 1
                for key, c in lattice_coordinates(image, lat).items():
                    if not c.is_regular_at_zero():
                        comp, mono = key
                        body = "".join(f"x[{i}]" for i in mono) or "1"
                        stability.witnesses.append(
                            f"{opname}[{m}] on {b.describe()}: coordinate of "
                            f"[{comp}]{body} has a pole at 0"
                        )

            # single-signed-class images
            img_x = crystal_image_x(m, b, lat)
            images_x.checked += 1
            if isinstance(img_x, ImageViolation):
                images_x.witnesses.append(img_x.describe())
            elif img_x is not None:
                observed.append(f"xminus[{m}] {b.describe()} -> {img_x.describe()}")
            img_o = crystal_image_omega(m, b, lat)
            images_omega.checked += 1
            if isinstance(img_o, ImageViolation):
                images_omega.witnesses.append(img_o.describe())
            elif img_o is not None:
                observed.append(f"omega-psi[{m}] {b.describe()} -> {img_o.describe()}")

            # commutation: x[m] after omega(-m) against omega(-m) after x[m]
            omega_b = crystal_image_omega(-m, b, lat)
            x_b = img_x
            if (
                not isinstance(omega_b, ImageViolation)
                and not isinstance(x_b, ImageViolation)
                and omega_b is not None
                and x_b is not None
            ):
                commutation.checked += 1
                left = crystal_image_x(m, omega_b, lat)
                right = crystal_image_omega(-m, x_b, lat)
                if left != right:
                    ltext = left.describe() if isinstance(left, CrystalClass) else str(left)
                    rtext = right.describe() if isinstance(right, CrystalClass) else str(right)
                    commutation.witnesses.append(
                        f"m={m}, b={b.describe()}: x-after-omega gives {ltext}, "
                        f"omega-after-x gives {rtext}"
                    )

    # distinctness of class keys is structural; check for collisions anyway
    keys = lat.class_keys()
    grading.checked += 1
    if len(set(keys)) != len(keys):
        grading.witnesses.append("duplicate classes in the basis enumeration")

    bounds = {
        "weights": [[w.h, w.d] for w in lat.weights],
        "max_length": lat.max_length,
        "window": list(lat.window),
        "m_range": [lo, hi],
    }
    return CrystalReport(
        bounds, [stability, grading, images_x, images_omega, commutation], observed
    )


def assemble_direct_sum_basis(
    weights: Iterable[HighestWeight],
    max_length: int,
    window: tuple[int, int],
) -> tuple[LatticeDesc, list[CrystalClass]]:
    """Componentwise lattice and disjoint-union basis for a direct sum."""
    lat = LatticeDesc(tuple(weights), max_length, window)
    return lat, lat.classes()


def corrupted_lattice(lat: LatticeDesc, key: ClassKey | None = None) -> LatticeDesc:
    """Control fixture: scale one lattice generator by q^-1."""
    if key is None:
        monos = enumerate_basis(min(1, lat.max_length), lat.window)
        key = (0, monos[0] if monos else ())
    scales = dict(lat.scales)
    scales[key] = Coeff.q_power(-2)
    return LatticeDesc(lat.weights, lat.max_length, lat.window, scales)


# ---------------------------------------------------------------------------
# splitting a crystal basis along a two-block decomposition


@dataclass
class SplitSpec:
    """Candidate sublattices: generators of each part as vectors."""

    parts: tuple[list[VermaVector], list[VermaVector]]


def canonical_split(lat: LatticeDesc) -> SplitSpec:
    """The component split: part j is spanned by component-j generators."""
    module = lat.module()
    parts: tuple[list[VermaVector], list[VermaVector]] = ([], [])
    for i, mono in lat.class_keys():
        gen = module.inject(i, Element({mono: lat.scale(i, mono)}))
        parts[min(i, 1)].append(gen)
    return SplitSpec(parts)


def diagonal_control_split(lat: LatticeDesc) -> SplitSpec:
    """Control fixture: a diagonal sublattice that mixes the components, so
    it is not contained in either summand."""
    if len(lat.weights) != 2:
        raise ValueError("diagonal control needs exactly two components")
    module = lat.module()
    diag, anti = [], []
    for mono in enumerate_all(lat.max_length, lat.window):
        e = Element({mono: Coeff.one()})
        diag.append(module.inject(0, e) + module.inject(1, e))
        anti.append((module.inject(0, e) - module.inject(1, e)) * Coeff.q_power(2))
    return SplitSpec((diag, anti))


@dataclass
class SplitReport:
    compatible: bool
    witnesses: list[str]
    part_reports: list[CrystalReport]

    @property
    def passed(self) -> bool:
        return self.compatible and all(r.passed for r in self.part_reports)

    def to_dict(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "compatible": self.compatible,
            "witnesses": self.witnesses,
            "parts": [r.to_dict() for r in self.part_reports],
        }


def split_converse_check(
    lat: LatticeDesc, split: SplitSpec, m_range: tuple[int, int]
) -> SplitReport:
    """Verify that a two-block split of the lattice and basis restricts to a
    crystal basis on each block.

    The hypotheses are checked on the finite probe first: each part must lie
    in its own summand (no mixed-component generators), every generator must
    be a scaled monomial vector whose lattice coordinate is a unit at 0, and
    together the parts must cover every probe generator exactly once (this
    is the decomposition L = L1 + L2 and, with the unit condition, L_j =
    L with M_j intersected).  Incompatible splits are reported with the
    offending generator.  Then the axiom checker runs on each block.
    """
    witnesses: list[str] = []
    cover: dict[ClassKey, int] = {}
    for j, gens in enumerate(split.parts):
        for gen in gens:
            support = sorted(gen.components)
            if len(support) > 1:
                witnesses.append(
                    f"part {j + 1} generator {format_vector(gen)} mixes components; "
                    "it does not split inside L"
                )
                continue
            if not support:
                continue
            comp = support[0]
            if comp != j:
                witnesses.append(
                    f"part {j + 1} generator {format_vector(gen)} lies in component "
                    f"{comp}, outside its summand"
                )
                continue
            e = gen.element(comp)
            if len(e) != 1:
                witnesses.append(
                    f"part {j + 1} generator {format_vector(gen)} is not a scaled "
                    "monomial vector; probe cannot certify the split"
                )
                continue
            (mono, c), = e.items()
            coord = c / lat.scale(comp, mono)
            if coord.valuation() != 0:
                witnesses.append(
                    f"part {j + 1} generator {format_vector(gen)}: lattice "
                    "coordinate is not a unit at 0, so L1 + L2 differs from L"
                )
                continue
            key = (comp, mono)
            if key in cover:
                witnesses.append(f"generator for {key} covered twice")
            cover[key] = j
    for key in lat.class_keys():
        if key not in cover:
            comp, mono = key
            body = "".join(f"x[{i}]" for i in mono) or "1"
            witnesses.append(f"lattice generator [{comp}]{body} not covered by the split")

    compatible = not witnesses
    part_reports: list[CrystalReport] = []
    if compatible:
        for j in range(min(2, len(lat.weights))):
            scales = {
                (0, mono): c
                for (i, mono), c in lat.scales.items()
                if i == j
            }
            sub = LatticeDesc((lat.weights[j],), lat.max_length, lat.window, scales)
            part_reports.append(verify_crystal_axioms(sub, m_range))
    return SplitReport(compatible, witnesses, part_reports)
