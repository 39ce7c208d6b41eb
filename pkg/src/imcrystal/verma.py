"""Reduced imaginary highest-weight modules and direct sums of them.

A component is the module generated by a vector v with K v = q^(h) v,
D v = q^(d) v, annihilated by all raising generators and all Heisenberg
generators, over a highest weight with h != 0; the central element acts
trivially, so every computation here is at gamma = 1.  Vectors are stored
as a finite map from component id to an algebra element, meaning
(element) . v_i summed over components.

Generator actions:

* lowering x[n]: left multiplication followed by normal ordering;
* Heisenberg h[k] (k != 0): sum over factors of the index shift n -> n+k
  weighted by -[2k]/k, and h[k] v = 0;
* raising x+[k]: structural recursion across the factors, inserting the
  Cartan-current combination (psi(k+l) - phi(k+l)) / (q - q^-1) whose
  components are partition sums in the h[k] with an overall K power;
* K and D act diagonally on each weight space;
* Chevalley generators act through the loop-generator dictionary
  E0 = x[1] K^-1, F0 = K x+[-1], E1 = x+[0], F1 = x[0], K0 = K^-1 (at
  gamma = 1), K1 = K.

The tilde operators (componentwise annihilation operators and left
multiplications) commute with module homomorphisms; verify_intertwining
checks that on samples, together with the module-map property itself so
that corrupted maps are detected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .qcoeff import Coeff, Q_DIFF, QRat, quantum_int
from .qalgebra import Element, Monomial, format_element
from .kashiwara import PSI, omega_apply


@dataclass(frozen=True)
class HighestWeight:
    """Highest-weight datum (h, d) with h nonzero (the reduced condition)."""

    h: int
    d: int = 0

    def __post_init__(self):
        if self.h == 0:
            raise ValueError("not in the reduced category: need h != 0")


@dataclass
class VermaVector:
    """Finite sum over components i of (element_i) . v_i."""

    ambient: tuple[HighestWeight, ...]
    components: dict[int, Element]

    def __post_init__(self):
        self.components = {i: e for i, e in self.components.items() if not e.is_zero}
        for i in self.components:
            if not 0 <= i < len(self.ambient):
                raise ValueError(f"component {i} outside the ambient sum")

    @property
    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VermaVector):
            return NotImplemented
        return self.ambient == other.ambient and self.components == other.components

    def __add__(self, other: VermaVector) -> VermaVector:
        if self.ambient != other.ambient:
            raise ValueError("vectors live in different modules")
        out = dict(self.components)
        for i, e in other.components.items():
            out[i] = out.get(i, Element.zero()) + e
        return VermaVector(self.ambient, out)

    def __sub__(self, other: VermaVector) -> VermaVector:
        return self + (other * Coeff.rational(-1))

    def __mul__(self, c: Coeff | int | Fraction) -> VermaVector:
        return VermaVector(self.ambient, {i: e * c for i, e in self.components.items()})

    __rmul__ = __mul__

    def element(self, i: int = 0) -> Element:
        return self.components.get(i, Element.zero())

    def map_components(self, fn: Callable[[int, Element], Element]) -> VermaVector:
        return VermaVector(
            self.ambient, {i: fn(i, e) for i, e in self.components.items()}
        )


def format_vector(v: VermaVector) -> str:
    if v.is_zero:
        return "0"
    parts = []
    for i in sorted(v.components):
        lam = v.ambient[i]
        parts.append(f"[{i}] {format_element(v.components[i])} @ (h={lam.h},d={lam.d})")
    return " ; ".join(parts)


class DirectSum:
    """Descriptor of a finite direct sum of reduced highest-weight modules."""

    def __init__(self, weights: Iterable[HighestWeight]):
        self.weights = tuple(weights)

    def zero(self) -> VermaVector:
        return VermaVector(self.weights, {})

    def inject(self, i: int, e: Element) -> VermaVector:
        """Canonical injection of the i-th summand."""
        if not 0 <= i < len(self.weights):
            raise ValueError(f"no component {i}")
        return VermaVector(self.weights, {i: e})

    def project(self, i: int, v: VermaVector) -> VermaVector:
        """Canonical projection onto the i-th summand, as a vector there."""
        if v.ambient != self.weights:
            raise ValueError("vector does not live in this sum")
        return VermaVector((self.weights[i],), {0: v.element(i)})

    def highest(self, i: int = 0) -> VermaVector:
        return self.inject(i, Element.one())


def direct_sum(weights: Iterable[HighestWeight]) -> DirectSum:
    return DirectSum(weights)


# ---------------------------------------------------------------------------
# generator actions


def act_xminus(n: int, v: VermaVector) -> VermaVector:
    """Tilde lowering operator: componentwise left multiplication."""
    xn = Element.monomial((n,))
    return v.map_components(lambda i, e: xn * e)


def tilde_omega(m: int, v: VermaVector) -> VermaVector:
    """Tilde annihilation operator: componentwise, at gamma = 1."""
    return v.map_components(
        lambda i, e: omega_apply(PSI, m, e).specialize_gamma_one()
    )


def _act_h_elem(k: int, e: Element) -> Element:
    """h[k] on the algebra part: shift one factor at a time by k with
    weight -[2k]/k; the highest-weight vector itself is killed."""
    coeff = Coeff.from_qrat(quantum_int(2 * k)) * Fraction(-1, k)
    out = Element.zero()
    for mono, c in e.items():
        for pos in range(len(mono)):
            shifted = mono[:pos] + (mono[pos] + k,) + mono[pos + 1 :]
            out = out + Element.monomial(shifted, c * coeff)
    return out


def act_h(k: int, v: VermaVector) -> VermaVector:
    if k == 0:
        raise ValueError("h[0] is not a generator")
    return v.map_components(lambda i, e: _act_h_elem(k, e))


def _k_eigen_halfexp(lam: HighestWeight, length: int) -> int:
    # K eigenvalue on a length-k monomial vector is q^(h - 2k)
    return 2 * (lam.h - 2 * length)


def act_K(v: VermaVector, power: int = 1) -> VermaVector:
    def fn(i: int, e: Element) -> Element:
        out = Element.zero()
        for mono, c in e.items():
            half = power * _k_eigen_halfexp(v.ambient[i], len(mono))
            out = out + Element({mono: c * Coeff.q_power(half)})
        return out

    return v.map_components(fn)


def act_D(v: VermaVector, power: int = 1) -> VermaVector:
    def fn(i: int, e: Element) -> Element:
        out = Element.zero()
        for mono, c in e.items():
            half = 2 * power * (v.ambient[i].d + sum(mono))
            out = out + Element({mono: c * Coeff.q_power(half)})
        return out

    return v.map_components(fn)


# ---------------------------------------------------------------------------
# Cartan currents: psi / phi components as polynomials in the h[k]


@dataclass
class HPolynomial:
    """K^kpow times a polynomial in commuting h symbols; a term maps the
    sorted tuple of h indices (with repetition) to its coefficient."""

    kpow: int
    terms: dict[tuple[int, ...], QRat]

    @property
    def is_zero(self) -> bool:
        return not self.terms


def _partitions(n: int) -> Iterable[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples of positive parts."""

    def rec(rest: int, top: int):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, top), 0, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    return rec(n, n)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def psi_component(n: int) -> HPolynomial:
    """Component of the psi current: 0 for n < 0, K for n = 0, otherwise
    K times the partition sum of products ((q - q^-1) h[j])^m / m!."""
    if n < 0:
        return HPolynomial(1, {})
    terms: dict[tuple[int, ...], QRat] = {}
    for parts in _partitions(n):
        coeff = Q_DIFF ** len(parts)
        mult = 1
        for j in set(parts):
            mult *= _factorial(parts.count(j))
        terms[tuple(sorted(parts))] = coeff * QRat.rational(Fraction(1, mult))
    return HPolynomial(1, terms)


def phi_component(p: int) -> HPolynomial:
    """Component of the phi current: 0 for p > 0, K^-1 for p = 0, otherwise
    K^-1 times the partition sum over negative h indices with the sign
    (-1)^(number of factors)."""
    if p > 0:
        return HPolynomial(-1, {})
    n = -p
    terms: dict[tuple[int, ...], QRat] = {}
    for parts in _partitions(n):
        coeff = (-Q_DIFF) ** len(parts)
        mult = 1
        for j in set(parts):
            mult *= _factorial(parts.count(j))
        key = tuple(sorted(-j for j in parts))
        terms[key] = coeff * QRat.rational(Fraction(1, mult))
    return HPolynomial(-1, terms)


def _apply_hpoly(hp: HPolynomial, mono: Monomial, lam: HighestWeight) -> Element:
    """Apply K^kpow * (h polynomial) to a monomial vector of one component."""
    out = Element.zero()
    kfactor = Coeff.q_power(hp.kpow * _k_eigen_halfexp(lam, len(mono)))
    for hmono, qr in hp.terms.items():
        vec = Element({mono: Coeff.one()})
        for j in hmono:
            vec = _act_h_elem(j, vec)
            if vec.is_zero:
                break
        if not vec.is_zero:
            out = out + vec * (Coeff.from_qrat(qr) * kfactor)
    return out


_DIFF_CACHE: dict[tuple[int, Monomial, int], Element] = {}


def _psi_phi_diff(p: int, mono: Monomial, lam: HighestWeight) -> Element:
    """(psi(p) - phi(p)) / (q - q^-1) applied to a monomial vector."""
    key = (p, mono, lam.h)
    hit = _DIFF_CACHE.get(key)
    if hit is not None:
        return hit
    if p == 0:
        # (K - K^-1)/(q - q^-1) acts by the quantum integer of the weight
        out = Element(
            {mono: Coeff.from_qrat(quantum_int(lam.h - 2 * len(mono)))}
        )
    else:
        hp = psi_component(p) if p > 0 else phi_component(p)
        out = _apply_hpoly(hp, mono, lam)
        if p < 0:
            out = out * Coeff.rational(-1)
        out = Element({m: c / Coeff.from_qrat(Q_DIFF) for m, c in out.items()})
    _DIFF_CACHE[key] = out
    return out


def current_commutator(p: int, v: VermaVector) -> VermaVector:
    """(psi(p) - phi(p)) / (q - q^-1) acting on a vector.  This is the value
    of the commutator of a raising and a lowering generator whose indices
    sum to p, and the insertion step of the raising action."""
    return v.map_components(
        lambda i, e: _elem_sum(
            _psi_phi_diff(p, mono, v.ambient[i]) * c for mono, c in e.items()
        )
    )


def _elem_sum(parts) -> Element:
    out = Element.zero()
    for part in parts:
        out = out + part
    return out


_XPLUS_CACHE: dict[tuple[int, Monomial, int], Element] = {}


def _xplus_mono(k: int, mono: Monomial, lam: HighestWeight) -> Element:
    """x+[k] on a monomial vector: commute past the leading factor."""
    if not mono:
        return Element.zero()
    key = (k, mono, lam.h)
    hit = _XPLUS_CACHE.get(key)
    if hit is not None:
        return hit
    head, rest = mono[0], mono[1:]
    out = _psi_phi_diff(k + head, rest, lam)
    tail = _xplus_mono(k, rest, lam)
    if not tail.is_zero:
        out = out + Element.monomial((head,)) * tail
    _XPLUS_CACHE[key] = out
    return out


def act_xplus(k: int, v: VermaVector) -> VermaVector:
    def fn(i: int, e: Element) -> Element:
        lam = v.ambient[i]
        out = Element.zero()
        for mono, c in e.items():
            out = out + _xplus_mono(k, mono, lam) * c
        return out

    return v.map_components(fn)


CHEVALLEY_GENERATORS = ("E0", "E1", "F0", "F1", "K0", "K1", "D")


def act_chevalley(gen: str, v: VermaVector) -> VermaVector:
    """Chevalley generators through the loop-generator dictionary."""
    if gen == "E0":
        return act_xminus(1, act_K(v, -1))
    if gen == "F0":
        return act_K(act_xplus(-1, v), 1)
    if gen == "E1":
        return act_xplus(0, v)
    if gen == "F1":
        return act_xminus(0, v)
    if gen == "K0":
        return act_K(v, -1)
    if gen == "K1":
        return act_K(v, 1)
    if gen == "D":
        return act_D(v, 1)
    raise ValueError(f"unknown Chevalley generator {gen!r}")


# ---------------------------------------------------------------------------
# probes and intertwining checks


def nilpotency_probe(n: int, v: VermaVector, cap: int) -> int | None:
    """Smallest t <= cap with (x+[n])^t v = 0, or None if the cap is hit."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    current = v
    for t in range(1, cap + 1):
        current = act_xplus(n, current)
        if current.is_zero:
            return t
    return None


def simplicity_probe(v: VermaVector, index_pad: int = 2) -> list[int] | None:
    """Search for a sequence of raising actions taking v to a nonzero
    multiple of a highest-weight vector; returns the index sequence."""
    if v.is_zero:
        return None
    frontier: list[tuple[VermaVector, list[int]]] = [(v, [])]
    while frontier:
        next_frontier = []
        for vec, path in frontier:
            lengths = {len(m) for e in vec.components.values() for m in e.monomials()}
            if lengths == {0}:
                return path
            idx = [i for e in vec.components.values() for m in e.monomials() for i in m]
            lo, hi = min(idx), max(idx)
            for n in range(-hi - index_pad, -lo + index_pad + 1):
                w = act_xplus(n, vec)
                if not w.is_zero:
                    next_frontier.append((w, path + [n]))
        frontier = next_frontier
    return None


@dataclass
class ModuleMap:
    """A linear map between module descriptors, checked for intertwining."""

    name: str
    source: tuple[HighestWeight, ...]
    target: tuple[HighestWeight, ...]
    fn: Callable[[VermaVector], VermaVector]

    def __call__(self, v: VermaVector) -> VermaVector:
        return self.fn(v)


def injection_map(desc: DirectSum, i: int) -> ModuleMap:
    single = (desc.weights[i],)

    def fn(v: VermaVector) -> VermaVector:
        return desc.inject(i, v.element(0))

    return ModuleMap(f"inject[{i}]", single, desc.weights, fn)


def projection_map(desc: DirectSum, i: int) -> ModuleMap:
    def fn(v: VermaVector) -> VermaVector:
        return desc.project(i, v)

    return ModuleMap(f"project[{i}]", desc.weights, (desc.weights[i],), fn)


def component_swap_map(desc: DirectSum) -> ModuleMap:
    """Control fixture: swap the two components of a 2-component sum.  Not a
    module map when the weights differ, so intertwining checks must fail."""
    if len(desc.weights) != 2:
        raise ValueError("swap control needs exactly two components")

    def fn(v: VermaVector) -> VermaVector:
        return VermaVector(
            desc.weights, {1 - i: e for i, e in v.components.items()}
        )

    return ModuleMap("swap", desc.weights, desc.weights, fn)


@dataclass
class IntertwiningReport:
    map_name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "map": self.map_name,
            "checked": self.checked,
            "status": "pass" if self.passed else "fail",
            "witnesses": self.failures,
        }


def verify_intertwining(
    nu: ModuleMap, samples: Iterable[VermaVector], m_range: tuple[int, int]
) -> IntertwiningReport:
    """Check that nu commutes with the tilde operators and with the module
    actions (K, D, h[k], x+[k]) on every sample."""
    report = IntertwiningReport(nu.name)
    lo, hi = m_range
    operators: list[tuple[str, Callable[[VermaVector], VermaVector]]] = []
    for m in range(lo, hi + 1):
        operators.append((f"xminus[{m}]", lambda v, m=m: act_xminus(m, v)))
        operators.append((f"omega-psi[{m}]", lambda v, m=m: tilde_omega(m, v)))
        operators.append((f"xplus[{m}]", lambda v, m=m: act_xplus(m, v)))
        if m != 0:
            operators.append((f"h[{m}]", lambda v, m=m: act_h(m, v)))
    operators.append(("K", act_K))
    operators.append(("D", act_D))
    for sample in samples:
        for name, op in operators:
            report.checked += 1
            if nu(op(sample)) != op(nu(sample)):
                report.failures.append(
                    f"{name} does not commute with {nu.name} on {format_vector(sample)}"
                )
    return report
