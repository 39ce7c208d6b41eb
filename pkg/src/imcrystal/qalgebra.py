"""The free graded algebra on the lowering generators x[n], n in Z.

Words are reordered into the normal form with weakly decreasing indices by
the quantum Serre rewriting rules

    x[a] x[a+1]  ->  q^2 x[a+1] x[a]
    x[a] x[b]    ->  q^2 x[b] x[a] - x[b-1] x[a+1] + q^2 x[a+1] x[b-1]
                     (b >= a + 2)

applied to adjacent ascents.  Rewriting terminates: within a fixed weight
each step strictly decreases (sum of squared indices, inversion count)
lexicographically, and the system is confluent, so the normal form does not
depend on the rewrite strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .qcoeff import Coeff, QRat, format_coeff

Monomial = tuple[int, ...]


class InhomogeneousError(ValueError):
    """Element mixes terms of different weights."""

    def __init__(self, first: Monomial, second: Monomial):
        super().__init__(f"inhomogeneous element: x{list(first)} vs x{list(second)}")
        self.offending = (first, second)


@dataclass(frozen=True, order=True)
class Weight:
    """Grading datum of a monomial: (length, total degree)."""

    length: int
    degree: int


def is_normal(word: Sequence[int]) -> bool:
    return all(word[i] >= word[i + 1] for i in range(len(word) - 1))


def monomial_weight(mono: Monomial) -> Weight:
    return Weight(len(mono), sum(mono))


# ---------------------------------------------------------------------------
# elements


class Element:
    """Finite linear combination of normal monomials with Coeff weights."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Monomial, Coeff] | None = None):
        self._terms = {m: c for m, c in (terms or {}).items() if not c.is_zero}

    @staticmethod
    def zero() -> Element:
        return Element()

    @staticmethod
    def one() -> Element:
        return Element({(): Coeff.one()})

    @staticmethod
    def scalar(c: Coeff) -> Element:
        return Element({(): c})

    @staticmethod
    def monomial(indices: Sequence[int], coeff: Coeff | None = None) -> Element:
        """Element of the word x[i1]...x[ik]; reorders if not normal."""
        word = tuple(indices)
        out = normalize_word(word)
        if coeff is not None:
            out = out * coeff
        return out

    # -- predicates ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def items(self) -> Iterator[tuple[Monomial, Coeff]]:
        return iter(sorted(self._terms.items(), key=lambda mc: _display_key(mc[0])))

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=_display_key)

    def coefficient(self, mono: Sequence[int]) -> Coeff:
        return self._terms.get(tuple(mono), Coeff.zero())

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self) -> Element:
        return Element({m: -c for m, c in self._terms.items()})

    def __add__(self, other: Element) -> Element:
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Coeff.zero()) + c
            if s.is_zero:
                out.pop(m, None)
            else:
                out[m] = s
        return Element(out)

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __mul__(self, other: Element | Coeff | QRat | int | Fraction) -> Element:
        if not isinstance(other, Element):
            if isinstance(other, (int, Fraction)):
                other = Coeff.rational(other)
            elif isinstance(other, QRat):
                other = Coeff.from_qrat(other)
            return Element({m: c * other for m, c in self._terms.items()})
        out = Element.zero()
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                out = out + normalize_word(m1 + m2) * (c1 * c2)
        return out

    def __rmul__(self, other: Coeff | QRat | int | Fraction) -> Element:
        return self * other

    # -- inspection ----------------------------------------------------------

    def weight(self) -> Weight:
        """Common weight of all terms; raises on mixtures and on zero."""
        if self.is_zero:
            raise ValueError("the zero element has no weight")
        monos = iter(self._terms)
        first = next(monos)
        w = monomial_weight(first)
        for m in monos:
            if monomial_weight(m) != w:
                raise InhomogeneousError(first, m)
        return w

    def specialize_gamma_one(self) -> Element:
        return Element({m: c.specialize_gamma_one() for m, c in self._terms.items()})

    def is_gamma_free(self) -> bool:
        return all(c.is_gamma_free() for c in self._terms.values())

    def max_index(self) -> int:
        return max(i for m in self._terms for i in m)

    def min_index(self) -> int:
        return min(i for m in self._terms for i in m)

    def __repr__(self) -> str:
        return f"Element({format_element(self)!r})"


def _display_key(mono: Monomial) -> tuple:
    return (len(mono), tuple(-i for i in mono))


# ---------------------------------------------------------------------------
# rewriting

_Q2 = Coeff.q_power(4)
_CACHE: dict[tuple[str, Monomial], Element] = {}


def find_ascent(word: Monomial, strategy: str = "leftmost") -> int | None:
    """Position of the adjacent ascent the strategy would rewrite next."""
    positions = [i for i in range(len(word) - 1) if word[i] < word[i + 1]]
    if not positions:
        return None
    if strategy == "leftmost":
        return positions[0]
    if strategy == "rightmost":
        return positions[-1]
    raise ValueError(f"unknown strategy {strategy!r}")


def rewrite_once(word: Monomial, position: int) -> list[tuple[Coeff, Monomial]]:
    """Apply one Serre rewrite at an ascent; returns (coeff, word) pieces."""
    a, b = word[position], word[position + 1]
    if a >= b:
        raise ValueError("no ascent at the given position")
    pre, post = word[:position], word[position + 2 :]
    if b == a + 1:
        return [(_Q2, pre + (b, a) + post)]
    return [
        (_Q2, pre + (b, a) + post),
        (-Coeff.one(), pre + (b - 1, a + 1) + post),
        (_Q2, pre + (a + 1, b - 1) + post),
    ]


def termination_measure(word: Monomial) -> tuple[int, int]:
    """(sum of squared indices, inversion count); each rewrite strictly
    decreases it lexicographically within a weight."""
    sq = sum(i * i for i in word)
    inv = sum(
        1
        for i in range(len(word))
        for j in range(i + 1, len(word))
        if word[i] < word[j]
    )
    return (sq, inv)


def normalize_word(word: Sequence[int], strategy: str = "leftmost") -> Element:
    """Rewrite a word into a combination of normal monomials."""
    word = tuple(word)
    key = (strategy, word)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    stack = [word]
    while stack:
        w = stack[-1]
        k = (strategy, w)
        if k in _CACHE:
            stack.pop()
            continue
        i = find_ascent(w, strategy)
        if i is None:
            _CACHE[k] = Element({w: Coeff.one()})
            stack.pop()
            continue
        pieces = rewrite_once(w, i)
        missing = [pw for _, pw in pieces if (strategy, pw) not in _CACHE]
        if missing:
            stack.extend(missing)
            continue
        total = Element.zero()
        for c, pw in pieces:
            total = total + _CACHE[(strategy, pw)] * c
        _CACHE[k] = total
        stack.pop()
    return _CACHE[key]


def normalize(word: Sequence[int], coeff: Coeff | None = None) -> Element:
    """Normal form of coeff * x[word[0]] ... x[word[-1]]."""
    return Element.monomial(word, coeff)


def multiply(a: Element, b: Element) -> Element:
    return a * b


def weight_of(e: Element) -> Weight:
    return e.weight()


# ---------------------------------------------------------------------------
# finite basis probes


def enumerate_basis(
    length: int, window: tuple[int, int], degree: int | None = None
) -> list[Monomial]:
    """All normal monomials of the given length with indices in the window,
    optionally filtered by total degree, in decreasing lexicographic order."""
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    out: list[Monomial] = []

    def rec(prefix: tuple[int, ...], top: int) -> None:
        if len(prefix) == length:
            if degree is None or sum(prefix) == degree:
                out.append(prefix)
            return
        rest = length - len(prefix)
        for i in range(top, lo - 1, -1):
            if degree is not None:
                partial = sum(prefix) + i
                if partial + (rest - 1) * lo > degree or partial + (rest - 1) * hi < degree:
                    continue
            rec(prefix + (i,), i)

    rec((), hi)
    return out


def enumerate_all(max_length: int, window: tuple[int, int]) -> list[Monomial]:
    """All normal monomials of length 0..max_length over the window."""
    out: list[Monomial] = []
    for k in range(max_length + 1):
        out.extend(enumerate_basis(k, window))
    return out


# ---------------------------------------------------------------------------
# text form


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_CHARS = {"+", "-", "*", "/", "^", "(", ")", "[", "]"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
        elif ch in ("q", "g", "x"):
            tokens.append(("NAME", ch, i))
            i += 1
        elif ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unknown symbol {ch!r}", i)
    tokens.append(("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_expr(self) -> Element:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.next()[0] == "-" else 1
        out = self.parse_term() * Coeff.rational(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            t = self.parse_term()
            out = out + t if op == "+" else out - t
        return out

    def parse_term(self) -> Element:
        out = self.parse_factor()
        while True:
            kind, value, pos = self.peek()
            if kind in ("*", "/"):
                self.next()
                rhs = self.parse_factor()
                if kind == "*":
                    out = out * rhs
                else:
                    if rhs.monomials() not in ([], [()]):
                        raise ParseError("division only by scalar coefficients", pos)
                    out = Element(
                        {m: c / rhs.coefficient(()) for m, c in out._terms.items()}
                    )
            elif kind == "NAME" and value == "x":
                out = out * self.parse_factor()
            else:
                return out

    def parse_factor(self) -> Element:
        kind, value, pos = self.next()
        if kind == "INT":
            return Element.scalar(Coeff.rational(int(value)))
        if kind == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if kind == "[":
            n = self.parse_int()
            self.expect("]")
            return Element.scalar(Coeff.quantum(n))
        if kind == "NAME" and value == "x":
            self.expect("[")
            n = self.parse_int()
            self.expect("]")
            return Element.monomial((n,))
        if kind == "NAME":  # q or g
            halfexp = 2
            if self.peek()[0] == "^":
                self.next()
                halfexp = self.parse_halfexp()
            if value == "q":
                return Element.scalar(Coeff.q_power(halfexp))
            return Element.scalar(Coeff.gamma_power(halfexp))
        raise ParseError(f"unexpected {value!r}", pos)

    def parse_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.next()
            sign = -1
        tok = self.expect("INT")
        return sign * int(tok[1])

    def parse_halfexp(self) -> int:
        """Exponent after '^': n, -n, or (a/2) in half units."""
        if self.peek()[0] == "(":
            self.next()
            a = self.parse_int()
            if self.peek()[0] == "/":
                self.next()
                tok = self.expect("INT")
                if tok[1] != "2":
                    raise ParseError("only half-integer exponents", tok[2])
                self.expect(")")
                return a
            self.expect(")")
            return 2 * a
        return 2 * self.parse_int()


def parse_element(text: str) -> Element:
    """Parse the element grammar; the result is in normal form."""
    parser = _Parser(text)
    out = parser.parse_expr()
    tok = parser.peek()
    if tok[0] != "END":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return out


def _needs_parens(text: str) -> bool:
    """True when the coefficient text is a top-level sum or difference."""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and text[i - 1] not in "^(*/":
            return True
    return False


def format_element(e: Element) -> str:
    """Canonical text form; parse_element round-trips it."""
    if e.is_zero:
        return "0"
    parts = []
    for mono, coeff in e.items():
        text = format_coeff(coeff)
        mono_text = "".join(f"x[{i}]" for i in mono)
        if not mono:
            body = text
        elif text == "1":
            body = mono_text
        elif text == "-1":
            body = "-" + mono_text
        elif _needs_parens(text):
            body = f"({text})*{mono_text}"
        else:
            body = f"{text}*{mono_text}"
        if not parts:
            parts.append(body)
        elif body.startswith("-"):
            parts.append(" - " + body[1:])
        else:
            parts.append(" + " + body)
    return "".join(parts)
