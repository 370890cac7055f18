"""
Mode symbols and operator polynomials.

A word is a tuple of GeneratorSymbols read left to right; an OperatorPoly
maps words to exact coefficients. Coefficients are sympy expressions over
Q(i, sqrt 2) and may contain kappa, tau and the central parameters c, k.
"""

from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

import sympy as sp

KAPPA = sp.Symbol("kappa")
TAU = sp.Symbol("tau")
CENTRAL_C = sp.Symbol("c")
LEVEL_K = sp.Symbol("k")

VIRASORO = "L"
CURRENT = "J"
_KIND_ORDER = {VIRASORO: 0, CURRENT: 1}

PARENT = "parent"
SUB = "sub"
COSET = "coset"

Scalar = Union[int, sp.Expr]


class GeneratorSymbol(NamedTuple):
    """A single mode L_n or J^a_n."""

    kind: str
    mode: int
    index: int = -1
    sector: str = PARENT

    def sort_key(self) -> Tuple[int, int, int]:
        """Normal-order key: mode, then kind (L before J), then basis index."""
        return (self.mode, _KIND_ORDER[self.kind], self.index)

    def __str__(self) -> str:
        if self.kind == VIRASORO:
            return f"L({self.mode})"
        return f"J{self.index + 1}({self.mode})"


Word = Tuple[GeneratorSymbol, ...]


def L(n: int, sector: str = COSET) -> GeneratorSymbol:
    """Virasoro mode L_n."""
    return GeneratorSymbol(VIRASORO, n, -1, sector)


def J(a: int, n: int, sector: str = PARENT) -> GeneratorSymbol:
    """Current mode J^a_n (0-based basis index)."""
    return GeneratorSymbol(CURRENT, n, a, sector)


def word_level(word: Word) -> int:
    """Level -sum(modes) of a word."""
    return -sum(s.mode for s in word)


def is_normal(word: Word) -> bool:
    """True when sort keys are non-decreasing left to right."""
    return all(word[i].sort_key() <= word[i + 1].sort_key() for i in range(len(word) - 1))


def simplify_scalar(value: Scalar) -> sp.Expr:
    """Expanded canonical form of a coefficient."""
    return sp.expand(sp.sympify(value))


class OperatorPoly:
    """
    Finite sum of coefficient * word with merged words and no zero coefficients.

    Instances are treated as immutable; arithmetic returns new polynomials.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[Word, Scalar]] = None):
        merged: Dict[Word, sp.Expr] = {}
        for word, coeff in (terms or {}).items():
            value = simplify_scalar(coeff)
            if value != 0:
                merged[tuple(word)] = value
        self._terms = merged

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Scalar, Word]]) -> "OperatorPoly":
        """Build from (coefficient, word) pairs, merging repeated words."""
        acc: Dict[Word, sp.Expr] = {}
        for coeff, word in pairs:
            key = tuple(word)
            acc[key] = acc.get(key, sp.Integer(0)) + sp.sympify(coeff)
        return cls(acc)

    @classmethod
    def symbol(cls, sym: GeneratorSymbol, coeff: Scalar = 1) -> "OperatorPoly":
        """Single-generator polynomial."""
        return cls({(sym,): coeff})

    @classmethod
    def word(cls, *symbols: GeneratorSymbol, coeff: Scalar = 1) -> "OperatorPoly":
        """Single-word polynomial."""
        return cls({tuple(symbols): coeff})

    @classmethod
    def scalar(cls, value: Scalar) -> "OperatorPoly":
        """Multiple of the identity (empty word)."""
        return cls({(): value})

    @classmethod
    def zero(cls) -> "OperatorPoly":
        """The zero polynomial."""
        return cls()

    @property
    def terms(self) -> Dict[Word, sp.Expr]:
        """Copy of the word -> coefficient map."""
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Word, sp.Expr]]:
        """Iterate over (word, coefficient) in canonical order."""
        for word in sorted(self._terms, key=_word_key):
            yield word, self._terms[word]

    def coefficient(self, word: Word) -> sp.Expr:
        """Coefficient of a word (zero if absent)."""
        return self._terms.get(tuple(word), sp.Integer(0))

    def is_zero(self) -> bool:
        """True when there are no terms."""
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "OperatorPoly") -> "OperatorPoly":
        acc: Dict[Word, sp.Expr] = dict(self._terms)
        for word, coeff in other._terms.items():
            acc[word] = acc.get(word, sp.Integer(0)) + coeff
        return OperatorPoly(acc)

    def __neg__(self) -> "OperatorPoly":
        return self.scale(-1)

    def __sub__(self, other: "OperatorPoly") -> "OperatorPoly":
        return self + (-other)

    def __mul__(self, other: "OperatorPoly") -> "OperatorPoly":
        """Concatenation product (no reordering)."""
        return OperatorPoly.from_pairs(
            (c1 * c2, w1 + w2) for w1, c1 in self._terms.items() for w2, c2 in other._terms.items()
        )

    def scale(self, factor: Scalar) -> "OperatorPoly":
        """Multiply every coefficient."""
        return OperatorPoly({w: c * factor for w, c in self._terms.items()})

    def subs(self, values: Dict[sp.Symbol, Scalar]) -> "OperatorPoly":
        """Substitute symbols in every coefficient."""
        return OperatorPoly({w: c.subs(values) for w, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        keys = set(self._terms) | set(other._terms)
        return all(
            simplify_scalar(self.coefficient(w) - other.coefficient(w)) == 0 for w in keys
        )

    def __hash__(self) -> int:
        return hash(self.to_text())

    def to_text(self) -> str:
        """Canonical text: one 'coefficient * word' per line, sorted, rationals as p/q."""
        if not self._terms:
            return "0"
        lines: List[str] = []
        for word, coeff in self.items():
            body = " ".join(str(s) for s in word) if word else "1"
            lines.append(f"{sp.sstr(coeff, order='lex')} * {body}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"OperatorPoly({self.to_text()!r})"


def _word_key(word: Word) -> Tuple:
    return (len(word), tuple(s.sort_key() for s in word), tuple(s.sector for s in word))
