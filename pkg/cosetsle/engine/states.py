"""
Highest-weight modules truncated at level two.

A StateVector is a finite sum over basis states (descendant word, irrep
component). Descendant words contain only negative modes, in normal order.
Operators act generator by generator from the right; positive modes are
pushed through descendants with commutators until they hit the highest
weight line, where they vanish, and zero modes act as L_0 = h and
J^a_0 = rho^a.
"""

import logging
from typing import Dict, Iterator, List, Optional, Tuple

import sympy as sp

from ..algebra.coset import CosetField
from ..algebra.irreps import Irrep
from ..errors import CommutatorModeError, LevelBudgetError
from .algebra import ModeAlgebra
from .symbols import CENTRAL_C, LEVEL_K, VIRASORO, GeneratorSymbol, OperatorPoly, Scalar, Word, word_level

logger = logging.getLogger(__name__)

LEVEL_BUDGET = 2

BasisKey = Tuple[Word, int]


class StateVector:
    """Sum of coefficient * (descendant word, irrep component)."""

    __slots__ = ("_entries", "field")

    def __init__(
        self, entries: Optional[Dict[BasisKey, Scalar]] = None, field: Optional[CosetField] = None
    ):
        clean: Dict[BasisKey, sp.Expr] = {}
        for key, value in (entries or {}).items():
            v = sp.expand(sp.sympify(value))
            if v != 0:
                clean[key] = v
        self._entries = clean
        self.field = field

    @classmethod
    def accumulate(
        cls, pairs: Iterator[Tuple[BasisKey, sp.Expr]], field: Optional[CosetField] = None
    ) -> "StateVector":
        """Sum repeated basis keys."""
        acc: Dict[BasisKey, sp.Expr] = {}
        for key, value in pairs:
            acc[key] = acc.get(key, sp.Integer(0)) + value
        return cls(acc, field)

    def items(self) -> List[Tuple[BasisKey, sp.Expr]]:
        """Entries in canonical order (level, word keys, component)."""
        return sorted(
            self._entries.items(),
            key=lambda kv: (word_level(kv[0][0]), [s.sort_key() for s in kv[0][0]], kv[0][1]),
        )

    def coefficient(self, word: Word, component: int) -> sp.Expr:
        """Coefficient of one basis state."""
        return self._entries.get((tuple(word), component), sp.Integer(0))

    def words(self) -> List[Word]:
        """Distinct descendant words present."""
        return sorted({w for w, _ in self._entries}, key=lambda w: (word_level(w), [s.sort_key() for s in w]))

    def is_zero(self) -> bool:
        """True when every coefficient vanishes."""
        return not self._entries

    def __add__(self, other: "StateVector") -> "StateVector":
        return StateVector.accumulate(
            iter(list(self._entries.items()) + list(other._entries.items())), self.field or other.field
        )

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + other.scale(-1)

    def scale(self, factor: Scalar) -> "StateVector":
        """Multiply every coefficient."""
        return StateVector({k: v * factor for k, v in self._entries.items()}, self.field)

    def subs(self, values: Dict[sp.Symbol, Scalar]) -> "StateVector":
        """Substitute symbols in every coefficient."""
        return StateVector({k: v.subs(values) for k, v in self._entries.items()}, self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        parts = [
            f"{sp.sstr(v)}*[{' '.join(str(s) for s in w) or '1'}|{i}]" for (w, i), v in self.items()
        ]
        return "StateVector(" + (" + ".join(parts) or "0") + ")"


class HighestWeightModule:
    """
    Level-truncated module generated from one vector of a zero-mode irrep.

    Args:
        algebra: Mode algebra providing commutators
        rep: Irrep carrying J_0
        vector: Column vector of the primary inside rep
        h: L_0 eigenvalue on the primary (ignored in sugawara mode)
        c: Central charge substituted for the symbol c
        k: Level substituted for the symbol k
        field: Optional coset field context
    """

    def __init__(
        self,
        algebra: ModeAlgebra,
        rep: Irrep,
        vector: sp.Matrix,
        h: Scalar,
        c: Scalar,
        k: Scalar,
        field: Optional[CosetField] = None,
    ):
        self.algebra = algebra
        self.rep = rep
        self.vector = vector
        self.h = sp.sympify(h)
        self.central = {CENTRAL_C: sp.sympify(c), LEVEL_K: sp.sympify(k)}
        self.field = field
        self._columns = [
            [[(j, m[j, i]) for j in range(rep.dim) if m[j, i] != 0] for i in range(rep.dim)]
            for m in rep.matrices
        ]
        self._cache: Dict[Tuple[GeneratorSymbol, Word, int], Dict[BasisKey, sp.Expr]] = {}

    def hw_state(self) -> StateVector:
        """The primary vector as a StateVector."""
        return StateVector(
            {((), i): self.vector[i, 0] for i in range(self.rep.dim)}, self.field
        )

    def act(self, poly: OperatorPoly, state: StateVector) -> StateVector:
        """Action of an operator polynomial on a state."""
        pairs: List[Tuple[BasisKey, sp.Expr]] = []
        for word, coeff in poly.items():
            result = self.act_word(word, state)
            pairs.extend((key, coeff * value) for key, value in result.items())
        return StateVector.accumulate(iter(pairs), state.field or self.field)

    def act_word(self, word: Word, state: StateVector) -> StateVector:
        """Apply a word right to left."""
        for sym in reversed(word):
            if state.is_zero():
                break
            state = self.act_symbol(sym, state)
        return state

    def act_symbol(self, sym: GeneratorSymbol, state: StateVector) -> StateVector:
        """Apply one generator."""
        pairs: List[Tuple[BasisKey, sp.Expr]] = []
        for (word, comp), coeff in state.items():
            for key, value in self._act_basis(sym, word, comp).items():
                pairs.append((key, coeff * value))
        return StateVector.accumulate(iter(pairs), state.field or self.field)

    def _act_basis(self, g: GeneratorSymbol, word: Word, comp: int) -> Dict[BasisKey, sp.Expr]:
        key = (g, word, comp)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        result = self._compute_basis(g, word, comp)
        self._cache[key] = result
        return result

    def _compute_basis(self, g: GeneratorSymbol, word: Word, comp: int) -> Dict[BasisKey, sp.Expr]:
        if g.kind == VIRASORO and self.algebra.mode == "sugawara":
            raise CommutatorModeError(f"{g} is not a primitive in sugawara mode")

        if g.mode < 0:
            out: Dict[BasisKey, sp.Expr] = {}
            ordered = self.algebra.normal_order(OperatorPoly.word(g, *word))
            for w, c in ordered.items():
                level = word_level(w)
                if level > LEVEL_BUDGET:
                    raise LevelBudgetError(level)
                out[(w, comp)] = out.get((w, comp), sp.Integer(0)) + c
            return out

        if not word:
            if g.mode > 0:
                return {}
            if g.kind == VIRASORO:
                return {((), comp): self.h}
            return {((), j): value for j, value in self._columns[g.index][comp]}

        if g.mode > word_level(word):
            return {}

        head, rest = word[0], word[1:]
        inner = StateVector(self._act_basis(g, rest, comp))
        moved = self.act_symbol(head, inner)
        pairs = list(moved.items())
        base = StateVector({(rest, comp): 1})
        for cw, cc in self.algebra.commutator(g, head).items():
            value = cc.subs(self.central)
            for k2, v2 in self.act_word(cw, base).items():
                pairs.append((k2, value * v2))
        return dict(StateVector.accumulate(iter(pairs)).items())


def apply_to_hw(poly: OperatorPoly, module: HighestWeightModule) -> StateVector:
    """
    Evaluate an operator polynomial on the highest-weight line of a module.

    Positive modes annihilate the primary, J^a_0 acts as rho^a, L_0 as h plus
    the descendant level.

    Raises:
        LevelBudgetError: If an intermediate descendant exceeds level 2
    """
    return module.act(poly, module.hw_state())
