"""
Commutation relations and normal ordering for the mode algebra.

Relations of the semidirect product of the affine algebra with Virasoro:

    [J^a_n, J^b_m] = sum_c i f_abc J^c_{n+m} + k n K_ab delta_{n+m,0}
    [L_n, L_m]     = (n - m) L_{n+m} + c/12 (n^3 - n) delta_{n+m,0}
    [L_n, J^a_m]   = -m J^a_{n+m}

In the "sugawara" engine mode L is not a primitive: Virasoro modes are
bilinears in the currents and only [J, J] is defined.
"""

import logging
from typing import Dict, Literal

import sympy as sp

from ..algebra.specs import AlgebraSpec
from ..errors import CommutatorModeError
from .symbols import (
    CENTRAL_C,
    CURRENT,
    LEVEL_K,
    VIRASORO,
    GeneratorSymbol,
    OperatorPoly,
    Word,
)

logger = logging.getLogger(__name__)

EngineMode = Literal["semidirect", "sugawara"]
ENGINE_MODES = ("semidirect", "sugawara")


class ModeAlgebra:
    """
    Mode algebra of one Lie algebra with symbolic central parameters c and k.

    Args:
        spec: Algebra supplying f_abc and K_ab
        mode: "semidirect" (L primitive) or "sugawara" (currents only)
    """

    def __init__(self, spec: AlgebraSpec, mode: EngineMode = "semidirect"):
        if mode not in ENGINE_MODES:
            raise ValueError(f"Unknown engine mode: {mode}. Must be one of {ENGINE_MODES}")
        self.spec = spec
        self.mode = mode
        self._brackets = {(a, b): spec.bracket(a, b) for a in range(spec.dim) for b in range(spec.dim)}
        self._order_cache: Dict[Word, OperatorPoly] = {}

    def commutator(self, x: GeneratorSymbol, y: GeneratorSymbol) -> OperatorPoly:
        """
        [x, y] expanded by the defining relations.

        Raises:
            CommutatorModeError: If a Virasoro symbol is used in sugawara mode
        """
        if self.mode == "sugawara" and VIRASORO in (x.kind, y.kind):
            raise CommutatorModeError(f"[{x}, {y}] needs L expanded as a Sugawara bilinear")

        n, m = x.mode, y.mode
        central = n + m == 0
        if x.kind == CURRENT and y.kind == CURRENT:
            pairs = [
                (sp.I * f, (GeneratorSymbol(CURRENT, n + m, c, x.sector),))
                for c, f in self._brackets[(x.index, y.index)]
            ]
            if central:
                form = self.spec.form[x.index][y.index]
                if form != 0:
                    pairs.append((LEVEL_K * n * form, ()))
            return OperatorPoly.from_pairs(pairs)

        if x.kind == VIRASORO and y.kind == VIRASORO:
            pairs = []
            if n != m:
                pairs.append((n - m, (GeneratorSymbol(VIRASORO, n + m, -1, x.sector),)))
            if central and n * n * n - n != 0:
                pairs.append((CENTRAL_C * sp.Rational(n * n * n - n, 12), ()))
            return OperatorPoly.from_pairs(pairs)

        if x.kind == VIRASORO:
            if m == 0:
                return OperatorPoly.zero()
            return OperatorPoly.symbol(GeneratorSymbol(CURRENT, n + m, y.index, y.sector), -m)

        # [J^a_n, L_m] = n J^a_{n+m}
        if n == 0:
            return OperatorPoly.zero()
        return OperatorPoly.symbol(GeneratorSymbol(CURRENT, n + m, x.index, x.sector), n)

    def normal_order(self, poly: OperatorPoly) -> OperatorPoly:
        """
        Rewrite every word so sort keys are non-decreasing left to right.

        Each step swaps one adjacent inversion x y -> y x + [x, y]; the pair
        (inversions, length) strictly decreases, so rewriting terminates.
        """
        pairs = []
        for word, coeff in poly.items():
            for w, c in self._order_word(word).items():
                pairs.append((coeff * c, w))
        return OperatorPoly.from_pairs(pairs)

    def _order_word(self, word: Word) -> OperatorPoly:
        cached = self._order_cache.get(word)
        if cached is not None:
            return cached
        for i in range(len(word) - 1):
            x, y = word[i], word[i + 1]
            if x.sort_key() > y.sort_key():
                swapped = word[:i] + (y, x) + word[i + 2 :]
                result = self._order_word(swapped)
                for cw, cc in self.commutator(x, y).items():
                    inner = self._order_word(word[:i] + cw + word[i + 2 :])
                    result = result + inner.scale(cc)
                break
        else:
            result = OperatorPoly.word(*word)
        self._order_cache[word] = result
        return result

    def bracket(self, p: OperatorPoly, q: OperatorPoly) -> OperatorPoly:
        """Normal-ordered [p, q] of two polynomials."""
        return self.normal_order(p * q - q * p)
