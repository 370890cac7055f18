"""
Coset data: embeddings, primary-field labels and simple-current orbits.

The built-in family is su(2)_k / u(1) with the u(1) generator Jt = 2 J^3
(embedding index 2, so the charge nu is an integer defined mod 2k and the
subalgebra level is 2k). A trivial coset (sub = parent) is also provided.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import SelectionRuleError, UnsupportedModelError
from .irreps import Irrep, irrep, su2_irrep
from .specs import AlgebraSpec, RationalMatrix, builtin_algebra, to_rational
from .weights import casimir_eigenvalue, wznw_central_charge

logger = logging.getLogger(__name__)

SU2_U1 = "su2_u1"
TRIVIAL = "trivial"


class EmbeddingSpec(BaseModel):
    """Subalgebra embedding Jt^b = sum_a m^b_a J^a plus a K-orthogonal complement."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    parent: AlgebraSpec
    sub: AlgebraSpec
    coefficients: RationalMatrix = Field(..., description="m^b_a, one row per sub generator")
    complement_basis: RationalMatrix = Field(
        default=(), description="Parent-basis vectors spanning the K-orthogonal complement"
    )
    index: sp.Rational = Field(
        default=sp.Integer(1), description="Embedding index: K_parent(image) = index * K_sub"
    )
    family: Optional[str] = Field(default=None, description="Built-in selection-rule family")

    @model_validator(mode="before")
    @classmethod
    def coerce(cls, data: dict) -> dict:
        """Coerce matrices and index to Rationals."""
        data = dict(data)
        for key in ("coefficients", "complement_basis"):
            if key in data:
                data[key] = tuple(tuple(to_rational(x) for x in row) for row in data[key])
        if "index" in data:
            data["index"] = to_rational(data["index"])
        return data

    @model_validator(mode="after")
    def check_embedding(self) -> "EmbeddingSpec":
        """Closure, index consistency, complement orthogonality and count."""
        p, s = self.parent, self.sub
        if len(self.coefficients) != s.dim or any(len(r) != p.dim for r in self.coefficients):
            raise ValueError(f"coefficients must be {s.dim}x{p.dim}")
        m = self.coefficients
        for b in range(s.dim):
            for c in range(s.dim):
                for e in range(p.dim):
                    lhs = sum(
                        (m[b][a] * m[c][a2] * p.f(a, a2, e)
                         for a in range(p.dim) for a2 in range(p.dim)),
                        sp.Integer(0),
                    )
                    rhs = sum((s.f(b, c, d) * m[d][e] for d in range(s.dim)), sp.Integer(0))
                    if lhs != rhs:
                        raise ValueError(f"closure residual {lhs - rhs} at ({b}, {c}, {e})")
        for b in range(s.dim):
            for c in range(s.dim):
                if self.parent_form(m[b], m[c]) != self.index * s.form[b][c]:
                    raise ValueError(f"embedding index mismatch at ({b}, {c})")
        if len(self.complement_basis) != p.dim - s.dim:
            raise ValueError(
                f"complement has {len(self.complement_basis)} directions, expected {p.dim - s.dim}"
            )
        for i, v in enumerate(self.complement_basis):
            for b in range(s.dim):
                if self.parent_form(v, m[b]) != 0:
                    raise ValueError(f"complement direction {i} not orthogonal to generator {b}")
        return self

    def parent_form(self, u: Sequence[sp.Rational], v: Sequence[sp.Rational]) -> sp.Rational:
        """K_parent(u, v) for parent-basis coordinate vectors."""
        k = self.parent.form
        n = self.parent.dim
        return sum((u[a] * k[a][b] * v[b] for a in range(n) for b in range(n)), sp.Integer(0))

    def sub_level(self, k: int) -> sp.Rational:
        """Level of the subalgebra current algebra."""
        return self.index * k

    @property
    def is_trivial(self) -> bool:
        """Sub equals parent."""
        return not self.complement_basis


def su2_u1_embedding() -> EmbeddingSpec:
    """Built-in u(1) inside su(2) along J^3."""
    return EmbeddingSpec(
        parent=builtin_algebra("su2"),
        sub=builtin_algebra("u1"),
        coefficients=[[0, 0, 2]],
        complement_basis=[[1, 0, 0], [0, 1, 0]],
        index=2,
        family=SU2_U1,
    )


def trivial_embedding(spec: AlgebraSpec) -> EmbeddingSpec:
    """The coset g/g."""
    identity = [[1 if a == b else 0 for a in range(spec.dim)] for b in range(spec.dim)]
    return EmbeddingSpec(
        parent=spec, sub=spec, coefficients=identity, complement_basis=(), index=1, family=TRIVIAL
    )


MODELS = {SU2_U1: su2_u1_embedding, TRIVIAL: lambda: trivial_embedding(builtin_algebra("su2"))}


def model_embedding(name: str) -> EmbeddingSpec:
    """
    Look up a coset model by name ("su2_u1" or "trivial").

    Raises:
        UnsupportedModelError: For unknown names
    """
    if name not in MODELS:
        raise UnsupportedModelError(f"Unknown model: {name}. Available: {', '.join(MODELS)}")
    return MODELS[name]()


class CosetField(BaseModel):
    """Coset primary label (mu, nu) at level k with derived weight and Casimirs."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu: Tuple[int, ...] = Field(..., description="Parent Dynkin labels")
    nu: Tuple[int, ...] = Field(..., description="Subalgebra labels (a single charge for u1)")
    level: int = Field(..., gt=0)
    h: sp.Rational = Field(..., description="Conformal weight")
    casimir_mu: sp.Rational
    casimir_nu: sp.Rational

    @property
    def label(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Sort key (mu, nu)."""
        return (self.mu, self.nu)

    def __str__(self) -> str:
        mu = ",".join(str(x) for x in self.mu)
        nu = ",".join(str(x) for x in self.nu)
        return f"({mu},{nu})"


class SimpleCurrentOrbit(BaseModel):
    """Labels identified by the simple-current action."""

    model_config = ConfigDict(frozen=True)

    members: Tuple[CosetField, ...]
    canonical: CosetField

    @model_validator(mode="after")
    def check_members(self) -> "SimpleCurrentOrbit":
        """Canonical is a member and all members share h exactly."""
        if self.canonical not in self.members:
            raise ValueError("canonical representative must be an orbit member")
        if any(m.h != self.canonical.h for m in self.members):
            raise ValueError("orbit members must share the conformal weight")
        return self


def _as_labels(x: object) -> Tuple[int, ...]:
    if isinstance(x, int):
        return (x,)
    return tuple(int(v) for v in x)  # type: ignore[union-attr]


def symmetric_charge(nu: int, k: int) -> int:
    """Reduce a u(1) charge mod 2k into (-k, k]."""
    r = nu % (2 * k)
    return r - 2 * k if r > k else r


def passes_selection_rule(embedding: EmbeddingSpec, k: int, mu: Sequence[int], nu: Sequence[int]) -> bool:
    """
    Selection rule of the built-in families.

    su2_u1: 0 <= mu <= k and mu - nu even. trivial: nu == mu, integrable mu.
    """
    if embedding.family == SU2_U1:
        return 0 <= mu[0] <= k and (mu[0] - nu[0]) % 2 == 0
    if embedding.family == TRIVIAL:
        return tuple(mu) == tuple(nu) and all(x >= 0 for x in mu) and sum(mu) <= k
    raise UnsupportedModelError("selection rule requires a built-in coset family")


def _normalize(embedding: EmbeddingSpec, k: int, nu: Tuple[int, ...]) -> Tuple[int, ...]:
    if embedding.family == SU2_U1:
        return (nu[0] % (2 * k),)
    return nu


def _standard_labels(
    embedding: EmbeddingSpec, k: int, mu: Tuple[int, ...], nu: Tuple[int, ...]
) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Orbit member whose charge is a weight of the mu-irrep (grade-zero realization)."""
    if embedding.family != SU2_U1:
        return (mu, nu)
    for m, n in ((mu[0], nu[0]), (k - mu[0], nu[0] + k)):
        ns = symmetric_charge(n, k)
        if abs(ns) <= m:
            return ((m,), (ns,))
    return None


def _sugawara_difference(
    embedding: EmbeddingSpec, k: int, mu: Tuple[int, ...], nu: Tuple[int, ...]
) -> sp.Rational:
    parent, sub = embedding.parent, embedding.sub
    k_sub = embedding.sub_level(k)
    h_parent = casimir_eigenvalue(parent, mu) / (2 * (k + parent.dual_coxeter))
    h_sub = casimir_eigenvalue(sub, nu) / (2 * (k_sub + sub.dual_coxeter))
    return sp.Rational(h_parent - h_sub)


def make_field(embedding: EmbeddingSpec, k: int, mu: object, nu: object) -> CosetField:
    """
    Build a CosetField, deriving h and the Casimir eigenvalues.

    Raises:
        SelectionRuleError: If the label is excluded
    """
    mu_t = _as_labels(mu)
    nu_t = _normalize(embedding, k, _as_labels(nu))
    if k < 1 or not passes_selection_rule(embedding, k, mu_t, nu_t):
        raise SelectionRuleError((mu_t, nu_t))
    standard = _standard_labels(embedding, k, mu_t, nu_t)
    if standard is None:
        raise SelectionRuleError((mu_t, nu_t))
    h = _sugawara_difference(embedding, k, *standard)
    return CosetField(
        mu=mu_t,
        nu=nu_t,
        level=k,
        h=h,
        casimir_mu=casimir_eigenvalue(embedding.parent, mu_t),
        casimir_nu=casimir_eigenvalue(embedding.sub, nu_t),
    )


def conformal_weight(field: CosetField, embedding: EmbeddingSpec) -> sp.Rational:
    """
    Coset conformal weight h = C_mu / (2(k + h^v)) - C_nu / (2(k_a + h^v_a)).

    For su2_u1 the difference is evaluated on the orbit member with |nu| <= mu
    (nu reduced into (-k, k]), so h is the same on every orbit member.

    Raises:
        SelectionRuleError: If the label is excluded
    """
    k = field.level
    if not passes_selection_rule(embedding, k, field.mu, field.nu):
        raise SelectionRuleError(field.label)
    standard = _standard_labels(embedding, k, field.mu, field.nu)
    if standard is None:
        raise SelectionRuleError(field.label)
    return _sugawara_difference(embedding, k, *standard)


def coset_central_charge(embedding: EmbeddingSpec, k: int) -> sp.Rational:
    """Central charge c_g(k) - c_a(index * k)."""
    c_parent = wznw_central_charge(embedding.parent, k)
    if embedding.is_trivial:
        return sp.Integer(0)
    k_sub = embedding.sub_level(k)
    if embedding.sub.is_abelian:
        c_sub = sp.Integer(embedding.sub.dim)
    else:
        c_sub = sp.Rational(k_sub * embedding.sub.dim) / (k_sub + embedding.sub.dual_coxeter)
    return sp.Rational(c_parent - c_sub)


def _simple_current(embedding: EmbeddingSpec, k: int, field: CosetField) -> CosetField:
    if embedding.family == SU2_U1:
        return make_field(embedding, k, k - field.mu[0], field.nu[0] + k)
    return field


def canonical_representative(field: CosetField, embedding: EmbeddingSpec) -> SimpleCurrentOrbit:
    """
    Orbit of a field under the simple current, with the lexicographically least member as canonical.

    For su2_u1 the action is (mu, nu) -> (k - mu, nu + k mod 2k).
    """
    k = field.level
    members = [field]
    current = _simple_current(embedding, k, field)
    while current not in members:
        members.append(current)
        current = _simple_current(embedding, k, current)
    members.sort(key=lambda f: f.label)
    return SimpleCurrentOrbit(members=tuple(members), canonical=members[0])


def enumerate_fields(embedding: EmbeddingSpec, k: int) -> List[SimpleCurrentOrbit]:
    """
    One orbit per equivalence class of selection-rule-passing labels, ordered by canonical label.

    Raises:
        ValueError: If k < 1
        UnsupportedModelError: If the embedding has no built-in family
    """
    if k < 1:
        raise ValueError(f"level must be a positive integer, got {k}")
    if embedding.family == SU2_U1:
        labels = [(m, n) for m in range(k + 1) for n in range(2 * k) if (m - n) % 2 == 0]
    elif embedding.family == TRIVIAL:
        labels = [((0,) * max(embedding.parent.rank, 1),) * 2]
    else:
        raise UnsupportedModelError("enumerate_fields requires a built-in coset family")

    orbits: List[SimpleCurrentOrbit] = []
    seen = set()
    for mu, nu in labels:
        field = make_field(embedding, k, mu, nu)
        if field.label in seen:
            continue
        orbit = canonical_representative(field, embedding)
        seen.update(m.label for m in orbit.members)
        orbits.append(orbit)
    orbits.sort(key=lambda o: o.canonical.label)
    logger.debug(f"{embedding.family} k={k}: {len(orbits)} field classes")
    return orbits


def zero_mode_state(field: CosetField, embedding: EmbeddingSpec) -> Tuple[Irrep, sp.ImmutableMatrix]:
    """
    Irrep carrying the zero modes and the vector of the field inside it.

    For su2_u1 the vector has Jt_0 eigenvalue nu; labels whose charge is not a
    weight of the mu-irrep have no grade-zero realization.

    Raises:
        UnsupportedModelError: If the label has no grade-zero realization
    """
    if embedding.family == SU2_U1:
        rep = su2_irrep(field.mu[0])
        ns = symmetric_charge(field.nu[0], field.level)
        index = rep.weight_index((ns,))
        if index is None:
            raise UnsupportedModelError(f"representative {field} has no grade-zero realization")
        return rep, rep.basis_vector(index)
    rep = irrep(embedding.parent, field.mu)
    return rep, rep.basis_vector(0)


def realizable_representative(orbit: SimpleCurrentOrbit, embedding: EmbeddingSpec) -> CosetField:
    """First orbit member (in label order) with a grade-zero realization."""
    for member in orbit.members:
        try:
            zero_mode_state(member, embedding)
        except UnsupportedModelError:
            continue
        return member
    raise UnsupportedModelError(f"orbit of {orbit.canonical} has no realizable member")
