"""
Tests for constraint derivation, exact elimination and classification.
"""

import json

import pytest
import sympy as sp

from cosetsle.algebra import builtin_algebra, make_field, su2_u1_embedding, trivial_embedding
from cosetsle.errors import UnsupportedModelError
from cosetsle.solver import (
    ConstraintRow,
    ConstraintSystem,
    audit_model,
    audit_table,
    build_null_candidate,
    classification_table,
    classify_model,
    closed_form_constraints,
    complement_quadratic,
    derive_constraints,
    format_result,
    solve_constraints,
    system_table,
    to_json,
    virasoro_degenerate_weight,
    wznw_classify,
    wznw_constraints,
)

R = sp.Rational


@pytest.fixture(scope="module")
def embedding():
    """su(2)/u(1)."""
    return su2_u1_embedding()


@pytest.fixture(scope="module")
def level_two(embedding):
    """Classification of su(2)_2/u(1)."""
    return classify_model(embedding, 2)


def engine_rows(embedding, mu, nu, k=2, **kwargs):
    """Engine-derived rows (subset and closure) for one label."""
    field = make_field(embedding, k, mu, nu)
    return derive_constraints(build_null_candidate(field, embedding, **kwargs))


def row(a, b, d, tag="r"):
    """Constraint row with exact coefficients."""
    return ConstraintRow(a=sp.nsimplify(a), b=sp.nsimplify(b), d=sp.nsimplify(d), tag=tag)


def report_mismatch_tags(report, field):
    """Tags of one field where neither central-term convention matches the engine."""
    return {entry.tag for entry in report.mismatches if entry.field == field}


class TestRows:
    """Tests for ConstraintRow."""

    def test_proportional(self):
        """Test rows equal up to scaling compare proportional."""
        assert row(1, 2, 3).proportional_to(row(2, 4, 6))
        assert not row(1, 2, 3).proportional_to(row(1, 2, -3))

    def test_trivial(self):
        """Test 0 = 0 is trivial."""
        assert row(0, 0, 0).is_trivial
        assert not row(0, 0, 1).is_trivial

    def test_residual(self):
        """Test residual at a point."""
        assert row(R(3, 2), 2, R(-9, 2)).residual(3, 0) == 0

    def test_serialized_as_fractions(self):
        """Test coefficients serialize as p/q strings."""
        dumped = row(R(3, 2), 0, -1).model_dump(mode="json")
        assert dumped["a"] == "3/2"
        assert dumped["d"] == "-1"


class TestLinsolve:
    """Tests for exact elimination."""

    def test_unique(self):
        """Test two independent rows give a point."""
        result = solve_constraints(ConstraintSystem(rows=[row(R(3, 2), 2, R(-9, 2)), row(2, 4, -6)]))
        assert result.status == "unique"
        assert result.point() == (3, 0)
        assert result.rank == 2

    def test_nonpositive_tau_warns(self):
        """Test tau <= 0 is flagged."""
        result = solve_constraints(ConstraintSystem(rows=[row(R(3, 2), 2, R(-9, 2)), row(2, 4, -6)]))
        assert result.warnings
        assert result.admissible

    def test_family(self):
        """Test a single row gives a one-parameter family."""
        result = solve_constraints(ConstraintSystem(rows=[row(0, 2, R(-1, 2))]))
        assert result.status == "one-parameter family"
        assert result.free_variable == "kappa"
        assert result.solution["tau"] == R(1, 4)

    def test_family_in_tau(self):
        """Test a row in kappa and tau leaves tau free."""
        result = solve_constraints(ConstraintSystem(rows=[row(1, 2, -3)]))
        assert result.free_variable == "tau"
        tau = sp.Symbol("tau")
        assert sp.expand(result.solution["kappa"] - (3 - 2 * tau)) == 0

    def test_inconsistent(self):
        """Test contradictory rows."""
        result = solve_constraints(ConstraintSystem(rows=[row(1, 0, -1), row(1, 0, -2)]))
        assert result.status == "inconsistent"
        assert not result.admissible
        assert result.point() is None

    def test_no_rows(self):
        """Test an empty system is underdetermined."""
        result = solve_constraints(ConstraintSystem(rows=[]))
        assert result.status == "underdetermined"
        assert result.admissible

    def test_diagnostics_are_zero(self):
        """Test every row residual is recorded and zero."""
        result = solve_constraints(ConstraintSystem(rows=[row(1, 0, -1, "x"), row(0, 1, -2, "y")]))
        assert result.diagnostics == {"x": 0, "y": 0}

    def test_json_is_exact(self):
        """Test solutions serialize as exact strings."""
        result = solve_constraints(ConstraintSystem(rows=[row(3, 0, -1), row(0, 1, R(-1, 4))]))
        dumped = result.model_dump(mode="json")
        assert dumped["solution"] == {"kappa": "1/3", "tau": "1/4"}


class TestClosedForm:
    """Tests for the closed-form transcriptions at k = 2."""

    def test_identity_literal(self, embedding):
        """Test (0,0) literal: family with tau = -1/4."""
        result = solve_constraints(closed_form_constraints(make_field(embedding, 2, 0, 0), embedding))
        assert result.status == "one-parameter family"
        assert result.solution["tau"] == R(-1, 4)

    def test_identity_sign_corrected(self, embedding):
        """Test (0,0) sign-corrected: family with tau = 1/4."""
        system = closed_form_constraints(make_field(embedding, 2, 0, 0), embedding, "sign-corrected")
        result = solve_constraints(system)
        assert result.status == "one-parameter family"
        assert result.solution["tau"] == R(1, 4)

    def test_identity_trivial_rows(self, embedding):
        """Test L1^2 and Jt1_1 L1 vanish identically on the identity."""
        system = closed_form_constraints(make_field(embedding, 2, 0, 0), embedding)
        assert set(system.trivial) == {"L1^2", "Jt1_1 L1"}

    def test_fermion_literal(self, embedding):
        """Test (0,2) literal: unique (1/5, 8/5)."""
        result = solve_constraints(closed_form_constraints(make_field(embedding, 2, 0, 2), embedding))
        assert result.point() == (R(1, 5), R(8, 5))

    def test_fermion_sign_corrected(self, embedding):
        """Test (0,2) sign-corrected: unique (3/5, 9/5)."""
        system = closed_form_constraints(make_field(embedding, 2, 0, 2), embedding, "sign-corrected")
        assert solve_constraints(system).point() == (R(3, 5), R(9, 5))

    def test_other_fermion_literal(self, embedding):
        """Test (2,0) literal: unique (13, -8)."""
        result = solve_constraints(closed_form_constraints(make_field(embedding, 2, 2, 0), embedding))
        assert result.point() == (13, -8)

    @pytest.mark.parametrize("convention", ["literal", "sign-corrected"])
    @pytest.mark.parametrize("nu", [1, 3])
    def test_spin_field_inconsistent(self, embedding, convention, nu):
        """Test (1,1) and (1,3) have no solution in either transcription."""
        system = closed_form_constraints(make_field(embedding, 2, 1, nu), embedding, convention)
        assert solve_constraints(system).status == "inconsistent"

    def test_l2_rows(self, embedding):
        """Test the L2 row 3h kappa + k tau + (-8h +- c)."""
        field = make_field(embedding, 2, 2, 0)
        literal = closed_form_constraints(field, embedding, "literal").row("L2")
        corrected = closed_form_constraints(field, embedding, "sign-corrected").row("L2")
        assert (literal.a, literal.b, literal.d) == (R(3, 2), 2, R(-7, 2))
        assert (corrected.a, corrected.b, corrected.d) == (R(3, 2), 2, R(-9, 2))

    def test_only_su2_u1(self):
        """Test closed forms need the su2_u1 family."""
        trivial = trivial_embedding(builtin_algebra("su2"))
        field = make_field(trivial, 1, [0], [0])
        with pytest.raises(UnsupportedModelError):
            closed_form_constraints(field, trivial)

    def test_unknown_convention(self, embedding):
        """Test unknown conventions are rejected."""
        with pytest.raises(ValueError):
            closed_form_constraints(make_field(embedding, 2, 0, 0), embedding, "flipped")


class TestEngineRows:
    """Tests for engine-derived rows at k = 2."""

    def test_fermion_subset_rows(self, embedding):
        """Test (2,0): L2 = (3/2, 2, -9/2) and L1^2 = (2, 4, -6)."""
        system = engine_rows(embedding, 2, 0).subset()
        assert system.row("L2").proportional_to(row(R(3, 2), 2, R(-9, 2)))
        assert system.row("L1^2").proportional_to(row(2, 4, -6))

    def test_fermion_subset_solution(self, embedding):
        """Test the two-row system for (2,0) eliminates to (3, 0)."""
        result = solve_constraints(engine_rows(embedding, 2, 0).subset())
        assert result.point() == (3, 0)

    def test_identity_family(self, embedding):
        """Test (0,0): tau = 1/4 with kappa free."""
        result = solve_constraints(engine_rows(embedding, 0, 0).subset())
        assert result.status == "one-parameter family"
        assert result.free_variable == "kappa"
        assert result.solution["tau"] == R(1, 4)

    def test_identity_closure_inconsistent(self, embedding):
        """Test the full raising closure rules out the identity family."""
        assert solve_constraints(engine_rows(embedding, 0, 0)).status == "inconsistent"

    @pytest.mark.parametrize("nu", [1, 3])
    def test_spin_field(self, embedding, nu):
        """Test (1,1) and (1,3) solve to (16/3, 0) on the engine rows."""
        result = solve_constraints(engine_rows(embedding, 1, nu).subset())
        assert result.point() == (R(16, 3), 0)

    def test_spin_field_is_degenerate_virasoro(self):
        """Test kappa = 16/3 is the Virasoro level-two point with h = 1/16, c = 1/2."""
        assert virasoro_degenerate_weight(R(16, 3)) == (R(1, 16), R(1, 2))

    def test_identity_partner_inconsistent(self, embedding):
        """Test (2,2) has no engine solution."""
        assert solve_constraints(engine_rows(embedding, 2, 2).subset()).status == "inconsistent"

    def test_unrealizable_label(self, embedding):
        """Test (0,2) has no grade-zero realization."""
        with pytest.raises(UnsupportedModelError):
            engine_rows(embedding, 0, 2)

    def test_engine_l2_matches_sign_corrected(self, embedding):
        """Test the engine L2 row is the sign-corrected transcription."""
        field = make_field(embedding, 2, 2, 0)
        engine = engine_rows(embedding, 2, 0).row("L2")
        assert engine.proportional_to(closed_form_constraints(field, embedding, "sign-corrected").row("L2"))
        assert not engine.proportional_to(closed_form_constraints(field, embedding, "literal").row("L2"))

    def test_rows_carry_provenance(self, embedding):
        """Test every row names its raising operator and group."""
        system = engine_rows(embedding, 1, 1)
        assert {r.group for r in system.rows} <= {"subset", "closure"}
        assert all(r.source == "engine" and r.tag for r in system.rows)

    def test_complement_quadratic_equal(self, embedding):
        """Test the K-inverse weighted full-minus-image sum reproduces the complement sum term by term."""
        assert complement_quadratic(embedding, "orthonormal") == complement_quadratic(embedding, "difference")

    def test_unknown_normalization(self, embedding):
        """Test unknown normalizations are rejected."""
        with pytest.raises(ValueError):
            complement_quadratic(embedding, "raw")  # type: ignore[arg-type]

    def test_candidate_text(self, embedding):
        """Test the semidirect candidate renders canonically."""
        candidate = build_null_candidate(make_field(embedding, 2, 2, 0), embedding)
        text = candidate.operator_text()
        assert "L(-2)" in text
        assert "kappa" in text and "tau" in text

    @pytest.mark.slow
    def test_sugawara_mode_runs(self, embedding):
        """Test the Sugawara-bilinear engine mode derives rows for (2,0)."""
        system = engine_rows(embedding, 2, 0, mode="sugawara")
        assert system.mode == "sugawara"
        assert system.rows


class TestClassification:
    """Tests for classify_model at k = 2."""

    def test_three_classes(self, level_two):
        """Test one entry per field class with c = 1/2."""
        assert [o.canonical for o in level_two.orbits] == ["(0,0)", "(0,2)", "(1,1)"]
        assert level_two.central_charge == "1/2"

    def test_literal_verdicts(self, level_two):
        """Test (1,1) is inadmissible and (0,0), (0,2) admissible in the literal transcription."""
        assert level_two.orbit("(0,0)").admissible_literal
        assert level_two.orbit("(0,2)").admissible_literal
        assert level_two.orbit("(1,1)").admissible_literal is False

    def test_sign_corrected_verdicts(self, level_two):
        """Test the sign-corrected transcription agrees on admissibility."""
        assert level_two.orbit("(0,0)").admissible_sign_corrected
        assert level_two.orbit("(0,2)").admissible_sign_corrected
        assert level_two.orbit("(1,1)").admissible_sign_corrected is False

    def test_engine_verdicts(self, level_two):
        """Test the engine admits every class at the subset level."""
        assert level_two.orbit("(0,0)").admissible_engine
        assert level_two.orbit("(0,2)").admissible_engine
        assert level_two.orbit("(1,1)").admissible_engine

    def test_unrealizable_member_noted(self, level_two):
        """Test (0,2) carries closed-form verdicts only."""
        member = next(m for m in level_two.orbit("(0,2)").members if m.label == "(0,2)")
        assert not member.realizable
        assert member.engine is None
        assert member.notes

    def test_fermion_engine_point(self, level_two):
        """Test the realizable member (2,0) reports (3, 0)."""
        member = next(m for m in level_two.orbit("(0,2)").members if m.label == "(2,0)")
        assert member.engine.point() == (3, 0)

    def test_identity_closure_flag(self, level_two):
        """Test the closure does not preserve the identity family."""
        member = next(m for m in level_two.orbit("(0,0)").members if m.label == "(0,0)")
        assert member.closure_preserves is False

    def test_deterministic(self, embedding, level_two):
        """Test repeated runs serialize identically."""
        assert to_json(classify_model(embedding, 2)) == to_json(level_two)

    def test_json_output(self, level_two):
        """Test the JSON report parses and carries exact strings."""
        data = json.loads(to_json(level_two))
        assert data["level"] == 2
        assert data["orbits"][1]["h"] == "1/2"

    def test_table(self, level_two):
        """Test the text table lists every member."""
        table = classification_table(level_two)
        for label in ("(0,0)", "(2,2)", "(0,2)", "(2,0)", "(1,1)", "(1,3)"):
            assert label in table
        assert "inconsistent" in table

    def test_level_one(self, embedding):
        """Test k = 1 has a single class at c = 0."""
        report = classify_model(embedding, 1)
        assert report.central_charge == "0"
        assert [o.canonical for o in report.orbits] == ["(0,0)"]


class TestAudit:
    """Tests for the closed-form audit."""

    def test_level_two_convention(self, embedding):
        """Test only the sign-corrected central term matches the engine at k = 2."""
        report = audit_model(embedding, 2)
        assert report.consistent_conventions == ["sign-corrected"]
        assert report.tag_agreement["L2"] == {"literal": False, "sign-corrected": True, "normalized": True}

    @pytest.mark.parametrize("tag", ["L1^2", "Jt1_1 L1"])
    def test_level_two_printed_rows_disagree(self, embedding, tag):
        """Test neither central-term convention reproduces the L1^2 and Jt1_1 L1 rows at k = 2."""
        report = audit_model(embedding, 2)
        assert report.tag_agreement[tag] == {"literal": False, "sign-corrected": False, "normalized": True}

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_normalized_agrees_everywhere(self, embedding, k):
        """Test the normalized transcription matches the engine on every audited row."""
        report = audit_model(embedding, k)
        assert all(entry.matches["normalized"] for entry in report.entries)
        assert report.consistent_conventions == (["literal", "sign-corrected"] if k == 1 else ["sign-corrected"])

    def test_spin_field_rows(self, embedding):
        """Test the (1,1) engine rows against the printed and normalized Casimir and h^v coefficients."""
        field = make_field(embedding, 2, 1, 1)
        engine = engine_rows(embedding, 1, 1).subset()
        assert engine.row("L1^2").proportional_to(row(R(9, 64), 1, R(-3, 4)))
        assert engine.row("Jt1_1 L1").proportional_to(row(R(9, 8), 2, -6))
        literal = closed_form_constraints(field, embedding, "literal")
        assert literal.row("L1^2").b == R(1, 2)
        assert literal.row("Jt1_1 L1").b == 1
        assert report_mismatch_tags(audit_model(embedding, 2), "(1,1)") == {"L1^2", "Jt1_1 L1"}

    def test_level_one_both(self, embedding):
        """Test c = 0 makes the central-term sign irrelevant."""
        assert audit_model(embedding, 1).consistent_conventions == ["literal", "sign-corrected"]

    def test_level_three_stable(self, embedding):
        """Test the convention is the same at k = 3."""
        assert audit_model(embedding, 3).consistent_conventions == ["sign-corrected"]

    def test_entries_per_realizable_member(self, embedding):
        """Test three audited rows per realizable field at k = 2."""
        report = audit_model(embedding, 2)
        fields = {e.field for e in report.entries}
        assert fields == {"(0,0)", "(2,2)", "(2,0)", "(1,1)", "(1,3)"}
        assert len(report.entries) == 3 * len(fields)

    def test_trivial_coset_empty(self):
        """Test the trivial coset has nothing to audit."""
        report = audit_model(trivial_embedding(builtin_algebra("su2")), 2)
        assert report.entries == []

    def test_table(self, embedding):
        """Test the audit table names the consistent convention."""
        assert "consistent central-term conventions: sign-corrected" in audit_table(audit_model(embedding, 2))


class TestWznw:
    """Tests for the WZNW level-two system."""

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_vacuum(self, k):
        """Test the su2 vacuum solves to (6, 2/(k+2))."""
        result = wznw_classify(builtin_algebra("su2"), k, [0])
        assert result.point() == (6, R(2, k + 2))

    def test_rows_rendered(self):
        """Test the WZNW system renders with its tags."""
        system = wznw_constraints(builtin_algebra("su2"), 2, [0])
        assert "L2" in system_table(system)


class TestVirasoroDegenerate:
    """Tests for the level-two Virasoro degenerate weight."""

    def test_kappa_three(self):
        """Test kappa = 3 gives h = 1/2 and c = 1/2."""
        assert virasoro_degenerate_weight(3) == (R(1, 2), R(1, 2))

    @pytest.mark.parametrize("kappa", [2, 3, 4, 6, R(8, 3)])
    def test_duality(self, kappa):
        """Test c is invariant under kappa -> 16/kappa."""
        assert virasoro_degenerate_weight(kappa)[1] == virasoro_degenerate_weight(16 / sp.nsimplify(kappa))[1]

    def test_zero_rejected(self):
        """Test kappa = 0 is rejected."""
        with pytest.raises(ValueError):
            virasoro_degenerate_weight(0)

    @pytest.mark.parametrize("label, kappa", [((1, 1), R(16, 3)), ((2, 0), 3)])
    def test_engine_rows_at_tau_zero(self, embedding, label, kappa):
        """Test the engine L2 and L1^2 rows at tau = 0 reduce to the Virasoro level-two condition."""
        field = make_field(embedding, 2, *label)
        system = engine_rows(embedding, *label).subset()
        l2, l1 = system.row("L2"), system.row("L1^2")
        assert -l2.d / l2.a == kappa
        assert l2.residual(kappa, 0) == 0
        assert l1.residual(kappa, 0) == 0
        assert virasoro_degenerate_weight(kappa) == (field.h, R(1, 2))
        assert field.h == (6 - sp.nsimplify(kappa)) / (2 * sp.nsimplify(kappa))

    @pytest.mark.parametrize("label", [(1, 1), (2, 0)])
    def test_dual_root_fails(self, embedding, label):
        """Test the dual kappa 16/kappa does not satisfy the tau = 0 rows."""
        field = make_field(embedding, 2, *label)
        kappa = 6 / (2 * field.h + 1)
        l2 = engine_rows(embedding, *label).subset().row("L2")
        assert l2.residual(16 / kappa, 0) != 0


class TestFormatting:
    """Tests for result rendering."""

    def test_unique(self):
        """Test unique solutions print as exact fractions."""
        result = solve_constraints(ConstraintSystem(rows=[row(3, 0, -16), row(0, 1, 0)]))
        assert format_result(result) == "unique kappa=16/3 tau=0"

    def test_family(self):
        """Test families print the pinned variable."""
        result = solve_constraints(ConstraintSystem(rows=[row(0, 4, -1)]))
        assert format_result(result) == "family tau=1/4"

    def test_missing(self):
        """Test None renders as a dash."""
        assert format_result(None) == "-"
