"""
cosetsle CLI: coset field classification, level-two null-vector solving and SLE Monte Carlo.

Exit codes: 0 ok, 1 usage error, 2 invalid input, 3 statistical test failed.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
from pydantic import BaseModel, ValidationError

from cosetsle import __version__
from cosetsle.algebra import (
    AlgebraSpec,
    CosetField,
    EmbeddingSpec,
    canonical_representative,
    load_algebra_spec,
    make_field,
    model_embedding,
    realizable_representative,
    su2_irrep,
)
from cosetsle.config import load_config, sim_config
from cosetsle.errors import UnsupportedModelError
from cosetsle.manifest import build_manifest, write_manifest
from cosetsle.schemas import SCHEMA_NAMES, load_schema
from cosetsle.sle import (
    MartingaleReport,
    SimConfig,
    complement_action,
    coset_onepoint_martingale_mc,
    driving_recovery,
    group_walk_expectation,
    power_martingale_mc,
    trace_generate,
    write_trace_csv,
)
from cosetsle.solver import (
    AdmissibilityResult,
    ConstraintSystem,
    audit_model,
    audit_table,
    build_null_candidate,
    classification_table,
    classify_model,
    closed_form_constraints,
    derive_constraints,
    format_result,
    solve_constraints,
    system_table,
    to_json,
    wznw_constraints,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_FAILED = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_AUDIT = "audit.json"


class InvalidInput(click.ClickException):
    """Domain error surfaced to the user."""

    exit_code = EXIT_INVALID

    def show(self, file: Any = None) -> None:
        click.echo(f"✗ Error: {self.format_message()}", err=True)


class ExitCodeGroup(click.Group):
    """Group whose usage errors exit with 1 instead of click's 2."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs["standalone_mode"] = False
        try:
            code = super().main(*args, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(code if isinstance(code, int) else EXIT_OK)


def config_option(f: Callable) -> Callable:
    """--config FILE, shared by every command."""
    return click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="YAML configuration file",
    )(f)


def _load(config_path: Optional[str]) -> Dict[str, Any]:
    try:
        return load_config(config_path)
    except (ValueError, OSError) as e:
        raise InvalidInput(str(e)) from e


def _pick(value: Any, section: Dict[str, Any], key: str) -> Any:
    return section.get(key) if value is None else value


def _parse_label(text: str) -> Tuple[int, int]:
    try:
        mu, nu = (int(x) for x in text.split(","))
    except ValueError as e:
        raise click.BadParameter(f"expected MU,NU, got {text!r}", param_hint="'--field'") from e
    return mu, nu


def _parse_weight(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint="'--weight'") from e


def _embedding(name: str) -> EmbeddingSpec:
    try:
        return model_embedding(name)
    except UnsupportedModelError as e:
        raise InvalidInput(str(e)) from e


def _algebra(name: str) -> AlgebraSpec:
    """Built-in algebra name or path to an algebra document."""
    try:
        return load_algebra_spec(name)
    except OSError as e:
        raise InvalidInput(str(e)) from e


def _write_artifact(
    text: str,
    output: str,
    command: str,
    config: Dict[str, Any],
    inputs: Sequence[str] = (),
    seed: Optional[int] = None,
) -> Path:
    """Write text and its manifest."""
    target = Path(output)
    target.write_text(text + "\n")
    write_manifest(build_manifest(command, target, config, inputs=inputs, seed=seed), target)
    logger.info("wrote %s", target)
    return target


def _emit(
    text: str,
    output: Optional[str],
    command: str,
    config: Dict[str, Any],
    inputs: Sequence[str] = (),
    seed: Optional[int] = None,
) -> None:
    """Print text, or write it with a manifest when an output path is given."""
    if output is None:
        click.echo(text)
        return
    target = _write_artifact(text, output, command, config, inputs=inputs, seed=seed)
    click.echo(f"✓ Wrote {target}")


def _dump(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        return to_json(payload)
    return json.dumps(payload, sort_keys=True, indent=2)


@click.group(cls=ExitCodeGroup)
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
def cli(verbose: bool) -> None:
    """cosetsle - SLE martingales for coset conformal field theories."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT)


@cli.command()
@click.option("--model", default=None, help="Coset model (su2_u1, trivial)")
@click.option("--level", type=int, default=None, help="Level k")
@click.option("--mode", type=click.Choice(["semidirect", "sugawara"]), default=None, help="Engine mode")
@click.option(
    "--normalization", type=click.Choice(["orthonormal", "difference"]), default=None, help="Complement sum"
)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write to file")
@config_option
def classify(
    model: Optional[str],
    level: Optional[int],
    mode: Optional[str],
    normalization: Optional[str],
    as_json: bool,
    output: Optional[str],
    config_path: Optional[str],
) -> None:
    """Classify every field class of a coset model."""
    config = _load(config_path)
    solver = config["solver"]
    model = _pick(model, solver, "model")
    level = _pick(level, solver, "level")
    mode = _pick(mode, solver, "mode")
    normalization = _pick(normalization, solver, "normalization")
    try:
        report = classify_model(_embedding(model), level, mode=mode, normalization=normalization)
    except ValueError as e:
        raise InvalidInput(str(e)) from e

    resolved = {**config, "solver": {"model": model, "level": level, "mode": mode, "normalization": normalization}}
    text = to_json(report) if as_json else classification_table(report)
    _emit(text, output, "classify", resolved, inputs=[config_path] if config_path else [])


def _engine_systems(
    field: CosetField, embedding: EmbeddingSpec, mode: str, normalization: str, quiet: bool = False
) -> Tuple[CosetField, ConstraintSystem]:
    """Engine rows on field, or on the first realizable member of its orbit."""
    used = field
    try:
        candidate = build_null_candidate(field, embedding, mode=mode, normalization=normalization)  # type: ignore[arg-type]
    except UnsupportedModelError:
        used = realizable_representative(canonical_representative(field, embedding), embedding)
        note = f"{field} has no grade-zero realization; engine rows from {used}"
        if quiet:
            logger.info(note)
        else:
            click.echo(f"  note: {note}")
        candidate = build_null_candidate(used, embedding, mode=mode, normalization=normalization)  # type: ignore[arg-type]
    return used, derive_constraints(candidate)


def _solve_field(
    field: CosetField,
    embedding: EmbeddingSpec,
    closed_form: bool,
    engine: bool,
    mode: str,
    normalization: str,
    as_json: bool,
) -> List[Dict[str, Any]]:
    entries: List[Dict[str, Any]] = []

    def report(title: str, system: ConstraintSystem, result: AdmissibilityResult) -> None:
        entries.append(
            {
                "field": str(field),
                "representative": system.representative,
                "source": title,
                "system": system.model_dump(mode="json"),
                "result": result.model_dump(mode="json"),
            }
        )
        if not as_json:
            click.echo(f"\n{title} rows for {system.representative} (h = {field.h}):")
            click.echo(system_table(system))
            click.echo(f"→ {format_result(result)}")

    if closed_form:
        results = {}
        for convention in ("literal", "sign-corrected"):
            system = closed_form_constraints(field, embedding, convention)
            results[convention] = solve_constraints(system, convention=convention)
            report(convention, system, results[convention])
        if not as_json:
            same = format_result(results["literal"]) == format_result(results["sign-corrected"])
            click.echo("\nconventions agree" if same else "\nconventions differ")
    if engine:
        _, full = _engine_systems(field, embedding, mode, normalization, quiet=as_json)
        subset = full.subset()
        subset_result = solve_constraints(subset)
        report("engine", subset, subset_result)
        closure_result = solve_constraints(full)
        report("closure", full, closure_result)
        if not as_json and subset_result.point() is not None:
            point = subset_result.point()
            kept = all(row.residual(*point) == 0 for row in full.rows)  # type: ignore[misc]
            click.echo(f"full raising closure {'preserves' if kept else 'does not preserve'} the subset solution")
    return entries


@cli.command()
@click.option("--model", default=None, help="Coset model (su2_u1, trivial)")
@click.option("--level", type=int, default=None, help="Level k")
@click.option("--field", "label", required=True, help="Coset label MU,NU")
@click.option("--closed-form", "closed_form", is_flag=True, help="Only the closed-form rows")
@click.option("--engine", is_flag=True, help="Only the engine-derived rows")
@click.option(
    "--representative",
    type=click.Choice(["given", "canonical", "all"]),
    default="given",
    help="Solve the given label, its orbit's canonical label, or every orbit member",
)
@click.option("--mode", type=click.Choice(["semidirect", "sugawara"]), default=None, help="Engine mode")
@click.option(
    "--normalization", type=click.Choice(["orthonormal", "difference"]), default=None, help="Complement sum"
)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write JSON to file")
@config_option
def solve(
    model: Optional[str],
    level: Optional[int],
    label: str,
    closed_form: bool,
    engine: bool,
    representative: str,
    mode: Optional[str],
    normalization: Optional[str],
    as_json: bool,
    output: Optional[str],
    config_path: Optional[str],
) -> None:
    """Derive and solve the (kappa, tau) constraints of one coset field."""
    if closed_form and engine:
        raise click.UsageError("--closed-form and --engine are mutually exclusive")
    mu, nu = _parse_label(label)
    config = _load(config_path)
    solver = config["solver"]
    model = _pick(model, solver, "model")
    level = _pick(level, solver, "level")
    mode = _pick(mode, solver, "mode")
    normalization = _pick(normalization, solver, "normalization")
    embedding = _embedding(model)
    use_closed = not engine and embedding.family == "su2_u1"
    use_engine = not closed_form

    try:
        field = make_field(embedding, level, mu, nu)
        orbit = canonical_representative(field, embedding)
        if representative == "all":
            fields = list(orbit.members)
        elif representative == "canonical":
            fields = [orbit.canonical]
        else:
            fields = [field]
        entries: List[Dict[str, Any]] = []
        for member in fields:
            entries.extend(_solve_field(member, embedding, use_closed, use_engine, mode, normalization, as_json))
    except ValueError as e:
        raise InvalidInput(str(e)) from e

    if as_json or output:
        resolved = {**config, "solver": {**solver, "model": model, "level": level, "mode": mode,
                                         "normalization": normalization, "field": [mu, nu]}}
        _emit(_dump(entries), output, "solve", resolved, inputs=[config_path] if config_path else [])


@cli.command()
@click.option("--model", default=None, help="Coset model (su2_u1, trivial)")
@click.option("--level", type=int, default=None, help="Level k")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False),
    default=DEFAULT_AUDIT,
    show_default=True,
    help="JSON report path",
)
@config_option
def audit(
    model: Optional[str], level: Optional[int], as_json: bool, output: str, config_path: Optional[str]
) -> None:
    """Compare the closed-form rows with the engine-derived rows and write the JSON report."""
    config = _load(config_path)
    solver = config["solver"]
    model = _pick(model, solver, "model")
    level = _pick(level, solver, "level")
    try:
        report = audit_model(_embedding(model), level)
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    resolved = {**config, "solver": {**solver, "model": model, "level": level}}
    text = to_json(report)
    target = _write_artifact(text, output, "audit", resolved, inputs=[config_path] if config_path else [])
    if as_json:
        click.echo(text)
        return
    click.echo(audit_table(report))
    if report.mismatches:
        click.echo(f"✗ {len(report.mismatches)} rows match no closed form", err=True)
    click.echo(f"✓ Wrote {target}")


@cli.command()
@click.option("--algebra", "algebra_name", default="su2", help="Built-in algebra or path to an algebra document")
@click.option("--level", type=int, default=None, help="Level k (default: solver.level from --config)")
@click.option("--weight", default="0", help="Dynkin labels, comma separated")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@config_option
def wznw(algebra_name: str, level: Optional[int], weight: str, as_json: bool, config_path: Optional[str]) -> None:
    """Solve the level-two system of a WZNW primary."""
    level = _pick(level, _load(config_path)["solver"], "level")
    labels = _parse_weight(weight)
    try:
        spec = _algebra(algebra_name)
        system = wznw_constraints(spec, level, labels)
        result = solve_constraints(system)
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    if as_json:
        click.echo(_dump({"system": system.model_dump(mode="json"), "result": result.model_dump(mode="json")}))
        return
    click.echo(f"{spec.name} k={level} weight={list(labels)}")
    click.echo(system_table(system))
    click.echo(f"→ {format_result(result)}")


@cli.command()
@click.argument("name", type=click.Choice(SCHEMA_NAMES))
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write to file")
def schema(name: str, output: Optional[str]) -> None:
    """Print the JSON schema of one artifact kind."""
    text = json.dumps(load_schema(name), indent=2)
    if output is None:
        click.echo(text)
        return
    Path(output).write_text(text + "\n")
    click.echo(f"✓ Wrote {output}")


# Simulation commands
@cli.group()
def sim() -> None:
    """Loewner traces and Monte Carlo martingale tests."""
    pass


def sim_options(f: Callable) -> Callable:
    """Flags mirroring SimConfig; unset flags fall back to the configuration."""
    options = [
        click.option("--kappa", type=float, default=None, help="SLE diffusivity"),
        click.option("--tau", type=float, default=None, help="Group-walk diffusivity"),
        click.option("--dt", type=float, default=None, help="Time step"),
        click.option("--T", "horizon", type=float, default=None, help="Final time"),
        click.option("--samples", type=int, default=None, help="Monte Carlo streams"),
        click.option("--seed", type=int, default=None, help="Random seed"),
        click.option("--scheme", type=click.Choice(["euler", "slit"]), default=None, help="Loewner step"),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Artifact path"),
        config_option,
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _sim_config(config: Dict[str, Any], **flags: Any) -> SimConfig:
    flags["T"] = flags.pop("horizon", None)
    try:
        return sim_config(config, **flags)
    except ValidationError as e:
        raise InvalidInput(str(e)) from e


def _resolved(config: Dict[str, Any], run: SimConfig, **extra: Any) -> Dict[str, Any]:
    return {**config, "sim": run.model_dump(mode="json"), **extra}


def _print_report(report: MartingaleReport) -> None:
    click.echo(f"{report.observable}: M0 = {report.M0:.6g}{report.M0_im:+.6g}i")
    for cp in report.checkpoints:
        z = "-" if cp.z is None else f"{cp.z:+.2f}"
        z_im = "-" if cp.z_im is None else f"{cp.z_im:+.2f}"
        click.echo(f"  t={cp.t:.4g}  mean={cp.mean:.6g}{cp.mean_im:+.6g}i  z={z} / {z_im}")
    click.echo(f"  samples={report.samples} excluded={report.excluded} swallowed={report.swallowed}")


def _finish(
    ctx: click.Context,
    report: MartingaleReport,
    out: Optional[str],
    command: str,
    resolved: Dict[str, Any],
    inputs: Sequence[str],
) -> None:
    _print_report(report)
    if out:
        target = _write_artifact(to_json(report), out, command, resolved, inputs=inputs, seed=report.seed)
        click.echo(f"✓ Wrote {target}")
    if report.verdict == "no power ansatz":
        click.echo("✗ No real exponent at the solver point", err=True)
        ctx.exit(EXIT_INVALID)
    if report.passed:
        click.echo("✓ Martingale test passed")
        return
    click.echo(f"✗ Martingale test: {report.verdict}", err=True)
    ctx.exit(EXIT_FAILED)


@sim.command()
@sim_options
@click.option("--points", type=int, default=None, help="Subsample the trace to this many rows")
@click.option("--check-recovery", is_flag=True, help="Unzip the trace and report the driving error")
def trace(
    kappa: Optional[float],
    tau: Optional[float],
    dt: Optional[float],
    horizon: Optional[float],
    samples: Optional[int],
    seed: Optional[int],
    scheme: Optional[str],
    out: Optional[str],
    config_path: Optional[str],
    points: Optional[int],
    check_recovery: bool,
) -> None:
    """Generate one SLE trace and write it as t,re,im CSV."""
    config = _load(config_path)
    run = _sim_config(config, kappa=kappa, tau=tau, dt=dt, horizon=horizon, samples=samples, seed=seed, scheme=scheme)
    try:
        path = trace_generate(run)
        if check_recovery:
            recovered = driving_recovery(path)
            error = float(np.max(np.abs(recovered - path.driving)))
            click.echo(f"driving recovery sup-error: {error:.3e}")
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    if points:
        path = path.sample(points)
    if out is None:
        click.echo(f"✓ Generated trace with {len(path.t)} points (tip at T: {path.tips[-1]:.6g})")
        return
    target = write_trace_csv(path, out)
    inputs = [config_path] if config_path else []
    write_manifest(build_manifest("sim trace", target, _resolved(config, run), inputs=inputs, seed=run.seed), target)
    click.echo(f"✓ Wrote {target}")


@sim.command()
@sim_options
@click.option("--h", "weight", type=float, required=True, help="Weight exponent h")
@click.option("--p", "exponent", type=float, required=True, help="Power exponent p")
@click.option("--force", is_flag=True, help="Run even if the indicial relation fails")
@click.pass_context
def martingale(
    ctx: click.Context,
    kappa: Optional[float],
    tau: Optional[float],
    dt: Optional[float],
    horizon: Optional[float],
    samples: Optional[int],
    seed: Optional[int],
    scheme: Optional[str],
    out: Optional[str],
    config_path: Optional[str],
    weight: float,
    exponent: float,
    force: bool,
) -> None:
    """Monte Carlo test of (g_t')^h (g_t - U_t)^p."""
    config = _load(config_path)
    run = _sim_config(config, kappa=kappa, tau=tau, dt=dt, horizon=horizon, samples=samples, seed=seed, scheme=scheme)
    try:
        report = power_martingale_mc(run, weight, exponent, force=force)
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    resolved = _resolved(config, run, observable={"h": weight, "p": exponent, "force": force})
    _finish(ctx, report, out, "sim martingale", resolved, [config_path] if config_path else [])


@sim.command("coset-martingale")
@sim_options
@click.option("--model", default=None, help="Coset model")
@click.option("--level", type=int, default=None, help="Level k")
@click.option("--field", "label", required=True, help="Coset label MU,NU")
@click.option("--p", "exponent", type=float, default=None, help="Power exponent (default: largest indicial root)")
@click.option("--kappa-shift", type=float, default=0.0, help="Run at the solver kappa plus this shift")
@click.option("--force", is_flag=True, help="Run even if the indicial relation fails")
@click.pass_context
def coset_martingale(
    ctx: click.Context,
    kappa: Optional[float],
    tau: Optional[float],
    dt: Optional[float],
    horizon: Optional[float],
    samples: Optional[int],
    seed: Optional[int],
    scheme: Optional[str],
    out: Optional[str],
    config_path: Optional[str],
    model: Optional[str],
    level: Optional[int],
    label: str,
    exponent: Optional[float],
    kappa_shift: float,
    force: bool,
) -> None:
    """Monte Carlo test of the coset one-point martingale at the engine solution."""
    mu, nu = _parse_label(label)
    config = _load(config_path)
    solver = config["solver"]
    model = _pick(model, solver, "model")
    level = _pick(level, solver, "level")
    run = _sim_config(config, kappa=kappa, tau=tau, dt=dt, horizon=horizon, samples=samples, seed=seed, scheme=scheme)
    embedding = _embedding(model)
    try:
        field = make_field(embedding, level, mu, nu)
        used, full = _engine_systems(field, embedding, solver["mode"], solver["normalization"])
        result = solve_constraints(full.subset())
        click.echo(f"{used}: {format_result(result)}")
        report = coset_onepoint_martingale_mc(run, used, embedding, result, p=exponent, kappa_shift=kappa_shift, force=force)
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    resolved = _resolved(
        config, run, solver={**solver, "model": model, "level": level, "field": [mu, nu]},
        observable={"p": exponent, "kappa_shift": kappa_shift, "force": force},
    )
    _finish(ctx, report, out, "sim coset-martingale", resolved, [config_path] if config_path else [])


@sim.command("generator-check")
@sim_options
@click.option("--model", default=None, help="Coset model whose complement drives the walk")
@click.option("--mu", type=int, default=1, help="su(2) highest weight of the irrep")
@click.option("--tolerance", type=float, default=0.05, help="Maximum relative error")
@click.pass_context
def generator_check(
    ctx: click.Context,
    kappa: Optional[float],
    tau: Optional[float],
    dt: Optional[float],
    horizon: Optional[float],
    samples: Optional[int],
    seed: Optional[int],
    scheme: Optional[str],
    out: Optional[str],
    config_path: Optional[str],
    model: Optional[str],
    mu: int,
    tolerance: float,
) -> None:
    """Compare the group-walk mean with the matrix-exponential generator."""
    config = _load(config_path)
    model = _pick(model, config["solver"], "model")
    run = _sim_config(
        config, kappa=kappa, tau=1.0 if tau is None else tau, dt=dt, horizon=horizon,
        samples=samples, seed=seed, scheme=scheme,
    )
    try:
        rep = su2_irrep(mu)
        action = complement_action(_embedding(model), rep)
        v0 = np.zeros(rep.dim, dtype=complex)
        v0[0] = 1.0
        estimate = group_walk_expectation(run, action, v0)
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    click.echo(f"relative error {estimate.relative_error:.3e} over {estimate.samples} streams")
    if out:
        resolved = _resolved(config, run, solver={"model": model}, irrep={"mu": mu})
        inputs = [config_path] if config_path else []
        target = _write_artifact(
            to_json(estimate), out, "sim generator-check", resolved, inputs=inputs, seed=run.seed
        )
        click.echo(f"✓ Wrote {target}")
    if estimate.relative_error < tolerance:
        click.echo("✓ Generator check passed")
        return
    click.echo(f"✗ Relative error above {tolerance}", err=True)
    ctx.exit(EXIT_FAILED)


if __name__ == "__main__":
    cli()
