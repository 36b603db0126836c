# src/cli.py
"""Command-line front end: ``python -m src.cli <command> ...``.

Standard output carries one canonical JSON document per run; the rich summary
goes to standard error. Exit codes: 0 success or pass, 1 usage or domain
error, 2 verification failure, 3 no verdict (searched operator norm).
"""
from __future__ import annotations

import functools
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import click
import numpy as np

from src.config import config
from src.constants import constants_report
from src.display import display
from src.errors import LatticeError, SupportTooLarge
from src.estimates.duality import duality_check
from src.estimates.estimate import lower_estimate_const, upper_estimate_const
from src.estimates.renorm import (
    renorm_lower_p,
    renorm_lower_p_sampled,
    renorm_upper_q,
    renorm_upper_q_dual_route,
    renorm_upper_q_sampled,
)
from src.fourier import amalgam_pair, dft_operator, hausdorff_young_maximal_check, mpz_check
from src.guardrails.schemas import validate_report
from src.lattice.documents import load_document, norm_from_options
from src.lattice.duality import kothe_dual_norm
from src.lattice.index import INF, conjugate, is_inf, parse_index
from src.lattice.norms import ClassicalLorentz, QuasiNorm, WeightedLp, optional_kappa
from src.lattice.spaces import AtomicSpace, ComplexVector, LatticeVector
from src.models import CKReport, EstimateResult, RunConfig, SearchConfig
from src.observability import get_tracer
from src.operators.filtration import prefix_filtration, random_filtration
from src.operators.harness import ck_verify, dual_maximal_verify, triangular_exhaustive, triangular_verify
from src.operators.linear import LinearOp
from src.reports import build_report, generate_suite_html, to_jsonable, write_report
from src.suite import run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_NO_VERDICT = 3

VERDICT_EXIT = {"pass": EXIT_OK, "fail": EXIT_FAIL, "no-verdict": EXIT_NO_VERDICT}


class IndexType(click.ParamType):
    """Exponent in (0, inf]: numbers, fractions like 3/2, or inf."""

    name = "index"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            return parse_index(value)
        except LatticeError as e:
            self.fail(str(e), param, ctx)


class FloatList(click.ParamType):
    name = "floats"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return [float(v) for v in value]
        try:
            return [float(v) for v in str(value).split(",") if v.strip()]
        except ValueError:
            self.fail(f"expected comma-separated numbers, got {value!r}", param, ctx)


INDEX = IndexType()
FLOATS = FloatList()


@dataclass(frozen=True)
class CLIState:
    cfg: SearchConfig
    output: Optional[str]


class CKGroup(click.Group):
    """Click group whose usage errors exit with 1 instead of click's 2."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.exceptions.Abort:
            display.show_error("Aborted")
            rv = EXIT_USAGE
        except click.ClickException as e:
            display.show_error("Usage error", e.format_message())
            rv = EXIT_USAGE
        code = rv if isinstance(rv, int) else EXIT_OK
        if standalone_mode:
            sys.exit(code)
        return code


def _load_default_map(ctx: click.Context, param: click.Parameter, value: Optional[str]):
    """``--config FILE``: JSON whose keys mirror the flags, per-command flags nested under the command name."""
    if value:
        try:
            with open(value, encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise click.BadParameter(f"cannot read config file: {e}", ctx=ctx, param=param)
        if not isinstance(data, dict):
            raise click.BadParameter("config file must hold a JSON object", ctx=ctx, param=param)
        ctx.default_map = {**(ctx.default_map or {}), **data}
    return value


def handle_errors(fn: Callable[..., int]) -> Callable[..., int]:
    """Map domain errors raised inside a command to exit code 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LatticeError as e:
            display.show_error(type(e).__name__, str(e))
            return EXIT_USAGE
        except (OSError, json.JSONDecodeError) as e:
            display.show_error("Input could not be read", str(e))
            return EXIT_USAGE

    return wrapper


def emit(command: str, result: Any, code: int = EXIT_OK) -> int:
    """Build, validate and write the report; return ``code`` unless the envelope is invalid."""
    ctx = click.get_current_context()
    state: CLIState = ctx.obj
    run = RunConfig(command=command, params=to_jsonable(ctx.params), seed=state.cfg.seed, output=state.output)
    document = build_report(command, {**run.model_dump(exclude={"output"}), "search": state.cfg.reproducible()}, result)
    ok, violations = validate_report(document)
    if not ok:
        display.show_error("Report failed schema validation", "; ".join(violations))
        return EXIT_USAGE
    text = write_report(document, state.output)
    if state.output:
        display.console.print(f"[bold green]Report:[/bold green] {state.output}")
    else:
        click.echo(text, nl=False)
    get_tracer().log_node("cli", "done", command=command, exit_code=code)
    return code


def _resolve_norm(
    doc: Optional[str],
    family: Optional[str],
    atoms: Optional[list],
    f: Optional[list],
    **options,
) -> tuple[AtomicSpace, QuasiNorm, Dict[str, LatticeVector]]:
    if doc:
        space, norm, vectors = load_document(doc)
    else:
        if not family:
            raise click.UsageError("give either --doc FILE or --family")
        if not atoms and not f:
            raise click.UsageError("give --atoms or --f so the space size is known")
        space = AtomicSpace(tuple(atoms) if atoms else tuple([1.0] * len(f)))
        if "blocks" in options and isinstance(options["blocks"], str):
            options["blocks"] = json.loads(options["blocks"])
        norm = norm_from_options(space, family, **options)
        vectors = {}
    if f:
        vectors["f"] = space.vector(f)
    return space, norm, vectors


def norm_options(fn):
    """Options shared by commands that build a norm."""
    options = [
        click.option("--doc", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON lattice document"),
        click.option("--family", type=click.Choice(["lp", "lambda", "gamma", "lorentz", "weak", "amalgam"]), default=None),
        click.option("--atoms", type=FLOATS, default=None, help="Atom weights, e.g. 1,1,2"),
        click.option("--f", type=FLOATS, default=None, help="Vector values, e.g. 1,-2,0.5"),
        click.option("--p", "norm_p", type=INDEX, default=None),
        click.option("--q", "norm_q", type=INDEX, default=None),
        click.option("--r", "norm_r", type=INDEX, default=None),
        click.option("--s", "norm_s", type=INDEX, default=None),
        click.option("--weight", default=None, help='JSON weight, e.g. {"kind":"power","c":1,"a":0}'),
        click.option("--blocks", default=None, help="JSON block ranges, e.g. [[0,2],[2,4]]"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _norm_from_params(doc, family, atoms, f, norm_p, norm_q, norm_r, norm_s, weight, blocks):
    return _resolve_norm(doc, family, atoms, f, p=norm_p, q=norm_q, r=norm_r, s=norm_s, weight=weight, blocks=blocks)


@click.group(cls=CKGroup)
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_default_map,
    is_eager=True,
    expose_value=False,
    help="JSON file of default flag values",
)
@click.option("--seed", type=int, default=lambda: config.SEED, show_default="CK_SEED")
@click.option("--workers", type=click.IntRange(min=1), envvar="CK_WORKERS", default=1, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=None, help="Sampled vectors per verification")
@click.option("--restarts", type=click.IntRange(min=1), default=None)
@click.option("--iterations", type=click.IntRange(min=1), default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here instead of stdout")
@click.option("--quiet", is_flag=True, help="No summary on standard error")
@click.pass_context
def cli(ctx, seed, workers, trials, restarts, iterations, output, quiet):
    """Quasi-Banach lattices, estimate constants and maximal-operator verification."""
    display.set_quiet(quiet)
    display.show_header(ctx.invoked_subcommand or "")
    display.show_config_status()
    cfg = SearchConfig.from_config(seed=seed, workers=workers, trials=trials, restarts=restarts, iterations=iterations)
    if config.TRACE:
        config.setup_directories()
    ctx.obj = CLIState(cfg=cfg, output=output)
    get_tracer().log_node("cli", "start", command=ctx.invoked_subcommand, seed=seed)


@cli.command()
@norm_options
@handle_errors
def norm(**params):
    """Evaluate a quasi-norm on every vector of a document."""
    space, q_norm, vectors = _norm_from_params(**params)
    if not vectors:
        raise click.UsageError("no vectors to evaluate; add them to the document or pass --f")
    values = {name: float(q_norm(v)) for name, v in sorted(vectors.items())}
    result = {"norm": q_norm.describe(), "kappa": optional_kappa(q_norm), "values": values}
    display.show_mapping(f"{q_norm.family} norm", values)
    return emit("norm", result)


def _vector(vectors: Dict[str, LatticeVector], name: str) -> LatticeVector:
    if name not in vectors:
        raise click.UsageError(f"vector {name!r} not found; available: {sorted(vectors) or 'none'}")
    return vectors[name]


@cli.command()
@click.option(
    "--kind",
    type=click.Choice(["lower", "upper", "renorm-lower", "renorm-upper", "renorm-upper-dual", "dual-norm", "duality"]),
    required=True,
)
@click.option("--exponent", type=INDEX, default=None, help="p (lower side) or q (upper side)")
@click.option("--n", "count", type=click.IntRange(min=2), default=2, show_default=True, help="Number of disjoint pieces")
@click.option("--vector", "vector_name", default="f", show_default=True)
@click.option("--sampled", is_flag=True, help="Sampled partitions instead of exhaustive enumeration")
@norm_options
@click.pass_obj
@handle_errors
def estimate(state: CLIState, kind, exponent, count, vector_name, sampled, **params):
    """Estimate constants, partition renormings, Köthe dual norms and duality checks."""
    cfg = state.cfg
    _, q_norm, vectors = _norm_from_params(**params)
    if kind != "dual-norm" and exponent is None:
        raise click.UsageError(f"--exponent is required for --kind {kind}")

    if kind == "lower":
        result = lower_estimate_const(q_norm, exponent, count, cfg)
    elif kind == "upper":
        result = upper_estimate_const(q_norm, exponent, count, cfg)
    elif kind == "duality":
        report = duality_check(q_norm, exponent, count, cfg)
        display.show_mapping("Duality", {"gap": report.gap, "mirror_gap": report.mirror_gap})
        return emit("estimate", report)
    elif kind == "dual-norm":
        result = kothe_dual_norm(q_norm, _vector(vectors, vector_name), cfg)
    elif kind == "renorm-upper-dual":
        result = renorm_upper_q_dual_route(q_norm, exponent, _vector(vectors, vector_name), cfg)
    else:
        f = _vector(vectors, vector_name)
        lower = kind == "renorm-lower"
        result = None
        if not sampled:
            try:
                value = renorm_lower_p(q_norm, exponent, f) if lower else renorm_upper_q(q_norm, exponent, f)
                result = EstimateResult.closed_form(value, method="exhaustive-partitions")
            except SupportTooLarge as e:
                display.show_warning(f"{e}; falling back to sampled partitions")
        if result is None:
            result = renorm_lower_p_sampled(q_norm, exponent, f, cfg) if lower else renorm_upper_q_sampled(q_norm, exponent, f, cfg)

    display.show_estimate(kind, result)
    return emit("estimate", result)


@cli.command()
@click.option("--p", type=INDEX, required=True)
@click.option("--q", type=INDEX, required=True)
@click.option("--kappa", type=click.FloatRange(min=1), default=1.0, show_default=True)
@click.option("--ell", type=click.FloatRange(min=1), default=1.0, show_default=True)
@click.option("--u", type=click.FloatRange(min=1), default=1.0, show_default=True)
@handle_errors
def constants(p, q, kappa, ell, u):
    """Closed-form constants for the maximal inequality."""
    report = constants_report(p, q, kappa, ell, u)
    display.show_constants(report)
    return emit("constants", report)


def _operator(kind: str, space: AtomicSpace, rng: np.random.Generator) -> LinearOp:
    if kind == "dft":
        return dft_operator(space.size)
    if kind == "identity":
        return LinearOp.identity(space)
    return LinearOp(rng.standard_normal((space.size, space.size)), space, space)


def _verify_norms(family: str, n: int, p, q, r, s, blocks: int) -> tuple[QuasiNorm, QuasiNorm, float, float]:
    space = AtomicSpace.unit(n)
    if family == "amalgam":
        if r is None or s is None:
            raise click.UsageError("--family amalgam needs --r and --s")
        dom, cod = amalgam_pair(n, r, s, blocks)
        p = max(r, s) if p is None else p
        q = min(conjugate(s), conjugate(r)) if q is None else q
        return dom, cod, p, q
    if p is None or q is None:
        raise click.UsageError(f"--family {family} needs --p and --q")
    if family == "lp":
        return WeightedLp(space, p), WeightedLp(space, q), p, q
    # L_(p,r) into L_(q,s); the weak space L_(q,inf) by default
    dom = ClassicalLorentz(space, p, 1.0 if r is None else r)
    cod = WeightedLp(space, INF) if is_inf(q) else ClassicalLorentz(space, q, INF if s is None else s)
    return dom, cod, p, q


@cli.command()
@click.option("--family", type=click.Choice(["lp", "lorentz", "amalgam"]), default="lp", show_default=True)
@click.option("--op", "op_kind", type=click.Choice(["dft", "random", "identity"]), default="random", show_default=True)
@click.option("--n", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--p", type=INDEX, default=None)
@click.option("--q", type=INDEX, default=None)
@click.option("--r", type=INDEX, default=None, help="Second Lorentz index of the domain, or the amalgam local exponent")
@click.option("--s", type=INDEX, default=None, help="Second Lorentz index of the codomain, or the amalgam global exponent")
@click.option("--blocks", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--filtration", type=click.Choice(["prefix", "random"]), default="prefix", show_default=True)
@click.option("--kappa", type=click.FloatRange(min=1), default=None, help="Override the codomain triangle constant")
@click.option("--ell", type=click.FloatRange(min=1), default=None, help="Override ℓ_(p),2 of the domain")
@click.option("--u", type=click.FloatRange(min=1), default=None, help="Override u^(q),2 of the codomain")
@click.option("--triangular", "parts", type=click.IntRange(min=0), default=0, help="Check triangular sums over this many parts")
@click.option("--exhaustive", is_flag=True, help="With --triangular: enumerate every part assignment")
@click.pass_obj
@handle_errors
def verify(state: CLIState, family, op_kind, n, p, q, r, s, blocks, filtration, kappa, ell, u, parts, exhaustive):
    """Sample ‖T*f‖ against γ‖T‖‖f‖ for a matrix operator."""
    cfg = state.cfg
    dom, cod, p, q = _verify_norms(family, n, p, q, r, s, blocks)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n]))
    T = _operator(op_kind, dom.space, rng)
    if parts and exhaustive:
        report = triangular_exhaustive(T, dom, cod, p, q, parts, cfg, kappa=kappa, ell=ell, u=u)
    elif parts:
        report = triangular_verify(T, dom, cod, p, q, parts, cfg, kappa=kappa, ell=ell, u=u)
    else:
        A = prefix_filtration(T.domain) if filtration == "prefix" else random_filtration(T.domain, rng)
        report = ck_verify(T, dom, cod, A, p, q, cfg, kappa=kappa, ell=ell, u=u)
    display.show_ck_report(report, "Triangular sums" if parts else "Maximal inequality")
    return emit("verify", report, VERDICT_EXIT[report.verdict])


@cli.command("dual-verify")
@click.option("--op", "op_kind", type=click.Choice(["dft", "random", "identity"]), default="random", show_default=True)
@click.option("--n", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--p", type=INDEX, required=True)
@click.option("--q", type=INDEX, required=True)
@click.option("--filtration", type=click.Choice(["prefix", "random"]), default="random", show_default=True)
@click.pass_obj
@handle_errors
def dual_verify(state: CLIState, op_kind, n, p, q, filtration):
    """The maximal operator of the Köthe dual T': l^{q'} -> l^{p'}."""
    cfg = state.cfg
    space = AtomicSpace.unit(n)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n]))
    T = _operator(op_kind, space, rng)
    A = prefix_filtration(T.codomain) if filtration == "prefix" else random_filtration(T.codomain, rng)
    report = dual_maximal_verify(T, WeightedLp(space, p), WeightedLp(space, q), A, p, q, cfg)
    display.show_ck_report(report, "Köthe dual maximal inequality")
    return emit("dual-verify", report, VERDICT_EXIT[report.verdict])


@cli.command()
@click.option("--mode", type=click.Choice(["hausdorff-young", "mpz"]), default="hausdorff-young", show_default=True)
@click.option("--n", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--r", type=INDEX, default=None)
@click.option("--s", type=INDEX, default=None)
@click.option("--blocks", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--offset", type=click.IntRange(min=0), default=None, help="Position of time index 0 (default n // 2)")
@click.option("--signals", type=click.IntRange(min=1), default=100, show_default=True)
@click.pass_obj
@handle_errors
def fourier(state: CLIState, mode, n, r, s, blocks, offset, signals):
    """Maximal DFT on amalgam spaces, or the pointwise interval-prefix inequality."""
    cfg = state.cfg
    if mode == "hausdorff-young":
        if r is None or s is None:
            raise click.UsageError("--mode hausdorff-young needs --r and --s")
        report: CKReport = hausdorff_young_maximal_check(n, r, s, blocks, cfg, offset)
        display.show_ck_report(report, "Maximal Hausdorff-Young")
        return emit("fourier", report, VERDICT_EXIT[report.verdict])

    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n, signals]))
    space = AtomicSpace.unit(n)
    Z = rng.standard_normal((signals, n)) + 1j * rng.standard_normal((signals, n))
    reports = [mpz_check(ComplexVector(space, z), offset) for z in Z]
    result = {
        "n": n,
        "signals": signals,
        "holds": all(rep.holds for rep in reports),
        "violations": sum(not rep.holds for rep in reports),
        "min_slack": min(rep.min_slack for rep in reports),
        "max_violation": max(rep.max_violation for rep in reports),
    }
    display.show_mapping("Interval vs prefix maximal DFT", result)
    return emit("fourier", result, EXIT_OK if result["holds"] else EXIT_FAIL)


@cli.command()
@click.option("--quick", is_flag=True, help="Reduced sample counts")
@click.option("--html", type=click.Path(dir_okay=False), default=None, help="Also write an HTML summary")
@click.pass_obj
@handle_errors
def suite(state: CLIState, quick, html):
    """Run the full acceptance battery."""
    report = run_suite(state.cfg, quick=quick)
    display.show_suite(report)
    if html:
        path = generate_suite_html(report, html)
        display.console.print(f"[bold green]HTML Report:[/bold green] {path}")
    return emit("suite", report, EXIT_OK if report.passed else EXIT_FAIL)


def main(argv: Optional[list[str]] = None) -> int:
    return cli.main(args=argv, prog_name="lattice-maximal", standalone_mode=False)


if __name__ == "__main__":
    sys.exit(main())
