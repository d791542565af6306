"""
Command-line surface: solve, certify, decompose, gen, bench and verify.
"""
import functools
import json
import logging
from dataclasses import replace
from fractions import Fraction
from itertools import cycle
from typing import Optional

import click
from marshmallow import ValidationError as MarshmallowValidationError

from stpath import SolverApp
from stpath.models.solution import LpSolution
from stpath.repositories.artifact_repository import ArtifactRepository
from stpath.schemas.certificate_schema import (
    Bomc85ReportSchema, CertificateSchema, ParityDumpSchema, ReconnectDumpSchema
)
from stpath.schemas.decomposition_schema import CutChainSchema, DecompositionSchema
from stpath.schemas.instance_schema import LpDumpSchema
from stpath.schemas.run_config_schema import RunConfigSchema
from stpath.services.bomd_service import BomdResult, BomdService
from stpath.services.errors import CertificationError, InputError, InternalError
from stpath.services.instance_service import FORMATS, KINDS

logger = logging.getLogger(__name__)

certificate_schema = CertificateSchema()
cut_chain_schema = CutChainSchema()
decomposition_schema = DecompositionSchema()
lp_dump_schema = LpDumpSchema()
reconnect_schema = ReconnectDumpSchema()
parity_schema = ParityDumpSchema()
bomc_schema = Bomc85ReportSchema()


def handle_service_errors(func):
    """Decorator mapping service errors to exit codes and stderr diagnostics."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        app = ctx.find_object(SolverApp)
        try:
            return func(*args, **kwargs)
        except MarshmallowValidationError as e:
            click.echo(f"error: invalid input: {e.messages}", err=True)
            ctx.exit(app.exit_code('INPUT_ERROR'))
        except InputError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(app.exit_code('INPUT_ERROR'))
        except (OSError, json.JSONDecodeError) as e:
            click.echo(f"error: cannot read input: {e}", err=True)
            ctx.exit(app.exit_code('INPUT_ERROR'))
        except InternalError as e:
            click.echo(f"assertion failure: {e}", err=True)
            ctx.exit(app.exit_code('ASSERTION_FAILURE'))
    return wrapper


def run_options(func):
    """Options shared by every command that runs the pipeline."""
    options = [
        click.option('--gamma', default=None, help='Path weight of the parity correction, as p/q'),
        click.option('--threads', type=int, default=None, help='Worker threads for the per-tree map'),
        click.option('--k-cap', type=int, default=None, help='Largest common denominator K'),
        click.option('--matching-cap', type=int, default=None, help='Largest |T| for exact T-joins'),
        click.option('--brute-force-cap', type=int, default=None, help='Largest n for Held-Karp'),
        click.option('--enumeration-cap', type=int, default=None, help='Largest |Q(S)| for full subset checks'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def input_options(func):
    """Options locating and reading the instance file."""
    options = [
        click.option('--in', 'in_path', required=True, type=click.Path(dir_okay=False), help='Instance file'),
        click.option('--format', 'fmt', type=click.Choice(FORMATS), default='json', show_default=True),
        click.option('--closure', is_flag=True, help='Apply the metric closure before validation'),
        click.option('--s', 's', type=int, default=None, help='Override the start vertex'),
        click.option('--t', 't', type=int, default=None, help='Override the end vertex'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_config(app, gamma, threads, k_cap, matching_cap, brute_force_cap, enumeration_cap):
    """Validate run options, falling back to the application config."""
    data = {
        'gamma': gamma if gamma is not None else app.config['GAMMA'],
        'threads': threads if threads is not None else app.config['THREADS'],
        'k_cap': k_cap if k_cap is not None else app.config['K_CAP'],
        'matching_cap': matching_cap if matching_cap is not None else app.config['MATCHING_CAP'],
        'brute_force_cap': brute_force_cap if brute_force_cap is not None else app.config['BRUTE_FORCE_CAP'],
        'enumeration_cap': enumeration_cap if enumeration_cap is not None else app.config['ENUMERATION_CAP'],
    }
    return RunConfigSchema().load(data)


def _repository(app) -> ArtifactRepository:
    return app.artifact_repository()


def _load_instance(app, in_path, fmt, closure, s, t):
    stream = _repository(app).read_bytes(in_path)
    return app.instance_service().load_instance(stream, fmt, closure=closure, s=s, t=t)


def _load_solution(app, path: str, instance) -> LpSolution:
    """Read an x* dump [[u, v, "p/q"], ...] (or {"rows": ..., "value": ...}) for an instance."""
    payload = _repository(app).read_json(path)
    if isinstance(payload, list):
        payload = {'rows': payload, 'value': '0'}
    data = lp_dump_schema.load(payload)
    x = {(min(u, v), max(u, v)): value for u, v, value in data['rows']}
    if any(max(e) >= instance.n for e in x):
        raise InputError(f"x* references a vertex outside 0..{instance.n - 1}")
    value = sum((instance.costs[e] * w for e, w in x.items()), Fraction(0))
    return LpSolution(n=instance.n, s=instance.s, t=instance.t, x=x, value=value)


def _dump_lp(app, path: str, xstar: LpSolution):
    rows = [(u, v, value) for (u, v), value in xstar.x.items()]
    _repository(app).write_json(path, lp_dump_schema.dump({'rows': rows, 'value': xstar.value})['rows'])


def _write_dumps(app, result: BomdResult, lp_dump, dump_cuts, dump_reconnect, dump_parity):
    repository = _repository(app)
    if lp_dump:
        _dump_lp(app, lp_dump, result.xstar)
    if dump_cuts:
        repository.write_json(dump_cuts, cut_chain_schema.dump(result.chain))
    if dump_reconnect:
        repository.write_json(dump_reconnect, reconnect_schema.dump({'trees': result.runs}))
    if dump_parity:
        repository.write_json(dump_parity, parity_schema.dump({'trees': result.runs}))


def _report(result: BomdResult):
    certificate = result.certificate
    click.echo(f"instance: {certificate.instance or '-'}")
    click.echo(f"c(x*): {certificate.lp_cost}  c(p*): {certificate.p_cost}")
    click.echo(f"B1: {certificate.b1}  B2: {certificate.b2}  guarantee: {certificate.guarantee}")
    click.echo(f"tour: {certificate.tour.path_cost} ({certificate.tour.kind}, tree {certificate.tour.tree_index})")
    if certificate.baseline is not None:
        click.echo(f"baseline: {certificate.baseline.path_cost}")
    if certificate.opt is not None:
        click.echo(f"OPT: {certificate.opt}")
    click.echo(f"certificate: {'valid' if certificate.valid else 'INVALID'} ({len(certificate.checks)} rows)")


def _with_source(result: BomdResult, source: str, lp_path: Optional[str] = None) -> BomdResult:
    extras = {'source': source}
    if lp_path:
        extras['lp'] = lp_path
    result.certificate = replace(result.certificate, extras=extras)
    return result


@click.group()
@click.pass_context
def cli(ctx):
    """Exact best-of-many-with-deletion solver for the metric s-t path TSP."""
    if ctx.obj is None:
        from stpath import create_app
        ctx.obj = create_app('default')


@cli.command()
@input_options
@run_options
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Certificate JSON')
@click.option('--lp-dump', type=click.Path(dir_okay=False), default=None, help='Write x* as JSON rows')
@click.option('--dump-cuts', type=click.Path(dir_okay=False), default=None, help='Write the narrow-cut chain')
@click.option('--dump-reconnect', type=click.Path(dir_okay=False), default=None, help='Write reconnection data')
@click.option('--dump-parity', type=click.Path(dir_okay=False), default=None, help='Write the y_F vectors')
@click.pass_obj
@handle_service_errors
def solve(app, in_path, fmt, closure, s, t, gamma, threads, k_cap, matching_cap, brute_force_cap,
          enumeration_cap, out, lp_dump, dump_cuts, dump_reconnect, dump_parity):
    """Solve an instance and certify the returned tour."""
    run = _run_config(app, gamma, threads, k_cap, matching_cap, brute_force_cap, enumeration_cap)
    instance = _load_instance(app, in_path, fmt, closure, s, t)
    service = BomdService.from_config(run.service_config())
    result = _with_source(service.run_bomd(instance, run.gamma), 'lp')
    _report(result)
    _write_dumps(app, result, lp_dump, dump_cuts, dump_reconnect, dump_parity)
    if out:
        repository = _repository(app)
        repository.write_json(out, certificate_schema.dump(result.certificate))
        repository.write_timings(out, result.timings)
    return app.exit_code('OK')


@cli.command()
@input_options
@run_options
@click.option('--lp', 'lp_path', type=click.Path(dir_okay=False), default=None,
              help='Certify this x* instead of the LP optimum')
@click.option('--bomc', is_flag=True, help='Also run the check without deletion (gamma = 1/8)')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Certificate JSON')
@click.option('--dump-cuts', type=click.Path(dir_okay=False), default=None, help='Write the narrow-cut chain')
@click.option('--dump-reconnect', type=click.Path(dir_okay=False), default=None, help='Write reconnection data')
@click.option('--dump-parity', type=click.Path(dir_okay=False), default=None, help='Write the y_F vectors')
@click.pass_obj
@handle_service_errors
def certify(app, in_path, fmt, closure, s, t, gamma, threads, k_cap, matching_cap, brute_force_cap,
            enumeration_cap, lp_path, bomc, out, dump_cuts, dump_reconnect, dump_parity):
    """Run the full ledger, special-case certificates included, and report the flags."""
    run = _run_config(app, gamma, threads, k_cap, matching_cap, brute_force_cap, enumeration_cap)
    instance = _load_instance(app, in_path, fmt, closure, s, t)
    service = BomdService.from_config(run.service_config())
    if lp_path:
        xstar = _load_solution(app, lp_path, instance)
        result = _with_source(service.run_from_solution(instance, xstar, run.gamma), 'supplied', lp_path)
    else:
        result = _with_source(service.run_bomd(instance, run.gamma), 'lp')
    _report(result)
    flags = result.certificate.flags
    click.echo(
        f"flags: disjoint={flags.disjoint} two_per_edge={flags.two_per_edge} "
        f"all_small={flags.all_small} one_not_small={flags.one_not_small} z={flags.z}"
    )
    _write_dumps(app, result, None, dump_cuts, dump_reconnect, dump_parity)

    bomc_report = None
    if bomc:
        bomc_report = service.run_bomc_85(instance, result.xstar)
        click.echo(f"without deletion: average {bomc_report.average_cost} <= {bomc_report.bound}")
    if out:
        repository = _repository(app)
        payload = certificate_schema.dump(result.certificate)
        if bomc_report is not None:
            payload['bomc'] = bomc_schema.dump(bomc_report)
        repository.write_json(out, payload)
        repository.write_timings(out, result.timings)
    return app.exit_code('OK')


@cli.command()
@input_options
@run_options
@click.option('--lp', 'lp_path', type=click.Path(dir_okay=False), default=None, help='Decompose this x*')
@click.option('--generic', is_flag=True, help='Plain convex combination with equality-trimmed lonely edges')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Decomposition JSON')
@click.option('--lp-dump', type=click.Path(dir_okay=False), default=None, help='Write x* as JSON rows')
@click.pass_obj
@handle_service_errors
def decompose(app, in_path, fmt, closure, s, t, gamma, threads, k_cap, matching_cap, brute_force_cap,
              enumeration_cap, lp_path, generic, out, lp_dump):
    """Write x* as a layered (or generic) convex combination of spanning trees."""
    run = _run_config(app, gamma, threads, k_cap, matching_cap, brute_force_cap, enumeration_cap)
    instance = _load_instance(app, in_path, fmt, closure, s, t)
    service = BomdService.from_config(run.service_config())
    xstar = _load_solution(app, lp_path, instance) if lp_path else service.solve_lp(instance)
    layers, combination, stats = service.decompose(xstar, layered=not generic)
    payload = decomposition_schema.dump(DecompositionSchema.payload(combination, stats, layers))
    click.echo(f"{len(combination)} trees, {layers.k} layers, zetas {[str(z) for z in layers.zetas]}")
    if lp_dump:
        _dump_lp(app, lp_dump, xstar)
    if out:
        _repository(app).write_json(out, payload)
    else:
        click.echo(_repository(app).dumps(payload), nl=False)
    return app.exit_code('OK')


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Vertex count')
@click.option('--seed', type=int, required=True, help='Random seed')
@click.option('--kind', type=click.Choice(KINDS), default='euclidean', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Instance JSON (stdout if omitted)')
@click.pass_obj
@handle_service_errors
def gen(app, n, seed, kind, out):
    """Generate a seeded random metric instance."""
    service = app.instance_service()
    payload = service.dump_instance(service.gen_random_metric(n, seed, kind))
    if out:
        _repository(app).write_json(out, payload)
    else:
        click.echo(_repository(app).dumps(payload), nl=False)
    return app.exit_code('OK')


@cli.command()
@run_options
@click.option('--seeds', type=int, default=None, help='Number of instances')
@click.option('--n-min', type=int, default=None)
@click.option('--n-max', type=int, default=None)
@click.option('--kind', 'kinds', type=click.Choice(KINDS), multiple=True, help='Instance kinds, cycled')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Summary JSON')
@click.pass_obj
@handle_service_errors
def bench(app, gamma, threads, k_cap, matching_cap, brute_force_cap, enumeration_cap, seeds, n_min, n_max,
          kinds, out):
    """Solve a seeded suite and summarize the worst observed ratios."""
    run = _run_config(app, gamma, threads, k_cap, matching_cap, brute_force_cap, enumeration_cap)
    seeds = seeds if seeds is not None else app.config['BENCH_SEEDS']
    n_min = n_min if n_min is not None else app.config['BENCH_N_MIN']
    n_max = n_max if n_max is not None else app.config['BENCH_N_MAX']
    if not 3 <= n_min <= n_max:
        raise InputError("bench needs 3 <= n-min <= n-max")
    instances = app.instance_service()
    service = BomdService.from_config(run.service_config())

    worst_lp = worst_opt = Fraction(0)
    timings = {}
    failures = []
    kind_cycle = cycle(kinds or ('euclidean', 'graph-metric'))
    for seed in range(seeds):
        n = n_min + seed % (n_max - n_min + 1)
        instance = instances.gen_random_metric(n, seed, next(kind_cycle))
        try:
            result = service.run_bomd(instance, run.gamma)
        except CertificationError as e:
            logger.error("%s failed certification: %s", instance.name, e)
            failures.append(instance.name)
            continue
        certificate = result.certificate
        if certificate.lp_cost:
            worst_lp = max(worst_lp, certificate.tour.path_cost / certificate.lp_cost)
        if certificate.opt:
            worst_opt = max(worst_opt, certificate.tour.path_cost / certificate.opt)
        for stage, seconds in result.timings.items():
            timings[stage] = timings.get(stage, 0.0) + seconds

    summary = {
        'instances': seeds,
        'gamma': str(run.gamma),
        'max_tour_over_lp': str(worst_lp),
        'max_tour_over_opt': str(worst_opt),
        'failures': failures
    }
    click.echo(f"{'instances':<20}{seeds}")
    click.echo(f"{'max tour/OPT_LP':<20}{worst_lp}")
    click.echo(f"{'max tour/OPT':<20}{worst_opt}")
    click.echo(f"{'failures':<20}{len(failures)}")
    for stage, seconds in timings.items():
        click.echo(f"{'time ' + stage:<20}{seconds:.3f}s")
    if out:
        repository = _repository(app)
        repository.write_json(out, summary)
        repository.write_timings(out, timings)
    if failures:
        click.get_current_context().exit(app.exit_code('ASSERTION_FAILURE'))
    return app.exit_code('OK')


@cli.command()
@input_options
@click.option('--cert', 'cert_path', required=True, type=click.Path(dir_okay=False), help='Stored certificate')
@click.option('--lp', 'lp_path', type=click.Path(dir_okay=False), default=None,
              help='x* the certificate was built from, when not the LP optimum')
@run_options
@click.pass_obj
@handle_service_errors
def verify(app, in_path, fmt, closure, s, t, cert_path, lp_path, gamma, threads, k_cap, matching_cap,
           brute_force_cap, enumeration_cap):
    """Recompute a stored certificate from its instance and compare every row exactly."""
    stored = certificate_schema.load(_repository(app).read_json(cert_path), unknown='exclude')
    run = _run_config(app, stored['gamma'] if gamma is None else gamma, threads, k_cap, matching_cap,
                      brute_force_cap, enumeration_cap)
    instance = _load_instance(app, in_path, fmt, closure, s, t)
    service = BomdService.from_config(run.service_config())
    lp_path = lp_path or stored['extras'].get('lp')
    if stored['extras'].get('source') == 'supplied':
        if not lp_path:
            raise InputError("Certificate was built from a supplied x*; pass it with --lp")
        result = service.run_from_solution(instance, _load_solution(app, lp_path, instance), run.gamma)
    else:
        result = service.run_bomd(instance, run.gamma)

    fresh = certificate_schema.load(certificate_schema.dump(result.certificate))
    differing = sorted(key for key in fresh if key != 'extras' and fresh[key] != stored.get(key))
    if differing:
        click.echo(f"certificate mismatch in: {', '.join(differing)}", err=True)
        click.get_current_context().exit(app.exit_code('ASSERTION_FAILURE'))
    click.echo(f"certificate verified: {len(fresh['checks'])} rows match")
    return app.exit_code('OK')
