"""
Surfaces Blueprint
Commands for model validation, Zariski decompositions, walks and mu
"""
import click
from flask import Blueprint, current_app

from app.blueprints.common import emit, json_errors, load_surface_arg, output_option, parse_vector
from app.services.export_service import ExportService
from app.services.okounkov_service import OkounkovService
from app.services.surface_service import SurfaceService
from app.services.zariski_service import ZariskiService

surfaces_bp = Blueprint('surfaces', __name__, cli_group=None)


@surfaces_bp.cli.command('validate')
@click.argument('surface')
@json_errors
def validate(surface):
    """Check the lattice, catalog and cone of SURFACE (file, inline JSON or bundled name)"""
    S = load_surface_arg(surface)
    report = SurfaceService.validate_surface(S)
    emit(report)
    if not report['valid']:
        click.get_current_context().exit(1)


@surfaces_bp.cli.command('decompose')
@click.argument('surface')
@click.option('--divisor', '-d', required=True, help='Class vector, e.g. "[3,-2,0]"')
@click.option('--oracle', is_flag=True, help='Also run the brute-force subset oracle')
@output_option
@json_errors
def decompose(surface, divisor, oracle, output):
    """Zariski decomposition D = P + N"""
    S = load_surface_arg(surface)
    D = parse_vector(divisor)
    result = ZariskiService.zariski_decompose(S, D).to_dict()
    if oracle:
        result['oracle'] = [d.to_dict() for d in ZariskiService.brute_force_decompositions(S, D)]
    emit(result, output)


@surfaces_bp.cli.command('walk')
@click.argument('surface')
@click.option('--divisor', '-d', required=True, help='Big class D')
@click.option('--flag', '-f', 'flag_source', required=True, help='Flag JSON (file or inline)')
@click.option('--slack', type=int, default=None, help='Extra walk pieces tolerated')
@output_option
@json_errors
def walk(surface, divisor, flag_source, slack, output):
    """Piecewise-linear negative part of D - tC from nu to mu"""
    S = load_surface_arg(surface)
    flag = SurfaceService.load_flag(ExportService.read_json(flag_source))
    if slack is None:
        slack = current_app.config['MAX_WALK_PIECES_SLACK']
    emit(ZariskiService.segment_walk(S, parse_vector(divisor), flag, slack), output)


@surfaces_bp.cli.command('mu')
@click.argument('surface')
@click.option('--divisor', '-d', required=True, help='Big class D')
@click.option('--curve', '-c', required=True, help='Curve class C')
@json_errors
def mu(surface, divisor, curve):
    """mu(D; C) with its annihilating polynomial over Q"""
    S = load_surface_arg(surface)
    D, C = parse_vector(divisor), parse_vector(curve)
    value = OkounkovService.mu(S, D, C)
    emit({'mu': value, 'certificate': list(OkounkovService.mu_quadratic_certificate(S, D, C))})
