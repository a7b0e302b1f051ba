"""
Polygons Blueprint
Okounkov polygon of a surface divisor with its shape and volume checks
"""
import click
from flask import Blueprint, current_app

from app.blueprints.common import emit, json_errors, load_surface_arg, output_option, parse_vector
from app.services.export_service import ExportService
from app.services.okounkov_service import OkounkovService
from app.services.surface_service import SurfaceService

polygons_bp = Blueprint('polygons', __name__, cli_group=None)


@polygons_bp.cli.command('body')
@click.argument('surface')
@click.option('--divisor', '-d', required=True, help='Big class D')
@click.option('--flag', '-f', 'flag_source', required=True, help='Flag JSON (file or inline)')
@click.option('--svg', 'svg_path', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Also draw the polygon to this SVG file')
@click.option('--translate-canonical', is_flag=True,
              help='Translate so the polygon touches both axes in the positive quadrant')
@click.option('--strict-alpha/--no-strict-alpha', default=None, help='Warn on flat pieces of alpha')
@output_option
@json_errors
def body(surface, divisor, flag_source, svg_path, translate_canonical, strict_alpha, output):
    """Okounkov polygon of D with respect to the flag"""
    config = current_app.config
    S = load_surface_arg(surface)
    D = parse_vector(divisor)
    flag = SurfaceService.load_flag(ExportService.read_json(flag_source))
    if strict_alpha is None:
        strict_alpha = config['STRICT_ALPHA_LINT']

    polygon = OkounkovService.okounkov_polygon(S, D, flag, config['MAX_WALK_PIECES_SLACK'])
    shape = OkounkovService.validate_theorem_b(polygon, strict_alpha)
    volume = OkounkovService.volume_checks(S, D, polygon)
    result = polygon.to_dict()
    result['checks'] = {
        'theorem_b': {k: shape[k] for k in ('valid', 'errors', 'warnings')},
        'volume': volume,
        'rationality': OkounkovService.rationality_check(polygon)
    }

    outline = polygon.polygon
    if translate_canonical:
        dt, dy = shape['translation']
        outline = outline.translated(dt, dy).normalized()
        result['vertices'] = outline.to_dict()['vertices']
        result['translation'] = [dt, dy]

    if svg_path:
        svg = ExportService.polygon_svg(outline.vertices, config['SVG_UNIT_PX'], config['SVG_DECIMALS'])
        ExportService.write_svg(svg, svg_path)
    emit(result, output)
