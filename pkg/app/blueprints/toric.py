"""
Toric Blueprint
Realization of Theorem B polygons and Okounkov bodies of toric divisors
"""
import click
from flask import Blueprint, current_app

from app.blueprints.common import emit, json_errors, output_option
from app.exceptions import InputError, InvalidFan, MissingAxisRays
from app.models.polygon import Polygon
from app.models.toric import ToricDivisor
from app.services.export_service import ExportService
from app.services.okounkov_service import OkounkovService
from app.services.surface_service import check_schema
from app.services.toric_service import ToricService

toric_bp = Blueprint('toric', __name__, cli_group=None)


@toric_bp.cli.command('realize')
@click.argument('polygon')
@output_option
@json_errors
def realize(polygon, output):
    """Toric divisor and flag whose Okounkov body is POLYGON"""
    data = ExportService.read_json(polygon)
    check_schema('polygon', data)
    D, (i1, i2) = ToricService.realize_polygon(Polygon.from_dict(data))
    result = D.to_dict()
    result['flag'] = [i1, i2]
    result['self_intersections'] = ToricService.self_intersections(D.surface)
    emit(result, output)


@toric_bp.cli.command('toric-body')
@click.argument('fan')
@click.option('--flag', 'flag_rays', type=(int, int), default=None,
              help='Adjacent ray indices i1 i2; defaults to the rays (1,0), (0,1)')
@click.option('--check', is_flag=True, help='Also compute the body through the Zariski walk')
@click.option('--svg', 'svg_path', type=click.Path(dir_okay=False, writable=True), default=None)
@output_option
@json_errors
def toric_body(fan, flag_rays, check, svg_path, output):
    """Okounkov body of the toric divisor in FAN ({"rays", "a", "flag"?})"""
    config = current_app.config
    data = ExportService.read_json(fan)
    check_schema('fan', data)
    if 'a' not in data:
        raise InputError("Fan document needs divisor coefficients 'a'")
    D = ToricDivisor.from_dict(data)
    ToricService.check_fan(D.surface)
    recorded, squares = data.get('self_intersections'), ToricService.self_intersections(D.surface)
    if recorded is not None and recorded != squares:
        raise InvalidFan("Recorded self-intersections do not match the fan", detail={'recorded': recorded, 'computed': squares})
    if flag_rays is None:
        flag_rays = tuple(data.get('flag', ()))
    if not flag_rays:
        if (1, 0) not in D.surface.rays or (0, 1) not in D.surface.rays:
            raise MissingAxisRays("Pass --flag or include the rays (1,0) and (0,1)")
        flag_rays = (D.surface.index_of((1, 0)), D.surface.index_of((0, 1)))
    i1, i2 = flag_rays

    image = ToricService.okounkov_via_psi(D.surface, D.a, i1, i2)
    body = image.translated(D.a[i1], D.a[i2]).normalized()
    result = {'vertices': body.to_dict()['vertices'], 'flag': [i1, i2]}
    if check:
        forward = ToricService.forward_body(D, (i1, i2), config['MAX_WALK_PIECES_SLACK'])
        result['forward_vertices'] = forward.to_dict()['vertices']
        result['agree'] = OkounkovService.polygons_equal(forward, body, 'full')

    if svg_path:
        svg = ExportService.polygon_svg(body.vertices, config['SVG_UNIT_PX'], config['SVG_DECIMALS'])
        ExportService.write_svg(svg, svg_path)
    emit(result, output)
