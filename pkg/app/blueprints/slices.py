"""
Slices Blueprint
Three-fold slice bodies and the bundled worked examples
"""
import click
from flask import Blueprint, current_app

from app.blueprints.common import emit, json_errors, load_surface_arg, output_option, parse_vector
from app.exceptions import InputError, InsufficientSamples
from app.models.slices import DivisorPath, SliceBody
from app.services.export_service import ExportService
from app.services.okounkov_service import OkounkovService
from app.services.slice_service import INCONCLUSIVE, SliceService, equally_spaced
from app.services.surface_service import check_schema

slices_bp = Blueprint('slices', __name__, cli_group=None)


def body_report(body: SliceBody) -> dict:
    """Body JSON with the non-polyhedrality status under 'certificate'"""
    result = body.to_dict()
    try:
        report = SliceService.nonpolyhedrality_certificate(body)
    except InsufficientSamples as e:
        result['certificate'] = INCONCLUSIVE
        result['certificate_error'] = e.to_dict()
        return result
    result['certificate'] = report['status']
    result['second_differences'] = report['windows']
    result['concave'] = report['concave']
    if 'witness' in report:
        result['witness'] = report['witness']
    return result


def write_slice_svg(body: SliceBody, svg_path) -> None:
    config = current_app.config
    svg = ExportService.slice_svg(body, config['SLICE_SVG_UNIT_PX'], config['SVG_DECIMALS'])
    ExportService.write_svg(svg, svg_path)


@slices_bp.cli.command('slice')
@click.argument('source')
@click.option('--path', 'path_source', default=None, help='Path JSON {"v0", "w", "r_lo", "r_hi"}')
@click.option('--curve', '-c', default=None, help='Flag curve class C on the slice')
@click.option('--samples', default=None, help='Comma-separated r values, e.g. "0,1/4,1/2"')
@click.option('--count', type=int, default=None, help='Number of equally spaced samples')
@click.option('--svg', 'svg_path', type=click.Path(dir_okay=False, writable=True), default=None)
@output_option
@json_errors
def slice_body(source, path_source, curve, samples, count, svg_path, output):
    """
    Slice body f(r), g(r, t) for a bundled example name (fano, cutkosky-y1) or
    a surface model with --path and --curve
    """
    models = SliceService.builtin_models()
    builtin = models.get(source) if 'path' in models.get(source, {}) else None
    if builtin is not None:
        S, path, C = builtin['surface'], builtin['path'], builtin['curve']
    else:
        S, path, C = load_surface_arg(source), None, None

    if path_source is not None:
        data = ExportService.read_json(path_source)
        check_schema('path', data)
        path = DivisorPath.from_dict(data)
    if curve is not None:
        C = parse_vector(curve)
    if path is None or C is None:
        raise InputError("A surface model needs both --path and --curve")

    if samples is not None:
        points = parse_vector(samples)
    else:
        points = equally_spaced(path.r_lo, path.r_hi, count or current_app.config['FANO_SAMPLE_COUNT'])

    body = SliceService.assemble_slice_body(S, path, C, points)
    if svg_path:
        write_slice_svg(body, svg_path)
    emit(body_report(body), output)


@slices_bp.cli.command('examples')
@click.argument('name', type=click.Choice(['fano', 'k3']))
@click.option('--svg', 'svg_path', type=click.Path(dir_okay=False, writable=True), default=None)
@output_option
@json_errors
def examples(name, svg_path, output):
    """Bundled worked examples with their verification results"""
    models = SliceService.builtin_models()
    count = current_app.config['FANO_SAMPLE_COUNT']
    if name == 'fano':
        model = models['fano']
        body = SliceService.builtin_body('fano', sample_count=count)
        result = {
            'surface': model['surface'],
            'pairing_CC': -body.ct,
            'slice': body_report(body)
        }
    else:
        k3 = models['k3']
        body = SliceService.builtin_body('cutkosky-y1', sample_count=count)
        result = {
            'surface': k3['surface'],
            'divisor': k3['divisor'],
            'curve': k3['curve'],
            'mu': OkounkovService.cutkosky_k3_example(),
            'y1_surface': models['cutkosky-y1']['surface'],
            'y1_slice': body_report(body)
        }
    if svg_path:
        write_slice_svg(body, svg_path)
    emit(result, output)
