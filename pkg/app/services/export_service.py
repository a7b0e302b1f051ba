"""
Export Service
JSON decoding with positioned errors, exact JSON encoding and SVG figures
for polygons and slice bodies
"""
import json
import logging
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from app.exceptions import InputError
from app.models.numbers import QuadNum, RadicalSum, encode_number


logger = logging.getLogger(__name__)

SVG_NS = 'http://www.w3.org/2000/svg'


def to_jsonable(value: Any) -> Any:
    """
    Recursively convert exact values for json.dumps: Fractions to "p/q",
    QuadNums to strings or {"a","b","d"} objects, models through to_dict().
    Plain ints (ranks, rays, radicands, matrix entries) stay JSON integers.
    """
    if isinstance(value, (bool, int)) or value is None:
        return value
    if isinstance(value, (Fraction, QuadNum)):
        return encode_number(value)
    if isinstance(value, RadicalSum):
        return value.to_json()
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


class ExportService:
    """
    Service for reading and writing artifacts:
    - JSON text with line/column errors
    - Exact JSON output
    - SVG drawings of polygons and slice bodies
    """

    # ==================== JSON ====================

    @staticmethod
    def parse_json(text: str) -> Any:
        """
        Decode JSON text

        Raises:
            InputError: with the line and column of the syntax error
        """
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(
                f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                detail={'line': e.lineno, 'column': e.colno, 'message': e.msg}
            )

    @staticmethod
    def read_json(source: Union[str, Path]) -> Any:
        """
        Read JSON from a file path, or parse the argument itself when it looks
        like inline JSON
        """
        text = str(source)
        if text.lstrip().startswith(('{', '[')):
            return ExportService.parse_json(text)
        path = Path(text)
        if not path.exists():
            raise InputError(f"No such file: {text}")
        return ExportService.parse_json(path.read_text())

    @staticmethod
    def dumps(value: Any) -> str:
        return json.dumps(to_jsonable(value), indent=2, sort_keys=False)

    # ==================== SVG ====================

    @staticmethod
    def _fmt(x: float, decimals: int) -> str:
        text = f"{x:.{decimals}f}".rstrip('0').rstrip('.')
        return '0' if text in ('-0', '') else text

    @staticmethod
    def _canvas(xs: list[float], ys: list[float], unit: float, decimals: int):
        """Root element and a transform mapping (x, y) to screen coordinates with y up"""
        lo_x, hi_x = min(0.0, min(xs)), max(xs)
        lo_y, hi_y = min(0.0, min(ys)), max(ys)
        margin = 1.0
        width = (hi_x - lo_x + 2 * margin) * unit
        height = (hi_y - lo_y + 2 * margin) * unit

        def screen(x: float, y: float) -> tuple[str, str]:
            sx = (x - lo_x + margin) * unit
            sy = (hi_y - y + margin) * unit
            return ExportService._fmt(sx, decimals), ExportService._fmt(sy, decimals)

        root = ET.Element('svg', {
            'xmlns': SVG_NS,
            'width': ExportService._fmt(width, decimals),
            'height': ExportService._fmt(height, decimals),
            'viewBox': f"0 0 {ExportService._fmt(width, decimals)} {ExportService._fmt(height, decimals)}"
        })

        grid = ET.SubElement(root, 'g', {'class': 'grid', 'stroke': '#dddddd', 'stroke-width': '1'})
        for gx in range(int(lo_x) - 1, int(hi_x) + 2):
            x1, y1 = screen(gx, lo_y - margin)
            x2, y2 = screen(gx, hi_y + margin)
            ET.SubElement(grid, 'line', {'x1': x1, 'y1': y1, 'x2': x2, 'y2': y2})
        for gy in range(int(lo_y) - 1, int(hi_y) + 2):
            x1, y1 = screen(lo_x - margin, gy)
            x2, y2 = screen(hi_x + margin, gy)
            ET.SubElement(grid, 'line', {'x1': x1, 'y1': y1, 'x2': x2, 'y2': y2})

        axes = ET.SubElement(root, 'g', {'class': 'axes', 'stroke': '#000000', 'stroke-width': '1.5'})
        x1, y1 = screen(lo_x - margin, 0)
        x2, y2 = screen(hi_x + margin, 0)
        ET.SubElement(axes, 'line', {'x1': x1, 'y1': y1, 'x2': x2, 'y2': y2})
        x1, y1 = screen(0, lo_y - margin)
        x2, y2 = screen(0, hi_y + margin)
        ET.SubElement(axes, 'line', {'x1': x1, 'y1': y1, 'x2': x2, 'y2': y2})
        return root, screen

    @staticmethod
    def polygon_svg(vertices: list, unit: float = 60.0, decimals: int = 6) -> str:
        """
        SVG of a polygon: grid at unit spacing, axes, filled path and vertex labels
        carrying the exact coordinates

        Raises:
            InputError: empty vertex list
        """
        if not vertices:
            raise InputError("Cannot draw an empty polygon")
        xs = [float(x) for x, _ in vertices]
        ys = [float(y) for _, y in vertices]
        root, screen = ExportService._canvas(xs, ys, unit, decimals)

        points = [screen(x, y) for x, y in zip(xs, ys)]
        d = 'M ' + ' L '.join(f"{px} {py}" for px, py in points) + ' Z'
        ET.SubElement(root, 'path', {
            'class': 'body', 'd': d,
            'fill': '#4a90d9', 'fill-opacity': '0.35', 'stroke': '#1f4e79', 'stroke-width': '2'
        })

        labels = ET.SubElement(root, 'g', {'class': 'vertices', 'font-size': '12', 'font-family': 'monospace'})
        for (x, y), (px, py) in zip(vertices, points):
            exact = f"({QuadNum.coerce(x)}, {QuadNum.coerce(y)})"
            ET.SubElement(labels, 'circle', {
                'cx': px, 'cy': py, 'r': '3',
                'data-x': json.dumps(encode_number(x)), 'data-y': json.dumps(encode_number(y))
            })
            text = ET.SubElement(labels, 'text', {'x': px, 'y': py, 'dx': '4', 'dy': '-4'})
            text.text = exact
        return ET.tostring(root, encoding='unicode')

    @staticmethod
    def slice_svg(body, unit: float = 120.0, decimals: int = 6) -> str:
        """
        SVG of the base {0 <= t <= f(r)} of a slice body: the sampled (r, f(r))
        polyline with exact sample values as attributes and a legend for the
        g-plane
        """
        if not body.f_samples:
            raise InputError("Slice body has no samples")
        xs = [float(s.r) for s in body.f_samples]
        ys = [float(s.value) for s in body.f_samples]
        root, screen = ExportService._canvas(xs, ys, unit, decimals)

        points = [screen(x, y) for x, y in zip(xs, ys)]
        ET.SubElement(root, 'polyline', {
            'class': 'f-curve',
            'points': ' '.join(f"{px},{py}" for px, py in points),
            'fill': 'none', 'stroke': '#b03a2e', 'stroke-width': '2'
        })
        samples = ET.SubElement(root, 'g', {'class': 'samples'})
        for sample, (px, py) in zip(body.f_samples, points):
            ET.SubElement(samples, 'circle', {
                'cx': px, 'cy': py, 'r': '2.5',
                'data-r': json.dumps(encode_number(sample.r)),
                'data-f': json.dumps(encode_number(sample.value))
            })

        legend = ET.SubElement(root, 'text', {
            'class': 'legend', 'x': '8', 'y': '16', 'font-size': '12', 'font-family': 'monospace'
        })
        legend.text = f"g(r, t) = {body.c0} + ({body.cr})r + ({body.ct})t"
        if body.closed_form is not None:
            form = body.closed_form
            closed = ET.SubElement(root, 'text', {
                'class': 'closed-form', 'x': '8', 'y': '32', 'font-size': '12', 'font-family': 'monospace'
            })
            closed.text = (
                f"f(r) = {form.p0} + ({form.p1})r - ({form.scale})sqrt({form.d0} + ({form.d1})r + ({form.d2})r^2)"
            )
        return ET.tostring(root, encoding='unicode')

    @staticmethod
    def write_svg(svg: str, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(svg)
        logger.info("Wrote %s", path)
        return path
