"""
Tests for JSON decoding and SVG output
"""
import json
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from app.exceptions import InputError
from app.models.numbers import QuadNum, RadicalSum
from app.services.export_service import SVG_NS, ExportService, to_jsonable
from app.services.slice_service import SliceService
from app.services.surface_service import SurfaceService


def find_all(svg: str, tag: str) -> list:
    return ET.fromstring(svg).findall(f'.//{{{SVG_NS}}}{tag}')


# ==================== JSON ====================

def test_parse_json_reports_position():
    with pytest.raises(InputError) as exc:
        ExportService.parse_json('{\n  "a": \n}')
    detail = exc.value.detail
    assert detail['line'] == 3
    assert detail['column'] == 1
    assert exc.value.to_dict()['error'] == 'MalformedInput'


def test_read_json_inline_and_file(tmp_path):
    assert ExportService.read_json('[1, "1/2"]') == [1, '1/2']
    target = tmp_path / 'flag.json'
    target.write_text('{"curve": [0, 1]}')
    assert ExportService.read_json(str(target)) == {'curve': [0, 1]}
    with pytest.raises(InputError):
        ExportService.read_json(str(tmp_path / 'missing.json'))


def test_to_jsonable():
    value = {
        'half': Fraction(1, 2),
        'roots': [QuadNum(4, -1, 7), QuadNum(3)],
        'sum': RadicalSum({1: 1, 2: Fraction(-1, 3)}),
        'flags': (True, None),
        'rays': [(1, 0), (-1, 2)]
    }
    assert to_jsonable(value) == {
        'half': '1/2',
        'roots': [{'a': '4', 'b': '-1', 'd': 7}, '3'],
        'sum': {'1': '1', '2': '-1/3'},
        'flags': [True, None],
        'rays': [[1, 0], [-1, 2]]
    }


def test_dumps_models():
    body = SliceService.builtin_body('fano', sample_count=3)
    data = json.loads(ExportService.dumps(body))
    assert data['g'] == {'c0': '24', 'cr': '-18', 'ct': '-6'}
    assert data['f'][0] == {'r': '0', 'value': {'a': '4', 'b': '-1', 'd': 7}}
    assert data['f'][-1] == {'r': '1', 'value': '0'}


# ==================== SVG ====================

def test_polygon_svg():
    vertices = [(QuadNum(0), QuadNum(0)), (QuadNum(2), QuadNum(2)), (QuadNum(0), QuadNum(2))]
    svg = ExportService.polygon_svg(vertices, unit=60, decimals=6)
    circles = find_all(svg, 'circle')
    assert len(circles) == 3
    assert [json.loads(c.get('data-x')) for c in circles] == ['0', '2', '0']
    path = find_all(svg, 'path')[0]
    assert path.get('d').startswith('M ') and path.get('d').endswith(' Z')
    assert find_all(svg, 'text')[1].text == '(2, 2)'


def test_polygon_svg_irrational_vertex():
    a = QuadNum(1, Fraction(-1, 2), 2)
    svg = ExportService.polygon_svg([(QuadNum(0), QuadNum(0)), (a, QuadNum(0)), (QuadNum(0), QuadNum(1))])
    circle = find_all(svg, 'circle')[1]
    assert json.loads(circle.get('data-x')) == {'a': '1', 'b': '-1/2', 'd': 2}


def test_polygon_svg_empty():
    with pytest.raises(InputError):
        ExportService.polygon_svg([])


def test_slice_svg(tmp_path):
    body = SliceService.builtin_body('fano', sample_count=5)
    svg = ExportService.slice_svg(body)
    polyline = find_all(svg, 'polyline')[0]
    assert len(polyline.get('points').split()) == 5
    assert len(find_all(svg, 'circle')) == 5
    assert any(t.get('class') == 'closed-form' for t in find_all(svg, 'text'))

    target = ExportService.write_svg(svg, tmp_path / 'fano.svg')
    assert target.read_text() == svg


@pytest.mark.parametrize('name', ['f1', 'cutkosky_k3', 'e_times_e'])
def test_dumps_surface_loads_back(name):
    S = SurfaceService.load_fixture(name)
    text = ExportService.dumps(S)
    data = json.loads(text)
    assert isinstance(data['rank'], int)
    assert all(isinstance(x, int) for row in data['intersection_matrix'] for x in row)
    assert SurfaceService.load_surface(text).to_dict() == S.to_dict()
