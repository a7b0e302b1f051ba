"""
Tests for the command-line surface: JSON output and exit codes
"""
import json

import pytest

from app import create_app


FIBER_FLAG = '{"curve": [1, -1], "multiplicities": {"E": 1}}'
F1_FAN = '{"rays": [[1, 0], [0, 1], [-1, -1], [0, -1]], "a": [0, 0, 3, 1]}'


def run(runner, *args):
    result = runner.invoke(args=list(args))
    return result, (json.loads(result.stdout) if result.stdout.strip() else None)


def test_unknown_config():
    with pytest.raises(KeyError):
        create_app('staging')


def test_commands_registered(app):
    assert {'validate', 'decompose', 'walk', 'mu', 'body', 'realize',
            'toric-body', 'slice', 'examples', 'verify'} <= set(app.cli.commands)


# ==================== Surfaces ====================

def test_validate_fixture(runner):
    result, data = run(runner, 'validate', 'cutkosky_k3')
    assert result.exit_code == 0
    assert data['valid']


def test_validate_hodge_violation(runner):
    surface = json.dumps({
        'name': 'bad', 'rank': 2, 'basis': ['A', 'B'],
        'intersection_matrix': [[1, 0], [0, 1]], 'curves': [],
        'cone': {'kind': 'quadratic', 'ample': [1, 0]}
    })
    result, data = run(runner, 'validate', surface)
    assert result.exit_code == 1
    assert not data['valid']


def test_malformed_json_exits_2(runner):
    result, data = run(runner, 'validate', '{"name": ')
    assert result.exit_code == 2
    assert data['error'] == 'MalformedInput'


def test_decompose(runner):
    result, data = run(runner, 'decompose', 'bl2p2', '--divisor', '[1,1,1]', '--oracle')
    assert result.exit_code == 0
    assert data['P'] == ['1', '0', '0']
    assert data['N'] == {'E1': '1', 'E2': '1'}
    assert data['oracle'] == [{'P': ['1', '0', '0'], 'N': {'E1': '1', 'E2': '1'}}]


def test_decompose_comma_separated(runner):
    result, data = run(runner, 'decompose', 'f1', '-d', '1,1')
    assert result.exit_code == 0
    assert data['N'] == {'E': '1'}


def test_decompose_not_pseudo_effective(runner):
    result, data = run(runner, 'decompose', 'f1', '--divisor', '[0,-1]')
    assert result.exit_code == 1
    assert data['error'] == 'NotPseudoEffective'


def test_decompose_dimension_mismatch(runner):
    result, data = run(runner, 'decompose', 'f1', '--divisor', '[1,1,1]')
    assert result.exit_code == 1
    assert data['error'] == 'DimensionMismatch'


def test_walk(runner):
    result, data = run(runner, 'walk', 'bl2p2', '--divisor', '[3,-2,0]', '--flag', '{"curve": [1, -1, 0]}')
    assert result.exit_code == 0
    assert data['nu'] == '0'
    assert data['mu'] == '3'
    assert [p['t_lo'] for p in data['pieces']] == ['0', '2']


def test_mu_quadratic(runner):
    result, data = run(runner, 'mu', 'cutkosky_k3', '--divisor', '[1,0,0]', '--curve', '[2,1,1]')
    assert result.exit_code == 0
    assert data['mu'] == {'a': '1', 'b': '-1/2', 'd': 2}
    assert data['certificate'] == ['8', '-16', '4']


def test_mu_curve_not_pseudo_effective(runner):
    result, data = run(runner, 'mu', 'f1', '--divisor', '[2,0]', '--curve', '[0,-1]')
    assert result.exit_code == 1
    assert data['error'] == 'NotPseudoEffective'


# ==================== Polygons ====================

def test_body_triangle(runner):
    result, data = run(runner, 'body', 'f1', '--divisor', '[2,0]', '--flag', FIBER_FLAG)
    assert result.exit_code == 0
    assert data['vertices'] == [['0', '0'], ['2', '2'], ['0', '2']]
    assert data['nu'] == '0'
    assert data['mu'] == '2'
    assert data['checks']['theorem_b']['valid']
    assert data['checks']['volume']['valid']
    assert data['checks']['volume']['twice_area'] == '4'


def test_body_svg_and_output_file(runner, tmp_path):
    svg = tmp_path / 'triangle.svg'
    out = tmp_path / 'triangle.json'
    result = runner.invoke(args=['body', 'f1', '-d', '[2,0]', '-f', FIBER_FLAG, '--svg', str(svg), '-o', str(out)])
    assert result.exit_code == 0
    assert svg.read_text().startswith('<svg')
    assert json.loads(out.read_text())['vertices'][1] == ['2', '2']


def test_body_translate_canonical(runner):
    result, data = run(runner, 'body', 'f1', '-d', '[2,0]', '-f', FIBER_FLAG, '--translate-canonical')
    assert result.exit_code == 0
    assert data['translation'] == ['0', '0']


def test_body_invalid_flag(runner):
    result, data = run(runner, 'body', 'f1', '-d', '[2,0]', '-f', '{"curve": [1, -1], "multiplicities": {"E": 5}}')
    assert result.exit_code == 1
    assert data['error'] == 'InvalidFlag'


def test_body_flag_schema_violation(runner):
    result, data = run(runner, 'body', 'f1', '-d', '[2,0]', '-f', '{"multiplicities": {}}')
    assert result.exit_code == 2
    assert data['error'] == 'MalformedInput'


# ==================== Toric ====================

def test_realize(runner):
    result, data = run(runner, 'realize', '{"vertices": [[0, 0], [2, 2], [0, 2]]}')
    assert result.exit_code == 0
    assert data['rays'] == [[1, 0], [0, 1], [-1, 1], [0, -1]]
    assert data['a'] == ['0', '0', '0', '2']
    assert data['flag'] == [0, 1]
    assert data['self_intersections'] == [0, -1, 0, 1]


def test_realize_invalid_polygon(runner):
    result, data = run(runner, 'realize', '{"vertices": [[0, 1], [1, 0], [1, 2], [0, 2]]}')
    assert result.exit_code == 1
    assert data['error'] == 'InvalidPolygon'


def test_realize_output_feeds_toric_body(runner):
    _, realized = run(runner, 'realize', '{"vertices": [[0, 0], [2, 2], [0, 2]]}')
    result, data = run(runner, 'toric-body', json.dumps(realized), '--check')
    assert result.exit_code == 0
    assert data['flag'] == [0, 1]
    assert data['agree']
    assert sorted(map(tuple, data['vertices'])) == [('0', '0'), ('0', '2'), ('2', '2')]


def test_toric_body_recorded_self_intersections_mismatch(runner):
    fan = json.loads(F1_FAN)
    fan['self_intersections'] = [0, 1, 0, 1]
    result, data = run(runner, 'toric-body', json.dumps(fan))
    assert result.exit_code == 1
    assert data['error'] == 'InvalidFan'


def test_toric_body_with_check(runner, tmp_path):
    svg = tmp_path / 'toric.svg'
    result, data = run(runner, 'toric-body', F1_FAN, '--check', '--svg', str(svg))
    assert result.exit_code == 0
    assert data['vertices'] == [['0', '0'], ['3', '0'], ['2', '1'], ['0', '1']]
    assert data['agree']
    assert svg.exists()


def test_toric_body_missing_axis_rays(runner):
    fan = '{"rays": [[1, 1], [-1, 0], [0, -1]], "a": [1, 1, 1]}'
    result, data = run(runner, 'toric-body', fan)
    assert result.exit_code == 1
    assert data['error'] == 'MissingAxisRays'


def test_toric_body_non_adjacent_flag(runner):
    result, data = run(runner, 'toric-body', F1_FAN, '--flag', '0', '2')
    assert result.exit_code == 1
    assert data['error'] == 'NonAdjacentFlag'


def test_toric_body_invalid_fan(runner):
    result, data = run(runner, 'toric-body', '{"rays": [[1, 0], [-1, 2], [0, -1]], "a": [0, 0, 0]}')
    assert result.exit_code == 1
    assert data['error'] == 'InvalidFan'


# ==================== Slices ====================

def test_slice_fano(runner, tmp_path):
    svg = tmp_path / 'fano.svg'
    result, data = run(runner, 'slice', 'fano', '--count', '5', '--svg', str(svg))
    assert result.exit_code == 0
    assert data['certificate'] == 'NON-POLYHEDRAL-ON-SAMPLE-WINDOW'
    assert len(data['f']) == 5
    assert data['f'][0]['value'] == {'a': '4', 'b': '-1', 'd': 7}
    assert data['witness']['sign'] == -1
    assert svg.exists()


def test_slice_custom_surface(runner):
    result, data = run(runner, 'slice', 'p1xp1', '--path', '{"v0": [2, 2], "w": [1, 0]}',
                       '--curve', '[1,1]', '--samples', '0,1/2,1')
    assert result.exit_code == 0
    assert [s['value'] for s in data['f']] == ['2', '3/2', '1']
    assert data['certificate'] == 'INCONCLUSIVE'


def test_slice_two_samples_inconclusive(runner):
    result, data = run(runner, 'slice', 'fano', '--samples', '0,1')
    assert result.exit_code == 0
    assert data['certificate'] == 'INCONCLUSIVE'
    assert data['certificate_error']['error'] == 'InsufficientSamples'


def test_slice_requires_path(runner):
    result, data = run(runner, 'slice', 'p1xp1')
    assert result.exit_code == 2


def test_slice_hypothesis_violated(runner):
    result, data = run(runner, 'slice', 'f1', '--path', '{"v0": [2, 0], "w": [1, 0]}', '--curve', '[1,-1]')
    assert result.exit_code == 1
    assert data['error'] == 'HypothesisViolated'


def test_examples_fano(runner):
    result, data = run(runner, 'examples', 'fano')
    assert result.exit_code == 0
    assert data['pairing_CC'] == '6'
    assert data['slice']['certificate'] == 'NON-POLYHEDRAL-ON-SAMPLE-WINDOW'


def test_examples_k3(runner):
    result, data = run(runner, 'examples', 'k3')
    assert result.exit_code == 0
    assert data['mu']['valid']
    assert data['mu']['mu'] == {'a': '1', 'b': '-1/2', 'd': 2}
    assert data['y1_slice']['f'][0]['value'] == {'a': '3', 'b': '-1', 'd': 5}


def test_examples_unknown_name(runner):
    result = runner.invoke(args=['examples', 'p2'])
    assert result.exit_code == 2
