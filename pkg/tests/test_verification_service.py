"""
Tests for the acceptance suite run by `verify`
"""
import random

import pytest

from app.config import Config
from app.exceptions import Mismatch
from app.models.numbers import QuadNum
from app.models.toric import det
from app.services.okounkov_service import OkounkovService
from app.services.surface_service import SurfaceService
from app.services.toric_service import ToricService
from app.services.verification_service import (
    VerificationService, interval_sign, random_big_divisor, random_fan, random_theorem_b_polygon,
    random_walk_direction, walk_monotonicity_errors
)


def test_fano_exactness():
    assert VerificationService.check_fano_exactness(11)['failures'] == []


def test_nonpolyhedrality():
    detail = VerificationService.check_nonpolyhedrality()
    assert detail['failures'] == []
    assert detail['fano']['sign'] == -1


def test_k3_mu():
    assert VerificationService.check_k3_mu()['failures'] == []


def test_forward_polygons():
    assert VerificationService.check_forward_polygons()['failures'] == []


def test_toric_roundtrip():
    assert VerificationService.check_toric_roundtrip(count=4, seed=7)['failures'] == []


def test_zariski_oracle():
    detail = VerificationService.check_zariski_oracle(count=24, seed=7, toric_models=4)
    assert detail['failures'] == []
    assert detail['divisors'] == 24
    assert detail['models'] == len(('f1', 'bl2p2', 'p2', 'p1xp1')) + 4
    assert detail['walks'] > 0


def test_properties_reports_case_counts():
    detail = VerificationService.check_properties(count=40, seed=7, sign_count=400)
    assert detail['failures'] == []
    cases = detail['cases']
    assert {k: cases[k] for k in ('pairing', 'field', 'fans', 'homogeneity', 'sign')} == {
        'pairing': 40, 'field': 40, 'fans': 40, 'homogeneity': 40, 'sign': 400
    }
    assert 0 < cases['sign_decided'] <= 400


def test_full_size_sign_check():
    detail = VerificationService.check_properties(count=0, seed=11, sign_count=10000)
    assert detail['failures'] == []
    assert detail['cases']['sign'] == 10000


def test_default_case_counts():
    assert Config.VERIFY_RANDOM_CASES >= 1000
    assert Config.VERIFY_SIGN_CASES >= 10000


def test_run_catches_domain_errors():
    def failing():
        raise Mismatch("boom")

    result = VerificationService._run('failing', failing)
    assert not result['passed']
    assert result['detail']['failures'][0]['error'] == 'Mismatch'


def test_run_all_with_testing_config(app):
    settings = dict(app.config)
    settings['VERIFY_RANDOM_CASES'] = 20
    settings['VERIFY_ROUNDTRIP_POLYGONS'] = 2
    settings['VERIFY_ZARISKI_DIVISORS'] = 8
    report = VerificationService.run_all(settings)
    assert [c['name'] for c in report['checks']] == [
        'fano-exactness', 'non-polyhedrality', 'k3-mu', 'forward-polygons',
        'toric-roundtrip', 'zariski-oracle', 'properties'
    ]
    assert report['valid'], [c for c in report['checks'] if not c['passed']]
    properties = report['checks'][-1]['detail']['cases']
    assert properties['pairing'] == 20
    assert properties['sign'] == app.config['VERIFY_SIGN_CASES']


# ==================== Generators ====================

@pytest.mark.parametrize('seed', range(10))
def test_random_polygons_have_theorem_b_shape(seed):
    P = random_theorem_b_polygon(random.Random(seed))
    report = OkounkovService.validate_theorem_b(P)
    assert report['valid'], report['errors']
    assert report['translation'] == (0, 0)


def test_random_big_divisor_is_big(bl2p2):
    rng = random.Random(3)
    for _ in range(10):
        assert SurfaceService.is_big(bl2p2, random_big_divisor(bl2p2, rng))


@pytest.mark.parametrize('value, sign', [
    (QuadNum(4, -1, 7), 1),
    (QuadNum(2, -1, 5), -1),
    (QuadNum(0, 0, 0), None),
])
def test_interval_sign(value, sign):
    assert interval_sign(value) == sign


@pytest.mark.parametrize('seed', range(6))
def test_random_fan_is_smooth_complete(seed):
    T = random_fan(random.Random(seed))
    assert {(1, 0), (0, 1)} <= set(T.rays)
    assert all(det(T.rays[i], T.rays[(i + 1) % T.size]) == 1 for i in range(T.size))


# ==================== Walk monotonicity ====================

@pytest.mark.parametrize('fixture', ['f1', 'bl2p2', 'p2', 'p1xp1'])
def test_walks_in_random_directions_are_monotone(fixture):
    S = SurfaceService.load_fixture(fixture)
    rng = random.Random(5)
    for _ in range(12):
        C = random_walk_direction(S, rng)
        assert all(isinstance(x, int) for x in C)
        assert walk_monotonicity_errors(S, random_big_divisor(S, rng), C) == []


@pytest.mark.parametrize('seed', range(4))
def test_walks_on_toric_models_are_monotone(seed):
    rng = random.Random(seed)
    S = ToricService.toric_surface_model(random_fan(rng))
    for _ in range(6):
        C = random_walk_direction(S, rng)
        assert walk_monotonicity_errors(S, random_big_divisor(S, rng), C) == []


def test_walk_direction_is_curve_or_nef(bl2p2):
    rng = random.Random(2)
    curves = [list(c.class_) for c in bl2p2.curves]
    for _ in range(20):
        C = random_walk_direction(bl2p2, rng)
        assert C in curves or SurfaceService.is_nef(bl2p2, C)


def test_walk_errors_report_failed_walk(f1):
    errors = walk_monotonicity_errors(f1, [2, 0], [1, -1, 0])
    assert len(errors) == 1
    assert errors[0].startswith('walk failed: InvalidFlag')
