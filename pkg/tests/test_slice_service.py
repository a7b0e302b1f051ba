"""
Tests for slice bodies and the non-polyhedrality certificate
"""
from fractions import Fraction

import pytest

from app.exceptions import HypothesisViolated, InputError, InsufficientSamples, NotPseudoEffective
from app.models.numbers import QuadNum
from app.models.slices import DivisorPath
from app.services.slice_service import INCONCLUSIVE, NON_POLYHEDRAL, SliceService, equally_spaced
from app.services.surface_service import SurfaceService


FANO_PATH = DivisorPath(v0=[9, 3, 0], w=[9, 0, 0])
FANO_CURVE = [1, 1, 1]


def fano_f(r: Fraction) -> QuadNum:
    return QuadNum(4 - 3 * r) - QuadNum.sqrt(9 * r * r - 15 * r + 7)


@pytest.fixture(scope='module')
def fano_body():
    return SliceService.builtin_body('fano', sample_count=21)


# ==================== f and g ====================

def test_fano_f_closed_values(e_times_e):
    assert SliceService.slice_f(e_times_e, FANO_PATH, FANO_CURVE, 0) == QuadNum(4, -1, 7)
    assert SliceService.slice_f(e_times_e, FANO_PATH, FANO_CURVE, Fraction(1, 3)) == QuadNum(3, -1, 3)
    assert SliceService.slice_f(e_times_e, FANO_PATH, FANO_CURVE, 1) == 0


def test_fano_samples_exact(fano_body):
    assert len(fano_body.f_samples) == 21
    for k, sample in enumerate(fano_body.f_samples):
        assert sample.r == Fraction(k, 20)
        assert sample.value == fano_f(sample.r)
    assert fano_body.boundary_samples == [1]


def test_fano_g(e_times_e, fano_body):
    assert SliceService.g_coefficients(e_times_e, FANO_PATH, FANO_CURVE) == (24, -18, -6)
    assert SliceService.slice_g(e_times_e, FANO_PATH, FANO_CURVE, 0, 0) == 24
    assert SliceService.slice_g(e_times_e, FANO_PATH, FANO_CURVE, 1, 1) == 0
    assert fano_body.g(Fraction(1, 2), Fraction(1, 2)) == 12


def test_fano_closed_form(fano_body):
    form = fano_body.closed_form
    assert form is not None
    assert (form.p0, form.p1, form.scale) == (4, -3, Fraction(1, 6))
    assert (form.d0, form.d1, form.d2) == (252, -540, 324)
    assert form.at(Fraction(1, 3)) == QuadNum(3, -1, 3)


def test_cutkosky_y1_slice():
    body = SliceService.builtin_body('cutkosky-y1', samples=[0, Fraction(1, 2), 1])
    values = [s.value for s in body.f_samples]
    assert values == [QuadNum(3, -1, 5), QuadNum(2, Fraction(-1, 2), 10), 0]
    assert (body.c0, body.cr, body.ct) == (12, -8, -4)
    assert body.closed_form is not None


def test_eff_differs_from_nef(f1):
    with pytest.raises(HypothesisViolated):
        SliceService.check_eff_equals_nef(f1)
    with pytest.raises(HypothesisViolated):
        SliceService.slice_f(f1, DivisorPath(v0=[2, 0], w=[1, 0]), [1, -1], 0)


def test_polyhedral_slice_has_no_closed_form(p1xp1):
    path = DivisorPath(v0=[2, 2], w=[1, 0])
    body = SliceService.assemble_slice_body(p1xp1, path, [1, 1], [0, Fraction(1, 2), 1])
    assert [s.value for s in body.f_samples] == [2, Fraction(3, 2), 1]
    assert body.closed_form is None


# ==================== Assembly errors ====================

def test_sample_outside_range(e_times_e):
    with pytest.raises(InputError):
        SliceService.assemble_slice_body(e_times_e, FANO_PATH, FANO_CURVE, [0, 2])


def test_path_leaves_cone(e_times_e):
    path = DivisorPath(v0=[9, 3, 0], w=[9, 0, 0], r_lo=0, r_hi=2)
    with pytest.raises(NotPseudoEffective):
        SliceService.assemble_slice_body(e_times_e, path, FANO_CURVE, [0, 1])


def test_empty_path_range():
    with pytest.raises(ValueError):
        DivisorPath(v0=[1, 0], w=[0, 1], r_lo=1, r_hi=0)


def test_unknown_builtin():
    with pytest.raises(InputError):
        SliceService.builtin_body('k3')
    with pytest.raises(InputError):
        SliceService.builtin_body('nowhere')


# ==================== Certificate ====================

def test_fano_certificate(fano_body):
    report = SliceService.nonpolyhedrality_certificate(fano_body)
    assert report['status'] == NON_POLYHEDRAL
    assert report['concave']
    assert not report['all_zero']
    assert len(report['windows']) == 19
    assert report['witness']['sign'] == -1


def test_prism_is_inconclusive(e_times_e):
    path = DivisorPath(v0=[9, 3, 0], w=[0, 0, 0])
    body = SliceService.assemble_slice_body(e_times_e, path, FANO_CURVE, equally_spaced(0, 1, 5))
    assert all(s.value == QuadNum(4, -1, 7) for s in body.f_samples)
    report = SliceService.nonpolyhedrality_certificate(body)
    assert report['status'] == INCONCLUSIVE
    assert report['all_zero']
    assert 'witness' not in report


def test_toric_control_is_inconclusive(p1xp1):
    path = DivisorPath(v0=[2, 2], w=[1, 0])
    body = SliceService.assemble_slice_body(p1xp1, path, [1, 1], equally_spaced(0, 1, 5))
    report = SliceService.nonpolyhedrality_certificate(body)
    assert report['status'] == INCONCLUSIVE
    assert report['all_zero']


def test_too_few_samples(e_times_e):
    body = SliceService.assemble_slice_body(e_times_e, FANO_PATH, FANO_CURVE, [0, 1])
    with pytest.raises(InsufficientSamples):
        SliceService.nonpolyhedrality_certificate(body)


def test_no_equally_spaced_window(e_times_e):
    body = SliceService.assemble_slice_body(e_times_e, FANO_PATH, FANO_CURVE, [0, Fraction(1, 4), 1])
    with pytest.raises(InsufficientSamples):
        SliceService.nonpolyhedrality_certificate(body)


def test_builtin_models_validate():
    models = SliceService.builtin_models()
    assert set(models) == {'fano', 'cutkosky-y1', 'k3'}
    for model in models.values():
        assert SurfaceService.validate_surface(model['surface'])['valid']


def test_equally_spaced():
    assert equally_spaced(0, 1, 5) == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]
    assert equally_spaced(Fraction(1, 2), 1, 1) == [Fraction(1, 2)]
