"""
Slice Service
Three-fold bodies {0 <= t <= f(r), 0 <= y <= g(r, t)} from a surface slice:
f(r) = mu(v0 - r*w; C), g(r, t) = C.(v0 - r*w) - t*C^2
"""
import logging
from fractions import Fraction
from typing import Optional

from app.exceptions import (
    HypothesisViolated, InputError, InsufficientSamples, Mismatch, NotPseudoEffective
)
from app.models.numbers import QuadNum, RadicalSum, to_rational
from app.models.slices import ClosedFormF, DivisorPath, SliceBody, SliceSample
from app.models.surface import ConeKind, DivisorClass, SurfaceModel
from app.services.linear_algebra import primitive
from app.services.okounkov_service import OkounkovService
from app.services.surface_service import SurfaceService


logger = logging.getLogger(__name__)

NON_POLYHEDRAL = 'NON-POLYHEDRAL-ON-SAMPLE-WINDOW'
INCONCLUSIVE = 'INCONCLUSIVE'


def _fractions(values) -> list[Fraction]:
    return [to_rational(x) for x in values]


class SliceService:
    """
    Service for slice bodies including:
    - f and g evaluation along a divisor path
    - Body assembly with the symbolic closed form of f on quadratic cones
    - Exact second-difference test for non-polyhedrality
    - The bundled E x E, Cutkosky Y1 and K3 examples
    """

    @staticmethod
    def check_eff_equals_nef(S: SurfaceModel) -> None:
        """
        Raises:
            HypothesisViolated: polyhedral model whose effective and nef cones differ
        """
        if S.cone.kind == ConeKind.QUADRATIC:
            return
        eff = {tuple(primitive(f)) for f in S.cone.eff_facets}
        nef = {tuple(primitive(f)) for f in S.cone.nef_facets}
        if eff != nef:
            raise HypothesisViolated(
                f"Effective and nef cones of {S.name} differ",
                detail={'eff_facets': sorted(eff), 'nef_facets': sorted(nef)}
            )

    # ==================== f and g ====================

    @staticmethod
    def slice_f(S: SurfaceModel, path: DivisorPath, C: DivisorClass, r) -> QuadNum:
        """
        f(r) = sup{s > 0 : v0 - r*w - s*C ample}, which is mu(v0 - r*w; C) when
        the slice has Eff = Nef

        A pseudo-effective class on the boundary of the cone gives 0.

        Raises:
            HypothesisViolated: Eff and Nef differ on a polyhedral model
            NotBig: v0 - r*w not pseudo-effective
        """
        SliceService.check_eff_equals_nef(S)
        r = to_rational(r)
        D = SurfaceService.parse_divisor(S, path.at(r))
        C = SurfaceService.parse_divisor(S, C)
        if not SurfaceService.is_big(S, D) and SurfaceService.is_pseff(S, D):
            return QuadNum(0)
        return OkounkovService.mu(S, D, C)

    @staticmethod
    def g_coefficients(S: SurfaceModel, path: DivisorPath, C: DivisorClass) -> tuple[Fraction, Fraction, Fraction]:
        """(c0, cr, ct) with g(r, t) = c0 + cr*r + ct*t"""
        C = SurfaceService.parse_divisor(S, C)
        return (
            SurfaceService.pair(S, path.v0, C),
            -SurfaceService.pair(S, path.w, C),
            -SurfaceService.pair(S, C, C)
        )

    @staticmethod
    def slice_g(S: SurfaceModel, path: DivisorPath, C: DivisorClass, r, t) -> Fraction:
        c0, cr, ct = SliceService.g_coefficients(S, path, C)
        return c0 + cr * to_rational(r) + ct * to_rational(t)

    # ==================== Assembly ====================

    @staticmethod
    def closed_form_candidate(S: SurfaceModel, path: DivisorPath, C: DivisorClass) -> Optional[ClosedFormF]:
        """
        Smaller root of (v0 - r*w - s*C)^2 = 0 as a function of r, for quadratic
        cones with C^2 > 0:
            s = (C.v0 - r C.w)/C^2 - sqrt(disc(r))/C^2
        """
        if S.cone.kind != ConeKind.QUADRATIC:
            return None
        C = SurfaceService.parse_divisor(S, C)
        CC = SurfaceService.pair(S, C, C)
        if CC <= 0:
            return None
        Cv = SurfaceService.pair(S, C, path.v0)
        Cw = SurfaceService.pair(S, C, path.w)
        vv = SurfaceService.pair(S, path.v0, path.v0)
        vw = SurfaceService.pair(S, path.v0, path.w)
        ww = SurfaceService.pair(S, path.w, path.w)
        return ClosedFormF(
            p0=Cv / CC,
            p1=-Cw / CC,
            scale=1 / CC,
            d0=Cv * Cv - CC * vv,
            d1=2 * CC * vw - 2 * Cv * Cw,
            d2=Cw * Cw - CC * ww
        )

    @staticmethod
    def assemble_slice_body(S: SurfaceModel, path: DivisorPath, C: DivisorClass, samples: list) -> SliceBody:
        """
        Evaluate f at every sample and g once

        The closed form is recorded only when it reproduces every sample exactly;
        otherwise the linear half-space bound of the cone binds somewhere.

        Args:
            S: Slice surface, Eff = Nef
            path: v0 - r*w; both endpoints must be pseudo-effective
            C: Flag curve class on the slice
            samples: Rational r values inside [r_lo, r_hi]

        Raises:
            InputError: sample outside the path range
            NotPseudoEffective: an endpoint of the path leaves the cone
        """
        C = SurfaceService.parse_divisor(S, C)
        for r in (path.r_lo, path.r_hi):
            if not SurfaceService.is_pseff(S, path.at(r)):
                raise NotPseudoEffective(
                    f"Path leaves the pseudo-effective cone at r={r}",
                    detail={'r': str(r)}
                )
        points = sorted(set(_fractions(samples)))
        outside = [r for r in points if not path.r_lo <= r <= path.r_hi]
        if outside:
            raise InputError(
                "Samples outside the path range",
                detail={'samples': [str(r) for r in outside], 'range': [str(path.r_lo), str(path.r_hi)]}
            )

        f_samples = []
        boundary = []
        for r in points:
            value = SliceService.slice_f(S, path, C, r)
            if not SurfaceService.is_big(S, path.at(r)):
                boundary.append(r)
            f_samples.append(SliceSample(r=r, value=value))
            logger.debug("f(%s) = %s", r, value)

        closed_form = SliceService.closed_form_candidate(S, path, C)
        if closed_form is not None:
            for sample in f_samples:
                if closed_form.radicand(sample.r) < 0 or closed_form.at(sample.r) != sample.value:
                    logger.debug("Closed form dropped at r=%s", sample.r)
                    closed_form = None
                    break

        c0, cr, ct = SliceService.g_coefficients(S, path, C)
        return SliceBody(
            path=path,
            curve=C,
            f_samples=f_samples,
            c0=c0,
            cr=cr,
            ct=ct,
            closed_form=closed_form,
            boundary_samples=boundary
        )

    # ==================== Non-polyhedrality ====================

    @staticmethod
    def nonpolyhedrality_certificate(body: SliceBody) -> dict:
        """
        Exact second differences f(r-h) - 2f(r) + f(r+h) over equally spaced windows

        A nonzero second difference is a witness only inside a single curved arc,
        i.e. when the closed form is recorded and its radicand is not the square
        of a linear polynomial; kinks of piecewise linear f are not witnesses.

        Returns:
            Report with status, every window, concavity and the witness if any

        Raises:
            InsufficientSamples: fewer than 3 samples or no equally spaced window
        """
        samples = sorted(body.f_samples, key=lambda s: s.r)
        if len(samples) < 3:
            raise InsufficientSamples(f"Need at least 3 samples, got {len(samples)}")

        windows = []
        for left, mid, right in zip(samples, samples[1:], samples[2:]):
            if mid.r - left.r != right.r - mid.r:
                continue
            second = RadicalSum.of(left.value) - RadicalSum.of(mid.value) * 2 + RadicalSum.of(right.value)
            windows.append({
                'r': [str(left.r), str(mid.r), str(right.r)],
                'second_difference': second
            })
        if not windows:
            raise InsufficientSamples("No three consecutive samples are equally spaced")

        form = body.closed_form
        curved = form is not None and form.d1 * form.d1 - 4 * form.d0 * form.d2 != 0
        witness = None
        if curved:
            witness = next((w for w in windows if not w['second_difference'].is_zero()), None)

        report = {
            'status': NON_POLYHEDRAL if witness else INCONCLUSIVE,
            'concave': all(w['second_difference'].sign() <= 0 for w in windows),
            'all_zero': all(w['second_difference'].is_zero() for w in windows),
            'windows': [
                {'r': w['r'], 'second_difference': w['second_difference'].to_json()} for w in windows
            ]
        }
        if witness:
            report['witness'] = {
                'r': witness['r'],
                'second_difference': witness['second_difference'].to_json(),
                'sign': witness['second_difference'].sign()
            }
        logger.debug("Non-polyhedrality status %s over %d windows", report['status'], len(windows))
        return report

    # ==================== Bundled examples ====================

    @staticmethod
    def builtin_models() -> dict:
        """
        Bundled examples keyed by name:
        - 'fano': E x E slice, path (9 - 9r)f1 + 3f2, C = f1 + f2 + diagonal
        - 'cutkosky-y1': Y1 with basis (H, C1, C2), path (6H - C1 - 2C2) - r(4H - C1 - C2), C = H
        - 'k3': the K3 form 4x^2 - 4y^2 - 4z^2 with D = (1, 0, 0), C = (2, 1, 1)

        Raises:
            Mismatch: a bundled model fails validation
        """
        fano = SurfaceService.load_fixture('e_times_e')
        y1 = SurfaceService.load_fixture('cutkosky_y1')
        k3 = SurfaceService.load_fixture('cutkosky_k3')
        for S in (fano, y1, k3):
            report = SurfaceService.validate_surface(S)
            if not report['valid']:
                raise Mismatch(f"Bundled model {S.name} is invalid", detail=report['errors'])

        return {
            'fano': {
                'surface': fano,
                'path': DivisorPath(v0=[9, 3, 0], w=[9, 0, 0], r_lo=0, r_hi=1),
                'curve': _fractions([1, 1, 1])
            },
            'cutkosky-y1': {
                'surface': y1,
                'path': DivisorPath(v0=[6, -1, -2], w=[4, -1, -1], r_lo=0, r_hi=1),
                'curve': _fractions([1, 0, 0])
            },
            'k3': {
                'surface': k3,
                'divisor': _fractions([1, 0, 0]),
                'curve': _fractions([2, 1, 1])
            }
        }

    @staticmethod
    def builtin_body(name: str, samples: Optional[list] = None, sample_count: int = 21) -> SliceBody:
        """
        Slice body of a bundled path; default samples are r_lo + k*(r_hi - r_lo)/(n - 1)

        Raises:
            InputError: unknown name or a bundled example without a path
        """
        models = SliceService.builtin_models()
        if name not in models or 'path' not in models[name]:
            raise InputError(
                f"No bundled slice path named {name!r}",
                detail={'available': sorted(k for k, v in models.items() if 'path' in v)}
            )
        model = models[name]
        path = model['path']
        if samples is None:
            samples = equally_spaced(path.r_lo, path.r_hi, sample_count)
        return SliceService.assemble_slice_body(model['surface'], path, model['curve'], samples)


def equally_spaced(lo, hi, count: int) -> list[Fraction]:
    if count < 2:
        return [to_rational(lo)]
    lo, hi = to_rational(lo), to_rational(hi)
    step = (hi - lo) / (count - 1)
    return [lo + k * step for k in range(count)]
