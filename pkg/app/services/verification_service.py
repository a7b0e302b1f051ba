"""
Verification Service
Self-contained acceptance checks run by the `verify` command
"""
import logging
import random
import time
from fractions import Fraction
from math import gcd
from typing import Callable, Mapping

from mpmath import iv

from app.exceptions import OkounkovError
from app.models.numbers import QuadNum, RadicalSum
from app.models.polygon import Polygon
from app.models.slices import DivisorPath
from app.models.surface import FlagData, SurfaceModel
from app.models.toric import ToricSurface, det
from app.services.linear_algebra import primitive
from app.services.okounkov_service import OkounkovService
from app.services.slice_service import INCONCLUSIVE, NON_POLYHEDRAL, SliceService, equally_spaced
from app.services.surface_service import SurfaceService
from app.services.toric_service import ToricService
from app.services.zariski_service import ZariskiService


logger = logging.getLogger(__name__)

POLYHEDRAL_FIXTURES = ('f1', 'bl2p2', 'p2', 'p1xp1')

# (fixture, D, flag curve, multiplicities, expected vertices)
FORWARD_CASES = [
    ('f1', [2, 0], [1, -1], {'E': 1}, [(0, 0), (2, 2), (0, 2)]),
    ('f1', [2, 0], [1, -1], {}, [(0, 0), (2, 0), (0, 2)]),
    ('bl2p2', [3, -2, 0], [1, -1, 0], {}, [(0, 0), (3, 0), (2, 1), (0, 1)]),
]

RADICANDS = [2, 3, 5, 6, 7, 10, 13]

# (fixture, flag curve, multiplicities) for homogeneity through the Zariski walk
HOMOGENEITY_FLAGS = [
    ('f1', [1, -1], {'E': 1}),
    ('f1', [1, -1], {}),
    ('f1', [0, 1], {}),
    ('bl2p2', [1, -1, 0], {}),
    ('p1xp1', [1, 0], {}),
]
HOMOGENEITY_WALK_EVERY = 10


def random_rational(rng: random.Random, low: int = 0, high: int = 7) -> Fraction:
    return Fraction(rng.randint(low, high), rng.randint(1, 7))


def random_theorem_b_polygon(rng: random.Random, max_pieces: int = 6) -> Polygon:
    """
    Random polygon under a convex non-decreasing alpha and above a concave
    beta on [0, L], with rational slopes of height at most 7
    """
    length = Fraction(rng.randint(1, 4))

    def cuts(pieces: int) -> list[Fraction]:
        inner = {length * Fraction(rng.randint(1, 6), 7) for _ in range(pieces - 1)}
        return [Fraction(0)] + sorted(inner) + [length]

    def chain(ts: list[Fraction], slopes: list[Fraction], start: Fraction) -> list[tuple[Fraction, Fraction]]:
        points = [(ts[0], start)]
        for (t0, t1), s in zip(zip(ts, ts[1:]), slopes):
            points.append((t1, points[-1][1] + s * (t1 - t0)))
        return points

    ta = cuts(rng.randint(1, max_pieces))
    alpha_slopes = sorted(random_rational(rng) for _ in range(len(ta) - 1))
    lower = chain(ta, alpha_slopes, Fraction(0))

    tb = cuts(rng.randint(1, max_pieces))
    beta_slopes = sorted((random_rational(rng, -7, 7) for _ in range(len(tb) - 1)), reverse=True)
    relative = chain(tb, beta_slopes, Fraction(0))
    start = max(Fraction(0), lower[-1][1] - relative[-1][1]) + random_rational(rng, 1, 7)
    upper = [(t, y + start) for t, y in relative]

    vertices = [(QuadNum(t), QuadNum(y)) for t, y in lower + list(reversed(upper))]
    return Polygon(vertices=vertices).normalized()


def random_big_divisor(S: SurfaceModel, rng: random.Random) -> list[Fraction]:
    """Positive combination of all effective generators, which is interior"""
    D = [Fraction(0)] * S.rank
    for g in S.cone.eff_generators:
        c = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        D = [x + c * y for x, y in zip(D, g)]
    return D


def random_fan(rng: random.Random, extra: int = 3, bound: int = 4) -> ToricSurface:
    """Smooth complete fan through (1,0), (0,1) and up to `extra` random rays"""
    rays = [(1, 0), (0, 1)]
    for _ in range(rng.randint(1, extra)):
        x, y = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if (x, y) != (0, 0) and not (x > 0 and y > 0):
            g = gcd(x, y)
            rays.append((x // g, y // g))
    return ToricService.smooth_complete_fan(rays)


def random_walk_direction(S: SurfaceModel, rng: random.Random):
    """
    A catalog curve or a positive integral combination of nef generators;
    C.E >= 0 off C for both, so N_t can only grow along D - tC
    """
    nef = [primitive(g) for g in S.cone.eff_generators if SurfaceService.is_nef(S, g)]
    curves = [list(c.class_) for c in S.curves]
    if nef and (not curves or rng.random() < 0.5):
        C = [0] * S.rank
        for g in rng.sample(nef, rng.randint(1, len(nef))):
            m = rng.randint(1, 3)
            C = [x + m * y for x, y in zip(C, g)]
        return C
    return rng.choice(curves) if curves else None


def walk_monotonicity_errors(S: SurfaceModel, D: list, C: list[int]) -> list[str]:
    """N_t non-decreasing inside and across walk pieces, C never in the support"""
    try:
        walk = ZariskiService.segment_walk(S, D, FlagData(curve=C))
    except OkounkovError as e:
        return [f"walk failed: {e.code} {e}"]
    errors = []
    previous: dict = {}
    for piece in walk.pieces:
        if any(b < 0 for b in piece.B.values()):
            errors.append(f"N_t decreasing on [{piece.t_lo}, {piece.t_hi}]")
        at_start = {name: piece.coefficient(name, piece.t_lo) for name in piece.support}
        if any(at_start.get(name, 0) < c for name, c in previous.items()):
            errors.append(f"N_t drops at t={piece.t_lo}")
        if walk.curve is not None and walk.curve in piece.support:
            errors.append(f"flag curve {walk.curve} in the support at t={piece.t_lo}")
        previous = {name: piece.coefficient(name, piece.t_hi) for name in piece.support}
    return errors


def interval_sign(q: QuadNum, prec: int = 80):
    """Sign of q from interval arithmetic, None while the interval contains 0"""
    iv.prec = prec
    value = iv.mpf(q.a.numerator) / q.a.denominator
    if q.d:
        value += iv.mpf(q.b.numerator) / q.b.denominator * iv.sqrt(iv.mpf(q.d))
    if value.a > 0:
        return 1
    if value.b < 0:
        return -1
    return None


class VerificationService:
    """
    Acceptance checks, each returning {'name', 'passed', 'detail', 'seconds'}:
    - Fano slice exactness and the non-polyhedrality certificate
    - The K3 mu formula
    - Forward Okounkov polygons and volumes on the bundled fixtures
    - Toric realization round trips
    - Zariski decomposition against the subset oracle
    - Randomized algebraic properties
    """

    @staticmethod
    def _run(name: str, check: Callable[[], dict]) -> dict:
        started = time.perf_counter()
        try:
            detail = check()
            passed = not detail.get('failures')
        except OkounkovError as e:
            detail = {'failures': [e.to_dict()]}
            passed = False
        seconds = round(time.perf_counter() - started, 3)
        logger.debug("Check %s: %s in %ss", name, 'pass' if passed else 'FAIL', seconds)
        return {'name': name, 'passed': passed, 'detail': detail, 'seconds': seconds}

    # ==================== Slices ====================

    @staticmethod
    def check_fano_exactness(sample_count: int = 21) -> dict:
        model = SliceService.builtin_models()['fano']
        S, path, C = model['surface'], model['path'], model['curve']
        body = SliceService.assemble_slice_body(S, path, C, equally_spaced(0, 1, sample_count))
        failures = []
        for sample in body.f_samples:
            r = sample.r
            expected = QuadNum(4 - 3 * r) - QuadNum.sqrt(9 * r * r - 15 * r + 7)
            if sample.value != expected:
                failures.append(f"f({r}) = {sample.value}, expected {expected}")
        grid = equally_spaced(0, 1, 5)
        for r in grid:
            for t in grid:
                g = SliceService.slice_g(S, path, C, r, t)
                if g != 24 - 18 * r - 6 * t:
                    failures.append(f"g({r}, {t}) = {g}, expected {24 - 18 * r - 6 * t}")
        return {'samples': len(body.f_samples), 'failures': failures}

    @staticmethod
    def check_nonpolyhedrality() -> dict:
        failures = []
        report = SliceService.nonpolyhedrality_certificate(SliceService.builtin_body('fano', sample_count=5))
        if report['status'] != NON_POLYHEDRAL:
            failures.append(f"Fano body reported {report['status']}")

        S = SurfaceService.load_fixture('p1xp1')
        path = DivisorPath(v0=[2, 2], w=[1, 0], r_lo=0, r_hi=1)
        control = SliceService.assemble_slice_body(S, path, [1, 1], equally_spaced(0, 1, 5))
        control_report = SliceService.nonpolyhedrality_certificate(control)
        if control_report['status'] != INCONCLUSIVE:
            failures.append(f"Toric control reported {control_report['status']}")
        if not control_report['all_zero']:
            failures.append("Toric control has a nonzero second difference")
        return {'fano': report.get('witness'), 'failures': failures}

    @staticmethod
    def check_k3_mu() -> dict:
        report = OkounkovService.cutkosky_k3_example()
        expected = QuadNum(1, Fraction(-1, 2), 2)
        failures = []
        if not report['valid']:
            failures.append("Generic root and closed formula disagree")
        if report['mu'] != expected:
            failures.append(f"mu = {report['mu']}, expected {expected}")
        return {'mu': report['mu'].to_json(), 'failures': failures}

    # ==================== Polygons ====================

    @staticmethod
    def check_forward_polygons() -> dict:
        failures = []
        for fixture, D, curve, multiplicities, expected in FORWARD_CASES:
            S = SurfaceService.load_fixture(fixture)
            flag = FlagData(curve=curve, multiplicities=multiplicities)
            body = OkounkovService.okounkov_polygon(S, D, flag)
            target = Polygon(vertices=expected).normalized()
            label = f"{fixture} D={D} flag={curve} {multiplicities}"
            if not OkounkovService.polygons_equal(body.polygon, target):
                failures.append(f"{label}: got {body.to_dict()['vertices']}")
            if not OkounkovService.validate_theorem_b(body)['valid']:
                failures.append(f"{label}: fails the Theorem B shape")
            if not OkounkovService.volume_checks(S, D, body)['valid']:
                failures.append(f"{label}: 2*area differs from the volume")
            if not OkounkovService.rationality_check(body)['valid']:
                failures.append(f"{label}: irrational vertex left of mu")
        return {'cases': len(FORWARD_CASES), 'failures': failures}

    @staticmethod
    def check_toric_roundtrip(count: int = 25, seed: int = 0) -> dict:
        rng = random.Random(seed)
        failures = []
        for k in range(count):
            polygon = random_theorem_b_polygon(rng)
            D, (i1, i2) = ToricService.realize_polygon(polygon)
            image = ToricService.okounkov_via_psi(D.surface, D.a, i1, i2)
            image = image.translated(D.a[i1], D.a[i2])
            if not OkounkovService.polygons_equal(image, polygon, 'full'):
                failures.append(f"case {k}: psi image differs for {polygon.to_dict()['vertices']}")
                continue
            forward = ToricService.forward_body(D, (i1, i2))
            if not OkounkovService.polygons_equal(forward, polygon, 'full'):
                failures.append(f"case {k}: forward body differs for {polygon.to_dict()['vertices']}")
        return {'polygons': count, 'failures': failures}

    # ==================== Zariski ====================

    @staticmethod
    def check_zariski_oracle(count: int = 200, seed: int = 0, toric_models: int = 8) -> dict:
        """
        Support growth against the subset oracle on the polyhedral fixtures and
        on random toric models with at most 8 negative curves, plus monotonicity
        of N_t along walks in random directions
        """
        rng = random.Random(seed)
        failures = []
        models = [SurfaceService.load_fixture(name) for name in POLYHEDRAL_FIXTURES]
        toric = []
        while len(toric) < toric_models:
            S = ToricService.toric_surface_model(random_fan(rng))
            if 0 < len(S.curves) <= 8:
                toric.append(S)
        models = [S for S in models if len(S.curves) <= 8] + toric

        walks = 0
        for k in range(count):
            S = models[k % len(models)]
            D = random_big_divisor(S, rng)
            label = f"{S.name} D={[str(x) for x in D]}"
            decomposition = ZariskiService.zariski_decompose(S, D)
            oracle = ZariskiService.brute_force_decompositions(S, D)
            if len(oracle) != 1 or oracle[0].P != decomposition.P or oracle[0].N != decomposition.N:
                failures.append(f"{label}: oracle found {len(oracle)} decompositions")

            C = random_walk_direction(S, rng)
            if C is None:
                continue
            walks += 1
            failures.extend(f"{label} C={C}: {e}" for e in walk_monotonicity_errors(S, D, C))
        return {'divisors': count, 'models': len(models), 'walks': walks, 'failures': failures}

    # ==================== Properties ====================

    @staticmethod
    def check_properties(count: int = 1000, seed: int = 0, sign_count: int = 10000) -> dict:
        """
        Randomized algebraic identities, each over `count` cases; the exact
        sign is compared against interval arithmetic over `sign_count` inputs
        """
        rng = random.Random(seed)
        failures = []
        cases = {}
        models = [SurfaceService.load_fixture(name) for name in POLYHEDRAL_FIXTURES + ('e_times_e',)]

        def vector(n):
            return [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]

        def quadnum(d):
            return QuadNum(
                Fraction(rng.randint(-20, 20), rng.randint(1, 9)),
                Fraction(rng.randint(-20, 20), rng.randint(1, 9)),
                d
            )

        for _ in range(count):
            S = rng.choice(models)
            u, v, w = vector(S.rank), vector(S.rank), vector(S.rank)
            lam = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            combo = [x + lam * y for x, y in zip(u, v)]
            if SurfaceService.pair(S, u, v) != SurfaceService.pair(S, v, u):
                failures.append(f"pairing not symmetric on {S.name}")
            if SurfaceService.pair(S, combo, w) != SurfaceService.pair(S, u, w) + lam * SurfaceService.pair(S, v, w):
                failures.append(f"pairing not bilinear on {S.name}")
        cases['pairing'] = count

        for _ in range(count):
            d = rng.choice(RADICANDS)
            x, y, z = quadnum(d), quadnum(d), quadnum(d)
            if (x + y) * z != x * z + y * z or x * y != y * x or (x + y) + z != x + (y + z):
                failures.append(f"field axioms fail for {x}, {y}, {z}")
            if y and (x / y) * y != x:
                failures.append(f"division fails for {x} / {y}")
            mixed = RadicalSum.of(x) - RadicalSum.of(QuadNum(0, 1, rng.choice([3, 11, 14])))
            if float(mixed) and (mixed.sign() > 0) != (float(mixed) > 0):
                failures.append(f"RadicalSum sign disagrees with float for {mixed}")
        cases['field'] = count

        decided = 0
        for _ in range(sign_count):
            x = quadnum(rng.choice(RADICANDS))
            expected = interval_sign(x)
            if expected is None:
                continue
            decided += 1
            if x.sign() != expected:
                failures.append(f"sign of {x}: exact {x.sign()}, interval {expected}")
        cases['sign'] = sign_count
        cases['sign_decided'] = decided

        for _ in range(count):
            T = random_fan(rng)
            for i in range(T.size):
                if det(T.rays[i], T.rays[(i + 1) % T.size]) != 1:
                    failures.append(f"fan {T.rays}: det {i} != 1")
            if sum(ToricService.self_intersections(T)) != 12 - 3 * T.size:
                failures.append(f"fan {T.rays}: self-intersections do not sum to 12 - 3r")
        cases['fans'] = count

        for k in range(count):
            lam = rng.choice([2, 3])
            if k % HOMOGENEITY_WALK_EVERY == 0:
                fixture, curve, multiplicities = rng.choice(HOMOGENEITY_FLAGS)
                S = SurfaceService.load_fixture(fixture)
                flag = FlagData(curve=curve, multiplicities=multiplicities)
                D = random_big_divisor(S, rng)
                base = OkounkovService.okounkov_polygon(S, D, flag).polygon
                scaled = OkounkovService.okounkov_polygon(S, [lam * x for x in D], flag).polygon
                label = f"{fixture} D={[str(x) for x in D]}"
            else:
                T = random_fan(rng)
                a = [rng.randint(1, 4) for _ in range(T.size)]
                i1, i2 = T.index_of((1, 0)), T.index_of((0, 1))
                base = ToricService.okounkov_via_psi(T, a, i1, i2).translated(a[i1], a[i2])
                scaled = ToricService.okounkov_via_psi(T, [lam * x for x in a], i1, i2)
                scaled = scaled.translated(lam * a[i1], lam * a[i2])
                label = f"fan {T.rays} a={a}"
            if not OkounkovService.polygons_equal(scaled, base.scaled(lam).normalized()):
                failures.append(f"{label}: polygon of {lam}D is not {lam} times the polygon of D")
        cases['homogeneity'] = count
        return {'cases': cases, 'failures': failures}

    # ==================== Suite ====================

    @staticmethod
    def run_all(settings: Mapping) -> dict:
        """
        Run every check with the counts and seed from the app config

        Returns:
            Dict with 'valid' (all passed) and the per-check 'checks' list
        """
        seed = settings.get('VERIFY_SEED', 20240611)
        checks = [
            ('fano-exactness', lambda: VerificationService.check_fano_exactness(settings.get('FANO_SAMPLE_COUNT', 21))),
            ('non-polyhedrality', VerificationService.check_nonpolyhedrality),
            ('k3-mu', VerificationService.check_k3_mu),
            ('forward-polygons', VerificationService.check_forward_polygons),
            ('toric-roundtrip', lambda: VerificationService.check_toric_roundtrip(
                settings.get('VERIFY_ROUNDTRIP_POLYGONS', 25), seed)),
            ('zariski-oracle', lambda: VerificationService.check_zariski_oracle(
                settings.get('VERIFY_ZARISKI_DIVISORS', 200), seed)),
            ('properties', lambda: VerificationService.check_properties(
                settings.get('VERIFY_RANDOM_CASES', 1000), seed, settings.get('VERIFY_SIGN_CASES', 10000))),
        ]
        results = [VerificationService._run(name, check) for name, check in checks]
        return {
            'valid': all(r['passed'] for r in results),
            'checks': results
        }
