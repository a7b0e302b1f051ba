"""
Okounkov Service
Okounkov polygons of big divisors on surfaces: mu, alpha/beta assembly,
shape validation, volume and quadraticity certificates
"""
import logging
from fractions import Fraction
from math import lcm
from typing import Union

from app.exceptions import (
    InvalidFlag, MixedRadicand, Mismatch, NotAPolygon, NotBig, NotPseudoEffective, QuadraticConditionNotMet
)
from app.models.numbers import QuadNum, evaluate_quadratic, to_rational
from app.models.polygon import AffinePiece, OkounkovPolygon, Polygon, cross
from app.models.surface import ConeKind, ConeModel, DivisorClass, FlagData, SurfaceModel
from app.services.linear_algebra import dot
from app.services.surface_service import SurfaceService
from app.services.zariski_service import ZariskiService


logger = logging.getLogger(__name__)

PolygonLike = Union[OkounkovPolygon, Polygon, list]


def _as_polygon(poly: PolygonLike) -> Polygon:
    if isinstance(poly, OkounkovPolygon):
        return poly.polygon
    if isinstance(poly, Polygon):
        return poly
    return Polygon(vertices=[tuple(QuadNum.from_json(x) for x in v) for v in poly])


def _segments_cross(p1, p2, q1, q2) -> bool:
    """Closed segments p1p2 and q1q2 share a point"""
    def sgn(x):
        return x.sign()

    d1 = sgn(cross(q1, q2, p1))
    d2 = sgn(cross(q1, q2, p2))
    d3 = sgn(cross(p1, p2, q1))
    d4 = sgn(cross(p1, p2, q2))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_segment(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (
        (d1 == 0 and on_segment(q1, q2, p1)) or (d2 == 0 and on_segment(q1, q2, p2))
        or (d3 == 0 and on_segment(p1, p2, q1)) or (d4 == 0 and on_segment(p1, p2, q2))
    )


class OkounkovService:
    """
    Service for Okounkov polygons including:
    - mu(D; C) and its quadratic certificate
    - Polygon assembly from the Zariski walk
    - Theorem B shape validation
    - Volume, rationality and equality checks
    """

    # ==================== mu ====================

    @staticmethod
    def mu(S: SurfaceModel, D: DivisorClass, C: DivisorClass) -> QuadNum:
        """
        mu(D; C) = sup{t > 0 : D - tC big}

        Rational for polyhedral cones, in some Q(sqrt(d)) for quadratic cones.

        Raises:
            NotBig: D is not big
            NotPseudoEffective: C is not pseudo-effective
            Unbounded: D - tC is big for all t
        """
        D = SurfaceService.parse_divisor(S, D)
        C = SurfaceService.parse_divisor(S, C)
        if all(c == 0 for c in C):
            raise InvalidFlag("Curve class C is zero")
        if not SurfaceService.is_pseff(S, C):
            raise NotPseudoEffective("Curve class C is not pseudo-effective", detail={'C': [str(x) for x in C]})
        if not SurfaceService.is_big(S, D):
            raise NotBig("Class is not big", detail={'D': [str(x) for x in D]})
        return SurfaceService.boundary_along(S, D, C)

    @staticmethod
    def mu_quadratic_certificate(S: SurfaceModel, D: DivisorClass, C: DivisorClass) -> tuple[Fraction, Fraction, Fraction]:
        """
        Coefficients (A, B, C) over Q with A*mu^2 + B*mu + C = 0

        Polyhedral cones give the linear certificate (0, f(C), -f(D)) of the
        minimizing facet; quadratic cones give the expansion of (D - tC)^2, or the
        linear half-space certificate when that constraint binds first.

        Raises:
            Mismatch: if substitution does not give zero
        """
        D = SurfaceService.parse_divisor(S, D)
        C = SurfaceService.parse_divisor(S, C)
        value = OkounkovService.mu(S, D, C)

        if S.cone.kind == ConeKind.POLYHEDRAL:
            facets = [f for f in S.cone.eff_facets if dot(f, C) > 0]
            f = min(facets, key=lambda f: dot(f, D) / dot(f, C))
            certificate = (Fraction(0), dot(f, C), -dot(f, D))
        else:
            h = list(S.cone.ample)
            certificate = (
                SurfaceService.pair(S, C, C),
                -2 * SurfaceService.pair(S, D, C),
                SurfaceService.pair(S, D, D)
            )
            if evaluate_quadratic(*certificate, value) != 0:
                certificate = (Fraction(0), SurfaceService.pair(S, C, h), -SurfaceService.pair(S, D, h))

        if evaluate_quadratic(*certificate, value) != 0:
            raise Mismatch(
                "Certificate does not annihilate mu",
                detail={'mu': value.to_json(), 'certificate': [str(c) for c in certificate]}
            )
        return certificate

    @staticmethod
    def seshadri_as_mu(S_blowup: SurfaceModel, D_pullback: DivisorClass, E: DivisorClass) -> QuadNum:
        """
        mu of a pulled-back class along the exceptional curve of a blow-up

        This equals the Seshadri constant of D at the blown-up point when the value
        is irrational, and bounds it from above in general.

        E need not be pseudo-effective in the model: a quadratic model stands in
        for the blow-up by its positive cone, which misses E, and then the value
        is the bound sqrt(D^2 / -E^2).

        Raises:
            NotBig: D is not big
        """
        D = SurfaceService.parse_divisor(S_blowup, D_pullback)
        E = SurfaceService.parse_divisor(S_blowup, E)
        if all(e == 0 for e in E):
            raise InvalidFlag("Exceptional class is zero")
        if not SurfaceService.is_big(S_blowup, D):
            raise NotBig("Class is not big", detail={'D': [str(x) for x in D]})
        return SurfaceService.boundary_along(S_blowup, D, E)

    # ==================== Polygon assembly ====================

    @staticmethod
    def okounkov_polygon(
        S: SurfaceModel,
        D: DivisorClass,
        flag: FlagData,
        max_pieces_slack: int = 1
    ) -> OkounkovPolygon:
        """
        Okounkov polygon of a big class with respect to the flag (C, x)

        alpha(t) = sum of m_E * N_t[E] and beta(t) = alpha(t) + P_t.C, both
        affine on each piece of the Zariski walk.

        Args:
            S: Surface model
            D: Big class
            flag: Flag curve and multiplicities at x
            max_pieces_slack: extra walk pieces tolerated beyond the catalog size

        Returns:
            OkounkovPolygon with exact vertices, counterclockwise from the
            lexicographic minimum
        """
        D = SurfaceService.parse_divisor(S, D)
        walk = ZariskiService.segment_walk(S, D, flag, max_pieces_slack)
        C = flag.curve_class
        DC = SurfaceService.pair(S, D, C)
        CC = SurfaceService.pair(S, C, C)

        alpha: list[AffinePiece] = []
        beta: list[AffinePiece] = []
        for piece in walk.pieces:
            a0 = sum((flag.multiplicity(name) * piece.A[name] for name in piece.support), Fraction(0))
            a1 = sum((flag.multiplicity(name) * piece.B[name] for name in piece.support), Fraction(0))
            EC = {name: SurfaceService.pair(S, S.curve_class(name), C) for name in piece.support}
            b0 = a0 + DC - sum((piece.A[name] * EC[name] for name in piece.support), Fraction(0))
            b1 = a1 - CC - sum((piece.B[name] * EC[name] for name in piece.support), Fraction(0))
            alpha.append(AffinePiece(t_lo=piece.t_lo, t_hi=piece.t_hi, intercept=a0, slope=a1))
            beta.append(AffinePiece(t_lo=piece.t_lo, t_hi=piece.t_hi, intercept=b0, slope=b1))

        breakpoints = walk.breakpoints
        lower = [(breakpoints[0], alpha[0].at(breakpoints[0]))]
        lower += [(p.t_hi, p.at(p.t_hi)) for p in alpha]
        upper = [(breakpoints[0], beta[0].at(breakpoints[0]))]
        upper += [(p.t_hi, p.at(p.t_hi)) for p in beta]
        outline = Polygon(vertices=lower + list(reversed(upper))).normalized()

        logger.debug("Okounkov polygon with %d vertices, nu=%s, mu=%s", len(outline.vertices), walk.nu, walk.mu)
        return OkounkovPolygon(
            nu=walk.nu,
            mu=walk.mu,
            breakpoints=breakpoints,
            alpha=alpha,
            beta=beta,
            vertices=outline.vertices
        )

    @staticmethod
    def alpha_beta(S: SurfaceModel, D: DivisorClass, flag: FlagData, t) -> tuple[Fraction, Fraction]:
        """
        (alpha(t), beta(t)) from the Zariski decomposition of D - tC at a rational t
        """
        D = SurfaceService.parse_divisor(S, D)
        t = to_rational(t)
        C = flag.curve_class
        decomposition = ZariskiService.zariski_decompose(S, [d - t * c for d, c in zip(D, C)])
        a = sum((flag.multiplicity(name) * c for name, c in decomposition.N.items()), Fraction(0))
        return a, a + SurfaceService.pair(S, decomposition.P, C)

    @staticmethod
    def volume(S: SurfaceModel, D: DivisorClass) -> Fraction:
        """vol(D) = P(D)^2"""
        P = ZariskiService.zariski_decompose(S, D).P
        return SurfaceService.pair(S, P, P)

    # ==================== Theorem B shape ====================

    @staticmethod
    def validate_theorem_b(poly: PolygonLike, strict_alpha: bool = False) -> dict:
        """
        Check that a polygon is bounded below by a non-decreasing convex alpha and
        above by a concave beta, with rational slopes

        Args:
            poly: OkounkovPolygon, Polygon or raw vertex list
            strict_alpha: report flat pieces of alpha as warnings

        Returns:
            Dict with 'valid', 'errors', 'warnings', the 'lower' and 'upper'
            chains and the 'translation' into the positive quadrant

        Raises:
            NotAPolygon: fewer than three vertices, zero area or self-intersection
        """
        polygon = _as_polygon(poly)
        points = []
        for p in polygon.vertices:
            if not points or points[-1] != p:
                points.append(p)
        while len(points) > 1 and points[0] == points[-1]:
            points.pop()
        polygon = Polygon(vertices=points)
        distinct = []
        for p in points:
            if p not in distinct:
                distinct.append(p)
        if len(distinct) < 3:
            raise NotAPolygon(f"Need at least three distinct vertices, got {len(distinct)}")

        n = len(points)
        try:
            for i in range(n):
                for j in range(i + 1, n):
                    if j == i + 1 or (i == 0 and j == n - 1):
                        continue
                    if _segments_cross(points[i], points[(i + 1) % n], points[j], points[(j + 1) % n]):
                        raise NotAPolygon(f"Edges {i} and {j} intersect")
            if polygon.signed_area() == 0:
                raise NotAPolygon("Vertices enclose zero area")
        except MixedRadicand as e:
            raise NotAPolygon("Vertex coordinates mix radicands", detail=e.to_dict())

        errors: list[str] = []
        warnings: list[str] = []
        outline = polygon.normalized().vertices
        m = len(outline)
        for i in range(m):
            if cross(outline[i - 1], outline[i], outline[(i + 1) % m]) < 0:
                errors.append(f"Not convex at vertex {_fmt_point(outline[i])}")

        # lower chain runs counterclockwise from the leftmost-lowest to the rightmost-lowest vertex
        t_min = min(x for x, _ in outline)
        t_max = max(x for x, _ in outline)
        left_low = min((p for p in outline if p[0] == t_min), key=lambda p: p[1])
        left_high = max((p for p in outline if p[0] == t_min), key=lambda p: p[1])
        right_low = min((p for p in outline if p[0] == t_max), key=lambda p: p[1])
        right_high = max((p for p in outline if p[0] == t_max), key=lambda p: p[1])

        def walk(start, stop):
            i = outline.index(start)
            chain = [outline[i]]
            while outline[i] != stop:
                i = (i + 1) % m
                chain.append(outline[i])
            return chain

        lower = walk(left_low, right_low)
        upper = list(reversed(walk(right_high, left_high)))

        def slopes(chain):
            result = []
            for p, q in zip(chain, chain[1:]):
                dx = q[0] - p[0]
                if dx.sign() <= 0:
                    errors.append(f"Boundary is not a graph over [{p[0]}, {q[0]}]")
                    continue
                try:
                    result.append((p, q, (q[1] - p[1]) / dx))
                except MixedRadicand:
                    errors.append(f"Slope on [{p[0]}, {q[0]}] mixes radicands")
            return result

        lower_slopes = slopes(lower)
        upper_slopes = slopes(upper)

        for p, q, s in lower_slopes + upper_slopes:
            if not s.is_rational:
                errors.append(f"Irrational slope {s} on [{p[0]}, {q[0]}]")
        for p, q, s in lower_slopes:
            if s < 0:
                errors.append(f"Lower boundary alpha decreasing on [{p[0]}, {q[0]}]")
            elif s == 0 and strict_alpha:
                warnings.append(f"Lower boundary alpha constant on [{p[0]}, {q[0]}]")
        for (_, _, s1), (p, q, s2) in zip(lower_slopes, lower_slopes[1:]):
            if s2 < s1:
                errors.append(f"Lower boundary alpha not convex at t = {p[0]}")
        for (_, _, s1), (p, q, s2) in zip(upper_slopes, upper_slopes[1:]):
            if s2 > s1:
                errors.append(f"Upper boundary beta not concave at t = {p[0]}")

        dy = -left_low[1]
        shifted = [(x - t_min, y + dy) for x, y in outline]
        if any(x < 0 or y < 0 for x, y in shifted):
            errors.append("Translated region leaves the positive quadrant")

        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'warnings': warnings,
            'lower': lower,
            'upper': upper,
            'translation': (-t_min, dy)
        }

    # ==================== Checks ====================

    @staticmethod
    def volume_checks(S: SurfaceModel, D: DivisorClass, poly: PolygonLike) -> dict:
        """
        Compare 2 * area(poly) with P(D)^2

        Returns:
            Dict with 'valid', 'errors', 'twice_area' and 'volume'
        """
        twice_area = _as_polygon(poly).area() * 2
        volume = OkounkovService.volume(S, D)
        errors = []
        if twice_area != volume:
            errors.append(Mismatch(
                f"2*area = {twice_area} but P(D)^2 = {volume}",
                detail={'twice_area': str(twice_area), 'volume': str(volume)}
            ).to_dict())
        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'twice_area': twice_area,
            'volume': QuadNum(volume)
        }

    @staticmethod
    def rationality_check(poly: OkounkovPolygon) -> dict:
        """
        Vertices left of mu are rational; mu is rational or quadratic; an
        irrational mu carries exactly one vertical edge on t = mu
        """
        errors = []
        for x, y in poly.vertices:
            if x < poly.mu and not (x.is_rational and y.is_rational):
                errors.append(f"Vertex {_fmt_point((x, y))} left of mu is irrational")
        right = [p for p in poly.vertices if p[0] == poly.mu]
        edges_on_mu = 1 if len(right) == 2 else 0
        if not poly.mu.is_rational and edges_on_mu != 1:
            errors.append("Irrational mu without a vertical edge on t = mu")
        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'mu_rational': poly.mu.is_rational,
            'edges_on_mu': edges_on_mu
        }

    @staticmethod
    def polygons_equal(P: PolygonLike, Q: PolygonLike, mode: str = 'strict') -> bool:
        """
        Compare polygons as vertex sets

        Modes:
            strict: no translation
            nu: t shifted so that the left edge sits on t = 0
            full: shifted by (-t_min, -alpha(t_min))
        """
        if mode not in ('strict', 'nu', 'full'):
            raise ValueError(f"Unknown comparison mode {mode!r}")

        def canonical(poly):
            polygon = _as_polygon(poly).normalized()
            if mode == 'strict' or not polygon.vertices:
                return polygon.vertices
            t_min = min(x for x, _ in polygon.vertices)
            dy = QuadNum(0)
            if mode == 'full':
                dy = -min(y for x, y in polygon.vertices if x == t_min)
            return polygon.translated(-t_min, dy).normalized().vertices

        return canonical(P) == canonical(Q)

    # ==================== Quadratic examples ====================

    @staticmethod
    def cutkosky_k3_example() -> dict:
        """
        The K3 instance with form 4x^2 - 4y^2 - 4z^2, D = (1, 0, 0), C = (2, 1, 1):
        mu from the generic cone-boundary root against the closed formula
        ((D.C) - sqrt((D.C)^2 - D^2 C^2)) / C^2
        """
        S = SurfaceService.load_fixture('cutkosky_k3')
        D = [Fraction(1), Fraction(0), Fraction(0)]
        C = [Fraction(2), Fraction(1), Fraction(1)]
        generic = OkounkovService.mu(S, D, C)
        DC = SurfaceService.pair(S, D, C)
        DD = SurfaceService.pair(S, D, D)
        CC = SurfaceService.pair(S, C, C)
        closed = (QuadNum(DC) - QuadNum.sqrt(DC * DC - DD * CC)) / CC
        certificate = OkounkovService.mu_quadratic_certificate(S, D, C)
        return {
            'valid': generic == closed and evaluate_quadratic(*certificate, generic) == 0,
            'mu': generic,
            'closed_form': closed,
            'certificate': certificate
        }

    @staticmethod
    def realize_quadratic_mu(a) -> tuple[SurfaceModel, list[Fraction], list[Fraction]]:
        """
        Build a rank 3 quadratic-cone model with mu(D; C) = a

        Requires a > 0 irrational with conjugate greater than a. The form is
        4c * [[pi, a0, 0], [a0, 1, 0], [0, 0, -1/c]] in the basis (D, C, F), where
        a = a0 + b*sqrt(d), pi = a0^2 - b^2 d is the norm of a and c clears
        denominators, so (D - tC)^2 = 4c(t^2 - 2 a0 t + pi) has roots a and its
        conjugate.

        Raises:
            QuadraticConditionNotMet: a rational, a <= 0 or conjugate <= a
        """
        a = QuadNum.from_json(a)
        if a.is_rational:
            raise QuadraticConditionNotMet(f"{a} is rational")
        if a <= 0:
            raise QuadraticConditionNotMet(f"{a} is not positive")
        if a.conjugate() <= a:
            raise QuadraticConditionNotMet(f"Conjugate {a.conjugate()} does not exceed {a}")

        a0 = a.a
        norm = a.norm()
        c = lcm(norm.denominator, a0.denominator)
        form = [
            [int(4 * c * norm), int(4 * c * a0), 0],
            [int(4 * c * a0), 4 * c, 0],
            [0, 0, -4]
        ]
        S = SurfaceModel(
            name=f"quadratic-mu {a}",
            rank=3,
            basis=['D', 'C', 'F'],
            intersection_matrix=form,
            curves=[],
            cone=ConeModel(kind=ConeKind.QUADRATIC, ample=[Fraction(1), Fraction(0), Fraction(0)])
        )
        D = [Fraction(1), Fraction(0), Fraction(0)]
        C = [Fraction(0), Fraction(1), Fraction(0)]
        return S, D, C


def _fmt_point(p) -> str:
    return f"({p[0]}, {p[1]})"
