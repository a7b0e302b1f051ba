"""
Toric Service
Intersection theory of smooth complete toric surfaces, divisor polytopes,
Okounkov bodies of invariant flags and the realization of polygons as toric bodies
"""
import logging
from fractions import Fraction
from functools import cmp_to_key

from sympy import ZZ

from app.exceptions import InvalidFan, InvalidPolygon, MissingAxisRays, NonAdjacentFlag
from app.models.numbers import QuadNum
from app.models.polygon import Polygon
from app.models.surface import ConeKind, ConeModel, CurveEntry, FlagData, SurfaceModel
from app.models.toric import Ray, ToricDivisor, ToricSurface, det
from app.services.linear_algebra import LinearAlgebra, primitive
from app.services.okounkov_service import OkounkovService


logger = logging.getLogger(__name__)

X_AXIS: Ray = (1, 0)
Y_AXIS: Ray = (0, 1)


def _half(v: Ray) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_order(v: Ray, w: Ray) -> int:
    """Counterclockwise order by angle in [0, 2pi) from the positive x-axis"""
    hv, hw = _half(v), _half(w)
    if hv != hw:
        return hv - hw
    d = det(v, w)
    return -1 if d > 0 else (1 if d < 0 else 0)


def sort_counterclockwise(rays: list[Ray]) -> list[Ray]:
    return sorted((tuple(r) for r in rays), key=cmp_to_key(_angle_order))


def convex_hull(points: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Monotone chain hull, counterclockwise from the lexicographic minimum, no collinear points"""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


class ToricService:
    """
    Service for smooth complete toric surfaces including:
    - Fan checks and self-intersections
    - The derived SurfaceModel (NS basis, catalog, cones)
    - Divisor polytopes and their psi images
    - Fan completion and polygon realization
    """

    # ==================== Fans ====================

    @staticmethod
    def check_fan(T: ToricSurface) -> None:
        """
        Raises:
            InvalidFan: rays not counterclockwise, or a consecutive pair with det != 1
        """
        rays = T.rays
        if len(rays) < 3:
            raise InvalidFan(f"A complete fan needs at least three rays, got {len(rays)}")
        ordered = sort_counterclockwise(rays)
        start = ordered.index(rays[0])
        if ordered[start:] + ordered[:start] != list(rays):
            raise InvalidFan("Rays are not in counterclockwise order")
        for i, v in enumerate(rays):
            w = rays[(i + 1) % len(rays)]
            if det(v, w) != 1:
                raise InvalidFan(
                    f"det({v}, {w}) = {det(v, w)}; fan is not smooth and complete",
                    detail={'rays': [list(v), list(w)], 'det': det(v, w)}
                )

    @staticmethod
    def self_intersections(T: ToricSurface) -> list[int]:
        """D_i^2 = -a_i where v_{i-1} + v_{i+1} = a_i v_i"""
        ToricService.check_fan(T)
        squares = []
        for i, v in enumerate(T.rays):
            prev, nxt = T.neighbours(i)
            s = (prev[0] + nxt[0], prev[1] + nxt[1])
            a = s[0] // v[0] if v[0] != 0 else s[1] // v[1]
            if (a * v[0], a * v[1]) != s:
                raise InvalidFan(f"Neighbours of {v} do not sum to a multiple of it")
            squares.append(-a)
        return squares

    @staticmethod
    def _flag_pair(T: ToricSurface) -> tuple[int, int]:
        """Indices of (1,0) and (0,1) when both are rays, else the first adjacent pair"""
        if X_AXIS in T.rays and Y_AXIS in T.rays:
            return T.index_of(X_AXIS), T.index_of(Y_AXIS)
        return 0, 1

    @staticmethod
    def presentation(T: ToricSurface) -> tuple[int, int, list[int], list[list[Fraction]]]:
        """
        NS basis of the toric surface: the classes of every D_j except two
        adjacent ones D_{i1}, D_{i2}, which are eliminated with the linear
        relations sum <u, v_j> D_j = 0

        Returns:
            Tuple (i1, i2, basis ray indices, class vector of every D_j)
        """
        ToricService.check_fan(T)
        i1, i2 = ToricService._flag_pair(T)
        v1, v2 = T.rays[i1], T.rays[i2]
        d = det(v1, v2)
        others = [j for j in range(T.size) if j not in (i1, i2)]
        rho = len(others)
        classes: list[list[Fraction]] = [[Fraction(0)] * rho for _ in range(T.size)]
        for k, j in enumerate(others):
            classes[j][k] = Fraction(1)
            v = T.rays[j]
            # v = c1*v1 + c2*v2
            c1 = Fraction(det(v, v2), d)
            c2 = Fraction(det(v1, v), d)
            classes[i1][k] = -c1
            classes[i2][k] = -c2
        return i1, i2, others, classes

    @staticmethod
    def toric_surface_model(T: ToricSurface) -> SurfaceModel:
        """
        SurfaceModel of a smooth complete toric surface

        The catalog lists the invariant curves D_i with D_i^2 < 0, the effective
        cone is spanned by all [D_i] and the nef cone is cut out by pairing with them.
        """
        squares = ToricService.self_intersections(T)
        total = sum(squares)
        if total != 12 - 3 * T.size:
            raise InvalidFan(f"Self-intersections sum to {total}, expected {12 - 3 * T.size}")
        i1, i2, others, classes = ToricService.presentation(T)
        rho = len(others)

        form = [[0] * rho for _ in range(rho)]
        for a, j in enumerate(others):
            for b, k in enumerate(others):
                if j == k:
                    form[a][b] = squares[j]
                elif T.adjacent(j, k):
                    form[a][b] = 1

        curves = [
            CurveEntry(name=f"D{i}", class_=[int(x) for x in classes[i]], self_int=squares[i])
            for i in range(T.size) if squares[i] < 0
        ]
        eff_facets = LinearAlgebra.cone_facets(classes, rho)
        nef_facets = LinearAlgebra.dual_facets(form, classes, eff_facets, rho)
        cone = ConeModel(
            kind=ConeKind.POLYHEDRAL,
            eff_generators=classes,
            eff_facets=eff_facets,
            nef_facets=nef_facets
        )
        logger.debug("Toric model with %d rays: rho=%d, %d negative curves", T.size, rho, len(curves))
        return SurfaceModel(
            name=f"toric {T.rays}",
            rank=rho,
            basis=[f"D{j}" for j in others],
            intersection_matrix=form,
            curves=curves,
            cone=cone
        )

    @staticmethod
    def divisor_class(D: ToricDivisor) -> list[Fraction]:
        """Class of sum a_i D_i in the NS basis of toric_surface_model"""
        _, _, others, classes = ToricService.presentation(D.surface)
        vector = [Fraction(0)] * len(others)
        for a, c in zip(D.a, classes):
            vector = [x + a * y for x, y in zip(vector, c)]
        return vector

    @staticmethod
    def toric_flag(T: ToricSurface, i1: int, i2: int) -> FlagData:
        """
        Invariant flag C = D_{i1}, x = D_{i1} meet D_{i2}, encoded by m = 1 on
        D_{i2} when that curve is in the catalog

        Raises:
            NonAdjacentFlag: rays i1, i2 do not span a cone of the fan
        """
        ToricService._check_flag_rays(T, i1, i2)
        _, _, _, classes = ToricService.presentation(T)
        squares = ToricService.self_intersections(T)
        multiplicities = {f"D{i2}": 1} if squares[i2] < 0 else {}
        return FlagData(curve=[int(x) for x in classes[i1]], multiplicities=multiplicities)

    @staticmethod
    def _check_flag_rays(T: ToricSurface, i1: int, i2: int) -> None:
        if not (0 <= i1 < T.size and 0 <= i2 < T.size) or not T.adjacent(i1, i2):
            raise NonAdjacentFlag(f"Rays {i1} and {i2} are not adjacent", detail={'i1': i1, 'i2': i2})
        if det(T.rays[i1], T.rays[i2]) != 1:
            raise NonAdjacentFlag(
                f"det(v_{i1}, v_{i2}) = {det(T.rays[i1], T.rays[i2])}, expected 1",
                detail={'i1': i1, 'i2': i2}
            )

    # ==================== Polytopes ====================

    @staticmethod
    def polytope_of_divisor(T: ToricSurface, a: list) -> Polygon:
        """
        P(D) = {u : <u, v_i> + a_i >= 0 for all i}

        Returns:
            Polygon counterclockwise from its lexicographic minimum; may be empty,
            a point or a segment
        """
        a = [Fraction(x) for x in a]
        rays = T.rays
        candidates = []
        for i in range(len(rays)):
            for j in range(i + 1, len(rays)):
                d = det(rays[i], rays[j])
                if d == 0:
                    continue
                # <u, v_i> = -a_i and <u, v_j> = -a_j by Cramer's rule
                (p, q), (r, s) = rays[i], rays[j]
                x = Fraction(-a[i] * s + a[j] * q, d)
                y = Fraction(-a[j] * p + a[i] * r, d)
                candidates.append((x, y))
        inside = [
            (x, y) for x, y in candidates
            if all(x * v[0] + y * v[1] + ai >= 0 for v, ai in zip(rays, a))
        ]
        hull = convex_hull(inside)
        return Polygon(vertices=[(QuadNum(x), QuadNum(y)) for x, y in hull])

    @staticmethod
    def okounkov_via_psi(T: ToricSurface, a: list, i1: int, i2: int) -> Polygon:
        """
        psi(P(D)) with psi(u) = (<u, v_{i1}>, <u, v_{i2}>)

        The Okounkov body of the flag (D_{i1}, D_{i1} meet D_{i2}) is this image
        translated by (a_{i1}, a_{i2}).

        Raises:
            NonAdjacentFlag: rays i1, i2 do not span a smooth cone of the fan
        """
        ToricService._check_flag_rays(T, i1, i2)
        v1, v2 = T.rays[i1], T.rays[i2]
        polytope = ToricService.polytope_of_divisor(T, a)
        image = [
            (x * v1[0] + y * v1[1], x * v2[0] + y * v2[1])
            for x, y in polytope.vertices
        ]
        return Polygon(vertices=image).normalized()

    # ==================== Realization ====================

    @staticmethod
    def _unimodular_step(v: Ray, w: Ray) -> Ray:
        """
        The ray u inside cone(v, w) with det(v, u) = 1 closest to w; repeated
        insertion of u lowers det to 1 (Hirzebruch-Jung)
        """
        s, t, _ = ZZ.gcdex(ZZ(v[0]), ZZ(v[1]))
        u0 = (-int(t), int(s))
        k = (-det(u0, w)) // det(v, w) + 1
        return (u0[0] + k * v[0], u0[1] + k * v[1])

    @staticmethod
    def smooth_complete_fan(rays: list[Ray]) -> ToricSurface:
        """
        Complete a set of primitive rays containing (1,0) and (0,1) to a smooth
        complete fan

        Raises:
            MissingAxisRays: (1,0) or (0,1) absent
            InvalidFan: a ray lies in the open first quadrant or is not primitive
        """
        rays = [tuple(r) for r in rays]
        if X_AXIS not in rays or Y_AXIS not in rays:
            raise MissingAxisRays("Both (1,0) and (0,1) must be rays", detail={'rays': [list(r) for r in rays]})
        for r in rays:
            if r[0] > 0 and r[1] > 0:
                raise InvalidFan(f"Ray {r} lies in the open first quadrant")
        current = sort_counterclockwise(list(dict.fromkeys(rays)))

        changed = True
        while changed:
            changed = False
            for i, v in enumerate(current):
                w = current[(i + 1) % len(current)]
                d = det(v, w)
                if d == 1:
                    continue
                if d <= 0:
                    # angular gap of at least pi
                    u = (-v[1], v[0])
                else:
                    u = ToricService._unimodular_step(v, w)
                if u[0] > 0 and u[1] > 0:
                    raise InvalidFan(f"Completion would insert {u} in the open first quadrant")
                logger.debug("Fan completion: inserting %s between %s and %s (det %d)", u, v, w, d)
                current.insert(i + 1, u)
                changed = True
                break
        return ToricSurface(rays=current)

    @staticmethod
    def realize_polygon(poly) -> tuple[ToricDivisor, tuple[int, int]]:
        """
        Toric divisor and invariant flag whose Okounkov body is the given polygon

        The polygon is translated to touch both axes inside the positive quadrant;
        its primitive inward edge normals, the axis rays and the rays added by fan
        completion carry support numbers a_i = -min <u, v_i> over the polygon.

        Returns:
            Tuple (ToricDivisor, (i1, i2)) with v_{i1} = (1,0), v_{i2} = (0,1)

        Raises:
            InvalidPolygon: fails the Theorem B shape or has irrational vertices
        """
        report = OkounkovService.validate_theorem_b(poly)
        if not report['valid']:
            raise InvalidPolygon("Polygon fails the Theorem B shape", detail=report['errors'])
        polygon = Polygon(vertices=report['lower'] + list(reversed(report['upper']))).normalized()
        if not all(x.is_rational and y.is_rational for x, y in polygon.vertices):
            raise InvalidPolygon("Realization needs rational vertices")
        dt, dy = report['translation']
        polygon = polygon.translated(dt, dy)
        points = [(x.to_fraction(), y.to_fraction()) for x, y in polygon.vertices]

        def support(v: Ray) -> Fraction:
            return -min(x * v[0] + y * v[1] for x, y in points)

        rays: list[Ray] = []
        for p, q in zip(points, points[1:] + points[:1]):
            normal = primitive([p[1] - q[1], q[0] - p[0]])
            rays.append((normal[0], normal[1]))
        for axis in (X_AXIS, Y_AXIS):
            if axis not in rays:
                rays.append(axis)

        T = ToricService.smooth_complete_fan(rays)
        a = [support(v) for v in T.rays]
        flag = (T.index_of(X_AXIS), T.index_of(Y_AXIS))
        logger.debug("Realized polygon on a fan with %d rays", T.size)
        return ToricDivisor(surface=T, a=a), flag

    @staticmethod
    def forward_body(D: ToricDivisor, flag: tuple[int, int], max_pieces_slack: int = 1) -> Polygon:
        """Okounkov polygon of a toric divisor computed through its SurfaceModel"""
        S = ToricService.toric_surface_model(D.surface)
        i1, i2 = flag
        body = OkounkovService.okounkov_polygon(
            S, ToricService.divisor_class(D), ToricService.toric_flag(D.surface, i1, i2), max_pieces_slack
        )
        return body.polygon
