"""
Zariski Service
Zariski decomposition by support growth, the chamber walk along D - tC,
and a brute-force oracle over support subsets
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Optional

from app.exceptions import (
    GramNotNegativeDefinite, Mismatch, NefTestFailed, NotBig, NotPseudoEffective
)
from app.models.decomposition import SegmentWalk, WalkPiece, ZariskiDecomposition
from app.models.numbers import QuadNum
from app.models.surface import DivisorClass, FlagData, SurfaceModel
from app.services.linear_algebra import LinearAlgebra
from app.services.surface_service import SurfaceService


logger = logging.getLogger(__name__)

ZERO = Fraction(0)


def _lex_sign(value: Fraction, slope: Fraction) -> int:
    """Sign of value + eps*slope for an infinitesimal eps > 0"""
    if value != 0:
        return 1 if value > 0 else -1
    return (slope > 0) - (slope < 0)


class ZariskiService:
    """
    Service for Zariski decompositions including:
    - Decomposition of a pseudo-effective class
    - The piecewise-linear walk t -> N(D - tC)
    - nu, the coefficient of the flag curve in N(D)
    - Exhaustive subset oracle for small catalogs
    """

    @staticmethod
    def _catalog(S: SurfaceModel) -> list[tuple[str, list[Fraction]]]:
        return [(name, S.curve_class(name)) for name in sorted(S.curve_names)]

    @staticmethod
    def _gram(S: SurfaceModel, names: list[str]) -> list[list[Fraction]]:
        EE = S.curve_pairings
        return [[EE[(a, b)] for b in names] for a in names]

    @staticmethod
    def _grow_support(
        S: SurfaceModel,
        base: DivisorClass,
        direction: Optional[DivisorClass] = None
    ) -> tuple[list[str], list[Fraction], list[Fraction]]:
        """
        Support growth for the class base + eps*direction

        Starting from {E : D.E < 0}, solve N on the support from N.E_j = D.E_j,
        then add every curve with P.E < 0 until none is left. All signs are
        lexicographic in (value, eps-slope), so a direction gives the
        decomposition just to the right of base.

        Returns:
            Tuple (support names, coefficients at eps^0, coefficients at eps^1)
        """
        if direction is None:
            direction = [ZERO] * S.rank
        catalog = ZariskiService._catalog(S)
        EE = S.curve_pairings
        values = {name: SurfaceService.pair(S, base, E) for name, E in catalog}
        slopes = {name: SurfaceService.pair(S, direction, E) for name, E in catalog}

        support = [name for name, _ in catalog if _lex_sign(values[name], slopes[name]) < 0]
        x0: list[Fraction] = []
        x1: list[Fraction] = []
        iteration = 0
        while True:
            iteration += 1
            if support:
                gram = ZariskiService._gram(S, support)
                if not LinearAlgebra.is_negative_definite(gram):
                    raise GramNotNegativeDefinite(
                        f"Support {support} has a Gram matrix that is not negative definite",
                        detail={'support': support}
                    )
                x0 = LinearAlgebra.solve(gram, [values[name] for name in support])
                x1 = LinearAlgebra.solve(gram, [slopes[name] for name in support])
                for name, a, b in zip(support, x0, x1):
                    if _lex_sign(a, b) < 0:
                        raise NotPseudoEffective(
                            f"Negative coefficient for {name} in the negative part",
                            detail={'curve': name, 'coefficient': str(a)}
                        )
            else:
                x0, x1 = [], []

            entering = []
            for name, E in catalog:
                if name in support:
                    continue
                p0 = values[name] - sum(
                    (a * EE[(s, name)] for s, a in zip(support, x0)), ZERO
                )
                p1 = slopes[name] - sum(
                    (b * EE[(s, name)] for s, b in zip(support, x1)), ZERO
                )
                if _lex_sign(p0, p1) < 0:
                    entering.append(name)
            logger.debug("Support growth iteration %d: support=%s entering=%s", iteration, support, entering)
            if not entering:
                return support, x0, x1
            support = sorted(support + entering)

    @staticmethod
    def zariski_decompose(S: SurfaceModel, D: DivisorClass) -> ZariskiDecomposition:
        """
        Zariski decomposition D = P + N of a pseudo-effective class

        Args:
            S: Surface model; its catalog must contain every curve that can
                appear in a negative part
            D: Class vector

        Returns:
            ZariskiDecomposition with the positive coefficients of N

        Raises:
            NotPseudoEffective: D outside the pseudo-effective cone
            GramNotNegativeDefinite: inconsistent or incomplete catalog
            NefTestFailed: P positive on the catalog but not nef
        """
        D = SurfaceService.parse_divisor(S, D)
        if not SurfaceService.is_pseff(S, D):
            raise NotPseudoEffective("Class is not pseudo-effective", detail={'D': [str(x) for x in D]})

        support, coefficients, _ = ZariskiService._grow_support(S, D)
        P = list(D)
        N = {}
        for name, c in zip(support, coefficients):
            if c == 0:
                continue
            N[name] = c
            E = S.curve_class(name)
            P = [p - c * e for p, e in zip(P, E)]

        if not SurfaceService.is_nef(S, P):
            raise NefTestFailed(
                "Positive part is not nef; the curve catalog is incomplete",
                detail={'P': [str(x) for x in P]}
            )
        return ZariskiDecomposition(P=P, N=N)

    @staticmethod
    def nu(S: SurfaceModel, D: DivisorClass, flag: FlagData) -> Fraction:
        """Coefficient of the flag curve in N(D); zero when the curve is not in the catalog"""
        D = SurfaceService.parse_divisor(S, D)
        own = S.find_curve(flag.curve_class)
        if own is None:
            return ZERO
        return ZariskiService.zariski_decompose(S, D).coefficient(own.name)

    @staticmethod
    def segment_walk(
        S: SurfaceModel,
        D: DivisorClass,
        flag: FlagData,
        max_pieces_slack: int = 1
    ) -> SegmentWalk:
        """
        Walk t -> N(D - tC) from t = nu to t = mu

        On each chamber the support is constant and N_t = A + tB, where
        G.A = (D.E_j) and G.B = (-C.E_j) over the support. The next event is the
        first t where P_t.E reaches zero for an outside curve whose pairing is
        decreasing, or a support coefficient reaches zero, or mu.

        Raises:
            NotBig: D is not big
            Mismatch: more pieces than catalog curves plus the slack
        """
        D = SurfaceService.parse_divisor(S, D)
        SurfaceService.validate_flag(S, flag)
        if not SurfaceService.is_big(S, D):
            raise NotBig("Class is not big", detail={'D': [str(x) for x in D]})

        C = flag.curve_class
        minus_C = [-c for c in C]
        own = S.find_curve(C)
        nu = ZariskiService.nu(S, D, flag)
        mu = SurfaceService.boundary_along(S, D, C)
        catalog = ZariskiService._catalog(S)
        EE = S.curve_pairings
        limit = len(catalog) + max_pieces_slack

        pieces: list[WalkPiece] = []
        t = nu
        while QuadNum(t) < mu:
            base = [d - t * c for d, c in zip(D, C)]
            support, _, _ = ZariskiService._grow_support(S, base, minus_C)
            A: dict[str, Fraction] = {}
            B: dict[str, Fraction] = {}
            if support:
                classes = [S.curve_class(name) for name in support]
                gram = ZariskiService._gram(S, support)
                a = LinearAlgebra.solve(gram, [SurfaceService.pair(S, D, E) for E in classes])
                b = LinearAlgebra.solve(gram, [SurfaceService.pair(S, minus_C, E) for E in classes])
                A, B = dict(zip(support, a)), dict(zip(support, b))

            events: list[tuple[Fraction, str, str]] = []
            for name in support:
                if B[name] < 0:
                    events.append((-A[name] / B[name], 'exit', name))
            for name, E in catalog:
                if name in support:
                    continue
                p0 = SurfaceService.pair(S, D, E) - sum(
                    (A[s] * EE[(s, name)] for s in support), ZERO
                )
                p1 = SurfaceService.pair(S, minus_C, E) - sum(
                    (B[s] * EE[(s, name)] for s in support), ZERO
                )
                if p1 < 0:
                    events.append((-p0 / p1, 'enter', name))
            events = [e for e in events if e[0] > t]

            t_next = mu
            if events:
                first = min(e[0] for e in events)
                if QuadNum(first) < mu:
                    t_next = QuadNum(first)
                    for when, kind, name in events:
                        if when == first:
                            logger.debug("Walk event at t=%s: %s %s", when, kind, name)

            if pieces and pieces[-1].A == A and pieces[-1].B == B:
                pieces[-1] = WalkPiece(t_lo=pieces[-1].t_lo, t_hi=t_next, A=A, B=B, support=support)
            else:
                pieces.append(WalkPiece(t_lo=QuadNum(t), t_hi=t_next, A=A, B=B, support=support))
            if own is not None and own.name in support:
                raise Mismatch(f"Flag curve {own.name} entered the negative part at t={t}")
            if len(pieces) > limit:
                raise Mismatch(
                    f"Walk produced {len(pieces)} pieces, more than {limit}",
                    detail={'pieces': len(pieces), 'limit': limit}
                )
            if t_next == mu:
                break
            t = t_next.to_fraction()

        logger.debug("Walk nu=%s mu=%s with %d pieces", nu, mu, len(pieces))
        return SegmentWalk(nu=nu, mu=mu, pieces=pieces, curve=own.name if own else None)

    @staticmethod
    def brute_force_decompositions(S: SurfaceModel, D: DivisorClass) -> list[ZariskiDecomposition]:
        """
        Every support subset giving a valid decomposition: negative definite
        Gram matrix, positive coefficients, P nef and P.E = 0 on the support
        """
        D = SurfaceService.parse_divisor(S, D)
        catalog = ZariskiService._catalog(S)
        found = []
        for size in range(len(catalog) + 1):
            for subset in combinations(catalog, size):
                names = [name for name, _ in subset]
                classes = [E for _, E in subset]
                coefficients: list[Fraction] = []
                if subset:
                    gram = ZariskiService._gram(S, names)
                    if not LinearAlgebra.is_negative_definite(gram):
                        continue
                    coefficients = LinearAlgebra.solve(gram, [SurfaceService.pair(S, D, E) for E in classes])
                    if any(c <= 0 for c in coefficients):
                        continue
                P = list(D)
                for c, E in zip(coefficients, classes):
                    P = [p - c * e for p, e in zip(P, E)]
                if not SurfaceService.is_nef(S, P):
                    continue
                if any(SurfaceService.pair(S, P, E) < 0 for _, E in catalog):
                    continue
                found.append(ZariskiDecomposition(P=P, N=dict(zip(names, coefficients))))
        return found
