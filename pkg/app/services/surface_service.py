"""
Surface Service
Intersection pairing, cone membership tests, model validation and JSON loading
"""
import json
import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Union

from jsonschema import Draft7Validator
from pydantic import ValidationError

from app.exceptions import DegenerateCone, DimensionMismatch, InputError, InvalidFlag, Unbounded
from app.models.numbers import QuadNum, quadratic_roots, to_rational
from app.models.surface import ConeKind, DivisorClass, FlagData, SurfaceModel
from app.services.export_service import ExportService
from app.services.linear_algebra import LinearAlgebra, dot, primitive


logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).resolve().parent.parent.parent / 'data' / 'schemas'
SURFACE_DIR = Path(__file__).resolve().parent.parent.parent / 'data' / 'surfaces'


@lru_cache(maxsize=None)
def load_schema(name: str) -> Draft7Validator:
    """Compiled validator for data/schemas/<name>.schema.json"""
    with open(SCHEMA_DIR / f'{name}.schema.json') as f:
        return Draft7Validator(json.load(f))


def check_schema(name: str, data) -> None:
    """
    Validate a decoded JSON document against a bundled schema

    Raises:
        InputError: listing every violation with its JSON path
    """
    errors = sorted(load_schema(name).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        raise InputError(
            f"{name} document does not match its schema",
            detail=[
                {'path': '/'.join(str(p) for p in e.absolute_path), 'message': e.message}
                for e in errors
            ]
        )


def pydantic_errors(exc: ValidationError) -> list[dict]:
    return [
        {'path': '/'.join(str(p) for p in err['loc']), 'message': err['msg']}
        for err in exc.errors()
    ]


class SurfaceService:
    """
    Service for surface models including:
    - Intersection pairing
    - Pseudo-effective / nef / big membership
    - Model and flag validation
    - Loading and dumping the surface JSON format
    """

    # ==================== Pairing ====================

    @staticmethod
    def parse_divisor(S: SurfaceModel, values) -> list[Fraction]:
        """Coerce a list of rationals (or "p/q" strings) to a class vector of length rho"""
        vector = [to_rational(x) for x in values]
        if len(vector) != S.rank:
            raise DimensionMismatch(
                f"Divisor has length {len(vector)}, surface has rank {S.rank}",
                detail={'expected': S.rank, 'got': len(vector)}
            )
        return vector

    @staticmethod
    def pair(S: SurfaceModel, v: DivisorClass, w: DivisorClass):
        """
        Intersection number v^T Q w

        Entries may be Fractions or QuadNums; the result has the same exactness.

        Raises:
            DimensionMismatch: if either vector does not have length rho
        """
        if len(v) != S.rank or len(w) != S.rank:
            raise DimensionMismatch(
                f"Vectors of length {len(v)} and {len(w)} on a rank {S.rank} surface"
            )
        Qw = [dot(row, w) for row in S.gram]
        return dot(v, Qw)

    @staticmethod
    def self_intersection(S: SurfaceModel, v: DivisorClass):
        return SurfaceService.pair(S, v, v)

    # ==================== Cone membership ====================

    @staticmethod
    def _check_full_dimensional(S: SurfaceModel) -> None:
        if S.cone.kind != ConeKind.POLYHEDRAL or not S.cone.eff_generators:
            return
        if _eff_rank(S) < S.rank:
            raise DegenerateCone(
                "Effective cone is not full-dimensional",
                detail={'rank': _eff_rank(S), 'dim': S.rank}
            )

    @staticmethod
    def is_pseff(S: SurfaceModel, v: DivisorClass) -> bool:
        if len(v) != S.rank:
            raise DimensionMismatch(f"Divisor has length {len(v)}, surface has rank {S.rank}")
        if S.cone.kind == ConeKind.QUADRATIC:
            return SurfaceService.pair(S, v, v) >= 0 and SurfaceService.pair(S, v, S.cone.ample) >= 0
        return all(dot(f, v) >= 0 for f in S.cone.eff_facets)

    @staticmethod
    def is_nef(S: SurfaceModel, v: DivisorClass) -> bool:
        if S.cone.kind == ConeKind.QUADRATIC:
            return SurfaceService.is_pseff(S, v)
        if len(v) != S.rank:
            raise DimensionMismatch(f"Divisor has length {len(v)}, surface has rank {S.rank}")
        return all(dot(f, v) >= 0 for f in S.cone.nef_facets)

    @staticmethod
    def is_big(S: SurfaceModel, v: DivisorClass) -> bool:
        """
        Interior of the pseudo-effective cone (strict inequalities)

        Raises:
            DegenerateCone: polyhedral Eff that is not full-dimensional
        """
        if len(v) != S.rank:
            raise DimensionMismatch(f"Divisor has length {len(v)}, surface has rank {S.rank}")
        if S.cone.kind == ConeKind.QUADRATIC:
            return SurfaceService.pair(S, v, v) > 0 and SurfaceService.pair(S, v, S.cone.ample) > 0
        SurfaceService._check_full_dimensional(S)
        return all(dot(f, v) > 0 for f in S.cone.eff_facets)

    # ==================== Cone boundary ====================

    @staticmethod
    def boundary_along(S: SurfaceModel, D: DivisorClass, C: DivisorClass) -> QuadNum:
        """
        sup{t > 0 : D - tC is big}, for D big

        Polyhedral cones give the first facet crossing f(D)/f(C); quadratic cones
        give the first positive zero of (D - tC)^2 or of (D - tC).h.

        Raises:
            Unbounded: if D - tC stays big for every t > 0
        """
        if S.cone.kind == ConeKind.POLYHEDRAL:
            ratios = [dot(f, D) / dot(f, C) for f in S.cone.eff_facets if dot(f, C) > 0]
            if not ratios:
                raise Unbounded("No effective facet is positive on C", detail={'C': [str(x) for x in C]})
            return QuadNum(min(ratios))

        CC = SurfaceService.pair(S, C, C)
        DC = SurfaceService.pair(S, D, C)
        DD = SurfaceService.pair(S, D, D)
        candidates = [r for r in quadratic_roots(CC, -2 * DC, DD) if r > 0]
        h = list(S.cone.ample)
        Ch = SurfaceService.pair(S, C, h)
        if Ch > 0:
            candidates.append(QuadNum(SurfaceService.pair(S, D, h) / Ch))
        if not candidates:
            raise Unbounded("D - tC never leaves the positive cone", detail={'C': [str(x) for x in C]})
        return min(candidates)

    # ==================== Validation ====================

    @staticmethod
    def validate_surface(S: SurfaceModel) -> dict:
        """
        Check the lattice, catalog and cone invariants of a model

        Returns:
            Dict with 'valid' bool, 'errors' list and the computed 'signature'
        """
        errors = []
        Q = S.gram
        rho = S.rank

        for i in range(rho):
            for j in range(i + 1, rho):
                if Q[i][j] != Q[j][i]:
                    errors.append(f"Intersection matrix is not symmetric at ({i}, {j})")

        signature = LinearAlgebra.signature(Q) if not errors else None
        if signature is not None and signature != (1, rho - 1, 0):
            errors.append(
                f"Hodge index violated: signature {signature[:2]} with {signature[2]} zero eigenvalues, "
                f"expected (1, {rho - 1})"
            )

        for curve in S.curves:
            c = [Fraction(x) for x in curve.class_]
            if all(x == 0 for x in c):
                errors.append(f"Curve {curve.name} has the zero class")
                continue
            divisor = 0
            for x in curve.class_:
                divisor = gcd(divisor, abs(x))
            if divisor != 1:
                errors.append(f"Curve {curve.name}: class {curve.class_} is not primitive")
            square = SurfaceService.pair(S, c, c)
            if curve.self_int is not None and square != curve.self_int:
                errors.append(
                    f"Curve {curve.name}: recorded self-intersection {curve.self_int}, computed {square}"
                )

        cone = S.cone
        if cone.kind == ConeKind.QUADRATIC:
            h = list(cone.ample)
            if SurfaceService.pair(S, h, h) <= 0:
                errors.append("Ample witness h must satisfy h.h > 0")
            for curve in S.curves:
                c = [Fraction(x) for x in curve.class_]
                if SurfaceService.pair(S, c, c) < 0:
                    errors.append(
                        f"Curve {curve.name} is negative, but a quadratic cone has no negative curves"
                    )
        else:
            errors.extend(SurfaceService._validate_polyhedral(S))

        if errors:
            logger.debug("Surface %s failed validation: %s", S.name, errors)
        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'signature': list(signature) if signature is not None else None
        }

    @staticmethod
    def _validate_polyhedral(S: SurfaceModel) -> list[str]:
        errors = []
        cone = S.cone
        rho = S.rank
        generators = [list(g) for g in cone.eff_generators]

        if generators and LinearAlgebra.rank(generators, rho) < rho:
            errors.append("Effective cone is not full-dimensional (DegenerateCone)")
            return errors

        for gi, g in enumerate(generators):
            for fi, f in enumerate(cone.eff_facets):
                if dot(f, g) < 0:
                    errors.append(f"Generator {gi} violates eff facet {fi}")

        for fi, f in enumerate(cone.eff_facets):
            tight = [g for g in generators if dot(f, g) == 0]
            if generators and LinearAlgebra.rank(tight, rho) < rho - 1:
                errors.append(f"Eff facet {fi} is tight on fewer than {rho - 1} independent generators")

        for curve in S.curves:
            c = [Fraction(x) for x in curve.class_]
            if not all(dot(f, c) >= 0 for f in cone.eff_facets):
                errors.append(f"Curve {curve.name} is not pseudo-effective")

        if not generators:
            return errors

        # recorded facets must be exactly the facets of the generated cone
        computed = LinearAlgebra.cone_facets(generators, rho)
        recorded = {tuple(primitive(f)) for f in cone.eff_facets}
        for f in computed:
            if tuple(f) not in recorded:
                errors.append(f"Eff facets incomplete: missing {f}")

        # nef is dual to eff under the intersection form
        expected = {tuple(f) for f in LinearAlgebra.dual_facets(S.gram, generators, computed, rho)}
        nef = {tuple(primitive(f)) for f in cone.nef_facets}
        for f in sorted(expected - nef):
            errors.append(f"Nef facets incomplete: missing {list(f)}")
        for f in sorted(nef - expected):
            errors.append(f"Nef facet {list(f)} is not dual to an extremal effective generator")

        return errors

    @staticmethod
    def validate_flag(S: SurfaceModel, flag: FlagData) -> None:
        """
        Check a flag against a model

        Raises:
            InvalidFlag: wrong dimension, unknown curve, m_E > E.C, or the flag
                curve listed with a positive multiplicity
        """
        if len(flag.curve) != S.rank:
            raise InvalidFlag(f"Flag curve has length {len(flag.curve)}, surface has rank {S.rank}")
        C = flag.curve_class
        if all(x == 0 for x in C):
            raise InvalidFlag("Flag curve class is zero")
        own = S.find_curve(C)
        for name, m in sorted(flag.multiplicities.items()):
            curve = S.get_curve(name)
            if curve is None:
                raise InvalidFlag(f"Unknown curve {name!r} in multiplicities", detail={'curve': name})
            if m == 0:
                continue
            if own is not None and own.name == name:
                raise InvalidFlag(f"The flag curve {name} cannot carry a multiplicity at x")
            bound = SurfaceService.pair(S, S.curve_class(name), C)
            if m > bound:
                raise InvalidFlag(
                    f"m_{name} = {m} exceeds {name}.C = {bound}",
                    detail={'curve': name, 'multiplicity': m, 'intersection': str(bound)}
                )

    # ==================== JSON I/O ====================

    @staticmethod
    def load_surface(data: Union[dict, str]) -> SurfaceModel:
        """
        Build a SurfaceModel from the surface JSON format

        Args:
            data: Decoded JSON object or JSON text

        Raises:
            InputError: on syntax, schema or field errors
        """
        if isinstance(data, str):
            data = ExportService.parse_json(data)
        check_schema('surface', data)
        try:
            return SurfaceModel.from_dict(data)
        except ValidationError as e:
            raise InputError("Invalid surface model", detail=pydantic_errors(e))

    @staticmethod
    def load_fixture(name: str) -> SurfaceModel:
        """Load a bundled model from data/surfaces/<name>.json"""
        path = SURFACE_DIR / f'{name}.json'
        if not path.exists():
            raise InputError(f"No bundled surface named {name!r}")
        return SurfaceService.load_surface(path.read_text())

    @staticmethod
    def dump_surface(S: SurfaceModel) -> dict:
        return S.to_dict()

    @staticmethod
    def load_flag(data: dict) -> FlagData:
        check_schema('flag', data)
        try:
            return FlagData.from_dict(data)
        except ValidationError as e:
            raise InputError("Invalid flag", detail=pydantic_errors(e))


def _eff_rank(S: SurfaceModel) -> int:
    key = tuple(tuple(g) for g in S.cone.eff_generators)
    return _generator_rank(key, S.rank)


@lru_cache(maxsize=256)
def _generator_rank(generators: tuple, dim: int) -> int:
    return LinearAlgebra.rank([list(g) for g in generators], dim)
