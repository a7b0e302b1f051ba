"""
Surface Model
Néron-Severi lattice, negative-curve catalog, cone description and flag data
"""
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.numbers import Rational, format_rational


# Class vectors in the NS basis; entries are Fractions, or QuadNums at cone boundaries
DivisorClass = list


class ConeKind(str, Enum):
    """How the effective and nef cones are described"""
    POLYHEDRAL = "polyhedral"
    QUADRATIC = "quadratic"


class CurveEntry(BaseModel):
    """An irreducible curve eligible to appear in negative parts"""
    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(..., min_length=1, description="Curve label, unique within the model")
    class_: list[int] = Field(..., alias='class', description="Integer class vector in the NS basis")
    self_int: Optional[int] = Field(default=None, description="Recorded self-intersection, checked at load")

    def to_dict(self) -> dict:
        data = {'name': self.name, 'class': list(self.class_)}
        if self.self_int is not None:
            data['self_int'] = self.self_int
        return data


class ConeModel(BaseModel):
    """
    Effective/nef cone description

    quadratic: Eff = Nef = {v : v.v >= 0 and v.h >= 0} for the ample witness h
    polyhedral: facet covectors f act by the coordinate pairing sum(f_i * v_i)
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: ConeKind
    ample: Optional[list[Rational]] = Field(default=None, description="Ample witness h (quadratic kind)")
    eff_generators: list[list[Rational]] = Field(default_factory=list)
    eff_facets: list[list[Rational]] = Field(default_factory=list)
    nef_facets: list[list[Rational]] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_kind_fields(self) -> 'ConeModel':
        if self.kind == ConeKind.QUADRATIC and not self.ample:
            raise ValueError("Quadratic cone requires an 'ample' witness")
        if self.kind == ConeKind.POLYHEDRAL and not self.eff_facets:
            raise ValueError("Polyhedral cone requires 'eff_facets'")
        return self

    def to_dict(self) -> dict:
        if self.kind == ConeKind.QUADRATIC:
            return {'kind': self.kind.value, 'ample': [format_rational(x) for x in self.ample]}
        return {
            'kind': self.kind.value,
            'eff_generators': [[format_rational(x) for x in g] for g in self.eff_generators],
            'eff_facets': [[format_rational(x) for x in f] for f in self.eff_facets],
            'nef_facets': [[format_rational(x) for x in f] for f in self.nef_facets]
        }


class SurfaceModel(BaseModel):
    """
    A smooth projective surface as seen by intersection theory
    """
    name: str = Field(default="surface", description="Model label")
    rank: int = Field(..., ge=1, description="Picard number")
    basis: list[str] = Field(..., description="Labels of the NS basis")
    intersection_matrix: list[list[int]] = Field(..., description="Symmetric intersection form")
    curves: list[CurveEntry] = Field(default_factory=list, description="Negative-curve catalog")
    cone: ConeModel

    @model_validator(mode='after')
    def check_dimensions(self) -> 'SurfaceModel':
        rho = self.rank
        if len(self.basis) != rho:
            raise ValueError(f"Expected {rho} basis labels, got {len(self.basis)}")
        if len(self.intersection_matrix) != rho or any(len(row) != rho for row in self.intersection_matrix):
            raise ValueError(f"Intersection matrix must be {rho}x{rho}")
        names = [c.name for c in self.curves]
        if len(set(names)) != len(names):
            raise ValueError("Curve names must be unique")
        for curve in self.curves:
            if len(curve.class_) != rho:
                raise ValueError(f"Curve {curve.name} has a class of length {len(curve.class_)}, expected {rho}")
        vectors = list(self.cone.eff_generators) + list(self.cone.eff_facets) + list(self.cone.nef_facets)
        if self.cone.ample is not None:
            vectors.append(self.cone.ample)
        if any(len(v) != rho for v in vectors):
            raise ValueError(f"Cone vectors must have length {rho}")
        return self

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        """Intersection form as Fractions"""
        return [[Fraction(x) for x in row] for row in self.intersection_matrix]

    @cached_property
    def curve_pairings(self) -> dict[tuple[str, str], Fraction]:
        """E.F for every ordered pair of catalog curves"""
        result = {}
        for a in self.curves:
            Qa = [sum((q * x for q, x in zip(row, a.class_)), Fraction(0)) for row in self.gram]
            for b in self.curves:
                result[(a.name, b.name)] = sum((x * y for x, y in zip(Qa, b.class_)), Fraction(0))
        return result

    @cached_property
    def curve_names(self) -> list[str]:
        return [c.name for c in self.curves]

    def get_curve(self, name: str) -> Optional[CurveEntry]:
        for curve in self.curves:
            if curve.name == name:
                return curve
        return None

    def curve_class(self, name: str) -> list[Fraction]:
        return [Fraction(x) for x in self.get_curve(name).class_]

    def find_curve(self, vector) -> Optional[CurveEntry]:
        """Catalog entry whose class equals the vector, if any"""
        target = [Fraction(x) for x in vector]
        for curve in self.curves:
            if [Fraction(x) for x in curve.class_] == target:
                return curve
        return None

    def to_dict(self) -> dict:
        """Convert to the surface JSON format"""
        return {
            'name': self.name,
            'rank': self.rank,
            'basis': list(self.basis),
            'intersection_matrix': [list(row) for row in self.intersection_matrix],
            'curves': [c.to_dict() for c in self.curves],
            'cone': self.cone.to_dict()
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SurfaceModel':
        """Create SurfaceModel from dictionary"""
        return cls(**data)


class FlagData(BaseModel):
    """
    Admissible flag (C, x): the curve class C and the local multiplicities
    m_E = ord_x(E|_C) of catalog curves at the point x
    """
    curve: list[int] = Field(..., min_length=1, description="Integral class of the flag curve")
    multiplicities: dict[str, int] = Field(default_factory=dict, description="Curve name -> m_E")

    @field_validator('multiplicities')
    @classmethod
    def non_negative(cls, v: dict[str, int]) -> dict[str, int]:
        for name, m in v.items():
            if m < 0:
                raise ValueError(f"Multiplicity of {name} must be non-negative")
        return v

    @property
    def curve_class(self) -> list[Fraction]:
        return [Fraction(x) for x in self.curve]

    def multiplicity(self, name: str) -> int:
        return self.multiplicities.get(name, 0)

    def to_dict(self) -> dict:
        return {'curve': list(self.curve), 'multiplicities': dict(sorted(self.multiplicities.items()))}

    @classmethod
    def from_dict(cls, data: dict) -> 'FlagData':
        return cls(**data)

