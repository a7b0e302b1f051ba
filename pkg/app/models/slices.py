"""
Slice Body Models
Three-fold bodies {0 <= t <= f(r), 0 <= y <= g(r, t)} assembled from surface slices
"""
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.numbers import ExactNumber, QuadNum, Rational, encode_number, format_rational


class DivisorPath(BaseModel):
    """The classes v0 - r*w for r in [r_lo, r_hi]"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    v0: list[Rational]
    w: list[Rational]
    r_lo: Rational = Fraction(0)
    r_hi: Rational = Fraction(1)

    @model_validator(mode='after')
    def check_path(self) -> 'DivisorPath':
        if len(self.v0) != len(self.w):
            raise ValueError("v0 and w must have the same length")
        if self.r_hi < self.r_lo:
            raise ValueError(f"Empty range [{self.r_lo}, {self.r_hi}]")
        return self

    def at(self, r) -> list[Fraction]:
        return [a - r * b for a, b in zip(self.v0, self.w)]

    def to_dict(self) -> dict:
        return {
            'v0': [format_rational(x) for x in self.v0],
            'w': [format_rational(x) for x in self.w],
            'r_lo': format_rational(self.r_lo),
            'r_hi': format_rational(self.r_hi)
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'DivisorPath':
        return cls(**data)


class ClosedFormF(BaseModel):
    """f(r) = p0 + p1*r - scale*sqrt(d0 + d1*r + d2*r^2)"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    p0: Rational
    p1: Rational
    scale: Rational
    d0: Rational
    d1: Rational
    d2: Rational

    def radicand(self, r) -> Fraction:
        r = Fraction(r)
        return self.d0 + self.d1 * r + self.d2 * r * r

    def at(self, r) -> QuadNum:
        r = Fraction(r)
        return QuadNum(self.p0 + self.p1 * r) - QuadNum.sqrt(self.radicand(r)) * self.scale

    def to_dict(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ('p0', 'p1', 'scale', 'd0', 'd1', 'd2')}


class SliceSample(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: Rational
    value: ExactNumber

    def to_dict(self) -> dict:
        return {'r': format_rational(self.r), 'value': encode_number(self.value)}


class SliceBody(BaseModel):
    """
    f samples along the path, the affine g(r, t) = c0 + cr*r + ct*t and, for
    quadratic cones, the symbolic closed form of f
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    path: DivisorPath
    curve: list[Rational] = Field(..., description="Flag curve class C on the slice surface")
    f_samples: list[SliceSample] = Field(default_factory=list)
    c0: Rational
    cr: Rational
    ct: Rational
    closed_form: Optional[ClosedFormF] = None
    boundary_samples: list[Rational] = Field(
        default_factory=list,
        description="Sampled r where v0 - r*w is pseudo-effective but not big; f is 0 there by closure"
    )

    def g(self, r, t) -> Fraction:
        return self.c0 + self.cr * Fraction(r) + self.ct * Fraction(t)

    def to_dict(self) -> dict:
        data = {
            'path': self.path.to_dict(),
            'curve': [format_rational(x) for x in self.curve],
            'g': {'c0': format_rational(self.c0), 'cr': format_rational(self.cr), 'ct': format_rational(self.ct)},
            'f': [s.to_dict() for s in self.f_samples],
            'boundary_samples': [format_rational(r) for r in self.boundary_samples]
        }
        if self.closed_form is not None:
            data['closed_form'] = self.closed_form.to_dict()
        return data
