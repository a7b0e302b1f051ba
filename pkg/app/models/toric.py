"""
Toric Surface Models
Complete fans in Z^2 and torus-invariant divisors
"""
from math import gcd

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.numbers import Rational, format_rational


Ray = tuple[int, int]


def det(v: Ray, w: Ray) -> int:
    return v[0] * w[1] - v[1] * w[0]


class ToricSurface(BaseModel):
    """
    Fan given by its rays v_i in counterclockwise order
    """
    rays: list[Ray] = Field(..., min_length=1, description="Primitive integer rays, counterclockwise")

    @field_validator('rays')
    @classmethod
    def primitive_rays(cls, v: list[Ray]) -> list[Ray]:
        for x, y in v:
            if gcd(x, y) != 1:
                raise ValueError(f"Ray ({x}, {y}) is not primitive")
        if len(set(v)) != len(v):
            raise ValueError("Rays must be distinct")
        return [tuple(r) for r in v]

    @property
    def size(self) -> int:
        return len(self.rays)

    def index_of(self, ray: Ray) -> int:
        return self.rays.index(tuple(ray))

    def neighbours(self, i: int) -> tuple[Ray, Ray]:
        r = self.size
        return self.rays[(i - 1) % r], self.rays[(i + 1) % r]

    def adjacent(self, i: int, j: int) -> bool:
        return (i - j) % self.size in (1, self.size - 1)

    def to_dict(self) -> dict:
        return {'rays': [list(r) for r in self.rays]}

    @classmethod
    def from_dict(cls, data: dict) -> 'ToricSurface':
        return cls(rays=[tuple(r) for r in data['rays']])


class ToricDivisor(BaseModel):
    """D = sum of a_i D_i over the rays of a fan"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    surface: ToricSurface
    a: list[Rational]

    @model_validator(mode='after')
    def matching_length(self) -> 'ToricDivisor':
        if len(self.a) != self.surface.size:
            raise ValueError(f"Expected {self.surface.size} coefficients, got {len(self.a)}")
        return self

    def to_dict(self) -> dict:
        return {
            'rays': [list(r) for r in self.surface.rays],
            'a': [format_rational(x) for x in self.a]
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'ToricDivisor':
        return cls(surface=ToricSurface.from_dict(data), a=data['a'])
