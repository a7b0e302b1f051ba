"""
Zariski Decomposition Models
Positive/negative parts and the piecewise-linear walk along D - tC
"""
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.numbers import ExactNumber, QuadNum, Rational, encode_number, format_rational


class ZariskiDecomposition(BaseModel):
    """
    D = P + N with P nef, N effective on a negative definite support and P.E = 0 on it
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    P: list[Rational] = Field(..., description="Positive part as a class vector")
    N: dict[str, Rational] = Field(default_factory=dict, description="Curve name -> positive coefficient")

    @property
    def support(self) -> list[str]:
        return sorted(self.N)

    def coefficient(self, name: str) -> Fraction:
        return self.N.get(name, Fraction(0))

    def to_dict(self) -> dict:
        return {
            'P': [format_rational(x) for x in self.P],
            'N': {name: format_rational(self.N[name]) for name in sorted(self.N)}
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'ZariskiDecomposition':
        return cls(**data)


class WalkPiece(BaseModel):
    """
    One linear piece of the walk: N_t[E] = A[E] + t*B[E] for t in [t_lo, t_hi]
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    t_lo: ExactNumber
    t_hi: ExactNumber
    A: dict[str, Rational] = Field(default_factory=dict)
    B: dict[str, Rational] = Field(default_factory=dict)
    support: list[str] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_interval(self) -> 'WalkPiece':
        if self.t_hi < self.t_lo:
            raise ValueError(f"Empty piece [{self.t_lo}, {self.t_hi}]")
        return self

    def coefficient(self, name: str, t) -> QuadNum:
        """N_t[name] on this piece; t may be a QuadNum at the last endpoint"""
        return QuadNum.coerce(t) * self.B.get(name, Fraction(0)) + self.A.get(name, Fraction(0))

    def contains(self, t) -> bool:
        return self.t_lo <= QuadNum.coerce(t) <= self.t_hi

    def to_dict(self) -> dict:
        return {
            't_lo': encode_number(self.t_lo),
            't_hi': encode_number(self.t_hi),
            'A': {k: format_rational(self.A[k]) for k in sorted(self.A)},
            'B': {k: format_rational(self.B[k]) for k in sorted(self.B)},
            'support': sorted(self.support)
        }


class SegmentWalk(BaseModel):
    """Zariski chamber walk of D - tC for t in [nu, mu]"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    nu: Rational
    mu: ExactNumber
    pieces: list[WalkPiece] = Field(default_factory=list)
    curve: Optional[str] = Field(default=None, description="Catalog name of the flag curve, if listed")

    @property
    def breakpoints(self) -> list[QuadNum]:
        if not self.pieces:
            return []
        return [p.t_lo for p in self.pieces] + [self.pieces[-1].t_hi]

    def piece_at(self, t) -> WalkPiece:
        """Piece containing t; at an interior breakpoint, the piece to its right"""
        t = QuadNum.coerce(t)
        for piece in self.pieces:
            if piece.t_lo <= t < piece.t_hi:
                return piece
        if self.pieces and t == self.pieces[-1].t_hi:
            return self.pieces[-1]
        raise ValueError(f"t = {t} outside [{self.nu}, {self.mu}]")

    def negative_part(self, t) -> dict[str, QuadNum]:
        piece = self.piece_at(t)
        values = {name: piece.coefficient(name, t) for name in piece.support}
        return {name: v for name, v in values.items() if v != 0}

    def to_dict(self) -> dict:
        return {
            'nu': format_rational(self.nu),
            'mu': encode_number(self.mu),
            'pieces': [p.to_dict() for p in self.pieces]
        }
