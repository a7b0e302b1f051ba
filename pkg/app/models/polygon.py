"""
Polygon Models
Convex polygons with exact vertices and Okounkov polygons of surface divisors
"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.numbers import ExactNumber, QuadNum, Rational, encode_number, format_rational


Point = tuple[QuadNum, QuadNum]


def cross(o: Point, a: Point, b: Point) -> QuadNum:
    """z-component of (a - o) x (b - o); positive for a left turn"""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lex_key(p: Point):
    return p[0], p[1]


class Polygon(BaseModel):
    """
    Polygon given by its vertex list (t, y)
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    vertices: list[tuple[ExactNumber, ExactNumber]] = Field(default_factory=list)

    @field_validator('vertices', mode='before')
    @classmethod
    def pairs(cls, v):
        for vertex in v:
            if len(vertex) != 2:
                raise ValueError(f"Vertex {vertex!r} must have two coordinates")
        return [tuple(vertex) for vertex in v]

    def signed_area(self) -> QuadNum:
        """Shoelace formula; positive for counterclockwise order"""
        total = QuadNum(0)
        n = len(self.vertices)
        for i in range(n):
            x0, y0 = self.vertices[i]
            x1, y1 = self.vertices[(i + 1) % n]
            total = total + x0 * y1 - x1 * y0
        return total / 2

    def area(self) -> QuadNum:
        return abs(self.signed_area())

    def normalized(self) -> 'Polygon':
        """
        Counterclockwise order starting at the lexicographic minimum, without
        repeated or collinear vertices
        """
        points = list(self.vertices)
        if len(points) >= 3 and self.signed_area() < 0:
            points.reverse()
        cleaned: list[Point] = []
        for p in points:
            if not cleaned or cleaned[-1] != p:
                cleaned.append(p)
        while len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
            cleaned.pop()
        changed = True
        while changed and len(cleaned) >= 3:
            changed = False
            for i in range(len(cleaned)):
                prev, cur, nxt = cleaned[i - 1], cleaned[i], cleaned[(i + 1) % len(cleaned)]
                if cross(prev, cur, nxt) == 0:
                    del cleaned[i]
                    changed = True
                    break
        if cleaned:
            start = min(range(len(cleaned)), key=lambda i: lex_key(cleaned[i]))
            cleaned = cleaned[start:] + cleaned[:start]
        return Polygon(vertices=cleaned)

    def translated(self, dt, dy) -> 'Polygon':
        return Polygon(vertices=[(x + dt, y + dy) for x, y in self.vertices])

    def scaled(self, factor) -> 'Polygon':
        return Polygon(vertices=[(x * factor, y * factor) for x, y in self.vertices])

    def t_range(self) -> tuple[QuadNum, QuadNum]:
        xs = [x for x, _ in self.vertices]
        return min(xs), max(xs)

    def to_dict(self) -> dict:
        return {'vertices': [[encode_number(x), encode_number(y)] for x, y in self.vertices]}

    @classmethod
    def from_dict(cls, data: dict) -> 'Polygon':
        return cls(**data)


class AffinePiece(BaseModel):
    """f(t) = intercept + slope*t on [t_lo, t_hi]"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    t_lo: ExactNumber
    t_hi: ExactNumber
    intercept: Rational
    slope: Rational

    def at(self, t) -> QuadNum:
        return QuadNum.coerce(t) * self.slope + self.intercept

    def to_dict(self) -> dict:
        return {
            't_lo': encode_number(self.t_lo),
            't_hi': encode_number(self.t_hi),
            'value': encode_number(self.at(self.t_lo)),
            'slope': format_rational(self.slope)
        }


class OkounkovPolygon(BaseModel):
    """
    Region {nu <= t <= mu, alpha(t) <= y <= beta(t)} of a big divisor with
    respect to a flag (C, x)
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    nu: Rational
    mu: ExactNumber
    breakpoints: list[ExactNumber] = Field(default_factory=list)
    alpha: list[AffinePiece] = Field(default_factory=list)
    beta: list[AffinePiece] = Field(default_factory=list)
    vertices: list[tuple[ExactNumber, ExactNumber]] = Field(default_factory=list)

    @property
    def polygon(self) -> Polygon:
        return Polygon(vertices=list(self.vertices))

    def _piece(self, pieces: list[AffinePiece], t) -> Optional[AffinePiece]:
        t = QuadNum.coerce(t)
        for piece in pieces:
            if piece.t_lo <= t <= piece.t_hi:
                return piece
        return None

    def alpha_at(self, t) -> QuadNum:
        piece = self._piece(self.alpha, t)
        if piece is None:
            raise ValueError(f"t = {t} outside [{self.nu}, {self.mu}]")
        return piece.at(t)

    def beta_at(self, t) -> QuadNum:
        piece = self._piece(self.beta, t)
        if piece is None:
            raise ValueError(f"t = {t} outside [{self.nu}, {self.mu}]")
        return piece.at(t)

    def area(self) -> QuadNum:
        return self.polygon.area()

    def to_dict(self) -> dict:
        return {
            'nu': format_rational(self.nu),
            'mu': encode_number(self.mu),
            'breakpoints': [encode_number(t) for t in self.breakpoints],
            'vertices': [[encode_number(x), encode_number(y)] for x, y in self.vertices],
            'alpha': [p.to_dict() for p in self.alpha],
            'beta': [p.to_dict() for p in self.beta]
        }