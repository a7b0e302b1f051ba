"""
Exact Numbers
Rationals, real quadratic numbers a + b*sqrt(d) and sums of square roots,
all compared without floating point
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Annotated, Union

from pydantic import BeforeValidator, PlainSerializer
from sympy import factorint, primefactors

from app.exceptions import DivisionByZero, IdenticallyZero, InputError, MixedRadicand


RationalLike = Union[int, Fraction, str]


# ==================== Rational helpers ====================

def to_rational(value) -> Fraction:
    """
    Coerce an int, Fraction, "p/q" string or rational QuadNum to Fraction

    Raises:
        InputError: if the value is not an exact rational
    """
    if isinstance(value, bool):
        raise InputError(f"Boolean is not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, QuadNum):
        if not value.is_rational:
            raise InputError(f"Expected a rational number, got {value}")
        return value.a
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"Invalid rational string: {value!r}")
    raise InputError(f"Invalid rational value: {value!r}")


def format_rational(value: Fraction) -> str:
    """Encode a rational as "p/q", or "n" for integers"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=4096)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """
    Split a natural number as n = s^2 * k with k square-free

    Returns:
        Tuple (s, k)
    """
    if n < 0:
        raise ValueError(f"Radicand must be non-negative, got {n}")
    if n == 0:
        return 0, 0
    s, k = 1, 1
    for prime, exponent in factorint(n).items():
        s *= prime ** (exponent // 2)
        if exponent % 2:
            k *= prime
    return s, k


@lru_cache(maxsize=4096)
def _largest_prime(n: int) -> int:
    return max(primefactors(n))


# ==================== Quadratic numbers ====================

@dataclass(frozen=True, eq=False)
class QuadNum:
    """
    Exact real number a + b*sqrt(d) in canonical form

    d is square-free; rational values carry b = 0 and d = 0, so equal values
    always have equal fields.
    """
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        a = to_rational(self.a)
        b = to_rational(self.b)
        d = self.d
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise InputError(f"Radicand must be a non-negative integer, got {d!r}")
        if b == 0 or d == 0:
            b, d = Fraction(0), 0
        else:
            s, k = squarefree_decompose(d)
            b *= s
            d = k
            if d == 1:
                a += b
                b, d = Fraction(0), 0
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'd', d)

    # ---------- constructors ----------

    @classmethod
    def coerce(cls, value) -> 'QuadNum':
        """Wrap an int, Fraction or "p/q" string; QuadNums pass through"""
        if isinstance(value, QuadNum):
            return value
        return cls(to_rational(value))

    @classmethod
    def sqrt(cls, value: RationalLike) -> 'QuadNum':
        """Exact square root of a non-negative rational"""
        q = to_rational(value)
        if q < 0:
            raise ValueError(f"Square root of negative rational {q}")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, Fraction(1, q.denominator), q.numerator * q.denominator)

    # ---------- inspection ----------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        """Return the value as a Fraction; raises for irrational values"""
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.a

    def conjugate(self) -> 'QuadNum':
        return QuadNum(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - b^2 d"""
        return self.a * self.a - self.b * self.b * self.d

    def sign(self) -> int:
        """
        Exact sign of a + b*sqrt(d)

        Case analysis on the signs of a and b, then a^2 against b^2*d.
        """
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        squares = self.a * self.a - self.b * self.b * self.d
        t = (squares > 0) - (squares < 0)
        return t if sa > 0 else -t

    # ---------- arithmetic ----------

    @staticmethod
    def _common_radicand(x: 'QuadNum', y: 'QuadNum') -> int:
        if x.b == 0:
            return y.d
        if y.b == 0 or x.d == y.d:
            return x.d
        raise MixedRadicand(
            f"Cannot combine sqrt({x.d}) and sqrt({y.d})",
            detail={'left': x.to_json(), 'right': y.to_json()}
        )

    def __add__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        other = QuadNum.coerce(other)
        d = self._common_radicand(self, other)
        return QuadNum(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return self + (-QuadNum.coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return QuadNum.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        other = QuadNum.coerce(other)
        d = self._common_radicand(self, other)
        return QuadNum(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        other = QuadNum.coerce(other)
        if other.sign() == 0:
            raise DivisionByZero(f"Division of {self} by zero")
        self._common_radicand(self, other)
        # multiply through by the conjugate; the norm is a nonzero rational
        numerator = self * other.conjugate()
        n = other.norm()
        return QuadNum(numerator.a / n, numerator.b / n, numerator.d)

    def __rtruediv__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return QuadNum.coerce(other) / self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.sign() != 0

    # ---------- comparison ----------

    def compare(self, other) -> int:
        """Exact sign of self - other; radicands may differ"""
        other = QuadNum.coerce(other)
        if self.b == 0 or other.b == 0 or self.d == other.d:
            return (self - other).sign()
        return (RadicalSum.of(self) - RadicalSum.of(other)).sign()

    def __eq__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        other = QuadNum.coerce(other)
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return self.compare(other) < 0

    def __le__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return self.compare(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return self.compare(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction)):
            return NotImplemented
        return self.compare(other) >= 0

    # ---------- conversion ----------

    def __float__(self):
        # display only
        return float(self.a) + float(self.b) * (self.d ** 0.5)

    def __repr__(self):
        return f"QuadNum({self})"

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        sign = '+' if self.b > 0 else '-'
        coeff = abs(self.b)
        radical = f"sqrt({self.d})" if coeff == 1 else f"{format_rational(coeff)}*sqrt({self.d})"
        if self.a == 0:
            return radical if sign == '+' else f"-{radical}"
        return f"{format_rational(self.a)} {sign} {radical}"

    def to_json(self) -> dict:
        """Encode as {"a": "p/q", "b": "p/q", "d": n}"""
        return {'a': format_rational(self.a), 'b': format_rational(self.b), 'd': self.d}

    @classmethod
    def from_json(cls, data) -> 'QuadNum':
        """Decode a QuadNum object, a rational string or a JSON integer"""
        if isinstance(data, QuadNum):
            return data
        if isinstance(data, dict):
            missing = {'a', 'b', 'd'} - set(data)
            if missing:
                raise InputError(f"QuadNum object is missing keys: {sorted(missing)}")
            d = data['d']
            if not isinstance(d, int) or isinstance(d, bool):
                raise InputError(f"QuadNum radicand must be an integer, got {d!r}")
            return cls(to_rational(data['a']), to_rational(data['b']), d)
        return cls(to_rational(data))


def encode_number(value) -> Union[str, dict]:
    """Rationals become "p/q" strings, irrational QuadNums become objects"""
    value = QuadNum.coerce(value)
    if value.is_rational:
        return format_rational(value.a)
    return value.to_json()



# pydantic field types: parse "p/q" strings and QuadNum objects, serialize back to JSON form
Rational = Annotated[Fraction, BeforeValidator(to_rational), PlainSerializer(format_rational, return_type=str)]
ExactNumber = Annotated[QuadNum, BeforeValidator(QuadNum.from_json), PlainSerializer(encode_number)]

# ==================== Sums of square roots ====================

@dataclass(frozen=True)
class RadicalSum:
    """
    Finite sum of c_m * sqrt(m) over square-free m (m = 1 is the rational part)

    Closed under +, -, *; used where several radicands meet, e.g. second
    differences of slice functions.
    """
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            c = to_rational(c)
            if c != 0:
                s, k = squarefree_decompose(m)
                clean[k] = clean.get(k, Fraction(0)) + c * s
        object.__setattr__(self, 'terms', {m: c for m, c in clean.items() if c != 0})

    @classmethod
    def of(cls, value) -> 'RadicalSum':
        if isinstance(value, RadicalSum):
            return value
        q = QuadNum.coerce(value)
        if q.is_rational:
            return cls({1: q.a})
        return cls({1: q.a, q.d: q.b})

    def __add__(self, other):
        other = RadicalSum.of(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return RadicalSum(terms)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-RadicalSum.of(other))

    def __rsub__(self, other):
        return RadicalSum.of(other) - self

    def __mul__(self, other):
        other = RadicalSum.of(other)
        terms: dict[int, Fraction] = {}
        for m, c in self.terms.items():
            for n, e in other.terms.items():
                g = gcd(m, n)
                key = (m // g) * (n // g)
                terms[key] = terms.get(key, Fraction(0)) + c * e * g
        return RadicalSum(terms)

    __rmul__ = __mul__

    def sign(self) -> int:
        """
        Exact sign by isolating the largest prime p: E = A + B*sqrt(p), where
        A and B do not involve sqrt(p); recurse on A, B and A^2 - p*B^2
        """
        if not self.terms:
            return 0
        if set(self.terms) == {1}:
            c = self.terms[1]
            return (c > 0) - (c < 0)
        p = max(_largest_prime(m) for m in self.terms if m > 1)
        a_part = RadicalSum({m: c for m, c in self.terms.items() if m % p})
        b_part = RadicalSum({m // p: c for m, c in self.terms.items() if m % p == 0})
        sa, sb = a_part.sign(), b_part.sign()
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        t = (a_part * a_part - b_part * b_part * p).sign()
        return t if sa > 0 else -t

    def is_zero(self) -> bool:
        return not self.terms

    def as_quadnum(self) -> QuadNum:
        """Collapse to a QuadNum when at most one radicand is present"""
        radicals = [m for m in self.terms if m != 1]
        if len(radicals) > 1:
            raise MixedRadicand(f"Sum involves radicands {sorted(radicals)}")
        rational = self.terms.get(1, Fraction(0))
        if not radicals:
            return QuadNum(rational)
        return QuadNum(rational, self.terms[radicals[0]], radicals[0])

    def __float__(self):
        return sum(float(c) * (m ** 0.5) for m, c in self.terms.items())

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for m in sorted(self.terms):
            c = format_rational(self.terms[m])
            parts.append(c if m == 1 else f"{c}*sqrt({m})")
        return ' + '.join(parts)

    def to_json(self) -> dict:
        """Encode as {"m": "coefficient"} with m = 1 for the rational part"""
        return {str(m): format_rational(c) for m, c in sorted(self.terms.items())}


# ==================== Operations ====================

def qn_arith(x: QuadNum, y: QuadNum, op: str) -> QuadNum:
    """
    Exact +, -, *, / on QuadNums sharing a radicand (or with one rational operand)

    Raises:
        MixedRadicand: distinct non-trivial radicands
        DivisionByZero: zero divisor
    """
    x, y = QuadNum.coerce(x), QuadNum.coerce(y)
    operations = {
        '+': lambda: x + y,
        '-': lambda: x - y,
        '−': lambda: x - y,
        '*': lambda: x * y,
        '×': lambda: x * y,
        '/': lambda: x / y,
        '÷': lambda: x / y,
    }
    if op not in operations:
        raise ValueError(f"Unknown operation {op!r}")
    return operations[op]()


def qn_sign(x) -> int:
    return QuadNum.coerce(x).sign()


def qn_cross_compare(x, y) -> int:
    return QuadNum.coerce(x).compare(y)


def quadratic_roots(a: RationalLike, b: RationalLike, c: RationalLike) -> list[QuadNum]:
    """
    Real roots of a*t^2 + b*t + c = 0 in ascending order

    The linear case a = 0 is handled; an empty list means no real root.

    Raises:
        IdenticallyZero: if a = b = c = 0
    """
    a, b, c = to_rational(a), to_rational(b), to_rational(c)
    if a == 0:
        if b == 0:
            if c == 0:
                raise IdenticallyZero("Polynomial is identically zero")
            return []
        return [QuadNum(-c / b)]
    discriminant = b * b - 4 * a * c
    if discriminant < 0:
        return []
    if discriminant == 0:
        return [QuadNum(-b / (2 * a))]
    root = QuadNum.sqrt(discriminant)
    roots = [(QuadNum(-b) - root) / (2 * a), (QuadNum(-b) + root) / (2 * a)]
    return sorted(roots)


def evaluate_quadratic(a, b, c, t) -> QuadNum:
    """Evaluate a*t^2 + b*t + c exactly"""
    t = QuadNum.coerce(t)
    return t * t * to_rational(a) + t * to_rational(b) + to_rational(c)
