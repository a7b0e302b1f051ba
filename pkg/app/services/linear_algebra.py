"""
Linear Algebra Service
Exact matrix operations over QQ and polyhedral cone conversion
"""
import logging
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from app.exceptions import DegenerateCone, DimensionMismatch


logger = logging.getLogger(__name__)

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def dot(u: Sequence, v: Sequence):
    """Coordinate pairing sum(u_i * v_i); works for Fractions and QuadNums"""
    if len(u) != len(v):
        raise DimensionMismatch(f"Vectors of length {len(u)} and {len(v)}")
    total = Fraction(0)
    for x, y in zip(u, v):
        total = total + x * y
    return total


def primitive(vector: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to the primitive integer vector on the same ray"""
    if all(isinstance(x, int) for x in vector):
        integers = list(vector)
    else:
        fractions = [Fraction(x) for x in vector]
        denominator = reduce(lambda acc, x: acc * x.denominator // gcd(acc, x.denominator), fractions, 1)
        integers = [int(x * denominator) for x in fractions]
    divisor = reduce(gcd, (abs(x) for x in integers), 0)
    if divisor == 0:
        return integers
    return [x // divisor for x in integers]


class LinearAlgebra:
    """
    Exact linear algebra on Fraction matrices, backed by sympy's DomainMatrix over QQ:
    - solving square systems
    - rank, determinant, nullspace
    - signature of symmetric forms
    - facet enumeration of finitely generated cones (double description)
    """

    @staticmethod
    def _to_domain(rows: Matrix, ncols: Optional[int] = None) -> DomainMatrix:
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in rows]
        return DomainMatrix(entries, (len(rows), ncols), QQ)

    @staticmethod
    def _from_domain(matrix: DomainMatrix) -> Matrix:
        return [[Fraction(int(e.p), int(e.q)) for e in row] for row in matrix.to_Matrix().tolist()]

    @staticmethod
    def rref(rows: Matrix, ncols: Optional[int] = None) -> tuple[Matrix, tuple[int, ...]]:
        """Reduced row echelon form and pivot columns"""
        if not rows:
            return [], ()
        reduced, pivots = LinearAlgebra._to_domain(rows, ncols).rref()
        return LinearAlgebra._from_domain(reduced), tuple(pivots)

    @staticmethod
    def rank(rows: Matrix, ncols: Optional[int] = None) -> int:
        if not rows:
            return 0
        return len(LinearAlgebra.rref(rows, ncols)[1])

    @staticmethod
    def det(rows: Matrix) -> Fraction:
        if not rows:
            return Fraction(1)
        value = LinearAlgebra._to_domain(rows).det()
        return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))

    @staticmethod
    def solve(rows: Matrix, rhs: Vector) -> Vector:
        """
        Solve a square nonsingular system exactly

        Raises:
            DimensionMismatch: if the matrix is not square or is singular
        """
        n = len(rows)
        if any(len(row) != n for row in rows) or len(rhs) != n:
            raise DimensionMismatch(f"Expected a square {n}x{n} system")
        if n == 0:
            return []
        augmented = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
        reduced, pivots = LinearAlgebra.rref(augmented, n + 1)
        if pivots != tuple(range(n)):
            raise DimensionMismatch("Singular system")
        return [reduced[i][n] for i in range(n)]

    @staticmethod
    def nullspace(rows: Matrix, ncols: int) -> list[Vector]:
        """Basis of {x : rows * x = 0}"""
        if not rows:
            return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
        reduced, pivots = LinearAlgebra.rref(rows, ncols)
        free = [j for j in range(ncols) if j not in pivots]
        basis = []
        for f in free:
            vector = [Fraction(0)] * ncols
            vector[f] = Fraction(1)
            for i, p in enumerate(pivots):
                vector[p] = -reduced[i][f]
            basis.append(vector)
        return basis

    @staticmethod
    def signature(form: Matrix) -> tuple[int, int, int]:
        """
        Signature (positive, negative, zero) of a symmetric rational matrix

        All eigenvalues of a symmetric matrix are real, so Descartes' rule of
        signs on the characteristic polynomial counts them exactly.
        """
        n = len(form)
        if n == 0:
            return 0, 0, 0
        coefficients = [Fraction(int(QQ.numer(c)), int(QQ.denom(c)))
                        for c in LinearAlgebra._to_domain(form).charpoly()]
        zero = 0
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
            zero += 1

        def sign_changes(values):
            signs = [v > 0 for v in values if v != 0]
            return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

        degree = len(coefficients) - 1
        positive = sign_changes(coefficients)
        # p(-x): flip the sign of odd-degree terms
        mirrored = [c if (degree - i) % 2 == 0 else -c for i, c in enumerate(coefficients)]
        negative = sign_changes(mirrored)
        return positive, negative, zero

    @staticmethod
    def is_negative_definite(form: Matrix) -> bool:
        """Leading principal minors alternate in sign: (-1)^k det(G_k) > 0"""
        for k in range(1, len(form) + 1):
            minor = [row[:k] for row in form[:k]]
            value = LinearAlgebra.det(minor)
            if (value if k % 2 == 0 else -value) <= 0:
                return False
        return True

    @staticmethod
    def cone_facets(generators: list[Vector], dim: int) -> list[list[int]]:
        """
        Facet covectors of the cone spanned by the generators (double description)

        The facets are the extreme rays of the dual cone {f : f.g >= 0}; they are
        built incrementally, one generator constraint at a time, combining only
        adjacent rays. Rays are kept as primitive integer vectors and each carries
        its set of tight generators as a bitmask.

        Raises:
            DegenerateCone: if the generators do not span the whole space
        """
        gens = [primitive(g) for g in generators if any(x != 0 for x in g)]
        if any(len(g) != dim for g in gens):
            raise DimensionMismatch(f"Generators must have length {dim}")

        # pick a basis among the generators
        basis_idx: list[int] = []
        for i in range(len(gens)):
            candidate = [gens[j] for j in basis_idx] + [gens[i]]
            if LinearAlgebra.rank(candidate, dim) == len(candidate):
                basis_idx.append(i)
            if len(basis_idx) == dim:
                break
        if len(basis_idx) < dim:
            raise DegenerateCone(
                f"Generators span a {len(basis_idx)}-dimensional subspace of {dim}",
                detail={'rank': len(basis_idx), 'dim': dim}
            )

        # initial rays: columns of the inverse of the basis matrix,
        # tight on every basis generator but their own
        basis = [gens[i] for i in basis_idx]
        basis_mask = sum(1 << i for i in basis_idx)
        rays: list[tuple[list[int], int]] = []
        for j, i in enumerate(basis_idx):
            unit = [Fraction(int(k == j)) for k in range(dim)]
            rays.append((primitive(LinearAlgebra.solve(basis, unit)), basis_mask & ~(1 << i)))

        for k in range(len(gens)):
            if k in basis_idx:
                continue
            g, bit = gens[k], 1 << k
            positive, zero, negative = [], [], []
            for ray, mask in rays:
                value = sum(x * y for x, y in zip(g, ray))
                if value > 0:
                    positive.append((ray, mask, value))
                elif value < 0:
                    negative.append((ray, mask, value))
                else:
                    zero.append((ray, mask | bit))
            if not negative:
                rays = [(ray, mask) for ray, mask, _ in positive] + zero
                continue

            masks = [mask for _, mask in rays]
            new_rays = [(ray, mask) for ray, mask, _ in positive] + zero
            for p, mp, vp in positive:
                for n, mn, vn in negative:
                    common = mp & mn
                    if common.bit_count() < dim - 2:
                        continue
                    # adjacent iff no third ray is tight on every common constraint
                    if sum(1 for m in masks if common & ~m == 0) > 2:
                        continue
                    new_rays.append((primitive([vp * x - vn * y for x, y in zip(n, p)]), common | bit))
            rays = new_rays

        facets = sorted({tuple(ray) for ray, _ in rays if any(x != 0 for x in ray)})
        logger.debug("Cone with %d generators in dim %d has %d facets", len(gens), dim, len(facets))
        return [list(f) for f in facets]

    @staticmethod
    def dual_facets(form: Matrix, generators: list[Vector], facets: list[Vector], dim: int) -> list[list[int]]:
        """
        Facets of the cone dual to the generators under a bilinear form: one
        covector form.g per extremal generator g, i.e. one tight on dim - 1
        independent facets
        """
        dual = set()
        for g in generators:
            if all(x == 0 for x in g):
                continue
            tight = [f for f in facets if dot(f, g) == 0]
            rank = LinearAlgebra.rank(tight, dim) if tight else 0
            if rank < dim - 1:
                continue
            covector = [sum((Fraction(q) * x for q, x in zip(row, g)), Fraction(0)) for row in form]
            dual.add(tuple(primitive(covector)))
        return [list(f) for f in sorted(dual)]
