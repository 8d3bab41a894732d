"""Integer lattices with a distinguished basis.

A lattice is a free Z-module carrying a non-degenerate symmetric bilinear
form, stored as its exact integer Gram matrix on a fixed basis.  Vectors
are plain tuples of ints holding coordinates in that basis; dual vectors
are tuples of Fractions.  Everything is an immutable value and every
computation is exact.

>>> L = IntegerLattice(((6, 3, 0), (3, 6, 0), (0, 0, 6)))
>>> L.determinant()
162
>>> L.signature()
(3, 0)
>>> L.norm((1, -1, 0))
6
>>> L.divisibility((0, 0, 1))
6
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exact import (
    FracVector,
    IntMatrix,
    IntVector,
    det,
    frac_inverse,
    freeze,
    hnf,
    identity,
    lcm_denominator,
    mat_mul,
    mat_vec,
    saturate_rows,
    solve_int,
    transpose,
    vec_content,
)


class LatticeError(ValueError):
    """Raised for inputs violating a lattice precondition."""


def is_primitive_vector(v) -> bool:
    """True iff the gcd of the coordinates is 1."""
    if not any(v):
        raise LatticeError("the zero vector is neither primitive nor imprimitive")
    return vec_content(v) == 1


@dataclass(frozen=True)
class IntegerLattice:
    """Even or odd non-degenerate lattice given by its Gram matrix."""

    gram: IntMatrix

    def __post_init__(self):
        gram = freeze(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0 or any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square and nonempty")
        if any(not isinstance(x, int) for row in gram for x in row):
            raise LatticeError("Gram entries must be integers")
        if gram != transpose(gram):
            raise LatticeError("Gram matrix must be symmetric")
        if det(gram) == 0:
            raise LatticeError("degenerate Gram matrix")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def determinant(self) -> int:
        return int(det(self.gram))

    def signature(self) -> tuple[int, int]:
        """(s+, s-) counted exactly via the pivots of rational LDL^T.

        A zero pivot is dodged by a symmetric swap with a nonzero diagonal
        entry, or if the whole remaining diagonal vanishes by mixing in a
        row (then the new diagonal entry is twice an off-diagonal one).
        """
        n = self.rank
        m = [[Fraction(x) for x in row] for row in self.gram]
        pos = neg = 0
        for k in range(n):
            if m[k][k] == 0:
                j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
                if j is not None:
                    m[k], m[j] = m[j], m[k]
                    for row in m:
                        row[k], row[j] = row[j], row[k]
                else:
                    j = next((j for j in range(k + 1, n) if m[j][k] != 0), None)
                    if j is None:
                        raise LatticeError("degenerate block in signature computation")
                    for c in range(n):
                        m[k][c] += m[j][c]
                    for r in range(n):
                        m[r][k] += m[r][j]
            pivot = m[k][k]
            if pivot > 0:
                pos += 1
            else:
                neg += 1
            # Schur complement on indices > k; symmetry is preserved.
            for r in range(k + 1, n):
                factor = m[r][k] / pivot
                if factor:
                    for c in range(k + 1, n):
                        m[r][c] -= factor * m[k][c]
                    m[r][k] = Fraction(0)
        return pos, neg

    @property
    def is_definite(self) -> bool:
        s_plus, s_minus = self.signature()
        return s_plus == 0 or s_minus == 0

    # -- bilinear form ------------------------------------------------

    def pairing(self, v, w) -> int | Fraction:
        total = sum(Fraction(v[i]) * self.gram[i][j] * Fraction(w[j])
                    for i in range(self.rank) for j in range(self.rank))
        return int(total) if total.denominator == 1 else total

    def norm(self, v) -> int | Fraction:
        return self.pairing(v, v)

    def divisibility(self, v: IntVector) -> int:
        """div(v) = gcd of all pairings of v with lattice vectors."""
        if not any(v):
            raise LatticeError("divisibility of the zero vector is undefined")
        g = 0
        for x in mat_vec(self.gram, v):
            g = gcd(g, x)
        return g

    def dual_basis(self) -> tuple[FracVector, ...]:
        """Rows of gram^-1; generates the dual lattice over Z."""
        return frac_inverse(self.gram)

    def in_dual(self, v) -> bool:
        """True iff v (rational coordinates) pairs integrally with the lattice."""
        return all(Fraction(x).denominator == 1
                   for x in mat_vec(self.gram, tuple(Fraction(c) for c in v)))

    # -- sublattices --------------------------------------------------

    def span(self, generators) -> "Sublattice":
        return Sublattice(self, freeze(generators))

    def full(self) -> "Sublattice":
        return Sublattice(self, identity(self.rank))

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"gram": [list(row) for row in self.gram]})

    @classmethod
    def from_json(cls, text: str) -> "IntegerLattice":
        data = json.loads(text)
        if not isinstance(data, dict) or "gram" not in data:
            raise LatticeError('expected {"gram": [[int, ...], ...]}')
        gram = data["gram"]
        if not isinstance(gram, list) or any(
            not isinstance(row, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in row)
            for row in gram
        ):
            raise LatticeError("Gram entries must be exact integers")
        return cls(freeze(gram))


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of an ambient lattice, rows of ``basis`` in ambient coordinates."""

    ambient: IntegerLattice
    basis: IntMatrix

    def __post_init__(self):
        basis = freeze(self.basis)
        object.__setattr__(self, "basis", basis)
        if basis and any(len(row) != self.ambient.rank for row in basis):
            raise LatticeError("generator length must match ambient rank")
        h, _ = hnf(basis) if basis else ((), ())
        if sum(1 for row in h if any(row)) != len(basis):
            raise LatticeError("generators must be linearly independent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> IntMatrix:
        g = mat_mul(mat_mul(self.basis, self.ambient.gram), transpose(self.basis))
        return freeze(g)

    def lattice(self) -> IntegerLattice:
        return IntegerLattice(self.gram())

    def contains(self, v: IntVector) -> bool:
        if not self.basis:
            return not any(v)
        cols = transpose(self.basis)
        return solve_int(cols, v) is not None

    def coordinates_of(self, v) -> FracVector:
        """Coordinates of an ambient (rational) vector in the sublattice basis.

        The vector must lie in the Q-span of the sublattice.
        """
        ncols = self.rank
        rows = [[Fraction(self.basis[j][i]) for j in range(ncols)] + [Fraction(v[i])]
                for i in range(self.ambient.rank)]
        pivots: list[int] = []
        r = 0
        for c in range(ncols):
            pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            pivot = rows[r][c]
            rows[r] = [x / pivot for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        for i in range(r, len(rows)):
            if rows[i][-1] != 0:
                raise LatticeError("vector does not lie in the span of the sublattice")
        sol = [Fraction(0)] * ncols
        for idx, c in enumerate(pivots):
            sol[c] = rows[idx][-1]
        return tuple(sol)

    def saturation(self) -> "Sublattice":
        """Primitive closure (span over Q intersected with the ambient lattice)."""
        if not self.basis:
            return self
        return Sublattice(self.ambient, saturate_rows(self.basis))

    def is_primitive(self) -> bool:
        return self.saturation().basis == hnf(self.basis)[0][: self.rank]

    def orthogonal_complement(self) -> "Sublattice":
        """Primitive sublattice of all ambient vectors pairing to 0 with this one.

        The result is returned on its canonical HNF basis.
        """
        if not self.basis:
            return self.ambient.full()
        conditions = mat_mul(self.basis, self.ambient.gram)
        from .exact import right_kernel

        kernel = right_kernel(conditions)
        return Sublattice(self.ambient, kernel)

    def index(self) -> int:
        """Index in the ambient lattice (full-rank sublattices only).

        Computed as the integer square root of det(sub)/det(ambient); a
        non-square ratio means the inputs were inconsistent.
        """
        if self.rank != self.ambient.rank:
            raise LatticeError("index is defined for full-rank sublattices only")
        ratio = Fraction(int(det(self.gram())), self.ambient.determinant())
        if ratio.denominator != 1 or ratio < 0:
            raise LatticeError("determinant ratio is not a positive integer")
        from math import isqrt

        n = int(ratio)
        root = isqrt(n)
        if root * root != n:
            raise LatticeError(f"determinant ratio {n} is not a perfect square")
        return root


def direct_sum_sublattice(ambient: IntegerLattice, *parts: Sublattice) -> Sublattice:
    """Stack the generator rows of several sublattices of one ambient lattice."""
    rows: list[IntVector] = []
    for part in parts:
        if part.ambient != ambient:
            raise LatticeError("parts live in different ambient lattices")
        rows.extend(part.basis)
    return Sublattice(ambient, freeze(rows))


def rational_span_basis(rows) -> IntMatrix:
    """Canonical integer form of a rational row span: HNF of cleared rows."""
    d = lcm_denominator(rows)
    cleared = freeze(tuple(int(Fraction(x) * d) for x in row) for row in rows)
    h, _ = hnf(cleared)
    return tuple(row for row in h if any(row))
