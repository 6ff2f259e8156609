"""Exact linear algebra over a coefficient field with precision floors.

Matrices are tuples of row tuples of FieldElement.  Rank-type decisions treat
an entry as zero when no stored digit certifies it nonzero; the verdict is
then correct at the working precision, which is the strongest statement
capped arithmetic can make.  Operations that require a certified nonzero
pivot (inversion, Newton numbers) raise PrecisionLoss instead of guessing.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import PrecisionLoss
from .padic import INF, FieldElement, LocalFieldDesc

Matrix = tuple[tuple[FieldElement, ...], ...]
Vector = tuple[FieldElement, ...]


def mat(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(desc: LocalFieldDesc, n: int) -> Matrix:
    one, zero = desc.from_int(1, INF), desc.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zero_matrix(desc: LocalFieldDesc, n: int, m: int | None = None) -> Matrix:
    zero = desc.zero()
    m = n if m is None else m
    return tuple(tuple(zero for _ in range(m)) for _ in range(n))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in r) for r in a)


def mat_scale(c: FieldElement, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(_dot(ra, cb) for cb in bt)
        for ra in a
    )


def _dot(u, v) -> FieldElement:
    acc = None
    for x, y in zip(u, v):
        t = x * y
        acc = t if acc is None else acc + t
    return acc


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(_dot(r, v) for r in a)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c: FieldElement, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_cols(a: Matrix) -> list[Vector]:
    return [tuple(r[j] for r in a) for j in range(len(a[0]))] if a else []


def mat_from_cols(cols) -> Matrix:
    if not cols:
        return ()
    return tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))


def kron(a: Matrix, b: Matrix) -> Matrix:
    out = []
    for ra in a:
        for rb in b:
            out.append(tuple(x * y for x in ra for y in rb))
    return tuple(out)


def trace(a: Matrix) -> FieldElement:
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def mat_eq(a: Matrix, b: Matrix) -> bool:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        return False
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero_matrix(a: Matrix) -> bool:
    return all(x.is_exact_zero() or x.is_zero_at_prec() for r in a for x in r)


def _nonzero(x: FieldElement) -> bool:
    return not (x.is_exact_zero() or x.is_zero_at_prec())


# ---------------------------------------------------------------------------
# echelon forms


def rref(rows_in) -> tuple[list[list[FieldElement]], list[int]]:
    """Reduced row echelon form with pivots normalized to one.

    Pivot selection inside a column prefers the smallest certified valuation
    (the p-adically largest entry), which keeps division well conditioned.
    Entries with no certified digits are treated as zero; the profile is then
    canonical at the working precision.
    """
    rows = [list(r) for r in rows_in]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, len(rows)):
            if _nonzero(rows[i][c]):
                v = rows[i][c].valuation()
                if best is None or v < best[0]:
                    best = (v, i)
        if best is None:
            continue
        i = best[1]
        rows[r], rows[i] = rows[i], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and _nonzero(rows[k][c]):
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def right_kernel(a: Matrix, desc: LocalFieldDesc) -> list[Vector]:
    """Canonical basis of the right kernel (columns v with a v = 0)."""
    ncols = len(a[0]) if a else 0
    rows, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    one, zero = desc.from_int(1, INF), desc.zero()
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in zip(rows, pivots):
            v[pc] = -r[fc]
        basis.append(tuple(v))
    return basis


def solve_columns(cols, v: Vector, desc: LocalFieldDesc):
    """Solve sum_j x_j cols[j] = v.  Returns the canonical solution with free
    coordinates zero, or None when the residual is certified nonzero."""
    if not cols:
        return None if any(_nonzero(x) for x in v) else []
    n = len(v)
    aug = [[cols[j][i] for j in range(len(cols))] + [v[i]] for i in range(n)]
    rows, pivots = rref(aug)
    if len(cols) in pivots:
        return None
    zero = desc.zero()
    x = [zero] * len(cols)
    for r, pc in zip(rows, pivots):
        x[pc] = r[-1]
    return x


def det(a: Matrix) -> FieldElement:
    """Determinant, division-free, so exact inputs give an exact answer and
    precision floors degrade only through the entry products involved."""
    c0 = charpoly(a)[0]
    return c0 if len(a) % 2 == 0 else -c0


def inv(a: Matrix) -> Matrix:
    """Matrix inverse; raises PrecisionLoss when invertibility cannot be
    certified at the working precision."""
    n = len(a)
    desc = a[0][0].desc
    aug = [list(r) + list(ir) for r, ir in zip(a, identity(desc, n))]
    rows, pivots = rref(aug)
    if len(rows) < n or pivots[:n] != list(range(n)):
        raise PrecisionLoss("matrix not certified invertible")
    return tuple(tuple(rows[i][n:]) for i in range(n))


def charpoly(a: Matrix) -> list[FieldElement]:
    """Characteristic polynomial of A (monic in T, ascending coefficients).

    Berkowitz recursion on trailing principal submatrices: no divisions, so
    the coefficients stay exact for exact input.
    """
    n = len(a)
    desc = a[0][0].desc
    one = desc.from_int(1, INF)
    poly = [one, -a[n - 1][n - 1]]
    for k in range(n - 2, -1, -1):
        m = n - 1 - k
        row = a[k][k + 1 :]
        col_gen = [one, -a[k][k]]
        w = [a[i][k] for i in range(k + 1, n)]
        for _ in range(m):
            col_gen.append(-_dot(row, w))
            w = [_dot(a[i][k + 1 :], w) for i in range(k + 1, n)]
        q = []
        for i in range(m + 2):
            acc = None
            for j in range(min(i, m) + 1):
                t = col_gen[i - j] * poly[j]
                acc = t if acc is None else acc + t
            q.append(acc)
        poly = q
    return list(reversed(poly))


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of L^d held by an echelonized generator list.

    Generators are rows in reduced echelon form with unit pivots, so equal
    subspaces (at the working precision) have identical stored data.
    """

    desc: LocalFieldDesc
    ambient: int
    gens: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(cls, desc: LocalFieldDesc, ambient: int, vectors) -> "Subspace":
        rows, pivots = rref([list(v) for v in vectors]) if vectors else ([], [])
        return cls(desc, ambient, tuple(tuple(r) for r in rows), tuple(pivots))

    @classmethod
    def from_cols(cls, desc: LocalFieldDesc, basis_matrix: Matrix) -> "Subspace":
        ambient = len(basis_matrix)
        return cls.from_vectors(desc, ambient, mat_cols(basis_matrix)) if basis_matrix and basis_matrix[0] else cls.from_vectors(desc, ambient, [])

    @classmethod
    def full(cls, desc: LocalFieldDesc, ambient: int) -> "Subspace":
        return cls.from_vectors(desc, ambient, [tuple(r) for r in identity(desc, ambient)])

    @classmethod
    def zero(cls, desc: LocalFieldDesc, ambient: int) -> "Subspace":
        return cls.from_vectors(desc, ambient, [])

    @property
    def dim(self) -> int:
        return len(self.gens)

    def basis_matrix(self) -> Matrix:
        """Generators as the columns of an ambient x dim matrix."""
        return tuple(tuple(g[i] for g in self.gens) for i in range(self.ambient))

    def reduce_vector(self, v: Vector) -> Vector:
        w = list(v)
        for g, pc in zip(self.gens, self.pivots):
            c = w[pc]
            if _nonzero(c):
                w = [x - c * y for x, y in zip(w, g)]
        return tuple(w)

    def contains_vector(self, v: Vector) -> bool:
        return all(not _nonzero(x) for x in self.reduce_vector(v))

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(g) for g in other.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        if self.pivots != other.pivots:
            return False
        return all(x == y for ga, gb in zip(self.gens, other.gens) for x, y in zip(ga, gb))

    __hash__ = None

    def add(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(self.desc, self.ambient, list(self.gens) + list(other.gens))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.desc, self.ambient)
        cols = [list(g) for g in self.gens] + [[-x for x in g] for g in other.gens]
        a = tuple(tuple(col[i] for col in cols) for i in range(self.ambient))
        combos = right_kernel(a, self.desc)
        vectors = []
        for k in combos:
            v = None
            for c, g in zip(k[: self.dim], self.gens):
                t = vec_scale(c, g)
                v = t if v is None else vec_add(v, t)
            vectors.append(v)
        return Subspace.from_vectors(self.desc, self.ambient, vectors)

    def annihilator(self) -> "Subspace":
        """Covectors vanishing on this subspace, as a subspace of L^d."""
        if self.dim == 0:
            return Subspace.full(self.desc, self.ambient)
        a = tuple(tuple(g) for g in self.gens)
        return Subspace.from_vectors(self.desc, self.ambient, right_kernel(a, self.desc))

    def coords_of(self, v: Vector):
        """Coefficients of v on the stored generators, or None."""
        return solve_columns([tuple(g) for g in self.gens], v, self.desc) if self.gens else (
            [] if all(not _nonzero(x) for x in v) else None
        )

    def quotient_coords(self, v: Vector) -> Vector:
        """Coordinates of v + (this subspace) on the complementary standard
        basis vectors (the non-pivot positions)."""
        w = self.reduce_vector(v)
        free = [i for i in range(self.ambient) if i not in self.pivots]
        return tuple(w[i] for i in free)


# ---------------------------------------------------------------------------
# sampling


def sample_invertible(desc: LocalFieldDesc, n: int, seed: int, shears: int | None = None) -> Matrix:
    """Deterministic integral matrix with unit determinant, built from random
    shears, swaps, and unit row scalings.  Its inverse is integral too, so
    basis transport does not erode precision floors."""
    rng = random.Random(seed)
    rows = [list(r) for r in identity(desc, n)]
    count = shears if shears is not None else 3 * n + 2
    for _ in range(count):
        op = rng.randrange(3) if n > 1 else 2
        if op == 0:
            i, j = rng.sample(range(n), 2)
            c = desc.from_int(rng.randrange(-9, 10), INF)
            rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
        elif op == 1:
            i, j = rng.sample(range(n), 2)
            rows[i], rows[j] = rows[j], rows[i]
        else:
            i = rng.randrange(n)
            u = desc.from_int(rng.randrange(1, desc.p) + desc.p * rng.randrange(7), INF)
            rows[i] = [u * x for x in rows[i]]
    return mat(rows)
