"""Dense exact matrices over GF(p) or the rationals.

Entries are stored as raw canonical values (see :mod:`ranklines.fields`)
in immutable row tuples.  All operations are pure functions; matrices are
safe to share freely.  Rank over GF(2) runs on packed machine words, which
is observably identical to the generic elimination path (tested against it).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .fields import FieldDesc, FieldMismatchError, RawValue, Scalar


@dataclass(frozen=True)
class Matrix:
    field: FieldDesc
    nrows: int
    ncols: int
    rows: tuple[tuple[RawValue, ...], ...]

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldDesc, rows) -> "Matrix":
        """Build a matrix, coercing every entry into canonical form."""
        norm = tuple(tuple(field.normalize(v) for v in row) for row in rows)
        nrows = len(norm)
        ncols = len(norm[0]) if nrows else 0
        if any(len(r) != ncols for r in norm):
            raise ValueError("ragged rows")
        return cls(field, nrows, ncols, norm)

    @classmethod
    def zeros(cls, field: FieldDesc, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field: FieldDesc, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, field: FieldDesc, nrows: int, ncols: int, i: int, j: int) -> "Matrix":
        """The matrix with a single 1 at position (i, j), zero elsewhere."""
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ValueError(f"unit position ({i}, {j}) outside {nrows}x{ncols}")
        z, o = field.zero, field.one
        return cls(field, nrows, ncols,
                   tuple(tuple(o if (r, c) == (i, j) else z for c in range(ncols))
                         for r in range(nrows)))

    # -- basic structure ------------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def scalar_at(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.rows[i][j])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows, tuple(zip(*self.rows)) if self.rows else ())

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"cannot mix {self.field} and {other.field}")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      tuple(tuple(f.add(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      tuple(tuple(f.sub(a, b) for a, b in zip(ra, rb))
                            for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      tuple(tuple(f.neg(a) for a in row) for row in self.rows))

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.normalize(c)
        return Matrix(f, self.nrows, self.ncols,
                      tuple(tuple(f.mul(c, a) for a in row) for row in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatchError(f"cannot mix {self.field} and {other.field}")
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        f = self.field
        cols = other.transpose().rows
        if f.kind == "gf":
            p = f.modulus
            out = tuple(tuple(sum(a * b for a, b in zip(row, col)) % p for col in cols)
                        for row in self.rows)
        else:
            out = tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
                        for row in self.rows)
        return Matrix(f, self.nrows, other.ncols, out)

    # -- text format -----------------------------------------------------------
    #
    #   field gf 2          (or: field rat)
    #   size 3 2
    #   1 0
    #   0 0
    #   0 0

    def to_text(self) -> str:
        lines = [f"field {self.field}", f"size {self.nrows} {self.ncols}"]
        fmt = self.field.format
        lines.extend(" ".join(fmt(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        from .fields import parse_field

        raw = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if len(raw) < 2 or not raw[0].startswith("field ") or not raw[1].startswith("size "):
            raise ValueError("matrix text must start with 'field ...' and 'size n p' lines")
        field = parse_field(raw[0][len("field "):])
        try:
            n, p = (int(t) for t in raw[1].split()[1:])
        except Exception as exc:
            raise ValueError(f"bad size line {raw[1]!r}") from exc
        body = raw[2:]
        if len(body) != n:
            raise ValueError(f"expected {n} rows, found {len(body)}")
        rows = []
        for ln in body:
            tokens = ln.split()
            if len(tokens) != p:
                raise ValueError(f"expected {p} entries per row, got {len(tokens)} in {ln!r}")
            rows.append(tuple(field.parse(t) for t in tokens))
        return cls(field, n, p, tuple(rows))

    def __str__(self) -> str:
        return self.to_text()


# ---------------------------------------------------------------------------
# rank


def _rank_gf2_packed(rows, ncols: int) -> int:
    """XOR-basis rank of packed GF(2) rows."""
    basis: list[int] = []
    for row in rows:
        x = 0
        for v in row:
            x = (x << 1) | v
        for b in basis:
            y = x ^ b
            if y < x:
                x = y
        if x:
            basis.append(x)
    return len(basis)


def _rank_modp(rows, p: int) -> int:
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        row_r = m[r]
        if inv != 1:
            for j in range(c, nc):
                row_r[j] = row_r[j] * inv % p
        for i in range(r + 1, nr):
            f = m[i][c]
            if f:
                row_i = m[i]
                for j in range(c, nc):
                    row_i[j] = (row_i[j] - f * row_r[j]) % p
        r += 1
        if r == nr:
            break
    return r


def _rank_rat(rows) -> int:
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row_r = m[r]
        for i in range(r + 1, nr):
            f = m[i][c]
            if f:
                g = f / row_r[c]
                row_i = m[i]
                for j in range(c, nc):
                    row_i[j] -= g * row_r[j]
        r += 1
        if r == nr:
            break
    return r


def rank_rows(field: FieldDesc, rows, ncols: int) -> int:
    """Low-level rank of raw row tuples; the hot path behind :func:`rank`."""
    if field.kind == "gf":
        if field.modulus == 2:
            return _rank_gf2_packed(rows, ncols)
        return _rank_modp(rows, field.modulus)
    return _rank_rat(rows)


def rank_rows_generic(field: FieldDesc, rows, ncols: int) -> int:
    """Rank via the generic elimination path only (no GF(2) packing)."""
    if field.kind == "gf":
        return _rank_modp(rows, field.modulus)
    return _rank_rat(rows)


def rank(M: Matrix) -> int:
    """Dimension of the row space, by exact Gaussian elimination."""
    return rank_rows(M.field, M.rows, M.ncols)


# ---------------------------------------------------------------------------
# determinant


def _det_modp(rows, p: int) -> int:
    n = len(rows)
    # Closed forms for the tiny sizes the exhaustive sweeps hammer on.
    if n == 1:
        return rows[0][0] % p
    if n == 2:
        (a, b), (c, d) = rows
        return (a * d - b * c) % p
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return (a * e * i + b * f * g + c * d * h
                - c * e * g - b * d * i - a * f * h) % p
    m = [list(r) for r in rows]
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det % p
        pivval = m[c][c]
        det = det * pivval % p
        inv = pow(pivval, -1, p)
        row_c = m[c]
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                g = f * inv % p
                row_i = m[i]
                for j in range(c + 1, n):
                    row_i[j] = (row_i[j] - g * row_c[j]) % p
    return det


def _det_bareiss_int(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix; mutates m."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = None
            for i in range(k + 1, n):
                if m[i][k]:
                    piv = i
                    break
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            fik = row_i[k]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pkk - fik * row_k[j]) // prev
            row_i[k] = 0
        prev = pkk
    return sign * m[n - 1][n - 1]


def det(M: Matrix) -> Scalar:
    """Exact determinant; the empty 0x0 matrix has determinant 1."""
    if not M.is_square:
        raise ValueError(f"determinant requires a square matrix, got {M.nrows}x{M.ncols}")
    f = M.field
    if M.nrows == 0:
        return Scalar(f, f.one)
    if f.kind == "gf":
        return Scalar(f, _det_modp(M.rows, f.modulus))
    # Clear denominators row by row, then run integer Bareiss.
    scale = 1
    int_rows: list[list[int]] = []
    for row in M.rows:
        mult = lcm(*(v.denominator for v in row)) if row else 1
        scale *= mult
        int_rows.append([int(v * mult) for v in row])
    return Scalar(f, Fraction(_det_bareiss_int(int_rows), scale))


def is_invertible(M: Matrix) -> bool:
    return M.is_square and rank(M) == M.nrows


# ---------------------------------------------------------------------------
# reduced row echelon form


def _rref_raw(field: FieldDesc, rows, ncols: int, pivot_limit: int | None = None):
    """RREF of raw rows; returns (list rows, pivot column list).

    Pivots are searched only in the first ``pivot_limit`` columns, but row
    operations apply to the full width (used for augmented eliminations).
    """
    m = [list(r) for r in rows]
    nr = len(m)
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    one = field.one
    for c in range(limit):
        piv = None
        for i in range(r, nr):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row_r = m[r]
        if row_r[c] != one:
            inv = field.inv(row_r[c])
            for j in range(c, len(row_r)):
                row_r[j] = field.mul(inv, row_r[j])
        for i in range(nr):
            if i != r and m[i][c]:
                f = m[i][c]
                row_i = m[i]
                for j in range(c, len(row_r)):
                    row_i[j] = field.sub(row_i[j], field.mul(f, row_r[j]))
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row-echelon form and its pivot columns (unique per row space)."""
    m, pivots = _rref_raw(M.field, M.rows, M.ncols)
    return Matrix(M.field, M.nrows, M.ncols, tuple(tuple(r) for r in m)), tuple(pivots)


# ---------------------------------------------------------------------------
# blocks and transforms


def block_decompose(M: Matrix, r: int) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Split a square matrix as [[A, C], [B, D]] with A of size r x r."""
    if not M.is_square:
        raise ValueError("block decomposition requires a square matrix")
    n = M.nrows
    if not 0 <= r <= n:
        raise ValueError(f"block size {r} outside [0, {n}]")
    f = M.field
    a = Matrix(f, r, r, tuple(row[:r] for row in M.rows[:r]))
    c = Matrix(f, r, n - r, tuple(row[r:] for row in M.rows[:r]))
    b = Matrix(f, n - r, r, tuple(row[:r] for row in M.rows[r:]))
    d = Matrix(f, n - r, n - r, tuple(row[r:] for row in M.rows[r:]))
    return a, c, b, d


def canonical_N(field: FieldDesc, nrows: int, ncols: int, r: int) -> Matrix:
    """The rank-r block matrix [[I_r, 0], [0, 0]] of size nrows x ncols."""
    if not 0 <= r <= min(nrows, ncols):
        raise ValueError(f"rank {r} outside [0, min({nrows}, {ncols})]")
    z, o = field.zero, field.one
    return Matrix(field, nrows, ncols,
                  tuple(tuple(o if i == j and i < r else z for j in range(ncols))
                        for i in range(nrows)))


def equivalence_apply(P: Matrix, M: Matrix, Q: Matrix) -> Matrix:
    """P @ M @ Q for invertible P and Q (rank-preserving transport)."""
    if not is_invertible(P):
        raise ValueError("left factor is not invertible")
    if not is_invertible(Q):
        raise ValueError("right factor is not invertible")
    if P.ncols != M.nrows or M.ncols != Q.nrows:
        raise ValueError("incompatible sizes for P @ M @ Q")
    return P @ M @ Q


def to_rank_normal_form(M: Matrix) -> tuple[Matrix, Matrix]:
    """Invertible (P, Q) with P @ M @ Q equal to canonical_N(n, p, rank M)."""
    f = M.field
    n, p = M.nrows, M.ncols
    # Row phase on the augmented matrix [M | I]: left block becomes RREF.
    aug = [list(row) + [f.one if i == j else f.zero for j in range(n)]
           for i, row in enumerate(M.rows)]
    red, pivots = _rref_raw(f, aug, p + n, pivot_limit=p)
    P = Matrix(f, n, n, tuple(tuple(row[p:]) for row in red))
    work = [row[:p] for row in red]
    r = len(pivots)
    # Column phase: clear non-pivot entries in pivot rows, then permute
    # pivot columns to the front.  Q accumulates the same column operations.
    q = [[f.one if i == j else f.zero for j in range(p)] for i in range(p)]
    for i, pc in enumerate(pivots):
        for j in range(p):
            if j != pc and work[i][j] != f.zero:
                factor = work[i][j]
                for k in range(n):
                    work[k][j] = f.sub(work[k][j], f.mul(factor, work[k][pc]))
                for k in range(p):
                    q[k][j] = f.sub(q[k][j], f.mul(factor, q[k][pc]))
    perm = list(pivots) + [j for j in range(p) if j not in set(pivots)]
    work = [[row[perm[j]] for j in range(p)] for row in work]
    q = [[row[perm[j]] for j in range(p)] for row in q]
    Q = Matrix(f, p, p, tuple(tuple(row) for row in q))
    assert Matrix(f, n, p, tuple(tuple(row) for row in work)) == canonical_N(f, n, p, r)
    return P, Q


def hstack(left: Matrix, right: Matrix) -> Matrix:
    if left.field != right.field or left.nrows != right.nrows:
        raise ValueError("hstack needs matching fields and row counts")
    return Matrix(left.field, left.nrows, left.ncols + right.ncols,
                  tuple(a + b for a, b in zip(left.rows, right.rows)))


def kernel_basis(M: Matrix) -> Matrix:
    """Matrix whose columns form a basis of the right null space of M."""
    f = M.field
    red, pivots = _rref_raw(f, M.rows, M.ncols)
    pivot_set = set(pivots)
    free = [j for j in range(M.ncols) if j not in pivot_set]
    cols = []
    for j in free:
        v = [f.zero] * M.ncols
        v[j] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red[i][j])
        cols.append(v)
    return Matrix(f, M.ncols, len(free), tuple(zip(*cols)) if cols else tuple(() for _ in range(M.ncols)))


# ---------------------------------------------------------------------------
# randomized helpers (seeded by the caller)


def random_matrix(field: FieldDesc, nrows: int, ncols: int, rng: random.Random) -> Matrix:
    """Uniform over GF(p) entries; small random fractions over the rationals."""
    if field.kind == "gf":
        p = field.modulus
        return Matrix(field, nrows, ncols,
                      tuple(tuple(rng.randrange(p) for _ in range(ncols)) for _ in range(nrows)))
    return Matrix(field, nrows, ncols,
                  tuple(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(ncols))
                        for _ in range(nrows)))


def random_invertible(field: FieldDesc, n: int, rng: random.Random) -> Matrix:
    if n == 0:
        return Matrix.identity(field, 0)
    while True:
        M = random_matrix(field, n, n, rng)
        if rank(M) == n:
            return M
