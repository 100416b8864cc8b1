"""Linear and affine subspaces of a matrix space Mat_{n,p}(K).

Subspaces are carried in canonical form: the basis of the linear part is
the reduced row-echelon matrix of vectorized members (row-major), so equal
subspaces compare equal, and an affine coset stores the unique
representative whose coordinates vanish at the basis pivot positions.

Enumeration over GF(p) walks pivot-column profiles (Schubert cells) in
lexicographic order and fills the free RREF entries; this is duplicate-free
by construction and its counts are cross-checked against Gaussian
binomials.  The inner loops deliberately work on raw row tuples: exhaustive
campaigns stream through millions of subspaces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product

from .fields import FieldDesc, RawValue
from .matrices import Matrix, _rref_raw

DEFAULT_ELEMENT_BUDGET = 1 << 24


class BudgetExceededError(RuntimeError):
    """An element sweep would exceed the configured iteration budget."""


@dataclass(frozen=True, slots=True)
class MatrixSpaceShape:
    field: FieldDesc
    n: int
    p: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.p < 0:
            raise ValueError("matrix dimensions must be non-negative")

    @property
    def ambient_dim(self) -> int:
        return self.n * self.p


def vectorize(M: Matrix) -> tuple[RawValue, ...]:
    """Row-major flattening of a matrix into an ambient coordinate vector."""
    return tuple(v for row in M.rows for v in row)


def unvectorize(shape: MatrixSpaceShape, vec) -> Matrix:
    n, p = shape.n, shape.p
    if len(vec) != n * p:
        raise ValueError(f"vector length {len(vec)} does not match {n}x{p}")
    return Matrix(shape.field, n, p, tuple(tuple(vec[i * p:(i + 1) * p]) for i in range(n)))


@dataclass(frozen=True, slots=True)
class LinearMatrixSubspace:
    """A linear subspace, held as the RREF basis of its vectorized members."""

    shape: MatrixSpaceShape
    basis: tuple[tuple[RawValue, ...], ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.shape.ambient_dim - len(self.basis)

    def basis_matrices(self) -> list[Matrix]:
        return [unvectorize(self.shape, row) for row in self.basis]

    def reduce(self, vec) -> tuple[RawValue, ...]:
        """Residue of vec after clearing its pivot coordinates.

        The residue is zero exactly when vec lies in the row space; for a
        general vec it is the canonical representative of vec's coset.
        """
        f = self.shape.field
        out = list(vec)
        for row, pc in zip(self.basis, self.pivots):
            c = out[pc]
            if c != f.zero:
                for j in range(pc, len(out)):
                    out[j] = f.sub(out[j], f.mul(c, row[j]))
        return tuple(out)

    def contains(self, M: Matrix) -> bool:
        _check_shape(self.shape, M)
        z = self.shape.field.zero
        return all(v == z for v in self.reduce(vectorize(M)))

    def elements(self, budget: int | None = DEFAULT_ELEMENT_BUDGET):
        yield from _iter_coset(self.shape, self.basis, None, budget)

    def to_text(self) -> str:
        shape = self.shape
        lines = [f"field {shape.field}", f"size {shape.n} {shape.p}", f"dim {self.dim}"]
        fmt = shape.field.format
        lines.extend(" ".join(fmt(v) for v in row) for row in self.basis)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class AffineMatrixSubspace:
    """A coset base + V with the canonical (pivot-free-coordinate) base."""

    linear: LinearMatrixSubspace
    base: Matrix

    @property
    def shape(self) -> MatrixSpaceShape:
        return self.linear.shape

    @property
    def dim(self) -> int:
        return self.linear.dim

    @property
    def codim(self) -> int:
        return self.linear.codim

    def contains(self, M: Matrix) -> bool:
        _check_shape(self.shape, M)
        return self.linear.reduce(vectorize(M)) == vectorize(self.base)

    def elements(self, budget: int | None = DEFAULT_ELEMENT_BUDGET):
        yield from _iter_coset(self.shape, self.linear.basis, vectorize(self.base), budget)

    def to_text(self) -> str:
        lines = [self.linear.to_text().rstrip("\n"), "base"]
        fmt = self.shape.field.format
        lines.extend(" ".join(fmt(v) for v in row) for row in self.base.rows)
        return "\n".join(lines) + "\n"


def _check_shape(shape: MatrixSpaceShape, M: Matrix) -> None:
    if M.field != shape.field or (M.nrows, M.ncols) != (shape.n, shape.p):
        raise ValueError(f"matrix {M.nrows}x{M.ncols} over {M.field} does not match "
                         f"shape {shape.n}x{shape.p} over {shape.field}")


def from_generators(shape: MatrixSpaceShape, mats) -> LinearMatrixSubspace:
    """The canonical subspace spanned by the given matrices."""
    rows = []
    for M in mats:
        _check_shape(shape, M)
        rows.append(vectorize(M))
    m = shape.ambient_dim
    red, pivots = _rref_raw(shape.field, rows, m)
    basis = tuple(tuple(red[i]) for i in range(len(pivots)))
    return LinearMatrixSubspace(shape, basis, tuple(pivots))


def affine_from_point(linear: LinearMatrixSubspace, point: Matrix) -> AffineMatrixSubspace:
    """The coset point + V, with the base canonicalized."""
    _check_shape(linear.shape, point)
    base = unvectorize(linear.shape, linear.reduce(vectorize(point)))
    return AffineMatrixSubspace(linear, base)


def membership(space, M: Matrix) -> bool:
    return space.contains(M)


def transport(space, P: Matrix, Q: Matrix):
    """Image of a subspace under M -> P @ M @ Q (P, Q invertible)."""
    if isinstance(space, AffineMatrixSubspace):
        lin = transport(space.linear, P, Q)
        return affine_from_point(lin, P @ space.base @ Q)
    return from_generators(space.shape, [P @ B @ Q for B in space.basis_matrices()])


# ---------------------------------------------------------------------------
# element iteration


def _iter_coset(shape: MatrixSpaceShape, basis, base_vec, budget: int | None):
    f = shape.field
    if not f.is_finite:
        raise ValueError("element iteration requires a finite field")
    q = f.order
    d = len(basis)
    total = q ** d
    if budget is not None and total > budget:
        raise BudgetExceededError(f"{total} elements exceed the budget of {budget}")
    n, p = shape.n, shape.p
    m = n * p
    vec = list(base_vec) if base_vec is not None else [0] * m
    yield Matrix(f, n, p, tuple(tuple(vec[i * p:(i + 1) * p]) for i in range(n)))
    if d == 0:
        return
    # Odometer over coefficient digits, last digit fastest.  Whether a digit
    # steps or wraps (q copies of a row cancel mod p), its row is added once.
    digits = [0] * d
    pmod = f.modulus
    for _ in range(total - 1):
        k = d - 1
        while True:
            row = basis[k]
            for j in range(m):
                if row[j]:
                    vec[j] = (vec[j] + row[j]) % pmod
            digits[k] += 1
            if digits[k] < q:
                break
            digits[k] = 0
            k -= 1
        yield Matrix(f, n, p, tuple(tuple(vec[i * p:(i + 1) * p]) for i in range(n)))


def elements(space, budget: int | None = DEFAULT_ELEMENT_BUDGET):
    """All q^dim members of a linear or affine subspace, coordinate order."""
    return space.elements(budget=budget)


# ---------------------------------------------------------------------------
# enumeration


def count_subspaces(ambient_dim: int, codim: int, q: int) -> int:
    """Gaussian binomial: the number of codim-c subspaces of F_q^ambient."""
    if not 0 <= codim <= ambient_dim:
        return 0
    k = min(ambient_dim - codim, codim)
    num = den = 1
    for i in range(k):
        num *= q ** ambient_dim - q ** i
        den *= q ** k - q ** i
    return num // den


def _iter_rref_bases(m: int, d: int, q: int):
    """Raw (rows, pivots) pairs for every d-dim RREF basis in F_q^m."""
    if d == 0:
        yield (), ()
        return
    for prof in combinations(range(m), d):
        pivset = set(prof)
        template = []
        free_slots: list[tuple[int, int]] = []
        for i, pc in enumerate(prof):
            row = [0] * m
            row[pc] = 1
            template.append(row)
            free_slots.extend((i, j) for j in range(pc + 1, m) if j not in pivset)
        if not free_slots:
            yield tuple(tuple(r) for r in template), prof
            continue
        for assignment in product(range(q), repeat=len(free_slots)):
            for (i, j), v in zip(free_slots, assignment):
                template[i][j] = v
            yield tuple(tuple(r) for r in template), prof


class SubspaceIterator:
    """Single-consumer stream of all codim-c subspaces of a finite shape."""

    def __init__(self, shape: MatrixSpaceShape, codim: int):
        if not shape.field.is_finite:
            raise ValueError("subspace enumeration requires a finite field")
        if not 0 <= codim <= shape.ambient_dim:
            raise ValueError(f"codimension {codim} outside [0, {shape.ambient_dim}]")
        self.shape = shape
        self.codim = codim
        self._gen = (LinearMatrixSubspace(shape, rows, prof)
                     for rows, prof in _iter_rref_bases(shape.ambient_dim,
                                                        shape.ambient_dim - codim,
                                                        shape.field.order))

    def __iter__(self) -> "SubspaceIterator":
        return self

    def __next__(self) -> LinearMatrixSubspace:
        return next(self._gen)


def enumerate_subspaces(shape: MatrixSpaceShape, codim: int) -> SubspaceIterator:
    return SubspaceIterator(shape, codim)


def enumerate_affine(shape: MatrixSpaceShape, codim: int):
    """All affine codim-c subspaces: q^codim canonical cosets per linear one."""
    q = shape.field.order  # raises on rationals before any work
    m = shape.ambient_dim
    for lin in enumerate_subspaces(shape, codim):
        pivset = set(lin.pivots)
        nonpiv = [j for j in range(m) if j not in pivset]
        for assignment in product(range(q), repeat=len(nonpiv)):
            vec = [0] * m
            for j, v in zip(nonpiv, assignment):
                vec[j] = v
            yield AffineMatrixSubspace(lin, unvectorize(shape, vec))


# ---------------------------------------------------------------------------
# seeded random sampling (uniform over subspaces of the given codimension)


def _profile_weight(prof, m: int, q: int) -> int:
    c = m - len(prof)
    free = sum(c + i - pc for i, pc in enumerate(prof))
    return q ** free


def random_subspace(shape: MatrixSpaceShape, codim: int, rng: random.Random) -> LinearMatrixSubspace:
    """Uniformly random codim-c subspace: profiles weighted by cell size."""
    if not shape.field.is_finite:
        raise ValueError("random subspaces require a finite field")
    m = shape.ambient_dim
    d = m - codim
    if d < 0:
        raise ValueError(f"codimension {codim} exceeds ambient dimension {m}")
    q = shape.field.order
    profiles = list(combinations(range(m), d))
    weights = [_profile_weight(prof, m, q) for prof in profiles]
    pick = rng.randrange(sum(weights))
    acc = 0
    for prof, w in zip(profiles, weights):
        acc += w
        if pick < acc:
            break
    pivset = set(prof)
    rows = []
    for i, pc in enumerate(prof):
        row = [0] * m
        row[pc] = 1
        for j in range(pc + 1, m):
            if j not in pivset:
                row[j] = rng.randrange(q)
        rows.append(tuple(row))
    return LinearMatrixSubspace(shape, tuple(rows), prof)


def random_affine(shape: MatrixSpaceShape, codim: int, rng: random.Random) -> AffineMatrixSubspace:
    lin = random_subspace(shape, codim, rng)
    q = shape.field.order
    m = shape.ambient_dim
    pivset = set(lin.pivots)
    vec = [rng.randrange(q) if j not in pivset else 0 for j in range(m)]
    return AffineMatrixSubspace(lin, unvectorize(shape, vec))


# ---------------------------------------------------------------------------
# text format


def parse_subspace_text(text: str):
    """Parse the subspace text format; returns a linear or affine subspace.

    Layout: the matrix header (field/size), a ``dim d`` line, d vectorized
    basis rows, and optionally a ``base`` line followed by an n x p block.
    """
    from .fields import parse_field

    raw = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if len(raw) < 3 or not raw[0].startswith("field ") or not raw[1].startswith("size "):
        raise ValueError("subspace text must start with 'field ...' and 'size n p' lines")
    field = parse_field(raw[0][len("field "):])
    try:
        n, p = (int(t) for t in raw[1].split()[1:])
    except Exception as exc:
        raise ValueError(f"bad size line {raw[1]!r}") from exc
    if not raw[2].startswith("dim "):
        raise ValueError("expected a 'dim <d>' line after the size line")
    d = int(raw[2].split()[1])
    shape = MatrixSpaceShape(field, n, p)
    m = shape.ambient_dim
    body = raw[3:]
    if len(body) < d:
        raise ValueError(f"expected {d} basis rows, found {len(body)}")
    gens = []
    for ln in body[:d]:
        tokens = ln.split()
        if len(tokens) != m:
            raise ValueError(f"expected {m} coordinates per basis row, got {len(tokens)}")
        gens.append(unvectorize(shape, [field.parse(t) for t in tokens]))
    lin = from_generators(shape, gens)
    if lin.dim != d:
        raise ValueError(f"basis rows span dimension {lin.dim}, not the declared {d}")
    rest = body[d:]
    if not rest:
        return lin
    if rest[0] != "base":
        raise ValueError(f"unexpected line {rest[0]!r} after basis rows")
    block = rest[1:]
    if len(block) != n:
        raise ValueError(f"expected {n} base rows, found {len(block)}")
    rows = []
    for ln in block:
        tokens = ln.split()
        if len(tokens) != p:
            raise ValueError(f"expected {p} entries per base row, got {len(tokens)}")
        rows.append(tuple(field.parse(t) for t in tokens))
    return affine_from_point(lin, Matrix(field, n, p, tuple(rows)))
