"""Full-rank-line predicates, side conditions, and witness searches.

A line is the family A + t*N for t ranging over the field.  The central
predicate asks whether every member has full column rank p; searches look
for an A inside a given (affine) subspace making that true.  Searches over
finite fields are exhaustive in the deterministic element order, so a
negative answer is a proof of nonexistence, not a sampling artifact.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .fields import FieldDesc, RawValue, Scalar
from .matrices import Matrix, _det_modp, hstack, kernel_basis, rank, rank_rows
from .pencils import PencilAnalysis, classify_line, det_pencil
from .polynomials import Poly
from .spaces import DEFAULT_ELEMENT_BUDGET, AffineMatrixSubspace, vectorize

WITNESS_FOUND = "witness-found"
EXHAUSTED_NO_WITNESS = "exhausted-no-witness"
BUDGET_EXHAUSTED = "budget-exhausted"

EXHAUSTIVE = "exhaustive"
RANDOM = "random"

DEFAULT_RANDOM_BUDGET = 10_000


@dataclass(frozen=True)
class WitnessCertificate:
    """Checkable evidence that every matrix of A + K*N has rank p.

    Over a finite field the evidence is the complete per-t rank table;
    over the rationals it is the pencil analysis whose classification
    excludes rational rank drops.
    """

    A: Matrix
    N: Matrix
    table: tuple[tuple[RawValue, int], ...] | None = None
    analysis: PencilAnalysis | None = None
    verdict: str = "full-rank"

    def to_json_obj(self) -> dict:
        obj = {
            "A": self.A.to_text(),
            "N": self.N.to_text(),
            "field": str(self.A.field),
            "verdict": self.verdict,
        }
        f = self.A.field
        if self.table is not None:
            obj["table"] = [{"t": f.format(t), "rank": r} for t, r in self.table]
        if self.analysis is not None:
            a = self.analysis
            obj["analysis"] = {
                "poly_kind": a.poly_kind,
                "poly_coeffs": [f.format(c) for c in a.poly.coeffs],
                "poly": str(a.poly),
                "classification": a.classification,
                "witness": f.format(a.witness.value) if a.witness is not None else None,
            }
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "WitnessCertificate":
        A = Matrix.from_text(obj["A"])
        N = Matrix.from_text(obj["N"])
        f = A.field
        table = None
        analysis = None
        if "table" in obj:
            table = tuple((f.parse(row["t"]), int(row["rank"])) for row in obj["table"])
        if "analysis" in obj:
            a = obj["analysis"]
            poly = Poly.from_coeffs(f, [f.parse(c) for c in a["poly_coeffs"]])
            witness = Scalar(f, f.parse(a["witness"])) if a["witness"] is not None else None
            analysis = PencilAnalysis(poly, a["poly_kind"], a["classification"], witness)
        return cls(A, N, table, analysis, obj["verdict"])

    @classmethod
    def from_json(cls, text: str) -> "WitnessCertificate":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class SearchOutcome:
    status: str
    certificate: WitnessCertificate | None
    cases_examined: int

    @property
    def found(self) -> bool:
        return self.status == WITNESS_FOUND


def _check_line_shapes(A: Matrix, N: Matrix) -> None:
    if A.field != N.field:
        raise ValueError(f"cannot mix {A.field} and {N.field}")
    if (A.nrows, A.ncols) != (N.nrows, N.ncols):
        raise ValueError(f"shape mismatch: {A.nrows}x{A.ncols} vs {N.nrows}x{N.ncols}")
    if A.nrows < A.ncols:
        raise ValueError(f"expected at least as many rows as columns, got {A.nrows}x{A.ncols}")


def _full_rank_all_t(field: FieldDesc, a_rows, n_rows, p: int) -> bool:
    """True iff rank(A + tN) = p for every t in the (finite) field."""
    pm = field.modulus
    if rank_rows(field, a_rows, p) < p:
        return False
    for t in range(1, pm):
        rows = tuple(tuple((a + t * b) % pm for a, b in zip(ra, rb))
                     for ra, rb in zip(a_rows, n_rows))
        if rank_rows(field, rows, p) < p:
            return False
    return True


def _finite_certificate(A: Matrix, N: Matrix) -> WitnessCertificate:
    f = A.field
    p = A.ncols
    pm = f.modulus
    table = []
    for t in f.elements():
        rows = tuple(tuple((a + t * b) % pm for a, b in zip(ra, rb))
                     for ra, rb in zip(A.rows, N.rows))
        table.append((t, rank_rows(f, rows, p)))
    return WitnessCertificate(A, N, table=tuple(table))


def line_full_rank(A: Matrix, N: Matrix):
    """Decide whether every matrix of A + K*N has rank p.

    Returns (True, certificate) or (False, t0) with t0 the smallest field
    element at which the rank drops.  Finite fields are swept directly;
    the rationals go through the minor-gcd classification.
    """
    _check_line_shapes(A, N)
    f = A.field
    p = A.ncols
    if f.is_finite:
        pm = f.modulus
        for t in f.elements():
            rows = tuple(tuple((a + t * b) % pm for a, b in zip(ra, rb))
                         for ra, rb in zip(A.rows, N.rows)) if t else A.rows
            if rank_rows(f, rows, p) < p:
                return False, Scalar(f, t)
        return True, _finite_certificate(A, N)
    analysis = classify_line(A, N)
    if analysis.full_rank:
        return True, WitnessCertificate(A, N, analysis=analysis)
    t0 = analysis.witness if analysis.witness is not None else Scalar(f, Fraction(0))
    return False, t0


def validate_certificate(cert: WitnessCertificate) -> bool:
    """Re-check a certificate from scratch; True iff it proves a full-rank line."""
    A, N = cert.A, cert.N
    if (A.nrows, A.ncols) != (N.nrows, N.ncols) or A.field != N.field:
        return False
    f = A.field
    p = A.ncols
    if f.is_finite:
        if cert.table is None:
            return False
        if sorted(t for t, _ in cert.table) != list(f.elements()):
            return False
        pm = f.modulus
        for t, recorded in cert.table:
            rows = tuple(tuple((a + t * b) % pm for a, b in zip(ra, rb))
                         for ra, rb in zip(A.rows, N.rows))
            r = rank_rows(f, rows, p)
            if r != recorded or r != p:
                return False
        return True
    if cert.analysis is None:
        return False
    fresh = classify_line(A, N)
    return fresh == cert.analysis and fresh.full_rank


# ---------------------------------------------------------------------------
# side conditions (Ker/im interplay for square lines)


def maps_ker_into_im(M: Matrix, N: Matrix) -> bool:
    """True iff M sends the kernel of N into the column space of N."""
    _check_square_pair(M, N)
    kb = kernel_basis(N)
    return rank(hstack(N, M @ kb)) == rank(N)


def ker_coker_noninjective(M: Matrix, N: Matrix) -> bool:
    """True iff the induced map Ker N -> K^n / im N fails to be injective."""
    _check_square_pair(M, N)
    kb = kernel_basis(N)
    r = rank(N)
    return rank(hstack(N, M @ kb)) < r + kb.ncols


def _check_square_pair(M: Matrix, N: Matrix) -> None:
    if M.field != N.field:
        raise ValueError(f"cannot mix {M.field} and {N.field}")
    if not (M.is_square and N.is_square and M.nrows == N.nrows):
        raise ValueError("both matrices must be square of the same size")


# ---------------------------------------------------------------------------
# searches


def _check_search_inputs(space, N: Matrix) -> int:
    shape = space.shape
    if N.field != shape.field or (N.nrows, N.ncols) != (shape.n, shape.p):
        raise ValueError(f"direction {N.nrows}x{N.ncols} over {N.field} does not match "
                         f"the space's shape {shape.n}x{shape.p} over {shape.field}")
    if shape.n < shape.p:
        raise ValueError(f"expected at least as many rows as columns, got {shape.n}x{shape.p}")
    rk = rank(N)
    if rk >= shape.p:
        raise ValueError(f"direction rank {rk} is not below p = {shape.p}")
    return shape.p


def _random_member(space, rng: random.Random) -> Matrix:
    """Uniform member: base plus uniformly weighted basis combination."""
    shape = space.shape
    f = shape.field
    q = f.order
    if isinstance(space, AffineMatrixSubspace):
        vec = list(vectorize(space.base))
        basis = space.linear.basis
    else:
        vec = [0] * shape.ambient_dim
        basis = space.basis
    for row in basis:
        c = rng.randrange(q)
        if c:
            for j, v in enumerate(row):
                if v:
                    vec[j] = (vec[j] + c * v) % f.modulus
    n, p = shape.n, shape.p
    return Matrix(f, n, p, tuple(tuple(vec[i * p:(i + 1) * p]) for i in range(n)))


def witness_search(space, N: Matrix, strategy: str = EXHAUSTIVE,
                   budget: int | None = None, seed: int = 0) -> SearchOutcome:
    """Find A in the subspace whose whole line A + K*N has rank p.

    Exhaustive strategy scans the deterministic element order and its
    negative verdict is complete (every member was tried); ``budget`` caps
    the element count (default 2^24) and overrunning it raises.  Random
    strategy draws ``budget`` seeded uniform samples (default 10,000) and
    never claims nonexistence.
    """
    p = _check_search_inputs(space, N)
    f = space.shape.field
    n_rows = N.rows
    if strategy == EXHAUSTIVE:
        limit = DEFAULT_ELEMENT_BUDGET if budget is None else budget
        cases = 0
        for A in space.elements(budget=limit):
            cases += 1
            if _full_rank_all_t(f, A.rows, n_rows, p):
                return SearchOutcome(WITNESS_FOUND, _finite_certificate(A, N), cases)
        return SearchOutcome(EXHAUSTED_NO_WITNESS, None, cases)
    if strategy == RANDOM:
        limit = DEFAULT_RANDOM_BUDGET if budget is None else budget
        rng = random.Random(seed)
        for i in range(limit):
            A = _random_member(space, rng)
            if _full_rank_all_t(f, A.rows, n_rows, p):
                return SearchOutcome(WITNESS_FOUND, _finite_certificate(A, N), i + 1)
        return SearchOutcome(BUDGET_EXHAUSTED, None, limit)
    raise ValueError(f"unknown strategy {strategy!r}")


def constant_det_witness_search(space, N: Matrix,
                                budget: int | None = None) -> SearchOutcome:
    """Find A in the subspace with det(A + tN) a nonzero constant.

    This is strictly stronger than a full-rank line over a finite field:
    the determinant polynomial must be constant as a formal polynomial,
    not merely root-free.  The scan is exhaustive.
    """
    shape = space.shape
    if shape.n != shape.p:
        raise ValueError("constant-determinant search requires a square shape")
    _check_search_inputs(space, N)
    if rank(N) != shape.n - 1:
        raise ValueError(f"direction rank must be n-1 = {shape.n - 1}, got {rank(N)}")
    limit = DEFAULT_ELEMENT_BUDGET if budget is None else budget
    cases = 0
    f = shape.field
    if f.is_finite and f.order > shape.n - 1:
        # deg det(A+tN) <= rank N = n-1 < q, and a polynomial of degree
        # below q is constant iff it takes a single value at all q points,
        # so pointwise determinants decide formal constancy here.
        pm = f.modulus
        n_rows = N.rows
        for A in space.elements(budget=limit):
            cases += 1
            d0 = _det_modp(A.rows, pm)
            if d0 == 0:
                continue
            if all(_det_modp(tuple(tuple((a + t * b) % pm for a, b in zip(ra, rb))
                                   for ra, rb in zip(A.rows, n_rows)), pm) == d0
                   for t in range(1, pm)):
                return SearchOutcome(WITNESS_FOUND, _finite_certificate(A, N), cases)
        return SearchOutcome(EXHAUSTED_NO_WITNESS, None, cases)
    for A in space.elements(budget=limit):
        cases += 1
        if det_pencil(A, N).degree == 0:
            return SearchOutcome(WITNESS_FOUND, _finite_certificate(A, N), cases)
    return SearchOutcome(EXHAUSTED_NO_WITNESS, None, cases)
