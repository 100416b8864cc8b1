"""Full-rank lines, kernel side conditions, and witness searches."""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from ranklines.fields import GF, RATIONALS, Scalar
from ranklines.lines import (
    BUDGET_EXHAUSTED,
    DEFAULT_RANDOM_BUDGET,
    EXHAUSTED_NO_WITNESS,
    EXHAUSTIVE,
    RANDOM,
    WITNESS_FOUND,
    SearchOutcome,
    WitnessCertificate,
    constant_det_witness_search,
    ker_coker_noninjective,
    line_full_rank,
    maps_ker_into_im,
    validate_certificate,
    witness_search,
)
from ranklines.matrices import (
    Matrix,
    canonical_N,
    det,
    random_invertible,
    random_matrix,
    rank,
    to_rank_normal_form,
)
from ranklines.pencils import classify_line, det_pencil
from ranklines.spaces import (
    BudgetExceededError,
    MatrixSpaceShape,
    affine_from_point,
    elements,
    from_generators,
    membership,
    random_affine,
)

F2 = GF(2)
F3 = GF(3)
F5 = GF(5)


def _full_space(field, n, p):
    shape = MatrixSpaceShape(field, n, p)
    gens = [Matrix.unit(field, n, p, i, j) for i in range(n) for j in range(p)]
    return from_generators(shape, gens)


# -------------------------------------------------------------- line_full_rank


def test_line_full_rank_subdiagonal_witness():
    A = Matrix.from_rows(F2, [[0, 0], [1, 0], [0, 1]])
    N = canonical_N(F2, 3, 2, 1)
    ok, cert = line_full_rank(A, N)
    assert ok
    assert cert.verdict == "full-rank"
    assert cert.table == ((0, 2), (1, 2))
    assert validate_certificate(cert)


def test_line_full_rank_zero_base_fails_at_zero():
    A = Matrix.zeros(F2, 3, 2)
    N = canonical_N(F2, 3, 2, 1)
    ok, t0 = line_full_rank(A, N)
    assert not ok
    assert t0 == Scalar.of(F2, 0)


def test_line_full_rank_reports_smallest_failure():
    A = Matrix.identity(F3, 2)
    N = Matrix.unit(F3, 2, 2, 0, 0)
    ok, t0 = line_full_rank(A, N)
    assert not ok
    assert t0 == Scalar.of(F3, 2)


def test_line_full_rank_rational_cases():
    A = Matrix.from_rows(RATIONALS, [[0, 1], [1, 0]])
    N = Matrix.from_rows(RATIONALS, [[1, 0], [0, 0]])
    ok, cert = line_full_rank(A, N)
    assert ok
    assert cert.table is None
    assert cert.analysis is not None and cert.analysis.full_rank
    bad_ok, t0 = line_full_rank(Matrix.identity(RATIONALS, 2),
                                Matrix.from_rows(RATIONALS, [[1, 0], [0, -1]]))
    assert not bad_ok
    assert t0.value == 1
    assert rank(Matrix.identity(RATIONALS, 2)
                + Matrix.from_rows(RATIONALS, [[1, 0], [0, -1]])) < 2


def test_line_full_rank_shape_guards():
    with pytest.raises(ValueError):
        line_full_rank(Matrix.zeros(F2, 2, 3), Matrix.zeros(F2, 2, 3))
    with pytest.raises(ValueError):
        line_full_rank(Matrix.zeros(F2, 3, 2), Matrix.zeros(F2, 2, 2))


def test_line_full_rank_matches_brute_force():
    rng = random.Random(73)
    for field in (F2, F3, F5):
        for _ in range(40):
            p = rng.randint(1, 3)
            n = rng.randint(p, 4)
            A = random_matrix(field, n, p, rng)
            N = random_matrix(field, n, p, rng)
            ok, payload = line_full_rank(A, N)
            drops = [t for t in field.elements()
                     if rank(A + N.scale(t)) < p]
            assert ok == (not drops)
            if not ok:
                assert payload.value == drops[0]


# --------------------------------------------------------------- certificates


def test_certificate_json_round_trip_finite():
    A = Matrix.from_rows(F2, [[0, 0], [1, 0], [0, 1]])
    N = canonical_N(F2, 3, 2, 1)
    _, cert = line_full_rank(A, N)
    blob = cert.to_json()
    data = json.loads(blob)
    assert data["verdict"] == "full-rank"
    assert data["field"] == "gf 2"
    back = WitnessCertificate.from_json(blob)
    assert back == cert
    assert validate_certificate(back)


def test_certificate_json_round_trip_rational():
    A = Matrix.from_rows(RATIONALS, [[Fraction(1, 2), 0], [0, 1], [0, 0]])
    N = Matrix.zeros(RATIONALS, 3, 2)
    ok, cert = line_full_rank(A, N)
    assert ok
    back = WitnessCertificate.from_json(cert.to_json())
    assert back == cert
    assert validate_certificate(back)


def test_tampered_certificate_fails_validation():
    A = Matrix.from_rows(F2, [[0, 0], [1, 0], [0, 1]])
    N = canonical_N(F2, 3, 2, 1)
    _, cert = line_full_rank(A, N)
    tampered = WitnessCertificate(A=Matrix.zeros(F2, 3, 2), N=cert.N,
                                  table=cert.table, analysis=None,
                                  verdict=cert.verdict)
    assert not validate_certificate(tampered)


# -------------------------------------------------------------- side conditions


def test_maps_ker_into_im_canonical_direction():
    # N = I_2 (+) 0 in Mat_3: Ker N = <e3>, im N = <e1, e2>; M maps the kernel
    # into the image iff its (3,3) entry vanishes.
    N = canonical_N(F2, 3, 3, 2)
    rng = random.Random(79)
    for _ in range(60):
        M = random_matrix(F2, 3, 3, rng)
        assert maps_ker_into_im(M, N) == (M.rows[2][2] == 0)


def test_maps_ker_into_im_trivial_cases():
    N = canonical_N(F3, 3, 3, 2)
    assert maps_ker_into_im(N, N)
    assert maps_ker_into_im(Matrix.zeros(F3, 3, 3), N)
    assert not maps_ker_into_im(Matrix.unit(F3, 3, 3, 2, 2), N)
    # full-rank N has trivial kernel, so the condition is vacuous
    assert maps_ker_into_im(Matrix.identity(F3, 3), Matrix.identity(F3, 3))


def test_ker_coker_noninjective_canonical_direction():
    # With N = I_r (+) 0, the induced map Ker N -> coker N is represented by
    # the lower-right block D, so non-injectivity is det-like: rank D < n - r.
    rng = random.Random(83)
    for r in (1, 2):
        N = canonical_N(F2, 3, 3, r)
        for _ in range(40):
            M = random_matrix(F2, 3, 3, rng)
            D = [row[r:] for row in M.rows[r:]]
            D_rank = rank(Matrix.from_rows(F2, D))
            assert ker_coker_noninjective(M, N) == (D_rank < 3 - r)


def test_side_conditions_agree_at_corank_one():
    # When rank N = n - 1 both predicates test the same 1-dimensional map.
    N = canonical_N(F2, 3, 3, 2)
    shape = MatrixSpaceShape(F2, 3, 3)
    full = _full_space(F2, 3, 3)
    for M in elements(full):
        assert maps_ker_into_im(M, N) == ker_coker_noninjective(M, N)
    assert shape.ambient_dim == 9


def test_side_condition_predicates_are_conjugation_invariant():
    rng = random.Random(89)
    for _ in range(25):
        n = rng.randint(2, 4)
        r = rng.randint(1, n - 1)
        N = canonical_N(F3, n, n, r)
        M = random_matrix(F3, n, n, rng)
        P = random_invertible(F3, n, rng)
        # P^-1 falls out of the rank normal form: Pm @ P @ Qm = I
        Pm, Qm = to_rank_normal_form(P)
        Pi = Qm @ Pm
        assert (Pi @ P) == Matrix.identity(F3, n)
        M2 = Pi @ M @ P
        N2 = Pi @ N @ P
        assert maps_ker_into_im(M, N) == maps_ker_into_im(M2, N2)
        assert ker_coker_noninjective(M, N) == ker_coker_noninjective(M2, N2)


def test_square_side_conditions_require_square_input():
    with pytest.raises(ValueError):
        maps_ker_into_im(Matrix.zeros(F2, 3, 2), Matrix.zeros(F2, 3, 2))
    with pytest.raises(ValueError):
        ker_coker_noninjective(Matrix.zeros(F2, 2, 2), Matrix.zeros(F2, 3, 3))


# ------------------------------------------------------------- witness search


def test_witness_search_full_space_finds_subdiagonal_style_witness():
    space = _full_space(F2, 3, 2)
    N = canonical_N(F2, 3, 2, 1)
    out = witness_search(space, N)
    assert out.status == WITNESS_FOUND
    assert out.found
    assert validate_certificate(out.certificate)
    assert membership(space, out.certificate.A)
    assert out.cases_examined >= 1


def test_witness_search_exhausts_on_sharp_example():
    # matrices whose first column is supported on row 1 only; with the rank-1
    # canonical direction no member keeps full rank on the whole line
    shape = MatrixSpaceShape(F2, 3, 2)
    gens = [Matrix.unit(F2, 3, 2, 0, 0)]
    gens += [Matrix.unit(F2, 3, 2, i, 1) for i in range(3)]
    space = from_generators(shape, gens)
    assert space.codim == 2
    N = canonical_N(F2, 3, 2, 1)
    out = witness_search(space, N)
    assert out.status == EXHAUSTED_NO_WITNESS
    assert out.certificate is None
    assert out.cases_examined == 16


def test_witness_search_affine():
    lin = from_generators(MatrixSpaceShape(F2, 3, 2),
                          [Matrix.unit(F2, 3, 2, 1, 0),
                           Matrix.unit(F2, 3, 2, 2, 1)])
    aff = affine_from_point(lin, Matrix.zeros(F2, 3, 2))
    N = canonical_N(F2, 3, 2, 1)
    out = witness_search(aff, N)
    assert out.found
    assert aff.contains(out.certificate.A)


def test_witness_search_rejects_full_rank_direction():
    space = _full_space(F2, 2, 2)
    with pytest.raises(ValueError):
        witness_search(space, Matrix.identity(F2, 2))


def test_witness_search_zero_direction_reduces_to_rank():
    space = _full_space(F3, 2, 2)
    out = witness_search(space, Matrix.zeros(F3, 2, 2))
    assert out.found
    assert rank(out.certificate.A) == 2


def test_witness_search_random_strategy_is_seeded():
    space = _full_space(F3, 3, 2)
    N = canonical_N(F3, 3, 2, 1)
    a = witness_search(space, N, strategy=RANDOM, budget=50, seed=4)
    b = witness_search(space, N, strategy=RANDOM, budget=50, seed=4)
    assert a.found and b.found
    assert a.certificate == b.certificate
    assert a.cases_examined == b.cases_examined


def test_witness_search_random_budget_exhaustion():
    # sharp example has no witness; the random strategy can only give up
    shape = MatrixSpaceShape(F2, 3, 2)
    gens = [Matrix.unit(F2, 3, 2, 0, 0)]
    gens += [Matrix.unit(F2, 3, 2, i, 1) for i in range(3)]
    space = from_generators(shape, gens)
    N = canonical_N(F2, 3, 2, 1)
    out = witness_search(space, N, strategy=RANDOM, budget=25, seed=0)
    assert out.status == BUDGET_EXHAUSTED
    assert out.certificate is None
    assert out.cases_examined == 25
    assert DEFAULT_RANDOM_BUDGET == 10_000


def test_witness_search_exhaustive_budget_propagates():
    space = _full_space(F2, 5, 5)
    N = canonical_N(F2, 5, 5, 1)
    with pytest.raises(BudgetExceededError):
        witness_search(space, N, budget=1 << 10)


def test_witness_search_needs_a_finite_field():
    # uniform sampling (and exhaustive scans) are undefined over the rationals
    shape = MatrixSpaceShape(RATIONALS, 2, 2)
    gens = [Matrix.unit(RATIONALS, 2, 2, i, j) for i in range(2) for j in range(2)]
    space = from_generators(shape, gens)
    N = canonical_N(RATIONALS, 2, 2, 1)
    with pytest.raises(ValueError):
        witness_search(space, N, strategy=RANDOM, budget=10, seed=1)
    with pytest.raises(ValueError):
        witness_search(space, N)


def test_search_outcome_is_plain_record():
    out = SearchOutcome(EXHAUSTED_NO_WITNESS, None, 7)
    assert not out.found
    assert out.cases_examined == 7


# ------------------------------------------------- constant determinant search


def test_constant_det_search_on_full_matrix_space():
    space = _full_space(F3, 2, 2)
    N = canonical_N(F3, 2, 2, 1)
    out = constant_det_witness_search(space, N)
    assert out.status == WITNESS_FOUND
    A = out.certificate.A
    p = det_pencil(A, N)
    assert p.is_constant and p.coeff(0) != 0


def test_constant_det_search_requires_corank_one_direction():
    space = _full_space(F2, 3, 3)
    with pytest.raises(ValueError):
        constant_det_witness_search(space, canonical_N(F2, 3, 3, 1))


def test_constant_det_witness_is_also_plain_witness():
    rng = random.Random(97)
    shape = MatrixSpaceShape(F3, 3, 3)
    N = canonical_N(F3, 3, 3, 2)
    hits = 0
    for _ in range(10):
        aff = random_affine(shape, 1, rng)
        out = constant_det_witness_search(aff, N)
        if out.found:
            hits += 1
            ok, _ = line_full_rank(out.certificate.A, N)
            assert ok
            assert classify_line(out.certificate.A, N).classification == "constant-nonzero"
    assert hits > 0


def test_constant_det_fast_path_matches_formal_classification():
    # over GF(5) with n = 3 the search uses pointwise determinants; the formal
    # pencil determinant must agree on both accepted and rejected members
    shape = MatrixSpaceShape(F5, 2, 2)
    N = canonical_N(F5, 2, 2, 1)
    space = _full_space(F5, 2, 2)
    out = constant_det_witness_search(space, N)
    assert out.found
    A = out.certificate.A
    assert det_pencil(A, N).is_constant
    assert det(A).value != 0
