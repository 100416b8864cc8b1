"""Verification campaigns: quantify a claim over subspaces and directions.

A campaign fixes a claim family, a finite field, sizes (n, p), a set of
codimensions, and a range of direction ranks, then sweeps every case
(exhaustively or by seeded sampling), applying side-condition filters and
witness searches.  Case enumeration order is deterministic and hashed into
the report, so serial and parallel runs are comparable byte for byte.

Case verdicts: "passed" (claim held), "filtered" (hypotheses not met, e.g.
a side condition fails), "failed" (claim violated in hypothesis), and
"finding" (violation in an out-of-hypothesis or conjecture sweep, recorded
without gating the verdict).
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .fields import FieldDesc, parse_field
from .lines import constant_det_witness_search, maps_ker_into_im, witness_search
from .matrices import Matrix, _det_modp, canonical_N, random_invertible, rank_rows
from .spaces import (
    DEFAULT_ELEMENT_BUDGET,
    AffineMatrixSubspace,
    MatrixSpaceShape,
    count_subspaces,
    enumerate_affine,
    enumerate_subspaces,
    parse_subspace_text,
    random_affine,
    random_subspace,
    transport,
    vectorize,
)

THEOREMS = ("flanders", "main", "pencil", "square", "remark2-strong", "remark2-conjecture")
MODES = ("exhaustive", "sample")
AFFINE_THEOREMS = ("pencil", "square", "remark2-strong", "remark2-conjecture")

PASSED = "passed"
FILTERED = "filtered"
FAILED = "failed"
FINDING = "finding"


class CampaignSpecError(ValueError):
    """A campaign's parameters violate the claim's hypotheses or are malformed."""


@dataclass(frozen=True)
class CampaignSpec:
    theorem: str
    field: FieldDesc
    n: int
    p: int
    codims: tuple[int, ...]
    rank_range: tuple[int, ...]
    mode: str = "exhaustive"
    samples: int = 0
    seed: int = 0
    workers: int = 1
    element_budget: int = DEFAULT_ELEMENT_BUDGET
    random_conjugates: int = 0
    allow_out_of_hypothesis: bool = False

    def to_json_obj(self) -> dict:
        # workers is an execution knob, not campaign identity: reports must
        # not differ between serial and parallel runs.
        return {
            "theorem": self.theorem,
            "field": str(self.field),
            "n": self.n,
            "p": self.p,
            "codims": list(self.codims),
            "rank_range": list(self.rank_range),
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "element_budget": self.element_budget,
            "random_conjugates": self.random_conjugates,
            "allow_out_of_hypothesis": self.allow_out_of_hypothesis,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CampaignSpec":
        return cls(
            theorem=obj["theorem"],
            field=parse_field(obj["field"]),
            n=obj["n"],
            p=obj["p"],
            codims=tuple(obj["codims"]),
            rank_range=tuple(obj["rank_range"]),
            mode=obj["mode"],
            samples=obj["samples"],
            seed=obj["seed"],
            element_budget=obj["element_budget"],
            random_conjugates=obj["random_conjugates"],
            allow_out_of_hypothesis=obj["allow_out_of_hypothesis"],
        )


def default_rank_range(theorem: str, n: int, p: int) -> tuple[int, ...]:
    """The direction ranks a campaign sweeps when none are given explicitly."""
    if theorem == "main":
        return tuple(range(p))
    if theorem == "square":
        return tuple(range(n))
    if theorem in ("pencil", "remark2-strong", "remark2-conjecture"):
        return (n - 1,)
    raise CampaignSpecError(f"theorem {theorem!r} needs an explicit rank range")


def _in_hypothesis_codim(spec: CampaignSpec, codim: int) -> bool:
    if spec.theorem == "flanders":
        return True
    return codim <= spec.n - 2


def validate_spec(spec: CampaignSpec) -> None:
    problems: list[str] = []
    if spec.theorem not in THEOREMS:
        problems.append(f"unknown theorem {spec.theorem!r}")
    if spec.mode not in MODES:
        problems.append(f"unknown mode {spec.mode!r}")
    if not spec.field.is_finite:
        problems.append("campaigns quantify over finite fields only")
    if not (spec.n >= spec.p >= 1):
        problems.append(f"need n >= p >= 1, got n={spec.n}, p={spec.p}")
    if spec.mode == "sample" and spec.samples <= 0:
        problems.append("sample mode needs a positive sample count")
    if spec.workers < 1:
        problems.append("workers must be at least 1")
    if spec.element_budget < 1:
        problems.append("element budget must be positive")
    if not spec.codims:
        problems.append("at least one codimension is required")
    if not spec.rank_range:
        problems.append("at least one direction rank is required")
    m = spec.n * spec.p
    for c in spec.codims:
        if not 0 <= c <= m:
            problems.append(f"codimension {c} outside [0, {m}]")
        elif not (_in_hypothesis_codim(spec, c) or spec.allow_out_of_hypothesis):
            problems.append(f"codimension {c} exceeds n-2 = {spec.n - 2}; "
                            "pass allow_out_of_hypothesis to sweep it anyway")
    if problems:
        raise CampaignSpecError("; ".join(problems))
    if spec.theorem in ("pencil", "square", "remark2-strong", "remark2-conjecture"):
        if spec.n != spec.p:
            problems.append(f"theorem {spec.theorem} needs square matrices, got {spec.n}x{spec.p}")
    if spec.theorem == "main":
        if spec.p < 2:
            problems.append("the main claim needs p >= 2")
        for r in spec.rank_range:
            if not 0 <= r < spec.p:
                problems.append(f"direction rank {r} must satisfy 0 <= r < p = {spec.p}")
    elif spec.theorem == "flanders":
        for r in spec.rank_range:
            if not 0 <= r <= spec.p:
                problems.append(f"rank bound {r} outside [0, {spec.p}]")
    elif spec.theorem == "square":
        for r in spec.rank_range:
            if not 0 <= r <= spec.n - 1:
                problems.append(f"direction rank {r} must satisfy 0 <= r <= n-1 = {spec.n - 1}")
    else:  # pencil and both remark2 modes require corank-one directions
        for r in spec.rank_range:
            if r != spec.n - 1:
                problems.append(f"direction rank must be n-1 = {spec.n - 1}, got {r}")
        if spec.theorem == "remark2-strong" and spec.field.order < 3:
            problems.append("the strong constant-determinant claim needs at least 3 field elements")
        if spec.theorem == "remark2-conjecture":
            if spec.field.order != 2:
                problems.append("conjecture mode is specific to the 2-element field")
            if spec.n <= 3:
                problems.append("conjecture mode needs n > 3 (n = 3 has a known counterexample)")
    if problems:
        raise CampaignSpecError("; ".join(problems))


# ---------------------------------------------------------------------------
# case enumeration


def _spaces_for_codim(spec: CampaignSpec, codim: int):
    shape = MatrixSpaceShape(spec.field, spec.n, spec.p)
    affine = spec.theorem in AFFINE_THEOREMS
    if spec.mode == "exhaustive":
        return enumerate_affine(shape, codim) if affine else enumerate_subspaces(shape, codim)

    def sampled():
        rng = random.Random(f"{spec.seed}:cases:{codim}")
        for _ in range(spec.samples):
            yield random_affine(shape, codim, rng) if affine else random_subspace(shape, codim, rng)
    return sampled()


def _case_stream(spec: CampaignSpec):
    idx = 0
    for codim in spec.codims:
        for space in _spaces_for_codim(spec, codim):
            for r in spec.rank_range:
                yield idx, codim, space, r
                idx += 1


def expected_total(spec: CampaignSpec) -> int:
    """Number of cases the stream will yield, computed without enumerating."""
    q = spec.field.order
    m = spec.n * spec.p
    affine = spec.theorem in AFFINE_THEOREMS
    spaces = 0
    for c in spec.codims:
        if spec.mode == "sample":
            spaces += spec.samples
        else:
            cnt = count_subspaces(m, c, q)
            spaces += cnt * q ** c if affine else cnt
    return spaces * len(spec.rank_range)


# ---------------------------------------------------------------------------
# per-case judging


@dataclass(frozen=True)
class CaseRecord:
    index: int
    codim: int
    r: int
    space_text: str
    n_text: str | None
    detail: str

    def to_json_obj(self) -> dict:
        return {
            "index": self.index,
            "codim": self.codim,
            "r": self.r,
            "space": self.space_text,
            "N": self.n_text,
            "detail": self.detail,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CaseRecord":
        return cls(obj["index"], obj["codim"], obj["r"], obj["space"], obj["N"], obj["detail"])

    def space(self):
        return parse_subspace_text(self.space_text)

    def direction(self) -> Matrix | None:
        return Matrix.from_text(self.n_text) if self.n_text is not None else None


def _side_condition_exists(spec: CampaignSpec, space, N: Matrix, r: int,
                           canonical: bool) -> bool:
    """Does some member satisfy the claim family's side condition?

    pencil/remark2 ask for a member mapping Ker N into im N; square asks
    for a member whose induced kernel-to-cokernel map is non-injective.
    For the canonical block N both reduce to conditions on the lower-right
    (n-r) x (n-r) block D: d(M) = 0 when r = n-1, det D(M) = 0 in general.
    """
    n = spec.n
    f = spec.field
    if canonical and r == n - 1:
        # The condition is the vanishing of the single affine coordinate
        # M[n-1][n-1]; on a coset it is attainable iff some basis vector
        # moves that coordinate, or the base already has it zero.
        idx = n * n - 1
        if isinstance(space, AffineMatrixSubspace):
            lin, base = space.linear, vectorize(space.base)
        else:
            lin, base = space, (f.zero,) * (n * n)
        if any(row[idx] != f.zero for row in lin.basis):
            return True
        return base[idx] == f.zero
    if canonical:
        pm = f.modulus
        for M in space.elements(budget=spec.element_budget):
            d_rows = tuple(row[r:] for row in M.rows[r:])
            if _det_modp(d_rows, pm) == 0:
                return True
        return False
    if spec.theorem == "square":
        from .lines import ker_coker_noninjective
        pred = ker_coker_noninjective
    else:
        pred = maps_ker_into_im
    for M in space.elements(budget=spec.element_budget):
        if pred(M, N):
            return True
    return False


def _judge_core(spec: CampaignSpec, space, N: Matrix | None, r: int,
                canonical: bool) -> tuple[bool, str | None]:
    """(claim held, diagnostic detail when it did not); detail None on pass/filter.

    A filtered case returns (True, "filtered")."""
    if spec.theorem == "flanders":
        if space.dim <= spec.n * r:
            return True, "filtered"
        count = 0
        for M in space.elements(budget=spec.element_budget):
            count += 1
            if rank_rows(spec.field, M.rows, spec.p) > r:
                return True, None
        return False, f"all {count} members have rank <= {r}"
    if spec.theorem == "main":
        outcome = witness_search(space, N, budget=spec.element_budget)
        if outcome.found:
            return True, None
        return False, f"exhausted-no-witness after {outcome.cases_examined} members"
    # Affine claim families: side condition first, then the search.
    if not _side_condition_exists(spec, space, N, r, canonical):
        return True, "filtered"
    if spec.theorem in ("remark2-strong", "remark2-conjecture"):
        outcome = constant_det_witness_search(space, N, budget=spec.element_budget)
        if outcome.found:
            return True, None
        return False, (f"no constant-determinant member among {outcome.cases_examined}")
    outcome = witness_search(space, N, budget=spec.element_budget)
    if outcome.found:
        return True, None
    return False, f"exhausted-no-witness after {outcome.cases_examined} members"


def _conjugates_agree(spec: CampaignSpec, index: int, space, N: Matrix | None,
                      r: int, baseline: tuple[bool, bool]) -> str | None:
    """Re-judge k random (P, Q)-conjugated copies; None if all verdicts match."""
    rng = random.Random(f"{spec.seed}:conj:{index}")
    for k in range(spec.random_conjugates):
        P = random_invertible(spec.field, spec.n, rng)
        Q = random_invertible(spec.field, spec.p, rng)
        space2 = transport(space, P, Q)
        N2 = P @ N @ Q if N is not None else None
        held2, detail2 = _judge_core(spec, space2, N2, r, canonical=False)
        verdict2 = (held2, detail2 == "filtered")
        if verdict2 != baseline:
            return (f"conjugate check #{k + 1} disagreed: canonical "
                    f"{baseline} vs transported {verdict2}")
    return None


def _process_case(spec: CampaignSpec, index: int, codim: int, space, r: int):
    """Returns (verdict, CaseRecord | None, digest bytes) for one case."""
    key = f"{codim}|{r}|{space.to_text()}"
    digest = hashlib.sha256(key.encode()).digest()
    if spec.theorem == "flanders":
        N = None
        n_text = None
    else:
        N = canonical_N(spec.field, spec.n, spec.p, r)
        n_text = N.to_text()
    held, detail = _judge_core(spec, space, N, r, canonical=True)
    filtered = held and detail == "filtered"
    if spec.random_conjugates:
        mismatch = _conjugates_agree(spec, index, space, N, r, (held, filtered))
        if mismatch is not None:
            record = CaseRecord(index, codim, r, space.to_text(), n_text, mismatch)
            return FAILED, record, digest
    if filtered:
        return FILTERED, None, digest
    if held:
        return PASSED, None, digest
    record = CaseRecord(index, codim, r, space.to_text(), n_text, detail)
    if spec.theorem == "remark2-conjecture" or not _in_hypothesis_codim(spec, codim):
        return FINDING, record, digest
    return FAILED, record, digest


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class VerificationReport:
    spec: CampaignSpec
    total: int
    passed: int
    filtered: int
    failures: tuple[CaseRecord, ...]
    findings: tuple[CaseRecord, ...]
    case_order_hash: str
    elapsed_ms: int
    incomplete: bool = False

    @property
    def verified(self) -> bool:
        return not self.failures and not self.incomplete

    def to_json_obj(self) -> dict:
        return {
            "spec": self.spec.to_json_obj(),
            "counts": {
                "total": self.total,
                "passed": self.passed,
                "filtered": self.filtered,
                "failures": len(self.failures),
                "findings": len(self.findings),
            },
            "failures": [rec.to_json_obj() for rec in self.failures],
            "findings": [rec.to_json_obj() for rec in self.findings],
            "case_order_hash": self.case_order_hash,
            "elapsed_ms": self.elapsed_ms,
            "incomplete": self.incomplete,
            "verdict": "verified" if self.verified else
                       ("incomplete" if self.incomplete else "failed"),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "VerificationReport":
        return cls(
            spec=CampaignSpec.from_json_obj(obj["spec"]),
            total=obj["counts"]["total"],
            passed=obj["counts"]["passed"],
            filtered=obj["counts"]["filtered"],
            failures=tuple(CaseRecord.from_json_obj(r) for r in obj["failures"]),
            findings=tuple(CaseRecord.from_json_obj(r) for r in obj["findings"]),
            case_order_hash=obj["case_order_hash"],
            elapsed_ms=obj["elapsed_ms"],
            incomplete=obj["incomplete"],
        )

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_json_obj(json.loads(text))

    def signature(self) -> str:
        """Deterministic serialization: everything except elapsed time."""
        obj = self.to_json_obj()
        del obj["elapsed_ms"]
        return json.dumps(obj, sort_keys=True)

    def summary_text(self) -> str:
        lines = [
            f"theorem      {self.spec.theorem}",
            f"field        {self.spec.field}",
            f"shape        {self.spec.n}x{self.spec.p}",
            f"codims       {','.join(map(str, self.spec.codims))}",
            f"ranks        {','.join(map(str, self.spec.rank_range))}",
            f"mode         {self.spec.mode}"
            + (f" ({self.spec.samples} samples, seed {self.spec.seed})"
               if self.spec.mode == "sample" else ""),
            f"cases        {self.total}",
            f"passed       {self.passed}",
            f"filtered     {self.filtered}",
            f"failures     {len(self.failures)}",
            f"findings     {len(self.findings)}",
            f"case hash    {self.case_order_hash}",
            f"elapsed      {self.elapsed_ms} ms",
            f"verdict      {'verified' if self.verified else ('incomplete' if self.incomplete else 'FAILED')}",
        ]
        for rec in list(self.failures) + list(self.findings):
            lines.append(f"  case {rec.index} (codim {rec.codim}, r {rec.r}): {rec.detail}")
        return "\n".join(lines)


def _tally(spec: CampaignSpec, results, elapsed_ms: int, incomplete: bool) -> VerificationReport:
    """Fold (index, verdict, digest, record) tuples, already in index order."""
    h = hashlib.sha256()
    total = passed = filtered = 0
    failures: list[CaseRecord] = []
    findings: list[CaseRecord] = []
    for _idx, verdict, digest, record in results:
        h.update(digest)
        total += 1
        if verdict == PASSED:
            passed += 1
        elif verdict == FILTERED:
            filtered += 1
        elif verdict == FAILED:
            failures.append(record)
        else:
            findings.append(record)
    return VerificationReport(spec, total, passed, filtered, tuple(failures),
                              tuple(findings), h.hexdigest(), elapsed_ms, incomplete)


def _worker_run(spec: CampaignSpec, lo: int, hi: int):
    out = []
    for idx, codim, space, r in _case_stream(spec):
        if idx >= hi:
            break
        if idx < lo:
            continue
        verdict, record, digest = _process_case(spec, idx, codim, space, r)
        out.append((idx, verdict, digest, record))
    return out


def run_campaign(spec: CampaignSpec, on_case=None) -> VerificationReport:
    """Execute a campaign and aggregate the report.

    ``on_case(index, codim, r, verdict)`` is invoked per case in index
    order (serial runs only); campaigns with workers > 1 partition the
    case index range over processes and merge in order.
    """
    validate_spec(spec)
    start = time.monotonic()
    if spec.workers == 1 or on_case is not None:
        results = []
        incomplete = False
        try:
            for idx, codim, space, r in _case_stream(spec):
                verdict, record, digest = _process_case(spec, idx, codim, space, r)
                results.append((idx, verdict, digest, record))
                if on_case is not None:
                    on_case(idx, codim, r, verdict)
        except KeyboardInterrupt:
            incomplete = True
        elapsed = int((time.monotonic() - start) * 1000)
        return _tally(spec, results, elapsed, incomplete)

    total = expected_total(spec)
    w = max(1, min(spec.workers, total))
    bounds = [round(i * total / w) for i in range(w + 1)]
    chunks = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
    merged: list = []
    incomplete = False
    with ProcessPoolExecutor(max_workers=w) as pool:
        futures = [pool.submit(_worker_run, spec, lo, hi) for lo, hi in chunks]
        done: list = []
        try:
            for fut in futures:
                done.append(fut.result())
        except KeyboardInterrupt:
            incomplete = True
            for fut in futures:
                fut.cancel()
        for part in done:
            merged.extend(part)
    elapsed = int((time.monotonic() - start) * 1000)
    return _tally(spec, merged, elapsed, incomplete)


def run_flanders(spec: CampaignSpec) -> VerificationReport:
    _require_theorem(spec, "flanders")
    return run_campaign(spec)


def run_main(spec: CampaignSpec) -> VerificationReport:
    _require_theorem(spec, "main")
    return run_campaign(spec)


def run_pencil(spec: CampaignSpec) -> VerificationReport:
    _require_theorem(spec, "pencil")
    return run_campaign(spec)


def run_square(spec: CampaignSpec) -> VerificationReport:
    _require_theorem(spec, "square")
    return run_campaign(spec)


def run_remark2(spec: CampaignSpec) -> VerificationReport:
    if spec.theorem not in ("remark2-strong", "remark2-conjecture"):
        raise CampaignSpecError(f"expected a remark2 campaign, got {spec.theorem!r}")
    return run_campaign(spec)


def _require_theorem(spec: CampaignSpec, theorem: str) -> None:
    if spec.theorem != theorem:
        raise CampaignSpecError(f"expected theorem {theorem!r}, got {spec.theorem!r}")


def replay_failure(record: CaseRecord, spec: CampaignSpec) -> bool:
    """True iff re-judging the recorded case reproduces the failure."""
    space = record.space()
    N = record.direction()
    held, _detail = _judge_core(spec, space, N, record.r, canonical=True)
    return not held
