"""Command-line frontend.

Subcommands: check-line, witness, verify, gen, pencil-det.  Exit codes are
a stable contract: 0 success/verified, 1 definite negative (rank drop,
no witness, campaign failure), 2 usage/parse/hypothesis error, 3 resource
exhaustion (budgets).  All randomness flows from --seed, which defaults
to 0 rather than entropy.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .fields import parse_field
from .gallery import (
    EXAMPLE_NAMES,
    flanders_extremal,
    lemma1_witness,
    remark1_example,
    remark2_f2_example,
    sharpness_example,
)
from .lines import (
    BUDGET_EXHAUSTED,
    WITNESS_FOUND,
    line_full_rank,
    witness_search,
)
from .matrices import Matrix, canonical_N
from .pencils import det_pencil
from .spaces import BudgetExceededError, parse_subspace_text
from .verify import (
    THEOREMS,
    CampaignSpec,
    CampaignSpecError,
    default_rank_range,
    run_campaign,
)


class _UsageError(Exception):
    """Bad inputs: parse failures, shape/field mismatches, hypothesis violations."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc


def _load_matrix(path: str) -> Matrix:
    try:
        return Matrix.from_text(_read_text(path))
    except ValueError as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _load_space(path: str):
    try:
        return parse_subspace_text(_read_text(path))
    except ValueError as exc:
        raise _UsageError(f"{path}: {exc}") from exc


def _check_pair(A: Matrix, N: Matrix) -> None:
    if A.field != N.field:
        raise _UsageError(f"field mismatch: {A.field} vs {N.field}")
    if (A.nrows, A.ncols) != (N.nrows, N.ncols):
        raise _UsageError(f"shape mismatch: {A.nrows}x{A.ncols} vs {N.nrows}x{N.ncols}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    """Accepts '1', '0,2', and '0-3' (inclusive range) forms."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo_s, hi_s = part.split("-", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise _UsageError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise _UsageError(f"no values in {text!r}")
    return tuple(out)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check_line(args) -> int:
    A = _load_matrix(args.A)
    N = _load_matrix(args.N)
    _check_pair(A, N)
    if A.nrows < A.ncols:
        raise _UsageError(f"expected at least as many rows as columns, got {A.nrows}x{A.ncols}")
    ok, payload = line_full_rank(A, N)
    f = A.field
    if ok:
        if args.format == "json":
            print(payload.to_json())
        else:
            print("full-rank line")
            if payload.table is not None:
                for t, r in payload.table:
                    print(f"  t = {f.format(t)}: rank {r}")
            else:
                a = payload.analysis
                print(f"  {a.poly_kind}: {a.poly}")
                print(f"  classification: {a.classification}")
        return 0
    if args.format == "json":
        print(json.dumps({"verdict": "rank-drop", "t0": f.format(payload.value)}, indent=2))
    else:
        print(f"rank drops at t = {f.format(payload.value)}")
    return 1


def _cmd_witness(args) -> int:
    space = _load_space(args.space)
    N = _load_matrix(args.N)
    try:
        outcome = witness_search(space, N, strategy=args.strategy,
                                 budget=args.budget, seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if outcome.status == WITNESS_FOUND:
        cert = outcome.certificate
        if args.format == "json":
            obj = cert.to_json_obj()
            obj["cases_examined"] = outcome.cases_examined
            print(json.dumps(obj, indent=2))
        else:
            print(f"witness found after {outcome.cases_examined} candidates")
            print(cert.A.to_text(), end="")
        return 0
    if args.format == "json":
        print(json.dumps({"verdict": outcome.status,
                          "cases_examined": outcome.cases_examined}, indent=2))
    else:
        print(f"{outcome.status} ({outcome.cases_examined} candidates)")
    return 3 if outcome.status == BUDGET_EXHAUSTED else 1


def _cmd_verify(args) -> int:
    try:
        field = parse_field(f"gf {args.q}")
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    n = args.n
    p = args.p if args.p is not None else n
    codims = _parse_int_list(args.codim) if args.codim else tuple(range(max(n - 1, 1)))
    if args.rank is not None:
        ranks = _parse_int_list(args.rank)
    else:
        try:
            ranks = default_rank_range(args.theorem, n, p)
        except CampaignSpecError as exc:
            raise _UsageError(str(exc)) from exc
    spec = CampaignSpec(
        theorem=args.theorem,
        field=field,
        n=n,
        p=p,
        codims=codims,
        rank_range=ranks,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        element_budget=args.element_budget,
        random_conjugates=args.random_conjugates,
        allow_out_of_hypothesis=args.allow_out_of_hypothesis,
    )
    try:
        report = run_campaign(spec)
    except CampaignSpecError as exc:
        raise _UsageError(str(exc)) from exc
    text = report.summary_text() if args.format == "text" else report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if report.failures:
        return 1
    if report.incomplete:
        return 3
    return 0


def _cmd_gen(args) -> int:
    try:
        field = parse_field(args.field)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def need(**params):
        missing = [k for k, v in params.items() if v is None]
        if missing:
            raise _UsageError(f"example {args.example} needs --{', --'.join(missing)}")
        return [v for v in params.values()]

    files: list[tuple[str, str]] = []
    try:
        if args.example == "lemma1":
            n, p, r = need(n=args.n, p=args.p, r=args.r)
            files.append(("lemma1_A.txt", lemma1_witness(n, p, r, field).to_text()))
            files.append(("lemma1_N.txt", canonical_N(field, n, p, r).to_text()))
        elif args.example == "sharpness":
            n, p = need(n=args.n, p=args.p)
            space, N = sharpness_example(n, p, field)
            files.append(("sharpness_space.txt", space.to_text()))
            files.append(("sharpness_N.txt", N.to_text()))
        elif args.example == "remark1":
            (n,) = need(n=args.n)
            space, N = remark1_example(n, field)
            files.append(("remark1_space.txt", space.to_text()))
            files.append(("remark1_N.txt", N.to_text()))
        elif args.example == "remark2-f2":
            space, N = remark2_f2_example()
            files.append(("remark2-f2_space.txt", space.to_text()))
            files.append(("remark2-f2_N.txt", N.to_text()))
        else:  # flanders-extremal
            n, p, r = need(n=args.n, p=args.p, r=args.r)
            space = flanders_extremal(n, p, r, field)
            files.append(("flanders-extremal_space.txt", space.to_text()))
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    for name, text in files:
        path = out / name
        path.write_text(text)
        print(path)
    return 0


def _cmd_pencil_det(args) -> int:
    A = _load_matrix(args.A)
    N = _load_matrix(args.N)
    _check_pair(A, N)
    if not A.is_square:
        raise _UsageError(f"pencil determinant requires square matrices, got {A.nrows}x{A.ncols}")
    poly = det_pencil(A, N)
    if args.format == "json":
        f = A.field
        print(json.dumps({
            "poly": str(poly),
            "coeffs": [f.format(c) for c in poly.coeffs],
            "degree": None if poly.is_zero else poly.degree,
        }, indent=2))
    else:
        print(poly)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ranklines",
        description="Exact full-rank matrix line analysis and exhaustive verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="output format (default text)")

    p = sub.add_parser("check-line", help="decide whether A + tN has rank p for every t")
    p.add_argument("A", help="matrix file for the base point A")
    p.add_argument("N", help="matrix file for the direction N")
    add_format(p)
    p.set_defaults(func=_cmd_check_line)

    p = sub.add_parser("witness", help="search a subspace for a full-rank-line witness")
    p.add_argument("space", help="subspace file (linear or affine)")
    p.add_argument("N", help="matrix file for the direction N")
    p.add_argument("--strategy", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--budget", type=int, default=None,
                   help="element budget (exhaustive) or sample count (random)")
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--q", type=int, required=True, help="field size (prime)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=None, help="column count (default n)")
    p.add_argument("--codim", default=None,
                   help="codimensions, e.g. '1', '0,1', '0-2' (default all <= n-2)")
    p.add_argument("--rank", default=None,
                   help="direction ranks (default: all allowed by the theorem)")
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--samples", type=int, default=0,
                   help="subspaces per codimension in sample mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--element-budget", type=int, default=1 << 24)
    p.add_argument("--random-conjugates", type=int, default=0,
                   help="re-test each case under this many random equivalences")
    p.add_argument("--allow-out-of-hypothesis", action="store_true",
                   help="sweep codimensions beyond n-2; violations become findings")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="write a named example to files")
    p.add_argument("--example", choices=EXAMPLE_NAMES, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--field", default="gf 2", help="'gf <prime>' or 'rat' (default 'gf 2')")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("pencil-det", help="print det(A + tN) as a polynomial")
    p.add_argument("A", help="matrix file for A")
    p.add_argument("N", help="matrix file for N")
    add_format(p)
    p.set_defaults(func=_cmd_pencil_det)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
