"""Command-line surface.

Commands:

  check      vexillarity of a permutation
  shape      shape, length, diagram and essential set
  flaggings  enumerate flagging sets
  groth      the class via tableaux or either determinant
  cobordism  the resolution class over a chosen formal group law
  compare    run all three K-theory paths and verify they agree
  sweep      compare across all of S_n, with optional extra checks

Exit codes: 0 success, 1 mathematical inconsistency detected (a cross-check
failed), 2 argument or parse errors.  Outputs are deterministic byte for
byte; timing information is only emitted on request and goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import ktheory
from .cobordism import FormalGroupLaw, resolution_class
from .ktheory import (DET_VARIANTS, TruncationError, groth_det,
                      groth_det_stable, groth_tableau, specialize)
from .perms import (FlaggingSet, NotVexillaryError, Permutation, Box,
                    all_permutations, canonical_flagging, diagram,
                    enumerate_flaggings, essential_set, is_flagging_set,
                    is_vexillary, length, parse_flagging, parse_permutation,
                    rank, shape)
from .poly import Polynomial, poly_to_json

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Bad input; reported on stderr with exit code 2."""


@dataclass
class Request:
    command: str
    perm: Permutation | None = None
    flagging: FlaggingSet | None = None
    variant: str | None = None
    beta: int | None = None
    trunc: int | None = None
    fgl: str | None = None
    fmt: str = "text"
    n: int | None = None
    all_flaggings: bool = False
    cobordism: bool = False
    timings: bool = False


@dataclass
class SweepRecord:
    word: str
    vexillary: bool
    shape: list[int] = field(default_factory=list)
    length: int = 0
    flaggings: int = 0
    three_way_equal: bool | None = None
    cobordism_equal: bool | None = None
    seconds: float = 0.0


@dataclass
class SweepReport:
    n: int
    records: list[SweepRecord]
    total: int
    vexillary: int
    failed: int


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _perm_json(w: Permutation) -> list[int]:
    return list(w.word)


def _flagging_json(f: FlaggingSet) -> list[list[int]]:
    return [[p, q] for p, q in f.boxes]


def _resolve_flagging(w: Permutation, text: str | None) -> FlaggingSet:
    if text is None:
        return canonical_flagging(w)
    boxes = parse_flagging(text)
    if not is_flagging_set(w, boxes):
        raise CliError(f"'{text}' is not a flagging set for {w}")
    return FlaggingSet(tuple(Box(p, q) for p, q in boxes),
                       tuple(rank(w, p, q) for p, q in boxes))


def _emit_poly(p: Polynomial, req: Request, meta: dict) -> str:
    if req.fmt == "json":
        meta["polynomial"] = poly_to_json(p)
        return _dump(meta)
    return str(p)


def _cmd_check(req: Request) -> tuple[int, str]:
    vex = is_vexillary(req.perm)
    if req.fmt == "json":
        return EXIT_OK, _dump({"perm": _perm_json(req.perm),
                               "vexillary": vex})
    return EXIT_OK, f"vexillary: {'true' if vex else 'false'}"


def _cmd_shape(req: Request) -> tuple[int, str]:
    w = req.perm
    if not is_vexillary(w):
        raise CliError(f"{w} is not vexillary; no shape is defined")
    lam = shape(w)
    ess = sorted(essential_set(w))
    dia = sorted(diagram(w))
    if req.fmt == "json":
        return EXIT_OK, _dump({
            "perm": _perm_json(w),
            "length": length(w),
            "shape": list(lam.parts),
            "diagram": [[p, q] for p, q in dia],
            "essential_set": [[p, q] for p, q in ess],
        })
    lines = [f"length: {length(w)}",
             f"shape: {lam}",
             "diagram: " + (" ".join(f"({p},{q})" for p, q in dia) or "-"),
             "essential set: " + (" ".join(f"({p},{q})" for p, q in ess) or "-")]
    return EXIT_OK, "\n".join(lines)


def _cmd_flaggings(req: Request) -> tuple[int, str]:
    w = req.perm
    if not is_vexillary(w):
        raise CliError(f"{w} is not vexillary; flagging sets are undefined")
    d = shape(w).nonzero_length()
    found = enumerate_flaggings(w, d)
    if req.fmt == "json":
        return EXIT_OK, _dump({
            "perm": _perm_json(w),
            "d": d,
            "flaggings": [_flagging_json(f) for f in found],
        })
    return EXIT_OK, "\n".join(str(f) if f.boxes else "(empty)" for f in found)


def _cmd_groth(req: Request) -> tuple[int, str]:
    w = req.perm
    if not is_vexillary(w):
        raise CliError(f"{w} is not vexillary")
    variant = req.variant or "tableau"
    if variant == "tableau":
        result = groth_tableau(w)
        flagging = canonical_flagging(w)
    else:
        flagging = req.flagging or canonical_flagging(w)
        if req.trunc is not None:
            result = groth_det_stable(w, flagging, variant, req.trunc)
        else:
            result = groth_det(w, flagging, variant)
    if req.beta is not None:
        result = specialize(result, req.beta)
    meta = {"perm": _perm_json(w), "method": variant,
            "flagging": _flagging_json(flagging)}
    if req.beta is not None:
        meta["beta"] = req.beta
    return EXIT_OK, _emit_poly(result, req, meta)


def _parse_fgl(text: str, order: int) -> FormalGroupLaw:
    if text == "additive":
        return FormalGroupLaw.additive(order)
    if text == "multiplicative":
        return FormalGroupLaw.multiplicative(order)
    if text == "generic":
        return FormalGroupLaw.generic(order)
    if text.startswith("generic:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise CliError(f"bad formal group law {text!r}") from None
        return FormalGroupLaw.generic(n)
    raise CliError(f"unknown formal group law {text!r}")


def _cmd_cobordism(req: Request) -> tuple[int, str]:
    w = req.perm
    if not is_vexillary(w):
        raise CliError(f"{w} is not vexillary")
    flagging = req.flagging or canonical_flagging(w)
    trunc = req.trunc if req.trunc is not None else groth_tableau(w).xbt_degree()
    order = trunc + max(flagging.d - 1, 0)
    fgl = _parse_fgl(req.fgl or "generic", order)
    if fgl.order < order:
        raise CliError(
            f"formal group law order {fgl.order} too small; this run "
            f"needs at least {order}")
    result = resolution_class(w, flagging, fgl, trunc)
    meta = {"perm": _perm_json(w), "fgl": f"{fgl.mode}:{fgl.order}",
            "trunc": trunc, "flagging": _flagging_json(flagging)}
    return EXIT_OK, _emit_poly(result, req, meta)


def _compare_one(w: Permutation, all_flaggings: bool) -> tuple[bool, int]:
    """Three-way comparison; returns (equal, flagging count checked)."""
    oracle = groth_tableau(w)
    d = shape(w).nonzero_length()
    flaggings = (enumerate_flaggings(w, d) if all_flaggings
                 else [canonical_flagging(w)])
    ok = True
    for f in flaggings:
        for variant in DET_VARIANTS:
            if groth_det(w, f, variant) != oracle:
                ok = False
    return ok, len(flaggings)


def _cmd_compare(req: Request) -> tuple[int, str]:
    w = req.perm
    if not is_vexillary(w):
        raise CliError(f"{w} is not vexillary")
    ok, nf = _compare_one(w, req.all_flaggings)
    if req.fmt == "json":
        out = _dump({"perm": _perm_json(w), "flaggings_checked": nf,
                     "three_way_equal": ok})
    else:
        out = f"tableau == det1 == det2: {'true' if ok else 'false'}"
    return (EXIT_OK if ok else EXIT_INCONSISTENT), out


def _cobordism_consistent(w: Permutation) -> bool:
    """Multiplicative resolution class must equal the K-theory determinant;
    additive must equal its B -> 0 image."""
    trunc = groth_tableau(w).xbt_degree()
    d = shape(w).nonzero_length()
    order = trunc + max(d - 1, 0)
    reference = groth_det(w)
    mult = resolution_class(w, None, FormalGroupLaw.multiplicative(order), trunc)
    if mult != reference:
        return False
    add = resolution_class(w, None, FormalGroupLaw.additive(order), trunc)
    return add == specialize(reference, 0)


def sweep(n: int, all_flaggings: bool = False,
          cobordism: bool = False) -> SweepReport:
    """Compare all three paths for every vexillary permutation of S_n."""
    if not (2 <= n <= 6):
        raise CliError("sweep supports 2 <= n <= 6")
    records = []
    vex_count = 0
    failed = 0
    for w in all_permutations(n):
        start = time.perf_counter()
        rec = SweepRecord(word=str(w), vexillary=is_vexillary(w))
        if rec.vexillary:
            vex_count += 1
            lam = shape(w)
            rec.shape = list(lam.parts)
            rec.length = length(w)
            ok, rec.flaggings = _compare_one(w, all_flaggings)
            rec.three_way_equal = ok
            if cobordism:
                rec.cobordism_equal = _cobordism_consistent(w)
                ok = ok and rec.cobordism_equal
            if not ok:
                failed += 1
            ktheory.clear_caches()
        rec.seconds = time.perf_counter() - start
        records.append(rec)
    return SweepReport(n=n, records=records, total=len(records),
                       vexillary=vex_count, failed=failed)


def _cmd_sweep(req: Request) -> tuple[int, str]:
    report = sweep(req.n, req.all_flaggings, req.cobordism)
    if req.timings:
        total = sum(r.seconds for r in report.records)
        print(f"sweep n={report.n}: {total:.2f}s total", file=sys.stderr)
        for r in report.records:
            if r.vexillary:
                print(f"  {r.word}: {r.seconds:.3f}s", file=sys.stderr)
    if req.fmt == "json":
        payload = {
            "n": report.n,
            "total": report.total,
            "vexillary": report.vexillary,
            "failed": report.failed,
            "records": [{
                "perm": r.word,
                "vexillary": r.vexillary,
                **({"shape": r.shape, "length": r.length,
                    "flaggings": r.flaggings,
                    "three_way_equal": r.three_way_equal} if r.vexillary else {}),
                **({"cobordism_equal": r.cobordism_equal}
                   if r.cobordism_equal is not None else {}),
            } for r in report.records],
        }
        out = _dump(payload)
    else:
        lines = []
        for r in report.records:
            if not r.vexillary:
                lines.append(f"{r.word}  not vexillary")
                continue
            bits = [f"{r.word}  shape=({','.join(map(str, r.shape))})",
                    f"len={r.length}", f"flaggings={r.flaggings}",
                    f"three-way={'ok' if r.three_way_equal else 'FAIL'}"]
            if r.cobordism_equal is not None:
                bits.append(f"cobordism={'ok' if r.cobordism_equal else 'FAIL'}")
            lines.append("  ".join(bits))
        lines.append(f"{report.vexillary} vexillary of {report.total}; "
                     f"{report.failed} failures")
        out = "\n".join(lines)
    return (EXIT_OK if report.failed == 0 else EXIT_INCONSISTENT), out


_COMMANDS = {
    "check": _cmd_check,
    "shape": _cmd_shape,
    "flaggings": _cmd_flaggings,
    "groth": _cmd_groth,
    "cobordism": _cmd_cobordism,
    "compare": _cmd_compare,
    "sweep": _cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vexillary",
        description="Exact degeneracy-locus classes of vexillary "
                    "permutations, cross-validated three ways.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, perm=True):
        if perm:
            p.add_argument("perm", help="one-line notation, e.g. 2,4,1,3")
        p.add_argument("--format", choices=("text", "json"), default="text")

    add_common(sub.add_parser("check", help="test vexillarity"))
    add_common(sub.add_parser("shape", help="shape and essential set"))
    add_common(sub.add_parser("flaggings", help="enumerate flagging sets"))

    pg = sub.add_parser("groth", help="compute the K-theory class")
    add_common(pg)
    pg.add_argument("--method", choices=("tableau",) + DET_VARIANTS,
                    default="tableau")
    pg.add_argument("--flagging", help='flagging "p1:q1,p2:q2,..."')
    pg.add_argument("--beta", type=int, choices=(0, -1),
                    help="specialize the deformation parameter")
    pg.add_argument("--trunc", type=int,
                    help="truncation degree (determinant methods; checked "
                         "for stability against trunc+1)")

    pc = sub.add_parser("cobordism", help="resolution class over a formal "
                                          "group law")
    add_common(pc)
    pc.add_argument("--fgl", default="generic",
                    help="additive | multiplicative | generic[:N]")
    pc.add_argument("--flagging", help='flagging "p1:q1,p2:q2,..."')
    pc.add_argument("--trunc", type=int)

    pm = sub.add_parser("compare", help="check tableau == det1 == det2")
    add_common(pm)
    pm.add_argument("--all-flaggings", action="store_true")

    ps = sub.add_parser("sweep", help="compare across all of S_n")
    ps.add_argument("n", type=int)
    ps.add_argument("--format", choices=("text", "json"), default="text")
    ps.add_argument("--all-flaggings", action="store_true")
    ps.add_argument("--cobordism", action="store_true",
                    help="also check multiplicative/additive consistency")
    ps.add_argument("--timings", action="store_true",
                    help="per-permutation timings on stderr (not "
                         "deterministic)")
    return parser


def _request_from_args(args: argparse.Namespace) -> Request:
    req = Request(command=args.command, fmt=args.format)
    if hasattr(args, "perm"):
        req.perm = parse_permutation(args.perm)
    if getattr(args, "flagging", None) is not None:
        req.flagging = _resolve_flagging(req.perm, args.flagging)
    req.variant = getattr(args, "method", None)
    req.beta = getattr(args, "beta", None)
    req.trunc = getattr(args, "trunc", None)
    req.fgl = getattr(args, "fgl", None)
    req.n = getattr(args, "n", None)
    req.all_flaggings = getattr(args, "all_flaggings", False)
    req.cobordism = getattr(args, "cobordism", False)
    req.timings = getattr(args, "timings", False)
    return req


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        req = _request_from_args(args)
        code, output = _COMMANDS[args.command](req)
    except (CliError, NotVexillaryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    print(output)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
