"""Command line front end.

Exit codes: 0 success, 1 a violation was found, 2 usage or precondition error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .birkhoff import Lattice, as_distributive, distributivity_certificate, lattice_from_poset, read_sidecar, write_lattice
from .constructive import atoms_coatoms_cover, build_surjection, thm4_cover, two_level_cover, verify_surjection
from .cover import Interval, IntervalCover, candidate_intervals, exact_min_cover, icp_check
from .errors import IntervalCoverError, NotALattice, UsageError
from .families import FamilySpec
from .harness import PROBLEMS, check_daykin_frankl, search_level_covers
from .poset import convex_span, rank_profile, read_poset, write_poset
from .scd import gk_decomposition

log = logging.getLogger("intervalcover")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.format == "json" or text is None:
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


def _load(path):
    """Poset plus sidecar metadata from a .poset file."""
    if path is None:
        raise UsageError("--input is required")
    return read_poset(path), read_sidecar(path)


def _load_lattice(path) -> tuple[Lattice, dict]:
    P, meta = _load(path)
    return lattice_from_poset(P), meta


def _span_from_args(P, meta, args):
    if args.levels:
        prof = rank_profile(P)
        j, k = args.levels
        if not (0 <= j < len(prof.levels) and 0 <= k < len(prof.levels)):
            raise UsageError(f"levels must lie in 0..{prof.height}")
        return convex_span(P, prof.levels[j], prof.levels[k])
    if "A" in meta and "B" in meta:
        return convex_span(P, meta["A"], meta["B"])
    if "levels" in meta:
        prof = rank_profile(P)
        j, k = meta["levels"]
        return convex_span(P, prof.levels[j], prof.levels[k])
    raise UsageError("give --levels J K (or a sidecar naming A and B)")


def _cover_payload(cover: IntervalCover) -> dict:
    d = cover.to_dict()
    d["valid"] = cover.is_valid()
    d["trace"] = cover.trace
    return d


def _cover_text(cover: IntervalCover) -> str:
    lines = [f"rho = {cover.size}  optimal = {cover.optimal}  span = {len(cover.span)}"]
    lines += [f"  [{iv.a}, {iv.b}]" for iv in cover.intervals]
    return "\n".join(lines)


# --- subcommands -------------------------------------------------------------


def cmd_gen(args) -> int:
    if not args.output:
        raise UsageError("gen needs -o FILE (a directory for all_posets)")
    spec = FamilySpec(args.kind, tuple(args.params), seed=args.seed, density=args.density)
    obj, meta = spec.generate()
    if args.kind == "all_posets":
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for i, P in enumerate(obj):
            write_poset(P, out / f"p{P.n}-{i:05d}.poset")
        log.info("wrote %d posets to %s", len(obj), out)
        return EXIT_OK
    if isinstance(obj, Lattice):
        write_lattice(obj, args.output, extra={"kind": args.kind, "params": list(args.params), **meta})
    else:
        write_poset(obj, args.output, comment=f"{args.kind} {list(args.params)} seed={args.seed}")
    return EXIT_OK


def cmd_cover(args) -> int:
    P, meta = _load(args.input)
    span = _span_from_args(P, meta, args)
    cover = exact_min_cover(candidate_intervals(span), budget=args.budget)
    _emit(args, _cover_payload(cover), _cover_text(cover))
    return EXIT_OK


def cmd_icp(args) -> int:
    P, _ = _load(args.input)
    j, k = args.levels or (0, rank_profile(P).height)
    rep = icp_check(P, j, k, strong=args.strong, budget=args.budget)
    _emit(args, rep.to_dict(), f"holds = {rep.holds}  rho = {rep.rho}  bound = {rep.bound}")
    return EXIT_OK if rep.holds else EXIT_VIOLATION


def cmd_scd(args) -> int:
    if args.n is None:
        raise UsageError("scd needs --n")
    scd = gk_decomposition(args.n)
    chains = [c.words() for c in scd.chains]
    payload = {"n": args.n, "chains": chains}
    lines = [" < ".join(w) for w in chains]
    ok = True
    if args.verify:
        rep = scd.verify()
        payload["verify"] = rep
        ok = rep["partition"] and rep["symmetric"] and rep["star"] and rep["chains"] == rep["expected_chains"]
        lines.append(
            f"{rep['chains']} chains (expected {rep['expected_chains']}); partition {rep['partition']}, "
            f"symmetric {rep['symmetric']}, nesting (star) {'verified' if rep['star'] else 'FAILED'}"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_surjection(args) -> int:
    P, meta = _load(args.input)
    A = args.lower if args.lower is not None else meta.get("A")
    B = args.upper if args.upper is not None else meta.get("B")
    if A is None or B is None:
        raise UsageError("surjection needs --lower and --upper antichains")
    f = build_surjection(P, A, B)
    ok = verify_surjection(P, A, B, f)
    payload = {**f.to_dict(), "verified": ok}
    text = "\n".join(f"f({b}) = {a}" for b, a in sorted(f.map.items())) + f"\nverified = {ok}"
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify(args) -> int:
    P, meta = _load(args.input)
    payload = {"n": P.n}
    try:
        L = lattice_from_poset(P)
        payload["lattice"] = True
        payload["distributive"] = distributivity_certificate(L) is not None
    except NotALattice as exc:
        payload["lattice"] = False
        payload["distributive"] = False
        payload["reason"] = str(exc)
    code = EXIT_OK
    if args.cover:
        data = json.loads(Path(args.cover).read_text())
        ivs = [Interval(d["a"], d["b"]) for d in data["intervals"]]
        if args.levels or "A" in meta or "levels" in meta:
            span = _span_from_args(P, meta, args)
        else:
            span = convex_span(P, {iv.a for iv in ivs}, {iv.b for iv in ivs})
        cover = IntervalCover(span, ivs)
        payload["cover_valid"] = cover.is_valid()
        code = EXIT_OK if payload["cover_valid"] else EXIT_VIOLATION
    _emit(args, payload, "\n".join(f"{k}: {v}" for k, v in payload.items()))
    return code


def cmd_search(args) -> int:
    extra = {}
    if args.glued:
        from .families import gen_glued

        extra["glued-3-3"] = gen_glued(3, 3)
    rep = search_level_covers(
        args.max_n if args.max_n is not None else 4,
        args.problem,
        extra_lattices=extra,
        budget=args.budget,
        threads=args.threads,
    )
    _emit(args, rep.to_dict(args.runtime), f"checked {rep.instances_checked} level pairs; {len(rep.violations)} violations")
    return EXIT_VIOLATION if rep.violations else EXIT_OK


def cmd_conjecture(args) -> int:
    n = args.n if args.n is not None else 4
    rep = check_daykin_frankl(n, args.mode, args.samples, args.seed)
    _emit(
        args,
        rep.to_dict(args.runtime),
        f"checked {rep.instances_checked} convex sets; {len(rep.violations)} violations; min ratio {rep.summary['min_ratio']}",
    )
    return EXIT_VIOLATION if rep.violations else EXIT_OK


def _constructive(fn, needs_levels: bool):
    def run(args) -> int:
        L, _ = _load_lattice(args.input)
        D = as_distributive(L)
        if needs_levels:
            if not args.levels:
                raise UsageError("--levels J K is required")
            cover = fn(D, *args.levels)
        else:
            cover = fn(D)
        _emit(args, _cover_payload(cover), _cover_text(cover))
        return EXIT_OK if cover.is_valid() else EXIT_VIOLATION

    return run


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i")
    common.add_argument("--levels", nargs=2, type=int, metavar=("J", "K"))
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int)
    common.add_argument("--max-n", type=int)
    common.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    common.add_argument("--n", type=int)
    common.add_argument("-o", "--output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="intervalcover", description="Interval covers of convex sets in posets and distributive lattices.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a family member")
    g.add_argument("kind", choices=FamilySpec.KINDS)
    g.add_argument("params", nargs="*", type=int)
    g.add_argument("--density", type=float, default=0.3)
    g.set_defaults(func=cmd_gen)

    sub.add_parser("cover", parents=[common], help="exact minimum cover of [A, B]").set_defaults(func=cmd_cover)

    i = sub.add_parser("icp", parents=[common], help="interval cover property check")
    i.add_argument("--strong", action="store_true")
    i.set_defaults(func=cmd_icp)

    s = sub.add_parser("scd", parents=[common], help="Greene-Kleitman chain decomposition of B(n)")
    s.add_argument("--verify", action="store_true")
    # parents share action objects, so a per-subcommand default would leak
    s.set_defaults(func=cmd_scd, default_format="text")

    sj = sub.add_parser("surjection", parents=[common], help="build and verify f: B -> A")
    sj.add_argument("--lower", nargs="+", type=int)
    sj.add_argument("--upper", nargs="+", type=int)
    sj.set_defaults(func=cmd_surjection)

    v = sub.add_parser("verify", parents=[common], help="lattice/distributivity checks and cover validation")
    v.add_argument("--cover")
    v.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", parents=[common], help="level-cover campaign over O(P)")
    se.add_argument("--problem", choices=PROBLEMS, default="atoms")
    se.add_argument("--glued", action="store_true", help="add the glued B(3) lattice to the corpus")
    se.add_argument("--runtime", action="store_true", help="include runtime in the report")
    se.set_defaults(func=cmd_search)

    c = sub.add_parser("conjecture", parents=[common], help="Daykin-Frankl width ratio campaign")
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--runtime", action="store_true")
    c.set_defaults(func=cmd_conjecture)

    sub.add_parser("cover-atoms-coatoms", parents=[common]).set_defaults(func=_constructive(atoms_coatoms_cover, False))
    sub.add_parser("cover-two-level", parents=[common]).set_defaults(func=_constructive(two_level_cover, True))
    sub.add_parser("cover-thm4", parents=[common]).set_defaults(func=_constructive(thm4_cover, True))
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.format is None:
            args.format = getattr(args, "default_format", "json")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except IntervalCoverError as exc:
        if isinstance(exc, RuntimeError):
            raise
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
