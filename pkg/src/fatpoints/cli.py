"""Command-line interface.

Exit codes: 0 ok, 2 invalid input, 3 internal invariant violation.
A ``--config FILE`` of ``key=value`` lines supplies defaults for any long
flag (``m-max=10``, ``point=1,1,1``); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import nullcontext
from fractions import Fraction
from pathlib import Path

from . import asymptotics as asy
from . import cohomology as coh
from . import linsys, nagata
from .cache import RankCache, use_cache
from .errors import InvalidInput, InvariantViolation
from .linalg import FieldSpec
from .linsys import FatPointScheme, UpstreamPoint
from .plane import WeightedPlane

log = logging.getLogger("fatpoints")


def parse_int_list(text: str) -> list[int]:
    """``3``, ``1,2,5`` or ``0..12`` (inclusive)."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise InvalidInput(f"bad integer list {text!r}") from None
    return out


def read_config(path: str) -> list[tuple[str, str]]:
    items = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InvalidInput(f"cannot read config {path}: {exc}") from None
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"config line without '=': {line!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        items.append((key.replace("_", "-"), value))
    return items


def merge_config(argv: list[str]) -> list[str]:
    """Prepend config-file settings for flags not already on the command line."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise InvalidInput("--config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    given = {a.split("=", 1)[0] for a in rest if a.startswith("--")}
    extra: list[str] = []
    for key, value in read_config(path):
        if f"--{key}" not in given:
            extra += [f"--{key}", value]
    # the subcommand must stay first
    return rest[:1] + extra + rest[1:]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weights", default="1,1,1", help="a,b,c (pairwise coprime)")
    p.add_argument("--point", action="append", default=[], help="upstream point x,y,z (repeatable)")
    p.add_argument("--points", help="random:R or a point-list file")
    p.add_argument("--mult", help="multiplicities e1,e2,...")
    p.add_argument("--field", default="fp:auto", help="q | fp:auto | fp:P")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--cache", default="off", help="cache file path or 'off'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fatpoints", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="h0/h1/h2/chi table as CSV")
    _common(p)
    p.add_argument("--m", default="0..2")
    p.add_argument("--n", default="0..12")

    p = sub.add_parser("reg", help="regularity of symbolic powers as CSV")
    _common(p)

    p = sub.add_parser("sigma", help="sigma series as CSV")
    _common(p)
    p.add_argument("--s", help="rational s or 'sqrt'; default: negative-curve candidate or sqrt(abcu)")
    p.add_argument("--p-max", type=int, default=6)
    p.add_argument("--tail-start", type=int)

    p = sub.add_parser("negcurve", help="negative-curve certificate as JSON")
    _common(p)

    p = sub.add_parser("sinv", help="s-invariant report as JSON")
    _common(p)

    p = sub.add_parser("nagata", help="Nagata vanishing probe or P(a,b,c) negative-curve report")
    _common(p)
    p.add_argument("--n", type=int, help="number of random points in P^2 (vanishing probe)")
    p.add_argument("--m", default="1", help="multiplicities to probe, e.g. 1,2,3")
    p.add_argument("--factor", help="a,b,c for the P(a,b,c) report")
    p.add_argument("--r", type=int, default=1)

    p = sub.add_parser("split-demo", help="orbit of a point under the covering map, as JSON")
    _common(p)
    p.add_argument("--prime-floor", type=int, default=2)

    p = sub.add_parser("basechange-check", help="reg upstream vs downstream + a+b+c-3, as JSON")
    _common(p)
    p.add_argument("--prime-floor", type=int, default=2)
    return parser


def _field(args, split_abc: int | None = None) -> FieldSpec:
    text = args.field.strip().lower()
    if split_abc is not None:
        if text == "fp:auto":
            return FieldSpec.prime_field(nagata.split_prime(split_abc, args.prime_floor))
        if not text.startswith("fp:"):
            raise InvalidInput("this command needs a prime field with abc | p - 1")
    return FieldSpec.parse(text)


def _points(args, plane: WeightedPlane, field: FieldSpec) -> tuple[UpstreamPoint, ...]:
    if args.point:
        return tuple(UpstreamPoint.parse(t) for t in args.point)
    if args.points:
        if args.points.startswith("random:"):
            try:
                r = int(args.points[len("random:"):])
            except ValueError:
                raise InvalidInput(f"bad --points {args.points!r}") from None
            return linsys.random_points(plane, r, args.seed, field)
        try:
            pts = linsys.read_points(args.points)
        except OSError as exc:
            raise InvalidInput(f"cannot read point file {args.points}: {exc}") from None
        if not pts:
            raise InvalidInput(f"no points in {args.points}")
        return tuple(pts)
    return (UpstreamPoint((1, 1, 1)),)


def build_scheme(args, split: bool = False) -> FatPointScheme:
    plane = WeightedPlane.parse(args.weights)
    field = _field(args, plane.abc if split else None)
    mults = tuple(parse_int_list(args.mult)) if args.mult else ()
    return FatPointScheme(plane, _points(args, plane, field), mults, field)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_cohomology(args) -> str:
    scheme = build_scheme(args)
    recs = coh.cohomology_table(scheme, parse_int_list(args.n), parse_int_list(args.m), args.workers)
    return coh.table_csv(scheme, recs)


def cmd_reg(args) -> str:
    scheme = build_scheme(args)
    regs = asy.regularity_series(scheme, args.m_max, args.workers)
    lines = ["m,a2,reg"] + [f"{m},{r - 2},{r}" for m, r in enumerate(regs, start=1)]
    return "\n".join(lines) + "\n"


def _parse_s(text: str):
    if text.strip().lower() in ("sqrt", asy.SQRT):
        return asy.SQRT
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"bad --s {text!r}") from None


def cmd_sigma(args) -> str:
    scheme = build_scheme(args)
    if args.s is not None:
        s = _parse_s(args.s)
    else:
        cert = asy.negative_curve_search(scheme, args.m_max, args.workers)
        s = cert.s_candidate if cert is not None else asy.SQRT
    series = asy.sigma_series(scheme, s, args.m_max, args.workers)
    tail = args.tail_start if args.tail_start is not None else max(1, args.m_max // 3)
    if tail < args.m_max:
        period = asy.detect_period(series, args.p_max, tail)
        log.info("s = %s, max|sigma| = %d, period on m >= %d: %s", s, series.bound, tail, period)
    return series.to_csv()


def cmd_negcurve(args) -> str:
    scheme = build_scheme(args)
    cert = asy.negative_curve_search(scheme, args.m_max, args.workers)
    return _dump_json({
        "weights": list(scheme.plane.weights),
        "u": scheme.u,
        "m_max": args.m_max,
        "field": str(scheme.field),
        "certificate": cert.to_json() if cert is not None else None,
        "tau_upper_bound": asy.fraction_str(asy.tau_upper_bound(scheme, args.m_max, args.workers)),
    })


def cmd_sinv(args) -> str:
    return _dump_json(asy.s_invariant(build_scheme(args), args.m_max, args.workers))


def cmd_nagata(args) -> str:
    field = FieldSpec.parse(args.field)
    if args.factor:
        a, b, c = WeightedPlane.parse(args.factor).weights
        return _dump_json(nagata.prop_nagata_report(a, b, c, args.r, args.seed, args.m_max, field,
                                                    workers=args.workers))
    if args.n is None:
        raise InvalidInput("nagata needs --n (probe) or --factor (P(a,b,c) report)")
    return _dump_json(nagata.nagata_vanishing_probe(args.n, parse_int_list(args.m), args.seed, field))


def cmd_split_demo(args) -> str:
    scheme = build_scheme(args, split=True)
    p = scheme.field.p
    orbits = [nagata.orbit_points(scheme.plane, pt, p) for pt in scheme.points]
    return _dump_json({
        "weights": list(scheme.plane.weights),
        "prime": p,
        "roots_of_unity": {str(w): nagata.roots_of_unity(w, p) for w in scheme.plane.weights},
        "orbits": [
            {"point": str(o.source), "size": len(o.points), "preimages": [str(q) for q in o.points]}
            for o in orbits
        ],
    })


def cmd_basechange(args) -> str:
    scheme = build_scheme(args, split=True)
    rows = [nagata.basechange_check(scheme, m, scheme.field.p) for m in range(1, args.m_max + 1)]
    return _dump_json({
        "weights": list(scheme.plane.weights),
        "prime": scheme.field.p,
        "rows": rows,
        "holds": all(r["holds"] for r in rows),
    })


COMMANDS = {
    "cohomology": cmd_cohomology,
    "reg": cmd_reg,
    "sigma": cmd_sigma,
    "negcurve": cmd_negcurve,
    "sinv": cmd_sinv,
    "nagata": cmd_nagata,
    "split-demo": cmd_split_demo,
    "basechange-check": cmd_basechange,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(merge_config(argv))
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cache = None if args.cache == "off" else RankCache(args.cache)
    try:
        with use_cache(cache) if cache is not None else nullcontext():
            text = COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    log.info("rank computations: %d, cache hits: %d",
             linsys.STATS["rank"], linsys.STATS["cache_hit"])
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
