"""Command-line front end.

    markoff reduce --type 11 --k -2 --point 3,6,15
    markoff reduce --type 11 --k -2 --point 3.0,3.0,3.1+0.2i --complex
    markoff scan   --type 11 --k-range -2..2 --box 100 --format csv
    markoff scan   --type 04 --k 0,0,0,0 --box 20
    markoff verify --trials 1000 --seed 7
    markoff lines  --k 6
    markoff orbit  --type 11 --k -2 --start 3,3,3 --gens gamma_poly --cap-height 100
    markoff equiv  --type 11 --k -2 --p 3,3,3 --q 3,6,15

Exit codes: 0 success, 1 input or math error, 2 caps hit.  Scan rows are
cached per (surface, generator set, box, caps, code version); the cache
path comes from --cache or the MARKOFF_CACHE environment variable, and
rerunning a warm scan reproduces cached rows byte for byte.  Complex
literals use the form re+imi, e.g. 1.5+0.25i.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import re
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .surfaces import (
    Markoff11,
    MarkoffError,
    Point3,
    boundary_trace_11,
    make_cubic04,
    on_surface,
    residual,
)
from .moves import (
    apply_move,
    apply_word,
    dehn_twist_04,
    dehn_twist_11,
    generators,
    permute,
    vieta,
)
from .trace_algebra import (
    commutator_trace,
    f3_relations,
    fricke_coords,
    lift_twist_04,
    lift_twist_11,
    make_pair,
    quad_to_04_point,
    random_quad,
    random_sl2,
    trace_product_identity,
)
from .descent import (
    AConfig,
    CAP_HIT,
    EXCEPTIONAL_HIT,
    INTEGER_STAR,
    reduce_compact,
    reduce_min_complex_04,
    reduce_min_complex_11,
)
from .orbits import Caps, class_number, equivalent, orbit_bfs, parabolic_lines_11

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CAPS = 2

CACHE_ENV = "MARKOFF_CACHE"


@dataclass
class RunConfig:
    """Parsed run options shared by the surface-bound commands."""

    surface_type: str = "11"
    params: tuple = ()
    gens: str = "gamma_prime"
    box: int = 100
    cap_height: Optional[int] = None
    cap_count: int = 10**6
    cap_steps: int = 10**4
    fmt: str = "json"
    cache_path: Optional[str] = None
    jobs: int = 1
    complex_mode: bool = False

    def caps(self, default_height) -> Caps:
        height = self.cap_height if self.cap_height is not None else default_height
        return Caps(height=height, count=self.cap_count, steps=self.cap_steps)


def parse_complex_literal(text: str) -> complex:
    """Parse a complex scalar written as re+imi, e.g. 1.5+0.25i or -2i."""
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex literal {text!r}") from None


def parse_point(text: str, complex_mode: bool) -> Point3:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated coordinates, got {text!r}")
    if complex_mode:
        return Point3(*(parse_complex_literal(p) for p in parts))
    return Point3(*(int(p) for p in parts))


def parse_params(args, complex_mode: bool = False) -> tuple:
    if args.type == "11":
        if args.k is None:
            raise ValueError("--k is required")
        vals = args.k.split(",")
        if len(vals) != 1:
            raise ValueError("--type 11 takes a single k value")
    else:
        if args.k is None:
            raise ValueError("--k k1,k2,k3,k4 is required for --type 04")
        vals = args.k.split(",")
        if len(vals) != 4:
            raise ValueError("--type 04 takes four comma-separated k values")
    if complex_mode:
        return tuple(parse_complex_literal(v) for v in vals)
    return tuple(int(v) for v in vals)


def build_surface(surface_type: str, params: tuple):
    if surface_type == "11":
        return Markoff11(params[0])
    return make_cubic04(*params)


def parse_k_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"expected LO..HI, got {text!r}")
    return range(int(lo), int(hi) + 1)


# ---------------------------------------------------------------------------
# reduce


def cmd_reduce(args) -> int:
    config = _config_from_args(args)
    try:
        params = parse_params(args, config.complex_mode)
        config.params = params
        point = parse_point(args.point, config.complex_mode)
        surface = build_surface(config.surface_type, params)
    except (ValueError, MarkoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not on_surface(surface, point):
        print(
            f"error: point {args.point} is not on the surface; "
            f"residual = {residual(surface, point)}",
            file=sys.stderr,
        )
        return EXIT_ERROR
    if config.complex_mode:
        if isinstance(surface, Markoff11):
            res = reduce_min_complex_11(surface, point, config.cap_steps)
        else:
            res = reduce_min_complex_04(surface, point, config.cap_steps)
    else:
        res = reduce_compact(surface, AConfig(INTEGER_STAR), point, config.cap_steps)
    replay = apply_word(surface, res.word, point)
    if replay != res.reduced:
        print("error: certificate failed to replay", file=sys.stderr)
        return EXIT_ERROR
    payload = {
        "reduced": _point_json(res.reduced),
        "word": str(res.word),
        "status": res.status,
        "steps": res.steps,
    }
    if res.status == EXCEPTIONAL_HIT:
        payload["exceptional"] = {
            "axis": "xyz"[res.exceptional_axis],
            "value": res.exceptional_value,
        }
    if res.terminal_condition is not None:
        payload["terminal_condition"] = res.terminal_condition
    if res.bound is not None:
        payload["bound"] = res.bound
    if config.fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"reduced: {_point_text(res.reduced)}")
        print(f"word: {res.word}")
        print(f"status: {res.status} (steps={res.steps})")
        if res.status == EXCEPTIONAL_HIT:
            print(
                f"exceptional coordinate: {payload['exceptional']['axis']} = "
                f"{payload['exceptional']['value']}"
            )
    return EXIT_CAPS if res.status == CAP_HIT else EXIT_OK


def _point_json(p: Point3):
    return [_scalar_json(v) for v in p]


def _scalar_json(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _point_text(p: Point3) -> str:
    return "(" + ", ".join(str(v) for v in p) + ")"


# ---------------------------------------------------------------------------
# scan


def _row_key(surface_type, params, gens, box, caps) -> str:
    return json.dumps(
        [surface_type, list(params), gens, box, list(caps), __version__],
        sort_keys=True,
    )


def _scan_one(task) -> dict:
    surface_type, params, gens, box, caps = task
    surface = build_surface(surface_type, params)
    caps = Caps(*caps)
    by_gens = {
        name: class_number(surface, name, box, caps)
        for name in ("gamma_poly", "gamma_prime")
    }
    main_report = by_gens[gens]
    return {
        "k": params[0] if surface_type == "11" else list(params),
        "h_star_gamma_poly": by_gens["gamma_poly"].class_number_star,
        "h_star_gamma_prime": by_gens["gamma_prime"].class_number_star,
        "exceptional": len(main_report.exceptional),
        "caps_hit": any(r.caps_hit for r in by_gens.values()),
        "representatives": [list(p) for p, _ in main_report.representatives],
    }


def _load_cache(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        return {}
    except (OSError, json.JSONDecodeError) as exc:
        raise MarkoffError(f"unreadable cache {path}: {exc}") from exc
    return data.get("entries", {})


def _store_cache(path: str, entries: dict) -> None:
    payload = json.dumps({"version": __version__, "entries": entries}, sort_keys=True)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".markoff-cache-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_scan(args) -> int:
    config = _config_from_args(args)
    try:
        if config.surface_type == "11":
            if args.k_range is not None:
                ks = [(k,) for k in parse_k_range(args.k_range)]
            else:
                ks = [parse_params(args)]
        else:
            ks = [parse_params(args)]
    except (ValueError, MarkoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    cache_path = config.cache_path or os.environ.get(CACHE_ENV)
    entries = {}
    if cache_path:
        try:
            entries = _load_cache(cache_path)
        except MarkoffError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR

    caps = config.caps(default_height=config.box)
    tasks = []
    keys = []
    for params in ks:
        keys.append(_row_key(config.surface_type, params, config.gens, config.box, caps))
        tasks.append((config.surface_type, params, config.gens, config.box, tuple(caps)))

    missing = [(i, t) for i, (key, t) in enumerate(zip(keys, tasks)) if key not in entries]
    rows: list = [None] * len(tasks)
    for i, key in enumerate(keys):
        if key in entries:
            rows[i] = entries[key]
    if missing:
        if config.jobs > 1 and len(missing) > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                for (i, _), row in zip(missing, pool.map(_scan_one, [t for _, t in missing])):
                    rows[i] = row
        else:
            for i, task in missing:
                rows[i] = _scan_one(task)
        for i, key in enumerate(keys):
            entries[key] = rows[i]
        if cache_path:
            try:
                _store_cache(cache_path, entries)
            except OSError as exc:
                print(f"error: cannot write cache {cache_path}: {exc}", file=sys.stderr)
                return EXIT_ERROR

    if config.fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(
            ["k", "h_star_gamma_poly", "h_star_gamma_prime", "exceptional", "caps_hit"]
        )
        for row in rows:
            k = row["k"]
            k_text = " ".join(str(v) for v in k) if isinstance(k, list) else k
            writer.writerow(
                [
                    k_text,
                    row["h_star_gamma_poly"],
                    row["h_star_gamma_prime"],
                    row["exceptional"],
                    row["caps_hit"],
                ]
            )
        sys.stdout.write(out.getvalue())
    else:
        doc = {
            "surface": {"type": config.surface_type},
            "generators": config.gens,
            "box": config.box,
            "rows": rows,
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _suite_trace_identity(rng, trials):
    for _ in range(trials):
        a = random_sl2(rng)
        b = random_sl2(rng)
        if trace_product_identity(a, b) != 0:
            return False
    return True


def _suite_f3(rng, trials):
    for _ in range(trials):
        r1, r2 = f3_relations(random_sl2(rng), random_sl2(rng), random_sl2(rng))
        if r1 != 0 or r2 != 0:
            return False
    return True


def _suite_commutator(rng, trials):
    for _ in range(trials):
        a = random_sl2(rng)
        b = random_sl2(rng)
        if commutator_trace(a, b) != boundary_trace_11(fricke_coords(a, b)):
            return False
    return True


def _suite_quad_residual(rng, trials):
    for _ in range(trials):
        surface, p = quad_to_04_point(random_quad(rng))
        if residual(surface, p) != 0:
            return False
    return True


def _suite_lift_11(rng, trials):
    for _ in range(trials):
        pair = make_pair(random_sl2(rng), random_sl2(rng))
        p = fricke_coords(*pair)
        for which in ("a", "b", "ab"):
            for direction in (1, -1):
                lifted = lift_twist_11(which, pair, direction)
                if fricke_coords(*lifted) != dehn_twist_11(which, direction, p):
                    return False
    return True


def _suite_lift_04(rng, trials):
    for _ in range(trials):
        quad = random_quad(rng)
        surface, p = quad_to_04_point(quad)
        for index in (1, 2, 3):
            for direction in (1, -1):
                lifted = lift_twist_04(index, quad, direction)
                if quad_to_04_point(lifted)[1] != dehn_twist_04(
                    surface, index, direction, p
                ):
                    return False
    return True


_DECOMP_11 = {
    "a": (permute((0, 2, 1)), vieta(2)),
    "b": (permute((2, 1, 0)), vieta(0)),
    "ab": (permute((1, 0, 2)), vieta(1)),
}


def _suite_decomposition_11(rng, trials):
    surface = Markoff11(0)  # the maps do not read k
    for _ in range(trials):
        p = Point3(*(rng.randint(-50, 50) for _ in range(3)))
        for which, word in _DECOMP_11.items():
            q = p
            for m in word:
                q = apply_move(surface, m, q)
            if q != dehn_twist_11(which, 1, p):
                return False
    return True


def _suite_decomposition_04(rng, trials):
    for _ in range(trials):
        surface = make_cubic04(*(rng.randint(-5, 5) for _ in range(4)))
        p = Point3(*(rng.randint(-50, 50) for _ in range(3)))
        for index, axes in ((1, (1, 2)), (2, (2, 0)), (3, (0, 1))):
            q = p
            for axis in axes:
                q = apply_move(surface, vieta(axis), q)
            if q != dehn_twist_04(surface, index, 1, p):
                return False
    return True


def _suite_invariance(rng, trials):
    for _ in range(trials):
        p = Point3(*(rng.randint(-30, 30) for _ in range(3)))
        surface = Markoff11(boundary_trace_11(p))
        gens = generators("11", rng.choice(("gamma_prime", "gamma_poly")))
        if residual(surface, apply_move(surface, rng.choice(gens), p)) != 0:
            return False
        quad = random_quad(rng, 5)
        surface04, p04 = quad_to_04_point(quad)
        gens04 = generators("04", rng.choice(("gamma_prime", "gamma_poly")))
        if residual(surface04, apply_move(surface04, rng.choice(gens04), p04)) != 0:
            return False
    return True


_SUITES = (
    ("trace-product identity", _suite_trace_identity),
    ("rank-3 trace relations", _suite_f3),
    ("commutator boundary law", _suite_commutator),
    ("quad boundary residual", _suite_quad_residual),
    ("torus lift square", _suite_lift_11),
    ("sphere lift square", _suite_lift_04),
    ("torus twist decomposition", _suite_decomposition_11),
    ("sphere twist decomposition", _suite_decomposition_04),
    ("move invariance", _suite_invariance),
)


def cmd_verify(args) -> int:
    trials = args.trials
    failures = 0
    for name, suite in _SUITES:
        rng = random.Random(args.seed)
        ok = suite(rng, trials)
        print(f"{'pass' if ok else 'FAIL'}  {name} ({trials} trials)")
        failures += 0 if ok else 1
    print(f"{len(_SUITES) - failures}/{len(_SUITES)} suites passed")
    return EXIT_OK if failures == 0 else EXIT_ERROR


# ---------------------------------------------------------------------------
# lines


def cmd_lines(args) -> int:
    try:
        k = int(args.k)
    except ValueError:
        print(f"error: --k must be an integer, got {args.k!r}", file=sys.stderr)
        return EXIT_ERROR
    report = parabolic_lines_11(k)
    if args.format == "json":
        doc = {
            "k": k,
            "square_root": report.square_root,
            "note": report.note,
            "lines": [
                {
                    "axis": "xyz"[line.axis],
                    "value": line.value,
                    "origin": list(line.origin),
                    "direction": list(line.direction),
                    "integral": line.integral,
                }
                for line in report.lines
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        if not report.lines:
            print(f"k={k}: no integral lines ({report.note})")
        for line in report.lines:
            print(
                f"x={line.value:+d}: t -> "
                f"({line.value}, t, {_line_z_text(line)})  [integral]"
            )
    return EXIT_OK


def _line_z_text(line) -> str:
    head = "t" if line.direction.z > 0 else "-t"
    off = line.origin.z
    return head if off == 0 else f"{head}{off:+d}"


# ---------------------------------------------------------------------------
# orbit / equiv


def cmd_orbit(args) -> int:
    config = _config_from_args(args)
    try:
        params = parse_params(args)
        config.params = params
        surface = build_surface(config.surface_type, params)
        start = parse_point(args.start, complex_mode=False)
        run = orbit_bfs(
            surface,
            config.gens,
            start,
            cap_height=config.cap_height if config.cap_height is not None else 10**6,
            cap_count=config.cap_count,
        )
    except (ValueError, MarkoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    rows = []
    for p in run.points():
        word = run.word_to(p)
        if apply_word(surface, word, start) != p:
            print("error: orbit certificate failed to replay", file=sys.stderr)
            return EXIT_ERROR
        rows.append((p, str(word)))
    if config.fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["x", "y", "z", "word"])
        for p, word in rows:
            writer.writerow([p.x, p.y, p.z, word])
        sys.stdout.write(out.getvalue())
    else:
        doc = {
            "start": list(start),
            "caps_hit": run.caps_hit,
            "points": [{"point": list(p), "word": word} for p, word in rows],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_CAPS if run.caps_hit else EXIT_OK


def cmd_equiv(args) -> int:
    config = _config_from_args(args)
    try:
        params = parse_params(args)
        config.params = params
        surface = build_surface(config.surface_type, params)
        p = parse_point(args.p, complex_mode=False)
        q = parse_point(args.q, complex_mode=False)
        res = equivalent(
            surface, config.gens, p, q, config.caps(default_height=10**6)
        )
    except (ValueError, MarkoffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if res.equivalent:
        print(json.dumps({"equivalent": True, "word": str(res.word)}, sort_keys=True))
        return EXIT_OK
    print(
        json.dumps(
            {"equivalent": False, "within_caps": True, "exhausted": res.exhausted},
            sort_keys=True,
        )
    )
    return EXIT_CAPS


# ---------------------------------------------------------------------------
# argument plumbing


def _config_from_args(args) -> RunConfig:
    config = RunConfig(
        surface_type=getattr(args, "type", "11"),
        gens=getattr(args, "gens", "gamma_prime"),
        box=getattr(args, "box", 100),
        cap_height=getattr(args, "cap_height", None),
        cap_count=getattr(args, "cap_count", 10**6),
        cap_steps=getattr(args, "cap_steps", 10**4),
        fmt=getattr(args, "format", "json"),
        cache_path=getattr(args, "cache", None),
        jobs=getattr(args, "jobs", 1),
        complex_mode=getattr(args, "complex", False),
    )
    if config.box < 0:
        raise ValueError("--box must be nonnegative")
    if config.cap_height is not None and config.cap_height < 0:
        raise ValueError("--cap-height must be nonnegative")
    if config.cap_count < 1 or config.cap_steps < 0 or config.jobs < 1:
        raise ValueError("caps and --jobs must be positive")
    return config


def _add_surface_args(sub, with_range=False):
    sub.add_argument("--type", choices=("11", "04"), default="11")
    sub.add_argument("--k", help="k for --type 11, k1,k2,k3,k4 for --type 04")
    if with_range:
        sub.add_argument("--k-range", dest="k_range", help="inclusive range LO..HI")


def _add_caps_args(sub):
    sub.add_argument("--cap-height", dest="cap_height", type=int, default=None)
    sub.add_argument("--cap-count", dest="cap_count", type=int, default=10**6)
    sub.add_argument("--cap-steps", dest="cap_steps", type=int, default=10**4)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that accepts values like -2..2 or -3,6,15."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="markoff",
        description="Descent, orbits and class numbers on Markoff-type cubic surfaces",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("reduce", help="reduce a point, printing a certificate")
    _add_surface_args(p)
    p.add_argument("--point", required=True, help="x,y,z")
    p.add_argument("--complex", action="store_true", help="complex-domain descent")
    p.add_argument("--format", choices=("json", "text"), default="text")
    _add_caps_args(p)
    p.set_defaults(func=cmd_reduce)

    p = subs.add_parser("scan", help="tabulate class numbers over a range of k")
    _add_surface_args(p, with_range=True)
    p.add_argument("--box", type=int, default=100)
    p.add_argument("--gens", choices=("gamma_prime", "gamma_poly"), default="gamma_prime")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cache", help=f"cache file (default: ${CACHE_ENV})")
    p.add_argument("--jobs", type=int, default=1)
    _add_caps_args(p)
    p.set_defaults(func=cmd_scan)

    p = subs.add_parser("verify", help="run the randomized identity suites")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("lines", help="integral parabolic lines on a torus surface")
    p.add_argument("--k", required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_lines)

    p = subs.add_parser("orbit", help="dump a capped orbit BFS with certificates")
    _add_surface_args(p)
    p.add_argument("--start", required=True, help="x,y,z")
    p.add_argument("--gens", choices=("gamma_prime", "gamma_poly"), default="gamma_prime")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_caps_args(p)
    p.set_defaults(func=cmd_orbit)

    p = subs.add_parser("equiv", help="search for a word connecting two points")
    _add_surface_args(p)
    p.add_argument("--p", required=True, help="x,y,z")
    p.add_argument("--q", required=True, help="x,y,z")
    p.add_argument("--gens", choices=("gamma_prime", "gamma_poly"), default="gamma_prime")
    _add_caps_args(p)
    p.set_defaults(func=cmd_equiv)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MarkoffError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
