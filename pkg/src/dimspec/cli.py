"""Command-line interface.

Every subcommand emits a single data document, either JSON
(``--format structured``, the default) or CSV with ``#``-prefixed
metadata lines.  The document embeds the full run configuration under
``config`` (CSV: the ``# config:`` line), so any output can be
re-executed with :func:`run_from_config` and compared byte for byte.
Data goes to stdout or ``--out``; diagnostics go to stderr.  Exit code
2 signals a configuration problem, 3 a numerical failure; in both
cases a machine-readable error record is printed on the data channel.

Numbers are serialised with ``repr`` semantics (shortest round-trip,
``.`` decimal separator), which together with ordered construction and
order-preserving parallel maps makes outputs independent of
``--workers``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import mpmath

from .construction import k_set_cloud
from .errors import ConfigError, DimspecError
from .families import ContractionFamily
from .metrics import (
    box_dimension_estimate,
    cantor_truncation,
    classify_type,
    local_dimension_profile,
    uniform_perfectness_gaps,
)
from .perturbation import exponent_fit
from .solver import DEFAULT_TOL, solve_dimension

FAMILY_NAMES = ("square-exponent", "geometric", "type-three", "cantor-pair")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimspec",
        description="Certified dimension computations for infinite contraction systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, family=False, subset=False, word=False, depth=False,
            base=False, tol=False, precision=False, scales=False, b_range=False,
            criteria=False):
        p = sub.add_parser(name, help=help_text)
        if family:
            p.add_argument("--family", choices=FAMILY_NAMES, help="named contraction family")
            p.add_argument("--ratios", nargs="+", metavar="R",
                           help="explicit ratios (decimals or fractions), instead of --family")
        if subset:
            p.add_argument("--subset", help="comma-separated symbol indices, or 'full'")
        if word:
            p.add_argument("--word", help="binary word selecting symbols by position")
        if depth:
            p.add_argument("--depth", type=int, required=True, help="expansion depth")
        if base:
            p.add_argument("--base", default="1,2", help="base symbols (default 1,2)")
        if tol:
            p.add_argument("--tol", type=float, help="enclosure width budget")
        if precision:
            p.add_argument("--precision-bits", type=int, dest="precision_bits",
                           help="pin the high-precision tier to this many bits")
        if scales:
            p.add_argument("--scales", help="dyadic scale exponents as kmin:kmax")
        if b_range:
            p.add_argument("--b-range", dest="b_range", required=True,
                           help="inclusive sweep range lo:hi for the perturbing symbol")
        if criteria:
            p.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
        p.add_argument("--format", choices=("csv", "structured"), default="structured")
        p.add_argument("--out", help="write the data document to this file")
        p.add_argument("--no-timestamp", action="store_true", dest="no_timestamp",
                       help="omit the generation timestamp (byte-stable output)")
        return p

    add("dim", "solve one Moran dimension with certificates",
        family=True, subset=True, word=True, tol=True, precision=True)
    add("spectrum", "certified dimension cloud over words extending a base set",
        family=True, depth=True, base=True, tol=True)
    add("boxdim", "box-counting slope of a family's dimension cloud",
        family=True, depth=True, base=True, scales=True)
    add("localdim", "windowed local dimension profile of the cloud",
        family=True, depth=True, base=True)
    add("gaps", "uniform-perfectness gap statistic of the cloud",
        family=True, depth=True, base=True)
    add("classify", "qualitative type of the cloud (I / II / III)",
        family=True, depth=True, base=True)
    add("perturb", "one-symbol perturbation sweep and exponent fit",
        family=True, subset=True, b_range=True, tol=True)
    add("construct-k", "exact sparse cloud of the dyadic construction",
        depth=True)
    add("verify", "run the acceptance suite", criteria=True)
    return parser


# ---------------------------------------------------------------------------
# configuration echo and round tripping

# --workers and --out are execution details: they cannot change the
# computed data, so they are not part of the echoed configuration.
_CONFIG_KEYS = (
    "family", "ratios", "subset", "word", "depth", "base", "tol",
    "precision_bits", "scales", "b_range", "criteria", "format",
)
_KEY_TO_FLAG = {k: "--" + k.replace("_", "-") for k in _CONFIG_KEYS}


def _config_of(args) -> dict:
    config = {"command": args.command}
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    config["no_timestamp"] = bool(args.no_timestamp)
    return config


def _argv_from_config(config: dict) -> list:
    argv = [config["command"]]
    for key in _CONFIG_KEYS:
        if key not in config:
            continue
        value = config[key]
        if key == "ratios":
            argv.append(_KEY_TO_FLAG[key])
            argv.extend(str(r) for r in value)
        else:
            argv.extend([_KEY_TO_FLAG[key], str(value)])
    if config.get("no_timestamp"):
        argv.append("--no-timestamp")
    return argv


def run_from_config(config: dict) -> str:
    """Re-execute a run from the config echo of a previous output."""
    args = _build_parser().parse_args(_argv_from_config(config))
    text, _ = _execute(args)
    return text


# ---------------------------------------------------------------------------
# parsing helpers

def _family_of(args) -> ContractionFamily:
    name = getattr(args, "family", None)
    ratios = getattr(args, "ratios", None)
    if name and ratios:
        raise ConfigError("give either --family or --ratios, not both")
    if name:
        return ContractionFamily.from_name(name)
    if ratios:
        return ContractionFamily.explicit(ratios)
    raise ConfigError("a contraction family is required (--family or --ratios)")


def _parse_subset(text):
    if text is None or text == "full":
        return "full"
    try:
        indices = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"bad subset {text!r}: expected comma-separated integers or 'full'")
    if not indices:
        raise ConfigError("empty subset")
    return indices


def _parse_pair(text, flag):
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"bad {flag} {text!r}: expected lo:hi")
    if lo > hi:
        raise ConfigError(f"bad {flag} {text!r}: lo exceeds hi")
    return lo, hi


def _metric_points(args):
    """Point set that the box/local/gap/classify commands operate on."""
    name = getattr(args, "family", None)
    if getattr(args, "ratios", None) is not None:
        raise ConfigError("point sampling is defined for named families only")
    if name is None:
        raise ConfigError("a named --family is required")
    if name == "cantor-pair":
        return cantor_truncation(args.depth)
    family = ContractionFamily.from_name(name)
    base = _parse_subset(args.base)
    if base == "full":
        raise ConfigError("--base must list explicit symbols")
    from .spectrum import expand_spectrum

    cloud = expand_spectrum(family, args.depth, base_symbols=base, workers=args.workers)
    return cloud.midpoints()


# ---------------------------------------------------------------------------
# rendering

def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def _timestamp(args):
    if args.no_timestamp:
        return None
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _render_structured(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_csv(config, meta, header, rows, timestamp) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n")
    if timestamp:
        buf.write(f"# generated_at: {timestamp}\n")
    for key, value in meta.items():
        buf.write(f"# {key}: {_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return buf.getvalue()


def _emit(args, config, summary: dict, header, rows) -> str:
    ts = _timestamp(args)
    if args.format == "csv":
        return _render_csv(config, summary, header, rows, ts)
    doc = {"command": args.command, "config": config, **summary,
           "rows": {"header": list(header), "data": [list(r) for r in rows]}}
    if ts:
        doc["generated_at"] = ts
    return _render_structured(doc)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_dim(args, config):
    family = _family_of(args)
    if getattr(args, "word", None):
        subset = args.word
    else:
        subset = _parse_subset(getattr(args, "subset", None))
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    interval = solve_dimension(family, subset, tol=tol, precision_bits=args.precision_bits)
    result = interval.as_dict()
    summary = {"family_resolved": family.describe(), "result": result}
    header = list(result.keys())
    rows = [[result[k] for k in header]]
    return _emit(args, config, summary, header, rows)


def _cmd_spectrum(args, config):
    family = _family_of(args)
    base = _parse_subset(args.base)
    if base == "full":
        raise ConfigError("--base must list explicit symbols")
    from .spectrum import expand_spectrum

    cloud = expand_spectrum(family, args.depth, base_symbols=base,
                            tol=args.tol, workers=args.workers)
    summary = {
        "family_resolved": family.describe(),
        "base_dimension": cloud.base_dimension.as_dict(),
        "spacing_constant": cloud.spacing_constant,
        "covering_radius": cloud.covering_radius(),
        "tol_resolved": cloud.tol,
        "n_points": len(cloud.points),
    }
    header = ["word", "lo", "hi", "mid", "width"]
    rows = [
        [p.word, p.interval.lo, p.interval.hi, p.interval.mid, p.interval.width]
        for p in cloud.points
    ]
    return _emit(args, config, summary, header, rows)


def _cmd_boxdim(args, config):
    points = _metric_points(args)
    scale_range = _parse_pair(args.scales, "--scales") if args.scales else None
    profile = box_dimension_estimate(points, scale_range=scale_range)
    summary = {
        "slope": profile.slope,
        "residual": profile.residual,
        "n_points": profile.n_points,
        "floor": profile.floor,
        "floor_rule": profile.floor_rule,
    }
    rows = list(zip(profile.scales, profile.counts))
    return _emit(args, config, summary, ["scale", "count"], rows)


def _cmd_localdim(args, config):
    points = _metric_points(args)
    profile = local_dimension_profile(points)
    summary = {"n_points": profile.n_points}
    if args.format == "structured":
        summary["series"] = [
            {"center": c.center, "series": [[r, size, s] for r, size, s in c.series]}
            for c in profile.centers
        ]
    header = ["center", "radius", "window_kind", "window_size", "scalar"]
    rows = [
        [c.center, c.radius, c.window_kind, c.window_size, c.scalar]
        for c in profile.centers
    ]
    return _emit(args, config, summary, header, rows)


def _cmd_gaps(args, config):
    points = _metric_points(args)
    report = uniform_perfectness_gaps(points)
    result = report.as_dict()
    header = list(result.keys())
    return _emit(args, config, {"result": result}, header, [[result[k] for k in header]])


def _cmd_classify(args, config):
    points = _metric_points(args)
    outcome = classify_type(points)
    summary = {"result": outcome.as_dict()}
    rows = [[i, s] for i, s in enumerate(outcome.scalars)]
    return _emit(args, config, summary, ["center_index", "scalar"], rows)


def _cmd_perturb(args, config):
    family = _family_of(args)
    base = _parse_subset(getattr(args, "subset", None))
    if base == "full":
        raise ConfigError("--subset must list the base symbols explicitly")
    lo, hi = _parse_pair(args.b_range, "--b-range")
    report = exponent_fit(family, base, range(lo, hi + 1), tol=args.tol)
    summary = {
        "family_resolved": family.describe(),
        "delta": report.delta,
        "base_lo": report.base_lo,
        "base_hi": report.base_hi,
        "slope": report.slope,
        "intercept": report.intercept,
        "residual": report.residual,
        "ratio_min": report.ratio_min,
        "ratio_max": report.ratio_max,
    }
    header = ["b", "ratio_b", "increment_lo", "increment_hi", "increment_mid",
              "log_ratio", "log_increment"]
    rows = [
        [e.b, e.ratio_b, e.increment_lo, e.increment_hi, e.increment_mid,
         math.log(e.ratio_b), math.log(e.increment_mid)]
        for e in report.entries
    ]
    return _emit(args, config, summary, header, rows)


def _cmd_construct_k(args, config):
    points = k_set_cloud(args.depth)
    header = ["word", "n_terms", "exponents", "approx"]
    rows = []
    for p in points:
        approx = mpmath.nstr(p.approx(30), 20) if p.exponents else "0.0"
        rows.append([p.word, len(p.exponents), ";".join(str(e) for e in p.exponents), approx])
    return _emit(args, config, {"n_points": len(points)}, header, rows)


def _cmd_verify(args, config):
    from .acceptance import run_all

    numbers = None
    if args.criteria:
        try:
            numbers = tuple(int(p) for p in args.criteria.split(","))
        except ValueError:
            raise ConfigError(f"bad --criteria {args.criteria!r}")
        if any(n < 1 or n > 9 for n in numbers):
            raise ConfigError("criterion numbers run from 1 to 9")
    results = run_all(numbers=numbers)
    with_timing = not args.no_timestamp
    for r in results:
        print(r.line(with_timing=with_timing), file=sys.stderr)
    n_pass = sum(1 for r in results if r.passed)
    if args.format == "structured":
        docs = []
        for r in results:
            entry = {"number": r.number, "name": r.name,
                     "passed": r.passed, "details": r.details}
            if with_timing:
                entry["elapsed"] = round(r.elapsed, 1)
            docs.append(entry)
        doc = {"command": "verify", "config": config, "results": docs,
               "passed": n_pass, "total": len(results)}
        ts = _timestamp(args)
        if ts:
            doc["generated_at"] = ts
        text = _render_structured(doc)
    else:
        lines = [r.line(with_timing=with_timing) for r in results]
        lines.append(f"passed {n_pass}/{len(results)}")
        text = "\n".join(lines) + "\n"
    code = 0 if n_pass == len(results) else 1
    return text, code


_COMMANDS = {
    "dim": _cmd_dim,
    "spectrum": _cmd_spectrum,
    "boxdim": _cmd_boxdim,
    "localdim": _cmd_localdim,
    "gaps": _cmd_gaps,
    "classify": _cmd_classify,
    "perturb": _cmd_perturb,
    "construct-k": _cmd_construct_k,
    "verify": _cmd_verify,
}


def _execute(args):
    if getattr(args, "workers", 1) < 1:
        raise ConfigError("--workers must be at least 1")
    config = _config_of(args)
    handler = _COMMANDS[args.command]
    result = handler(args, config)
    if isinstance(result, tuple):
        return result
    return result, 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text, code = _execute(args)
    except DimspecError as exc:
        record = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(record, sort_keys=True))
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
