"""Command-line front end: ``syzkit <command> [options]``.

Commands print one report (JSON by default).  Exit status is 0 on success,
1 for bad usage or input, and 2 when a mathematical check fails, for instance
a fan that is not Calabi-Yau or a result outside tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import enumerative, lattice_fan, mirror, periods
from .errors import MathematicalFailure, NotCalabiYau
from .multipoly import MultiPoly
from .mutation import mutated_delta, parse_mutation

SCHEMA = 1
NORMALIZATION_NOTE = "Omega = (1/2 pi i) dlog z ^ dlog u, so periods are real: log q_l"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# output


def _canonical(obj: Any) -> Any:
    """JSON-ready copy with floats at 15 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        x = float(f"{x:.15g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, (complex, np.complexfloating)):
        return [_canonical(obj.real), _canonical(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, MultiPoly):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_canonical(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class RunConfig:
    m: int | None = None
    l: int | None = None
    q: list[float] | None = None
    tolerance: float | None = None
    grid: periods.QuadratureParams | None = None
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        if self.q is not None and self.m is not None and len(self.q) != self.m - 1:
            raise UsageError(f"--q needs {self.m - 1} values for m={self.m}, got {len(self.q)}")

    def to_json(self) -> dict:
        return {
            "m": self.m, "l": self.l, "q": self.q, "tolerance": self.tolerance,
            "grid": self.grid.to_json() if self.grid else None,
            "output_format": self.output_format, "seed": self.seed,
        }


@dataclass
class Report:
    command: str
    inputs: RunConfig
    results: dict
    passed: bool | None = None
    header: list[str] = field(default_factory=list)
    rows: list[list] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "command": self.command, "inputs": self.inputs.to_json(),
               "results": self.results}
        if self.passed is not None:
            out["pass"] = self.passed
        return _canonical(out)

    @property
    def exit_code(self) -> int:
        return 2 if self.passed is False else 0


def _cell(x: Any) -> str:
    x = _canonical(x)
    if isinstance(x, list):
        return " ".join(_cell(v) for v in x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return "" if x is None else str(x)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        if report.header:
            writer.writerow(report.header)
            writer.writerows([_cell(c) for c in row] for row in report.rows)
        else:
            writer.writerow(["key", "value"])
            for k, v in sorted(report.to_json()["results"].items()):
                writer.writerow([k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else _cell(v)])
        return buf.getvalue()
    lines = [f"{report.command}" + ("" if report.passed is None else f": {'PASS' if report.passed else 'FAIL'}")]
    for k, v in sorted(report.to_json()["results"].items()):
        if isinstance(v, list) and report.header:
            continue
        lines.append(f"  {k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")
    if report.header:
        table = [report.header] + [[_cell(c) for c in row] for row in report.rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(report.header))]
        for r in table:
            lines.append("  " + "  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


# parsing helpers


def parse_rays(text: str) -> list[tuple[int, int]]:
    """'x,y;x,y;...' -> [(x, y), ...]."""
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts:
        raise UsageError("empty ray list")
    rays = []
    for p in parts:
        xy = p.split(",")
        if len(xy) != 2:
            raise UsageError(f"ray {p!r} is not of the form x,y")
        try:
            rays.append((int(xy[0]), int(xy[1])))
        except ValueError as exc:
            raise UsageError(f"ray {p!r} has non-integer entries") from exc
    return rays


def parse_floats(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse numbers from {text!r}") from exc
    if not vals:
        raise UsageError("empty number list")
    if not all(math.isfinite(x) for x in vals):
        raise UsageError(f"non-finite value in {text!r}")
    return vals


def parse_sweep(text: str) -> tuple[int, list[float]]:
    """'q1=0.1:0.9:9' -> (1, [0.1, ..., 0.9])."""
    try:
        name, rng = text.split("=")
        if not name.startswith("q"):
            raise ValueError
        j = int(name[1:])
        lo, hi, n = rng.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"sweep {text!r} is not of the form qJ=start:stop:count") from exc
    if n < 1:
        raise UsageError("sweep count must be positive")
    values = [lo] if n == 1 else [float(x) for x in np.linspace(lo, hi, n)]
    return j, values


def _load_input(args) -> None:
    """Fill unset options from a JSON object given with --input."""
    if not getattr(args, "input", None):
        return
    try:
        with open(args.input, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("--input must hold a JSON object")
    for key in ("rays", "m", "l", "q", "C", "complete"):
        if key in data and getattr(args, key, None) in (None, False):
            setattr(args, key, data[key])


def _threads() -> int:
    raw = os.environ.get("SYZKIT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"SYZKIT_THREADS={raw!r} is not an integer") from exc
    return max(1, n)


def _map(fn: Callable, items: Iterable) -> list:
    """Ordered map, fanned out over SYZKIT_THREADS threads."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _config(args, **overrides) -> RunConfig:
    grid = None
    if hasattr(args, "n_t"):
        try:
            grid = periods.QuadratureParams(args.n_t, args.n_theta)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    kw = dict(m=getattr(args, "m", None), l=getattr(args, "l", None), q=getattr(args, "q", None),
              tolerance=args.tolerance, grid=grid, output_format=args.format, seed=args.seed)
    kw.update(overrides)
    return RunConfig(**kw)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _as_int(value, name) -> int:
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"--{name} must be an integer") from exc


def _q_list(value) -> list[float] | None:
    if value is None or isinstance(value, list):
        return value
    return parse_floats(str(value))


# commands


def cmd_classify(args) -> Report:
    _load_input(args)
    _require(args, "rays")
    rays = parse_rays(args.rays) if isinstance(args.rays, str) else [tuple(r) for r in args.rays]
    fan = lattice_fan.Fan2D(tuple(rays), complete=bool(args.complete))
    cls = lattice_fan.classify(fan)
    self_int = [lattice_fan.self_intersection(fan, i) for i in range(1, cls.m)]
    results = {
        "m": cls.m, "nu": list(cls.nu), "transform": [list(r) for r in cls.transform],
        "rays": [list(v) for v in fan.rays], "self_intersections": self_int,
        "smooth": fan.is_smooth(),
    }
    rows = []
    for i, v in enumerate(fan.rays):
        w = lattice_fan.apply(cls.transform, v)
        rows.append([i, v.x, v.y, w.x, w.y, self_int[i - 1] if 0 < i < cls.m else None])
    return Report("classify", _config(args), results, True,
                  ["index", "x", "y", "mapped_x", "mapped_y", "self_intersection"], rows)


def _center_payload(m: int, l: int, max_degree: int | None) -> tuple[dict, list]:
    seqs = enumerative.enumerate_admissible(m, l)
    if max_degree is not None:
        seqs = [s for s in seqs if sum(s.s) <= max_degree]
    delta = enumerative.delta_series(m, l)
    if max_degree is not None:
        delta = MultiPoly({e: c for e, c in delta.terms() if sum(e) <= max_degree}, m - 1)
    payload = {"m": m, "center": l, "sequences": [list(s.s) for s in seqs], "count": len(seqs),
               "delta": str(delta)}
    if l == m:
        payload["note"] = "delta_m is 0 by convention; only the zero sequence has center m"
    rows = [[l, list(s.s), sum(s.s), str(s.monomial())] for s in seqs]
    return payload, rows


def cmd_invariants(args) -> Report:
    _load_input(args)
    _require(args, "m")
    m = _as_int(args.m, "m")
    if m < 1:
        raise UsageError("--m must be at least 1")
    centers = [_as_int(args.l, "l")] if args.l is not None else list(range(1, m + 1))
    payloads, rows = [], []
    for l in centers:
        p, r = _center_payload(m, l, args.max_degree)
        payloads.append(p)
        rows.extend(r)
    results = payloads[0] if args.l is not None else {"m": m, "centers": payloads}
    return Report("invariants", _config(args, m=m), results, None,
                  ["center", "sequence", "degree", "monomial"], rows)


def cmd_verify(args) -> Report:
    m_max = _as_int(args.m_max, "m-max")
    if m_max < 1:
        raise UsageError("--m-max must be at least 1")
    delta = enumerative.delta_series
    if args.mutate:
        try:
            delta = mutated_delta(parse_mutation(args.mutate))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    timing = args.timing or args.format == "pretty"
    rows, per_m, first = [], [], None
    for m in range(1, m_max + 1):
        start = time.perf_counter()
        mismatch = mirror.find_mismatch(m, delta=delta)
        seconds = time.perf_counter() - start
        ok = mismatch is None
        terms = sum(len(c) for c in mirror.g_from_product(m).coeff)
        entry = {"m": m, "pass": ok, "terms": terms}
        if timing:
            entry["seconds"] = seconds
        per_m.append(entry)
        rows.append([m, terms, ok] + ([f"{seconds:.4f}"] if timing else []))
        if not ok and first is None:
            first = {"m": mismatch.m, "power": mismatch.power, "exponents": list(mismatch.exponents),
                     "invariants": mismatch.left, "product": mismatch.right,
                     "message": str(mismatch)}
    results = {"m_max": m_max, "mutation": args.mutate, "per_m": per_m, "first_mismatch": first}
    header = ["m", "terms", "pass"] + (["seconds"] if timing else [])
    return Report("verify", _config(args), results, first is None, header, rows)


def _kahler_q(args, m: int) -> list[float]:
    q = _q_list(args.q)
    offsets = getattr(args, "offsets", None)
    if q is None and offsets is None:
        if m == 1:
            return []
        raise UsageError("--q (or --offsets) is required")
    poly = lattice_fan.moment_polytope(m, [Fraction(x) for x in offsets.split(",")]) if offsets else None
    if q is not None and len(q) != m - 1:
        raise UsageError(f"--q needs {m - 1} values for m={m}, got {len(q)}")
    if q is not None and any(x == 1.0 for x in q):
        # leave the degenerate case to the cycle construction
        return q
    return [float(x) for x in mirror.resolve_kahler(m, q=q, polytope=poly).q]


def _period_rows(m: int, q: Sequence[float], ls: Sequence[int], grid, tol: float):
    cycles, rows, ok = [], [], True
    for l in ls:
        spec = periods.CycleSpec(m, l, tuple(q))
        res = periods.period_quadrature(spec, grid, tol=tol)
        closed = periods.period_closed_form(spec)
        resid = periods.lagrangian_residual(spec, grid)
        diff = abs(res.value - closed)
        good = diff < tol and resid.kahler < tol and resid.imag_omega < tol
        ok &= good
        cycles.append({"l": l, "q": list(q), "period": res.value, "closed_form": closed,
                       "error": res.error_estimate, "difference": diff,
                       "lagrangian_residual": resid.kahler, "imag_omega": resid.imag_omega,
                       "pass": good})
        rows.append([m, l, res.value.real, closed.real, diff, resid.kahler, good])
    return cycles, rows, ok


def cmd_periods(args) -> Report:
    _load_input(args)
    _require(args, "m")
    m = _as_int(args.m, "m")
    if m < 2:
        raise UsageError("--m must be at least 2 to have a compact cycle")
    q = _kahler_q(args, m)
    tol = args.tolerance or 1e-6
    cfg = _config(args, m=m, q=q, tolerance=tol)
    ls = [_as_int(args.l, "l")] if args.l is not None else list(range(1, m))
    for l in ls:
        if not 1 <= l <= m - 1:
            raise UsageError(f"--l must lie in 1..{m - 1}")
    cycles, rows, ok = _period_rows(m, q, ls, cfg.grid, tol)
    hk = periods.hk_period_check(m, q, cfg.grid, tol=max(tol, 1e-5))
    results = {"m": m, "cycles": cycles, "hk": hk.to_json(), "normalization": NORMALIZATION_NOTE}
    return Report("periods", cfg, results, ok and hk.passed,
                  ["m", "l", "period", "closed_form", "difference", "lagrangian_residual", "pass"], rows)


def _roundtrip(m: int, q: Sequence[float]) -> tuple[np.ndarray, np.ndarray, float]:
    C = mirror.mirror_map(m, q)
    back = mirror.inverse_mirror_map(C) if m > 1 else np.zeros(0)
    q = np.asarray(q, dtype=float)
    err = float(np.max(np.abs(back - q) / np.abs(q))) if m > 1 else 0.0
    return C, back, err


def cmd_mirror_map(args) -> Report:
    _load_input(args)
    tol = args.tolerance or 1e-10
    if args.invert or args.C is not None:
        _require(args, "C")
        C = _q_list(args.C)
        m = len(C) - 1
        if args.m is not None and _as_int(args.m, "m") != m:
            raise UsageError(f"--C has {len(C)} entries, expected {_as_int(args.m, 'm') + 1}")
        q = mirror.inverse_mirror_map(np.asarray(C, dtype=float))
        again = mirror.mirror_map(m, q)
        err = float(np.max(np.abs(again - np.asarray(C)) / np.maximum(np.abs(C), 1e-300)))
        results = {"m": m, "C": C, "q": q, "roundtrip_error": err}
        rows = [[j, x] for j, x in enumerate(q, start=1)]
        return Report("mirror-map", _config(args, m=m, q=None, tolerance=tol), results,
                      err < tol, ["j", "q"], rows)
    _require(args, "m")
    m = _as_int(args.m, "m")
    if m < 1:
        raise UsageError("--m must be at least 1")
    header = ["q" + str(j) for j in range(1, m)] + [f"C_{i}" for i in range(m + 1)]
    if args.sweep:
        j, values = parse_sweep(args.sweep)
        if not 1 <= j <= m - 1:
            raise UsageError(f"sweep variable q{j} outside q1..q{m - 1}")
        base = _q_list(args.q) or [0.5] * (m - 1)
        if len(base) != m - 1:
            raise UsageError(f"--q needs {m - 1} values for m={m}")

        def point(x):
            q = list(base)
            q[j - 1] = x
            mirror.KahlerPoint(tuple(q))
            return q, mirror.mirror_map(m, q)

        try:
            pts = _map(point, values)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rows = [list(q) + list(C) for q, C in pts]
        results = {"m": m, "sweep": {"variable": f"q{j}", "values": values},
                   "rows": [{"q": q, "C": C} for q, C in pts]}
        return Report("mirror-map", _config(args, m=m, q=base), results, True, header, rows)
    q = _kahler_q(args, m)
    C, back, err = _roundtrip(m, q)
    results = {"m": m, "q": q, "C": C, "inverse": back, "roundtrip_error": err}
    return Report("mirror-map", _config(args, m=m, q=q, tolerance=tol), results, err < tol,
                  header, [list(q) + list(C)])


def cmd_check_all(args) -> Report:
    m_max = _as_int(args.m_max, "m-max")
    if m_max < 1:
        raise UsageError("--m-max must be at least 1")
    tol = args.tolerance or 1e-6
    cfg = _config(args, tolerance=tol)
    rng = np.random.default_rng(args.seed)
    rows, stages, ok = [], [], True

    def record(stage, m, detail, good):
        nonlocal ok
        ok &= bool(good)
        rows.append([stage, m, detail, bool(good)])
        stages.append({"stage": stage, "m": m, "detail": detail, "pass": bool(good)})

    for m in range(1, m_max + 1):
        record("verify", m, "invariant series equals product", mirror.verify_identity(m))
    samples = [(m, [float(x) for x in rng.uniform(0.1, 0.9, m - 1)])
               for m in range(2, m_max + 1) for _ in range(args.samples)]

    def run(sample):
        m, q = sample
        _, prow, pok = _period_rows(m, q, range(1, m), cfg.grid, tol)
        hk = periods.hk_period_check(m, q, cfg.grid, tol=max(tol, 1e-5))
        _, _, err = _roundtrip(m, q)
        worst = max(r[4] for r in prow)
        return m, q, pok, worst, hk, err

    for m, q, pok, worst, hk, err in _map(run, samples):
        qs = ",".join(f"{x:.6g}" for x in q)
        record("periods", m, f"q={qs} max |period - log q| = {worst:.3e}", pok)
        record("hyperkahler", m, f"q={qs} deviation = {hk.deviation:.3e}", hk.passed)
        record("mirror-map", m, f"q={qs} roundtrip error = {err:.3e}", err < 1e-10)
    results = {"m_max": m_max, "samples_per_m": args.samples, "stages": stages}
    return Report("check-all", cfg, results, ok, ["stage", "m", "detail", "pass"], rows)


# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--csv", action="store_true", help="shorthand for --format csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--input", help="JSON object supplying any option not given on the command line")

    grid = _Parser(add_help=False)
    grid.add_argument("--n-t", type=int, default=32)
    grid.add_argument("--n-theta", type=int, default=32)

    parser = _Parser(prog="syzkit", description="Open invariants, SYZ mirrors and periods "
                     "of toric Calabi-Yau surfaces.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="identify a fan with Sigma_m")
    p.add_argument("--rays", help='ray list "x,y;x,y;..."')
    p.add_argument("--complete", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("invariants", parents=[common], help="admissible sequences and delta_l")
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", parents=[common], help="check the gluing-polynomial identity")
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--mutate", help="drop-cond-N: weaken the admissibility criterion")
    p.add_argument("--timing", action="store_true", help="include per-m wall time")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("periods", parents=[common, grid], help="periods of the cycles S_l")
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--q")
    p.add_argument("--offsets", help="moment polytope offsets c_0,...,c_m instead of --q")
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("mirror-map", parents=[common], help="forward and inverse mirror map")
    p.add_argument("--m", type=int)
    p.add_argument("--q")
    p.add_argument("--C")
    p.add_argument("--offsets", help="moment polytope offsets c_0,...,c_m instead of --q")
    p.add_argument("--invert", action="store_true")
    p.add_argument("--sweep", help="qJ=start:stop:count")
    p.set_defaults(func=cmd_mirror_map)

    p = sub.add_parser("check-all", parents=[common, grid], help="full verification run")
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--samples", type=int, default=2, help="random Kahler points per m")
    p.set_defaults(func=cmd_check_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    out, err = sys.stdout, sys.stderr
    fmt = "json"
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required (try --help)")
        if args.csv:
            args.format = "csv"
        fmt = args.format
        report = args.func(args)
    except UsageError as exc:
        err.write(f"syzkit: error: {exc}\n")
        return 1
    except MathematicalFailure as exc:
        reason = "NotCY" if isinstance(exc, NotCalabiYau) else type(exc).__name__
        failed = Report(args.command, RunConfig(output_format=fmt, seed=args.seed),
                        {"reason": reason, "message": str(exc)}, False)
        out.write(render(failed, fmt))
        err.write(f"syzkit: {reason}: {exc}\n")
        return 2
    except (ValueError, ArithmeticError) as exc:
        err.write(f"syzkit: error: {exc}\n")
        return 1
    out.write(render(report, fmt))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
