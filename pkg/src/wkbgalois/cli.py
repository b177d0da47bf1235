"""Command-line interface: spectra, classification, phi12, propagators, validation and sweeps.

    wkbgalois spectrum  --family hermite --a 1 -n 3
    wkbgalois classify  --family legendre --m 1/2 --n 7/3
    wkbgalois phi12     --family hermite --a 1 --index 0 --t1 1
    wkbgalois propagate --family constant --omega 1 --x0 0 --x1 1 --t1 1 --hbar 0.5
    wkbgalois validate  --family bessel --a 6 --b 1 --levels 1,2,3
    wkbgalois sweep     --family constant --omega 1 --E 0.5 --t-min 0.1 --t-max 3 --steps 60 --format csv

Exit codes: 0 success, 2 validation failure, 3 domain error, 4 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from .closedform import phi12_closed
from .errors import (
    ClosedFormUnavailable,
    FocalPointCrossed,
    FocalPointError,
    NotIntegrableError,
    QuadratureError,
    WKBError,
)
from .galois import (
    classify,
    classify_bessel,
    classify_hermite,
    classify_lame,
    classify_legendre,
)
from .oracle import integrate_fundamental_many, phi12_numeric, wronskian_drift
from .propagator import evaluate_phi12, kwkb
from .variational import (
    PathSpec,
    admissible_energies,
    family_params,
    level_for_path,
    make_family,
    path_energy,
)

SCHEMA = 1
EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN, EXIT_BAD_INPUT = 0, 2, 3, 4
COMMANDS = ("spectrum", "classify", "phi12", "propagate", "validate", "sweep")
SWEEP_HEADER = ("t1", "phi12", "detJ", "modK", "phase")

DEFAULT_LEVELS = {"hermite": (0, 1, 2, 3, 5), "bessel": (1, 2, 3), "legendre": (1, 2, 3), "lame": (1,)}
DEFAULT_X0 = {"bessel": 1.0}


class BadInput(Exception):
    pass


def _number(text):
    """Float from a decimal or ``p/q`` literal."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise BadInput(f"not a number: {text!r}") from None


def _rational(text):
    if isinstance(text, Fraction):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise BadInput(f"not a rational literal: {text!r}") from None


def _int_list(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise BadInput(f"not a comma-separated integer list: {text!r}") from None


def _boolean(text):
    if isinstance(text, bool):
        return text
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise BadInput(f"not a boolean: {text!r}")


def _integer(text):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise BadInput(f"not an integer: {text!r}") from None


def _choice(options):
    def conv(text):
        if text not in options:
            raise BadInput(f"expected one of {options}, got {text!r}")
        return text

    return conv


@dataclass(frozen=True)
class RunConfig:
    """Every CLI input in one flat record; ``None`` means not given."""

    command: str = "spectrum"
    family: str | None = None
    omega: float | None = None
    a: float | None = None
    b: float | None = None
    g2: float | None = None
    g3: float | None = None
    x0: float | None = None
    x1: float | None = None
    t1: float | None = None
    E: float | None = None
    index: int | None = None
    direction: int = 1
    lam: Fraction | None = None
    nu: Fraction | None = None
    m: Fraction | None = None
    n: Fraction | None = None
    B: float | None = None
    mu2: float | None = None
    count: int = 5
    hbar: float = 1.0
    tol: float = 1e-10
    rtol: float = 1e-8
    levels: tuple | None = None
    t_min: float = 0.1
    t_max: float = 2.0
    steps: int = 20
    param: str | None = None
    p_min: float | None = None
    p_max: float | None = None
    inject_fault: bool = False
    threads: int | None = None
    format: str = "json"
    out: str | None = None

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, Fraction):
                v = str(v)
            elif isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            out[f.name] = v
        return out

    def to_text(self):
        return "".join(f"{k} = {v}\n" for k, v in self.to_dict().items())

    @classmethod
    def from_mapping(cls, mapping, base=None):
        base = base or cls()
        updates = {}
        for key, raw in mapping.items():
            key = key.replace("-", "_")
            if key == "lambda":
                key = "lam"
            if key not in _CONVERTERS:
                raise BadInput(f"unknown config key {key!r}")
            updates[key] = None if raw is None else _CONVERTERS[key](raw)
        return replace(base, **updates)

    @classmethod
    def from_text(cls, text, base=None):
        mapping = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise BadInput(f"config line {lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            mapping[key] = value
        return cls.from_mapping(mapping, base)


_CONVERTERS = {
    "command": _choice(COMMANDS),
    "family": lambda s: str(s).lower(),
    "omega": _number, "a": _number, "b": _number, "g2": _number, "g3": _number,
    "x0": _number, "x1": _number, "t1": _number, "E": _number,
    "index": _integer, "direction": _integer,
    "lam": _rational, "nu": _rational, "m": _rational, "n": _rational,
    "B": _number, "mu2": _number,
    "count": _integer, "hbar": _number, "tol": _number, "rtol": _number,
    "levels": _int_list, "t_min": _number, "t_max": _number, "steps": _integer,
    "param": str, "p_min": _number, "p_max": _number,
    "inject_fault": _boolean, "threads": _integer,
    "format": _choice(("json", "csv")), "out": str,
}


# ----------------------------------------------------------------------------- argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadInput(message)


def build_parser():
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("family")
    g.add_argument("--family", help="constant | hermite | bessel | legendre | lame")
    for name in ("omega", "a", "b", "g2", "g3"):
        g.add_argument(f"--{name}", help="family parameter (decimal or p/q)")
    p = common.add_argument_group("path and energy")
    p.add_argument("--x0")
    p.add_argument("--x1")
    p.add_argument("--t1")
    p.add_argument("--E", dest="E", help="energy (otherwise taken from the path or --index)")
    p.add_argument("--index", help="admissible level label (m for hermite, n otherwise)")
    p.add_argument("--direction", help="+1 or -1, direction of motion when the path is built from E")
    r = common.add_argument_group("reduced parameters (classify)")
    r.add_argument("--lambda", dest="lam")
    r.add_argument("--nu")
    r.add_argument("--m")
    r.add_argument("--n")
    r.add_argument("--B", dest="B")
    r.add_argument("--mu2")
    o = common.add_argument_group("numerics and output")
    o.add_argument("--hbar")
    o.add_argument("--tol", help="oracle tolerance")
    o.add_argument("--rtol", help="closed-vs-oracle tolerance for validate")
    o.add_argument("--threads", help="worker processes for validate and sweep")
    o.add_argument("--format", choices=("json", "csv"))
    o.add_argument("--out", help="write output here instead of stdout")
    o.add_argument("--config", help="flat key = value file; flags override it")

    parser = _Parser(prog="wkbgalois", description="Semiclassical propagators with integrability checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("spectrum", parents=[common], argument_default=argparse.SUPPRESS, help="admissible energies")
    sp.add_argument("-c", "--count", dest="count")
    sub.add_parser("classify", parents=[common], argument_default=argparse.SUPPRESS, help="integrability verdict")
    sub.add_parser("phi12", parents=[common], argument_default=argparse.SUPPRESS, help="closed form and oracle phi12")
    sub.add_parser("propagate", parents=[common], argument_default=argparse.SUPPRESS, help="K_WKB")
    vp = sub.add_parser("validate", parents=[common], argument_default=argparse.SUPPRESS, help="closed form vs oracle on a grid")
    vp.add_argument("--levels", help="comma-separated level labels")
    vp.add_argument("--inject-fault", dest="inject_fault", action="store_true",
                    help="multiply the closed form by 1 + 1e-5 (self-test)")
    for sp_ in (vp, sub.add_parser("sweep", parents=[common], argument_default=argparse.SUPPRESS, help="tabulate phi12, det J and K")):
        sp_.add_argument("--t-min", dest="t_min")
        sp_.add_argument("--t-max", dest="t_max")
        sp_.add_argument("--steps")
    sw = sub.choices["sweep"]
    sw.add_argument("--param", help="sweep this family parameter instead of t1")
    sw.add_argument("--p-min", dest="p_min")
    sw.add_argument("--p-max", dest="p_max")
    # -n on spectrum is the count; on classify it is the degree
    sp.add_argument("-n", dest="count", help=argparse.SUPPRESS)
    return parser


def parse_config(argv):
    """RunConfig from argv with precedence flags > config file > defaults."""
    ns = {k: v for k, v in vars(build_parser().parse_args(argv)).items() if v is not None}
    config_file = ns.pop("config", None)
    base = RunConfig()
    if config_file is not None:
        try:
            base = RunConfig.from_text(Path(config_file).read_text(encoding="utf-8"))
        except OSError as exc:
            raise BadInput(f"cannot read config file: {exc}") from None
    return RunConfig.from_mapping(ns, base)


# ----------------------------------------------------------------------------- helpers


def build_family(cfg):
    if cfg.family is None:
        raise BadInput("--family is required")
    try:
        return make_family(cfg.family, **{k: getattr(cfg, k) for k in ("omega", "a", "b", "g2", "g3")})
    except WKBError as exc:
        raise BadInput(str(exc)) from None


def _x0(cfg, family):
    return cfg.x0 if cfg.x0 is not None else DEFAULT_X0.get(family.name, 0.0)


def resolve_energy(cfg, family):
    """E from --E, --index or the explicit path, in that order."""
    if cfg.E is not None:
        return cfg.E
    if cfg.index is not None:
        labels = {lv.index: lv for lv in admissible_energies(family, cfg.index + 1)}
        if cfg.index not in labels:
            raise BadInput(f"no admissible level with label {cfg.index}")
        return labels[cfg.index].E
    if cfg.x1 is not None and cfg.t1 is not None:
        return path_energy(PathSpec(_x0(cfg, family), cfg.x1, cfg.t1))
    raise BadInput("give --E, --index, or --x1 with --t1")


def resolve_path(cfg, family):
    """Explicit (x0, x1, t1), or the path of energy E leaving x0 in ``direction``."""
    t1 = cfg.t1 if cfg.t1 is not None else 1.0
    if cfg.x1 is not None and cfg.E is None and cfg.index is None:
        return PathSpec(_x0(cfg, family), cfg.x1, t1)
    return PathSpec.from_energy(resolve_energy(cfg, family), _x0(cfg, family), t1, cfg.direction)


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def render(cfg, payload, rows=None, header=None):
    """JSON document, or CSV of ``rows`` (falling back to the flat payload)."""
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        if rows is None:
            flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
            header, rows = list(flat), [list(flat.values())]
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if x is None else repr(x) if isinstance(x, float) else x for x in row])
        return buf.getvalue()
    doc = {"schema": SCHEMA, "command": cfg.command, **payload, "config": cfg.to_dict()}
    return json.dumps(_clean(doc), indent=2) + "\n"


def _family_doc(family):
    return {"name": family.name, **family_params(family)}


def _pool_map(fn, items, threads):
    workers = threads if threads is not None else (os.cpu_count() or 1)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _grid(lo, hi, steps):
    if steps < 1:
        raise BadInput("--steps must be positive")
    if steps == 1:
        return [hi]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


# ----------------------------------------------------------------------------- commands


def cmd_spectrum(cfg):
    family = build_family(cfg)
    levels = admissible_energies(family, cfg.count)
    out = [{"index": lv.index, "E": lv.E, "reduced": dict(lv.reduced)} for lv in levels]
    keys = sorted({k for lv in levels for k in lv.reduced})
    rows = [[lv.index, lv.E] + [lv.reduced.get(k) for k in keys] for lv in levels]
    note = "" if levels else "a <= 0: no real admissible energies"
    return EXIT_OK, render(cfg, {"family": _family_doc(family), "levels": out, "note": note},
                           rows, ["index", "E"] + keys)


def cmd_classify(cfg):
    fam = cfg.family
    if fam is None:
        raise BadInput("--family is required")
    direct = any(v is not None for v in (cfg.lam, cfg.nu, cfg.m, cfg.n, cfg.B))
    if direct and cfg.E is None and cfg.index is None and cfg.x1 is None:
        if fam == "hermite" and cfg.lam is not None:
            verdict = classify_hermite(cfg.lam)
        elif fam == "bessel" and cfg.nu is not None:
            verdict = classify_bessel(cfg.nu, mu_zero=(cfg.mu2 == 0.0))
        elif fam == "legendre" and cfg.m is not None and cfg.n is not None:
            verdict = classify_legendre(cfg.m, cfg.n)
        elif fam == "lame" and cfg.n is not None:
            verdict = classify_lame(cfg.n, cfg.B)
        else:
            raise BadInput(
                "reduced parameters: hermite --lambda; bessel --nu [--mu2]; legendre --m --n; lame --n [--B]"
            )
        payload = {"family": fam}
    else:
        family = build_family(cfg)
        E = resolve_energy(cfg, family)
        verdict = classify(family, E)
        payload = {"family": _family_doc(family), "E": E}
    payload["verdict"] = verdict.to_dict()
    row = verdict.to_dict()
    return EXIT_OK, render(cfg, payload, [[row["status"], row["case_id"], row["spectrum"], row["note"]]],
                           ["status", "case_id", "spectrum", "note"])


def cmd_phi12(cfg):
    family = build_family(cfg)
    path = resolve_path(cfg, family)
    E = path_energy(path)
    verdict = classify(family, E)
    closed, note = None, ""
    try:
        closed = phi12_closed(family, level_for_path(family, path), path, focal_tol=None)
    except (NotIntegrableError, ClosedFormUnavailable, QuadratureError) as exc:
        note = str(exc)
    fm = integrate_fundamental_many(family, E, path, [path.t1], cfg.tol)[0]
    oracle = fm.phi12
    payload = {
        "family": _family_doc(family),
        "path": {"x0": path.x0, "x1": path.x1, "t1": path.t1},
        "E": E,
        "verdict": verdict.status.value,
        "oracle": oracle,
        "det_drift": wronskian_drift(fm),
    }
    if closed is not None:
        diff = abs(closed - oracle)
        payload.update(closed=closed, abs_diff=diff, rel_diff=diff / abs(oracle) if oracle else math.inf)
    if note:
        payload["note"] = note
    value = closed if closed is not None else oracle
    focal = abs(value) <= max(1e-12, 100.0 * cfg.tol) * max(1.0, path.t1)
    payload["focal"] = focal
    if focal:
        payload["warning"] = f"phi12({path.t1}) ~ 0: focal point, the propagator is undefined here"
        print(f"warning: {payload['warning']}", file=sys.stderr)
    return EXIT_OK, render(cfg, payload)


def cmd_propagate(cfg):
    family = build_family(cfg)
    path = resolve_path(cfg, family)
    res = evaluate_phi12(family, path, tol=cfg.tol)
    k = kwkb(path, res.value, cfg.hbar, res.source)
    payload = {
        "family": _family_doc(family),
        "path": {"x0": path.x0, "x1": path.x1, "t1": path.t1},
        "E": path_energy(path),
        "phi12": res.value,
        **k.to_dict(),
    }
    return EXIT_OK, render(cfg, payload)


def _validate_level(item):
    family, E, x0, direction, times, tol, inject = item
    path = PathSpec.from_energy(E, x0, max(times), direction)
    level = level_for_path(family, path)
    fms = integrate_fundamental_many(family, E, path, times, tol)
    rows = []
    for t, fm in zip(times, fms):
        try:
            closed = phi12_closed(family, level, path, t1=t, focal_tol=None)
        except (ClosedFormUnavailable, QuadratureError) as exc:
            rows.append((t, None, fm.phi12, None, wronskian_drift(fm), "skipped", str(exc)))
            continue
        if inject:
            closed *= 1.0 + 1e-5
        rel = abs(closed - fm.phi12) / abs(fm.phi12) if fm.phi12 else math.inf
        rows.append((t, closed, fm.phi12, rel, wronskian_drift(fm), None, ""))
    return rows


def cmd_validate(cfg):
    family = build_family(cfg)
    times = _grid(cfg.t_min, cfg.t_max, cfg.steps)
    if min(times) <= 0:
        raise BadInput("validation times must be positive")
    x0 = _x0(cfg, family)
    if family.name == "constant":
        energies = [(None, cfg.E if cfg.E is not None else 0.5)]
    elif cfg.E is not None:
        energies = [(None, cfg.E)]
    else:
        labels = cfg.levels if cfg.levels is not None else DEFAULT_LEVELS[family.name]
        found = {lv.index: lv.E for lv in admissible_energies(family, max(labels) + 1)}
        missing = [k for k in labels if k not in found]
        if missing:
            raise BadInput(f"no admissible levels with labels {missing}")
        energies = [(k, found[k]) for k in labels]
    items = [(family, E, x0, cfg.direction, times, cfg.tol, cfg.inject_fault) for _, E in energies]
    results = _pool_map(_validate_level, items, cfg.threads)
    rows, checked, failed = [], 0, 0
    for (label, E), level_rows in zip(energies, results):
        for t, closed, oracle, rel, drift, status, why in level_rows:
            if status is None:
                checked += 1
                status = "pass" if rel <= cfg.rtol else "fail"
                failed += status == "fail"
            rows.append([label, E, t, closed, oracle, rel, drift, status])
    ok = checked > 0 and failed == 0
    payload = {
        "family": _family_doc(family),
        "rtol": cfg.rtol,
        "checked": checked,
        "failed": failed,
        "skipped": sum(r[-1] == "skipped" for r in rows),
        "max_rel": max((r[5] for r in rows if r[5] is not None), default=None),
        "passed": ok,
        "rows": [dict(zip(("index", "E", "t1", "closed", "oracle", "rel", "det_drift", "status"), r)) for r in rows],
    }
    header = ["index", "E", "t1", "closed", "oracle", "rel", "det_drift", "status"]
    if not ok:
        print(f"validation failed: {failed} of {checked} points beyond rtol={cfg.rtol}", file=sys.stderr)
    return (EXIT_OK if ok else EXIT_VALIDATION), render(cfg, payload, rows, header)


def _sweep_point(item):
    family, path, tol, hbar = item
    try:
        res = evaluate_phi12(family, path, tol=tol)
        phi = res.value
    except FocalPointError:
        phi = phi12_numeric(family, path_energy(path), path, path.t1, tol)
    det = path.t1 * phi
    try:
        k = kwkb(path, phi, hbar)
        return phi, det, k.modulus, k.phase
    except FocalPointCrossed:
        return phi, det, (math.inf if det == 0 else math.nan), math.nan


def cmd_sweep(cfg):
    family = build_family(cfg)
    if cfg.param is None:
        times = _grid(cfg.t_min, cfg.t_max, cfg.steps)
        if min(times) <= 0:
            raise BadInput("sweep times must be positive")
        E = resolve_energy(cfg, family)
        x0 = _x0(cfg, family)
        direction = cfg.direction
        if cfg.E is None and cfg.index is None:
            direction = cfg.x1 - x0
        keys = times
        items = [(family, PathSpec.from_energy(E, x0, t, direction), cfg.tol, cfg.hbar) for t in times]
        header = list(SWEEP_HEADER)
    else:
        params = family_params(family)
        if cfg.param not in params:
            raise BadInput(f"{family.name} has no parameter {cfg.param!r}; choose from {sorted(params)}")
        if cfg.p_min is None or cfg.p_max is None:
            raise BadInput("--p-min and --p-max are required with --param")
        keys = _grid(cfg.p_min, cfg.p_max, cfg.steps)
        path = resolve_path(cfg, family)
        items = []
        for value in keys:
            try:
                fam = make_family(family.name, **{**params, cfg.param: value})
            except WKBError as exc:
                raise BadInput(f"{cfg.param}={value}: {exc}") from None
            items.append((fam, path, cfg.tol, cfg.hbar))
        header = [cfg.param] + list(SWEEP_HEADER[1:])
    results = _pool_map(_sweep_point, items, cfg.threads)
    rows = [[key, *vals] for key, vals in zip(keys, results)]
    payload = {"family": _family_doc(family), "columns": header, "rows": rows}
    return EXIT_OK, render(cfg, payload, rows, header)


HANDLERS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "phi12": cmd_phi12,
    "propagate": cmd_propagate,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
}


def run(argv=None):
    """(exit code, output text); errors are reported on stderr."""
    try:
        cfg = parse_config(argv)
        code, text = HANDLERS[cfg.command](cfg)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT, ""
    except WKBError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN, ""
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    return code, text


def main(argv=None):
    return run(argv)[0]


if __name__ == "__main__":
    raise SystemExit(main())
