"""Configuration-driven experiment runner.

Reads a JSON config describing a reflection-group setup, a symbol, and a
list of checks; runs the checks on a bounded worker pool; writes one JSON
report per check plus a flat summary CSV and a plot-ready decay CSV.

Determinism contract: re-running an unchanged config overwrites all output
files with identical bytes.  Every output filename embeds a hash of the
config bytes.  Wall-clock timings are printed to the console only.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .errors import ConfigError, DunklLabError
from .forms import BilinearFormSpec
from .harness import (check_auxiliary_bounds, check_garding,
                      check_heat_gaussian_bound, check_thm1_decay,
                      check_two_point_bound)
from .kernels import KernelSpec, kernel_identity_check
from .measure import WeightedContext
from .report import VerificationReport, to_builtin
from .root_systems import RootSystemSpec, product_z2, rank1

OUTPUT_DIR_ENV = "DUNKLLAB_OUTPUT_DIR"
CONFIG_HASH_LEN = 12


# ---------------------------------------------------------------------------
# check registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckEntry:
    """One runnable check kind: dispatcher, accepted params, catalog text."""
    kind: str
    allowed_params: frozenset
    description: str


def _run_thm1(ctx, spec, params):
    return check_thm1_decay(ctx, spec, params)


def _run_thm2(ctx, spec, params):
    return check_two_point_bound(ctx, spec, params=params)


def _run_heat_bound(ctx, spec, params):
    t_set = tuple(float(t) for t in params.get("t_set", (0.5, 1.0, 2.0)))
    return check_heat_gaussian_bound(ctx, t_set=t_set, params=params)


def _run_garding(ctx, spec, params):
    ell = int(params.get("ell", spec.ell if spec.ell in (1, 2) else 1))
    dirs = params.get("directions")
    if dirs is None:
        dirs = spec.directions if spec.dim == ctx.dim else \
            tuple(tuple(row) for row in np.eye(ctx.dim))
    dirs = tuple(tuple(float(c) for c in z) for z in dirs)
    eps = float(params.get("eps", 0.0))
    s_set = tuple(float(s) for s in params.get("s_set", (0.5, 1.0, 2.0)))
    template = BilinearFormSpec(ell=ell, s=1.0, eps=eps, directions=dirs)
    return check_garding(ctx, template, s_set=s_set, params=params)


def _kernel_check_runner(inner_kind: str, uses_spec: bool):
    def _run(ctx, spec, params):
        if uses_spec:
            params.setdefault("spec", spec)
        return kernel_identity_check(ctx, inner_kind, params)
    return _run


def _aux_check_runner(kind: str, inject_spec: bool = False):
    def _run(ctx, spec, params):
        if inject_spec:
            params.setdefault("spec", spec)
        return check_auxiliary_bounds(ctx, kind, params)
    return _run


_GRID_PARAMS = ("box", "n_half", "freq_box", "freq_n_half")

CHECK_REGISTRY: dict[str, CheckEntry] = {}
_DISPATCH: dict[str, object] = {}


def _register(kind, runner, allowed, description):
    CHECK_REGISTRY[kind] = CheckEntry(kind, frozenset(allowed), description)
    _DISPATCH[kind] = runner


_register(
    "thm1-decay", _run_thm1,
    ("p_rtol", "r2_min", "check_stability", "freq_box", "freq_n_half"),
    "single-point decay of the generalized heat kernel: fit |q_1(x)| ~ "
    "C exp(-c |x|^p) along rays; pass needs p within tolerance of "
    "2l/(2l-1), r^2 >= 0.995, and a refinement-stable exponent")
_register(
    "thm2-two-point", _run_thm2,
    ("freq_box", "freq_n_half"),
    "two-point bound: calibrate (c, C) in |q_1(x,y)| * "
    "max(w(B(x,1)), w(B(y,1))) <= C exp(-c d(x,y)^{2l/(2l-1)}) and "
    "verify the bound on held-out pairs with 1.05 slack")
_register(
    "heat-gaussian-bound", _run_heat_bound,
    ("t_set",),
    "Gaussian heat bound: calibrate (c, C) in h_t(x,y) * "
    "max(w(B(x,sqrt(t))), w(B(y,sqrt(t)))) <= C exp(-c d(x,y)^2/t); "
    "at k=0 the fitted rate recovers the classical 1/4")
_register(
    "garding", _run_garding,
    ("ell", "eps", "directions", "s_set", "garding_c_cap"),
    "coercivity of the quadratic form: maximize alpha in -b_{s,eps}(f,f) "
    "+ C s^{2l} ||f||_{H_s}^2 >= alpha ||f||_{V_{l,s}}^2 by linear "
    "program on calibration functions, verified on held-out functions")
_register(
    "kernel-mass", _kernel_check_runner("mass", uses_spec=False),
    ("t", "tol", "points"),
    "unit mass: integral of h_t(x, .) against the weighted measure "
    "equals 1 for each probe point x")
_register(
    "kernel-symmetry", _kernel_check_runner("symmetry", uses_spec=True),
    ("tol", "n_pairs", "radius", "spec", "t"),
    "symmetry of the two-point kernel: q_t(x,y) = q_t(y,x) on sampled "
    "pairs")
_register(
    "kernel-positivity", _kernel_check_runner("positivity", uses_spec=False),
    ("t_set", "n_pairs", "radius"),
    "positivity of the heat kernel: h_t(x,y) > 0 on sampled pairs and "
    "times")
_register(
    "kernel-semigroup", _kernel_check_runner("semigroup", uses_spec=True),
    ("tol", "spec", "t", *_GRID_PARAMS),
    "semigroup law: q_{t/2} convolved with itself equals q_t in sup norm")
_register(
    "kernel-scaling", _kernel_check_runner("scaling", uses_spec=True),
    ("tol", "t_values", "spec", "t"),
    "parabolic scaling: q_t(x) = t^{-N_h/(2l)} "
    "q_1^{(eps t^{(l-1)/l})}(t^{-1/(2l)} x) with N_h the homogeneous "
    "dimension")
_register(
    "kernel-decomposition",
    _kernel_check_runner("decomposition", uses_spec=True),
    ("eps0", "tol", "spec", "t", *_GRID_PARAMS),
    "perturbative decomposition: q_1 equals q_1^{(eps+eps0)} convolved "
    "with two copies of h_{eps0/2}")
_register(
    "kernel-laplacian",
    _kernel_check_runner("laplacian-consistency", uses_spec=False),
    ("tol",),
    "Dunkl Laplacian consistency: the divided-difference formula agrees "
    "with composing first-order Dunkl operators, sum_j T_j^2")
_register(
    "e-bound", _aux_check_runner("e-bound"),
    ("n", "tol"),
    "kernel bound |E(i xi, x)| <= 1 on a product grid of arguments")
_register(
    "e-lipschitz", _aux_check_runner("e-lipschitz"),
    ("stability_tol",),
    "kernel Lipschitz bound |E(i xi, x) - 1| <= C ||x|| ||xi|| with a "
    "calibration/held-out stable constant")
_register(
    "translation-lipschitz",
    _aux_check_runner("translation-lipschitz", inject_spec=True),
    ("spec", "stability_tol", "freq_box", "freq_n_half"),
    "translation Lipschitz bound: sup_y |tau_x q_1(y) - q_1(y)| <= "
    "C ||x|| over a range of shifts")
_register(
    "compact-support-l1", _aux_check_runner("compact-support-l1"),
    ("radii", "y", *_GRID_PARAMS),
    "compact-support convolution bound: ||tau_y(f * phi)||_{L1(dw)} <= "
    "C (r1 (r1 + r2))^{N_h/2} ||phi||_inf ||f||_{L1(dw)} across a grid "
    "of support radii")
_register(
    "exp-weighted-l1", _aux_check_runner("exp-weighted-l1"),
    ("eps0", "ell", "c_weight", "rel_tol", "y", "directions", *_GRID_PARAMS),
    "exponentially weighted integrability: the integral of "
    "|tau_y(q_1^{(eps0)} * h_{eps0/2})(-x)| exp(c d(x,y)^{2l/(2l-1)}) "
    "dw(x) is finite and stable under grid refinement")


# ---------------------------------------------------------------------------
# config schema
# ---------------------------------------------------------------------------

def config_schema() -> dict:
    """JSON schema for experiment configs; unknown keys are rejected."""
    kinds = sorted(CHECK_REGISTRY)
    return {
        "type": "object",
        "additionalProperties": False,
        "required": ["system", "checks"],
        "properties": {
            "system": {
                "type": "object",
                "additionalProperties": False,
                "required": ["type"],
                "properties": {
                    "type": {"enum": ["rank1", "product_z2"]},
                    "k": {"type": "number", "minimum": 0},
                    "ks": {"type": "array", "minItems": 1,
                           "items": {"type": "number", "minimum": 0}},
                },
            },
            "grid": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "box": {"type": "number", "exclusiveMinimum": 0},
                    "n_half": {"type": "integer", "minimum": 8},
                    "freq_box": {"type": "number", "exclusiveMinimum": 0},
                    "freq_n_half": {"type": "integer", "minimum": 8},
                },
            },
            "kernel": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "directions": {
                        "type": "array", "minItems": 1,
                        "items": {"type": "array", "minItems": 1,
                                  "items": {"type": "number"}},
                    },
                    "ell": {"enum": [1, 2, 3]},
                    "eps": {"type": "number", "minimum": 0},
                    "t": {"type": "number", "exclusiveMinimum": 0},
                },
            },
            "checks": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": kinds},
                        "params": {"type": "object"},
                    },
                },
            },
            "output_dir": {"type": "string"},
            "workers": {"type": "integer", "minimum": 1},
            "tolerance_overrides": {
                "type": "object",
                "additionalProperties": False,
                "properties": {k: {"type": "number", "exclusiveMinimum": 0}
                               for k in kinds},
            },
        },
    }


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = []
    for p in error.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else f".{p}" if parts
                     else str(p))
    return "".join(parts) or "(top level)"


def validate_config(config: dict) -> None:
    """Schema validation plus kind-specific parameter-key checks."""
    try:
        jsonschema.validate(config, config_schema())
    except jsonschema.ValidationError as err:
        raise ConfigError(f"config error at {_json_path(err)}: "
                          f"{err.message}") from err
    system = config["system"]
    stype = system["type"]
    required = {"rank1": set(), "product_z2": {"ks"}}
    allowed = {"rank1": {"type", "k"}, "product_z2": {"type", "ks"}}
    missing = required[stype] - set(system)
    extra = set(system) - allowed[stype]
    if missing:
        raise ConfigError(f"config error at system: type {stype!r} requires "
                          f"{sorted(missing)}")
    if extra:
        raise ConfigError(f"config error at system: type {stype!r} does not "
                          f"accept {sorted(extra)}")
    for i, chk in enumerate(config["checks"]):
        entry = CHECK_REGISTRY[chk["kind"]]
        unknown = set(chk.get("params", {})) - set(entry.allowed_params)
        if unknown:
            raise ConfigError(
                f"config error at checks[{i}].params: {chk['kind']!r} does "
                f"not accept {sorted(unknown)}; accepted: "
                f"{sorted(entry.allowed_params)}")


# ---------------------------------------------------------------------------
# building blocks from config
# ---------------------------------------------------------------------------

def build_system(system_cfg: dict) -> RootSystemSpec:
    if system_cfg["type"] == "rank1":
        return rank1(float(system_cfg.get("k", 0.0)))
    return product_z2([float(k) for k in system_cfg["ks"]])


def build_context(config: dict) -> WeightedContext:
    system = build_system(config["system"])
    grid = config.get("grid", {})
    kwargs = {}
    if "box" in grid:
        kwargs["box"] = float(grid["box"])
    if "n_half" in grid:
        kwargs["n_half"] = int(grid["n_half"])
    if "freq_box" in grid:
        kwargs["freq_box"] = float(grid["freq_box"])
    if "freq_n_half" in grid:
        kwargs["freq_n_half"] = int(grid["freq_n_half"])
    return WeightedContext(system, **kwargs)


def build_kernel_spec(config: dict, dim: int) -> KernelSpec:
    kcfg = config.get("kernel")
    if not kcfg:
        return KernelSpec.heat(dim)
    dirs = kcfg.get("directions")
    if dirs is None:
        dirs = tuple(tuple(row) for row in np.eye(dim))
    else:
        dirs = tuple(tuple(float(c) for c in z) for z in dirs)
    return KernelSpec(directions=dirs, ell=int(kcfg.get("ell", 1)),
                      eps=float(kcfg.get("eps", 0.0)),
                      t=float(kcfg.get("t", 1.0)))


# ---------------------------------------------------------------------------
# report files
# ---------------------------------------------------------------------------

def _config_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()[:CONFIG_HASH_LEN]


def report_filenames(stem: str, chash: str, kinds: list[str]) -> list[str]:
    """Per-check JSON filenames; duplicate kinds get an index suffix."""
    names = []
    seen: dict[str, int] = {}
    total: dict[str, int] = {}
    for kind in kinds:
        total[kind] = total.get(kind, 0) + 1
    for kind in kinds:
        if total[kind] == 1:
            names.append(f"{stem}_{chash}_{kind}.json")
        else:
            i = seen.get(kind, 0)
            seen[kind] = i + 1
            names.append(f"{stem}_{chash}_{kind}_{i}.json")
    return names


def _flat_constant_rows(index: int, kind: str,
                        report: VerificationReport) -> list[tuple]:
    rows = [(index, kind, "pass", int(report.passed)),
            (index, kind, "margin", report.margin),
            (index, kind, "max_defect", report.max_defect),
            (index, kind, "tolerance", report.tolerance)]
    for name in sorted(report.fitted):
        value = report.fitted[name]
        if isinstance(value, (bool, int, float, np.integer, np.floating)):
            rows.append((index, kind, name, to_builtin(value)))
    return rows


def write_summary_csv(path: Path, results: list[tuple[str, VerificationReport]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check_index", "kind", "name", "value"])
    for i, (kind, report) in enumerate(results):
        writer.writerows(_flat_constant_rows(i, kind, report))
    path.write_text(buf.getvalue())


def write_decay_csv(path: Path, results: list[tuple[str, VerificationReport]]) -> None:
    """Plot-ready radius vs log|q| data from every decay check."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check_index", "radius", "abs_q", "log_abs_q"])
    for i, (kind, report) in enumerate(results):
        radii = report.fitted.get("radii")
        values = report.fitted.get("abs_q")
        if radii is None or values is None:
            continue
        for r, v in zip(radii, values):
            logv = np.log(v) if v > 0 else float("-inf")
            writer.writerow([i, repr(float(r)), repr(float(v)),
                             repr(float(logv))])
    path.write_text(buf.getvalue())


def _write_report_json(path: Path, report: VerificationReport) -> None:
    payload = json.dumps(report.to_json_dict(), sort_keys=True, indent=2)
    path.write_text(payload + "\n")


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _apply_tolerance_override(report: VerificationReport,
                              tolerance: float) -> VerificationReport:
    return VerificationReport.from_defect(
        report.check, report.params, report.max_defect, tolerance,
        fitted=report.fitted, grid=report.grid, notes=report.notes)


def _execute_one(ctx, spec, chk: dict):
    kind = chk["kind"]
    params = dict(chk.get("params", {}))
    start = time.perf_counter()
    report = _DISPATCH[kind](ctx, spec, params)
    elapsed = time.perf_counter() - start
    return report, elapsed


def run(config_path: str) -> int:
    """Execute an experiment config.

    Returns 0 if every check passed, 2 if any check failed, 1 on
    configuration or accuracy errors.
    """
    path = Path(config_path)
    try:
        raw = path.read_bytes()
    except OSError as err:
        print(f"cannot read config {config_path}: {err}")
        return 1
    try:
        config = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as err:
        print(f"{config_path}:{err.lineno}:{err.colno}: invalid JSON: "
              f"{err.msg}")
        return 1
    try:
        validate_config(config)
        ctx = build_context(config)
        spec = build_kernel_spec(config, ctx.dim)
    except (ConfigError, DunklLabError, ValueError) as err:
        print(f"configuration error: {err}")
        return 1

    out_dir = Path(os.environ.get(OUTPUT_DIR_ENV)
                   or config.get("output_dir", "reports"))
    out_dir.mkdir(parents=True, exist_ok=True)
    chash = _config_hash(raw)
    checks = config["checks"]
    overrides = config.get("tolerance_overrides", {})
    workers = int(config.get("workers", os.cpu_count() or 1))

    start = time.perf_counter()
    outcomes: list = [None] * len(checks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_execute_one, ctx, spec, chk)
                   for chk in checks]
        for i, fut in enumerate(futures):
            try:
                outcomes[i] = fut.result()
            except DunklLabError as err:
                outcomes[i] = err

    errors = [(i, err) for i, err in enumerate(outcomes)
              if isinstance(err, DunklLabError)]
    if errors:
        for i, err in errors:
            print(f"error in check {i} ({checks[i]['kind']}): {err}")
        return 1

    results: list[tuple[str, VerificationReport]] = []
    for chk, (report, elapsed) in zip(checks, outcomes):
        kind = chk["kind"]
        if kind in overrides:
            report = _apply_tolerance_override(report, float(overrides[kind]))
        results.append((kind, report))
        print(f"{report.summary_line()}  [{elapsed:.2f}s]")

    filenames = report_filenames(path.stem, chash,
                                 [kind for kind, _ in results])
    for fname, (_, report) in zip(filenames, results):
        _write_report_json(out_dir / fname, report)
    write_summary_csv(out_dir / f"{path.stem}_{chash}_summary.csv", results)
    write_decay_csv(out_dir / f"{path.stem}_{chash}_decay.csv", results)

    total = time.perf_counter() - start
    n_pass = sum(report.passed for _, report in results)
    print(f"{n_pass}/{len(results)} checks passed in {total:.2f}s; "
          f"reports in {out_dir}")
    return 0 if n_pass == len(results) else 2


def list_checks() -> list[CheckEntry]:
    """Catalog of registered check kinds in stable (sorted) order."""
    return [CHECK_REGISTRY[k] for k in sorted(CHECK_REGISTRY)]
