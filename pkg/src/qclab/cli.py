"""Scenario-driven experiment runner.

A scenario is an INI file with the sections below.  Keys are validated
strictly: an unknown section, key, catalog name or malformed value is a
configuration error (exit code 2) and nothing is written.

.. code-block:: ini

    [scenario]
    name = sphere_rho
    n = 129                 ; nodes per axis, at least 33
    seed = 0                ; optional, drives randomized diagnostics

    [domain]
    kind = disk             ; disk | ellipse | polar (plus their parameters)

    [surface]
    kind = sphere_cap       ; constant | any surface catalog entry
    radius = 1.0

    [boundary]
    expr = exp(i*(t + 0.3*sin(t)))

    [solver]
    kind = rho_harmonic     ; laplace | poisson_extension | rho_harmonic | general_elliptic
    tol = 1e-8

    [diagnostics]
    run = beltrami, fit_poisson
    m_sweep = 0, 0.25, 0.5, 1

    [expect]
    poisson_collapse = true

Usage::

    python -m qclab run scenario.ini --out results
    python -m qclab suite scenarios/ --out results
    python -m qclab catalog sphere
"""
from __future__ import annotations

import argparse
import configparser
import inspect
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .conformal_plane import (MAP_CATALOG, derivative_bounds, identity, mobius_automorphism,
                              theodorsen_map)
from .domains import DOMAIN_CATALOG
from .errors import ConfigError, ConvergenceError, QCLabError
from .expr import CONSTANTS, FUNCTIONS, VARIABLES, compile_expression
from .field import MIN_NODES, DiskGrid, dirichlet_energy
from .qc_diagnostics import (beltrami, bilipschitz_probe, check_component_inequality,
                             collar_profile, composition_laplacian_check,
                             fit_poisson_constants, to_json, verify_gradient_chain)
from .solver import (EllipticCoeffs, poisson_extension, solve_general_elliptic,
                     solve_laplace_dirichlet, solve_rho_harmonic)
from .surface_chart import (SURFACE_CATALOG, ConformalFactor, chart_constants,
                            conformal_factor, weighted_energy)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

SOLVERS = ("laplace", "poisson_extension", "rho_harmonic", "general_elliptic")
DIAGNOSTICS = ("beltrami", "fit_poisson", "component_inequality", "gradient_chain",
               "collar_profile", "bilipschitz", "chart_constants", "derivative_bounds",
               "composition", "energy_transfer")
ELLIPTIC_KEYS = ("alpha", "beta", "gamma", "a1", "b1", "c1", "a", "b", "c", "d")
SECTIONS = {
    "scenario": {"name", "n", "seed"},
    "domain": None,        # depends on kind
    "surface": None,       # depends on kind
    "boundary": {"expr"},
    "solver": {"kind", "tol", "method", "relaxation", "max_outer", "max_sweeps",
               *ELLIPTIC_KEYS},
    "diagnostics": {"run", "m_sweep", "n_collars"},
    "expect": {"k_max", "collar", "poisson_collapse", "residual_max", "converged",
               "energy_rel_err"},
}
REQUIRED = {"scenario": ("name",), "boundary": ("expr",), "solver": ("kind",)}


def _params_of(ctor):
    return [p for p in inspect.signature(ctor).parameters if p != "name"]


def _float(section, key, value):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {value!r}") from None


def _floats(section, key, value):
    try:
        return [float(v) for v in value.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a list of numbers") from None


def _bool(section, key, value):
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key}: expected true/false, got {value!r}")


# ----------------------------------------------------------------------
# scenario
# ----------------------------------------------------------------------
@dataclass
class Scenario:
    """Validated scenario: the raw key/value ``config`` plus built objects.

    ``config`` maps section names to ``{key: string}``; it is what the report
    echoes and what :meth:`from_dict` reads back.
    """

    config: dict
    name: str = ""
    n: int = 65
    seed: int = 0
    built: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_file(cls, path):
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"),
                                           strict=True)
        parser.optionxform = str
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (configparser.Error, UnicodeDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
        return cls.from_dict({s: dict(parser.items(s)) for s in parser.sections()})

    @classmethod
    def from_dict(cls, config):
        config = {s: {k: str(v).strip() for k, v in kv.items()} for s, kv in config.items()}
        sc = cls(config)
        sc._validate()
        return sc

    def to_ini(self):
        lines = []
        for s, kv in self.config.items():
            lines.append(f"[{s}]")
            lines.extend(f"{k} = {v}" for k, v in kv.items())
            lines.append("")
        return "\n".join(lines)

    def with_overrides(self, n=None, seed=None):
        cfg = {s: dict(kv) for s, kv in self.config.items()}
        if n is not None:
            cfg["scenario"]["n"] = str(int(n))
        if seed is not None:
            cfg["scenario"]["seed"] = str(int(seed))
        return Scenario.from_dict(cfg)

    # ------------------------------------------------------------------
    def _validate(self):
        cfg = self.config
        for s in cfg:
            if s not in SECTIONS:
                raise ConfigError(f"unknown section [{s}]")
        for s, keys in REQUIRED.items():
            for k in keys:
                if k not in cfg.get(s, {}):
                    raise ConfigError(f"missing required key [{s}] {k}")
        for s, allowed in SECTIONS.items():
            if allowed is None:
                continue
            for k in cfg.get(s, {}):
                if k not in allowed:
                    raise ConfigError(f"unknown key [{s}] {k}")
        sc = cfg["scenario"]
        self.name = sc["name"]
        if not self.name or any(c in self.name for c in "/\\ "):
            raise ConfigError("scenario name must be a non-empty word")
        self.n = int(_float("scenario", "n", sc.get("n", "65")))
        if self.n < MIN_NODES:
            raise ConfigError(f"[scenario] n must be at least {MIN_NODES}")
        self.seed = int(_float("scenario", "seed", sc.get("seed", "0")))
        b = self.built
        b["domain"] = self._build_catalog("domain", DOMAIN_CATALOG, default="disk")
        b["surface"] = self._build_surface()
        b["boundary"] = compile_expression(cfg["boundary"]["expr"])
        self._validate_solver()
        self._validate_diagnostics()
        self._validate_expect()

    def _build_catalog(self, section, catalog, default):
        kv = dict(self.config.get(section, {"kind": default}))
        kind = kv.pop("kind", default)
        if kind not in catalog:
            raise ConfigError(f"[{section}] unknown kind {kind!r}; "
                              f"choose from {', '.join(sorted(catalog))}")
        ctor = catalog[kind]
        allowed = _params_of(ctor)
        args = {}
        for k, v in kv.items():
            if k not in allowed:
                raise ConfigError(f"unknown key [{section}] {k} for kind {kind!r}")
            args[k] = _floats(section, k, v) if k == "coeffs" else \
                (complex(v.replace(" ", "").replace("i", "j")) if k == "center" else
                 _float(section, k, v))
        try:
            return kind, ctor(**args)
        except QCLabError as exc:
            raise ConfigError(f"[{section}] {exc}") from None

    def _build_surface(self):
        kv = dict(self.config.get("surface", {"kind": "constant"}))
        if kv.get("kind", "constant") == "constant":
            extra = set(kv) - {"kind", "value"}
            if extra:
                raise ConfigError(f"unknown key [surface] {sorted(extra)[0]} for kind 'constant'")
            try:
                return "constant", ConformalFactor.constant(_float("surface", "value",
                                                                   kv.get("value", "1")))
            except QCLabError as exc:
                raise ConfigError(f"[surface] {exc}") from None
        return self._build_catalog("surface", SURFACE_CATALOG, default="flat")

    def _validate_solver(self):
        sv = self.config["solver"]
        kind = sv["kind"]
        if kind not in SOLVERS:
            raise ConfigError(f"[solver] unknown kind {kind!r}; choose from {', '.join(SOLVERS)}")
        for k in ("tol", "relaxation"):
            if k in sv and not _float("solver", k, sv[k]) > 0:
                raise ConfigError(f"[solver] {k} must be positive")
        for k in ("max_outer", "max_sweeps"):
            if k in sv and not _float("solver", k, sv[k]) >= 1:
                raise ConfigError(f"[solver] {k} must be at least 1")
        if "method" in sv and sv["method"] not in ("sor", "direct"):
            raise ConfigError("[solver] method must be sor or direct")
        coef = [k for k in ELLIPTIC_KEYS if k in sv]
        if coef and kind != "general_elliptic":
            raise ConfigError(f"[solver] {coef[0]} only applies to general_elliptic")
        vals = {k: _float("solver", k, sv[k]) for k in coef}
        if kind == "general_elliptic":
            try:
                self.built["elliptic"] = EllipticCoeffs(**vals)
            except QCLabError as exc:
                raise ConfigError(f"[solver] {exc}") from None
        if kind == "poisson_extension" and self.built["domain"][0] != "disk":
            raise ConfigError("[solver] poisson_extension needs a disk domain")

    def _validate_diagnostics(self):
        dg = self.config.get("diagnostics", {})
        names = [x.strip() for x in dg.get("run", "").split(",") if x.strip()]
        for x in names:
            if x not in DIAGNOSTICS:
                raise ConfigError(f"[diagnostics] unknown diagnostic {x!r}")
        if len(set(names)) != len(names):
            raise ConfigError("[diagnostics] a diagnostic is listed twice")
        self.built["diagnostics"] = names
        self.built["m_sweep"] = _floats("diagnostics", "m_sweep",
                                        dg.get("m_sweep", "0, 0.125, 0.25, 0.5, 0.75, 1, 2"))
        if "n_collars" in dg:
            self.built["n_collars"] = int(_float("diagnostics", "n_collars", dg["n_collars"]))
        surface = self.built["surface"][0]
        if "chart_constants" in names and surface == "constant":
            raise ConfigError("[diagnostics] chart_constants needs a surface catalog entry")
        if "composition" in names and self.built["domain"][0] != "disk":
            raise ConfigError("[diagnostics] composition needs a disk domain")

    def _validate_expect(self):
        ex = self.config.get("expect", {})
        for k in ("k_max", "residual_max", "energy_rel_err"):
            if k in ex:
                _float("expect", k, ex[k])
        if "collar" in ex and ex["collar"] not in ("plateau", "growth"):
            raise ConfigError("[expect] collar must be plateau or growth")
        for k in ("poisson_collapse", "converged"):
            if k in ex:
                _bool("expect", k, ex[k])
        need = {"k_max": "beltrami", "collar": "collar_profile", "poisson_collapse": "fit_poisson",
                "energy_rel_err": "energy_transfer"}
        for k, d in need.items():
            if k in ex and d not in self.built["diagnostics"]:
                raise ConfigError(f"[expect] {k} requires the {d} diagnostic")
        if "poisson_collapse" in ex and self.built["surface"][0] == "constant":
            raise ConfigError("[expect] poisson_collapse needs a surface catalog entry")


# ----------------------------------------------------------------------
# running
# ----------------------------------------------------------------------
def _boundary_on_domain(sc, grid):
    """Boundary data as a function of the grid's curve parameter.

    On the disk the expression is used as is.  On other domains it is
    transplanted from the unit circle through the Theodorsen map.
    """
    bfun = sc.built["boundary"]
    dkind, dom = sc.built["domain"]
    if dkind == "disk":
        return bfun, None
    cmap = theodorsen_map(dom)
    inv = cmap.inverse_correspondence
    return (lambda t: bfun(inv(np.asarray(t, dtype=float)))), cmap


def _solve(sc, grid, bfun):
    sv = sc.config["solver"]
    kind = sv["kind"]
    tol = float(sv.get("tol", "1e-10" if kind in ("laplace",) else "1e-8"))
    relaxation = float(sv.get("relaxation", "0.5"))
    max_outer = int(float(sv.get("max_outer", "500")))
    if kind == "laplace":
        return solve_laplace_dirichlet(grid, bfun, tol=tol, method=sv.get("method", "sor"),
                                       max_sweeps=int(float(sv.get("max_sweeps", "100000"))))
    if kind == "poisson_extension":
        f = poisson_extension(bfun, grid)
        object.__setattr__(f, "info", {"method": "poisson_extension", "residual": 0.0,
                                       "iterations": 0})
        return f
    if kind == "rho_harmonic":
        return solve_rho_harmonic(_factor(sc), bfun, grid, tol=tol, relaxation=relaxation,
                                  max_outer=max_outer)
    return solve_general_elliptic(sc.built["elliptic"], bfun, grid, tol=tol,
                                  relaxation=relaxation, max_outer=max_outer)


def _factor(sc):
    kind, obj = sc.built["surface"]
    if kind == "constant":
        return obj
    return conformal_factor(obj)


def _solver_record(f):
    info = dict(getattr(f, "info", {}))
    info.pop("reduced", None)
    keep = ("method", "iterations", "residual", "raw_residual", "scaled_residual",
            "relaxation", "omega", "history")
    return {k: info[k] for k in keep if k in info}


def _diagnose(name, sc, f, grid, bfun, cmap, solver_rec, artifacts):
    built = sc.built
    if name == "beltrami":
        b = beltrami(f)
        artifacts["mu"] = b
        return b.as_dict()
    if name == "fit_poisson":
        res = float(solver_rec.get("residual", 0.0))
        sweep = list(built["m_sweep"])
        out = {}
        if built["surface"][0] != "constant":
            cc = chart_constants(built["surface"][1], grid)
            sweep.append(cc.M_prime / 2)
            out["M_prime"] = cc.M_prime
        fit = fit_poisson_constants(f, sorted(set(sweep)), residual=res)
        artifacts["poisson_fit"] = fit
        out.update(fit.as_dict())
        if "M_prime" in out:
            half = out["M_prime"] / 2
            tail = [n for m, n in fit.curve if m >= half - 1e-15]
            out["N_max_beyond_half_M_prime"] = max(tail)
            out["collapse"] = bool(max(tail) <= 10 * res)
        return out
    if name == "component_inequality":
        fit = fit_poisson_constants(f, built["m_sweep"])
        M, N = fit.chosen
        rep = check_component_inequality(f, M, N)
        return dict(rep.as_dict(), M=M, N=N)
    if name == "gradient_chain":
        return verify_gradient_chain(f).as_dict()
    if name == "collar_profile":
        cp = collar_profile(f, built.get("n_collars"))
        artifacts["collar"] = cp
        return cp.as_dict()
    if name == "bilipschitz":
        return bilipschitz_probe(f, built.get("n_collars")).as_dict()
    if name == "chart_constants":
        return chart_constants(built["surface"][1], grid).as_dict()
    if name == "derivative_bounds":
        m = cmap if cmap is not None else identity()
        db = derivative_bounds(m, DiskGrid(n=grid.n), built["domain"][1].smoothness)
        return {"map": m.name, "source": m.source, **db._asdict()}
    if name == "composition":
        rng = np.random.default_rng(sc.seed)

        def rand_mobius():
            a = 0.4 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            return mobius_automorphism(a, rng.uniform(0, 2 * np.pi))

        phi, eta = rand_mobius(), rand_mobius()
        pe = f if f.func is not None else poisson_extension(bfun, grid)
        rep = composition_laplacian_check(phi, pe, eta)
        return dict(rep.as_dict(), phi=phi.info, eta=eta.info)
    if name == "energy_transfer":
        kind, patch = built["surface"]
        if kind == "constant":
            raise ConfigError("energy_transfer needs a surface catalog entry")
        e_direct = dirichlet_energy(f.apply(patch.X))
        e_weighted = weighted_energy(f, conformal_factor(patch))
        return {"dirichlet_energy": e_direct, "weighted_energy": e_weighted,
                "rel_err": abs(e_direct - e_weighted) / max(abs(e_direct), 1e-300)}
    raise ConfigError(f"unknown diagnostic {name!r}")  # pragma: no cover


def _checks(sc, results, solver_rec, converged):
    ex = sc.config.get("expect", {})
    checks = []

    def add(name, expected, measured, ok):
        checks.append({"name": name, "expected": expected, "measured": measured,
                       "pass": bool(ok)})

    if _bool("expect", "converged", ex.get("converged", "true")):
        add("converged", True, converged, converged)
    if "residual_max" in ex:
        r = solver_rec.get("residual", np.inf)
        add("residual_max", float(ex["residual_max"]), r, converged and r <= float(ex["residual_max"]))
    if "k_max" in ex:
        k = results.get("beltrami", {}).get("k", np.inf)
        add("k_max", float(ex["k_max"]), k, k <= float(ex["k_max"]))
    if "collar" in ex:
        v = results.get("collar_profile", {}).get("verdict")
        add("collar", ex["collar"], v, v == ex["collar"])
    if "poisson_collapse" in ex:
        fit = results.get("fit_poisson", {})
        got = fit.get("collapse")
        want = _bool("expect", "poisson_collapse", ex["poisson_collapse"])
        add("poisson_collapse", want, fit.get("N_max_beyond_half_M_prime"), got is want)
    if "energy_rel_err" in ex:
        e = results.get("energy_transfer", {}).get("rel_err", np.inf)
        add("energy_rel_err", float(ex["energy_rel_err"]), e, e <= float(ex["energy_rel_err"]))
    return checks


def run_scenario(sc: Scenario, out_dir=None):
    """Build the grid, solve, run the diagnostics in order and write the artifacts.

    Returns the report dictionary.  Files written to ``out_dir``:
    ``<name>.report.json`` plus ``<name>.<field>.csv`` for the solution and
    for each diagnostic with tabular output.
    """
    t_start = time.perf_counter()
    timing = {}
    grid = DiskGrid(sc.built["domain"][1], sc.n)
    bfun, cmap = _boundary_on_domain(sc, grid)
    timing["setup"] = time.perf_counter() - t_start
    t0 = time.perf_counter()
    results, errors, artifacts = {}, {}, {}
    f = None
    try:
        f = _solve(sc, grid, bfun)
        converged = True
        solver_rec = _solver_record(f)
    except ConvergenceError as exc:
        converged = False
        solver_rec = {"error": str(exc), "history": exc.history}
    timing["solve"] = time.perf_counter() - t0
    if f is not None:
        for name in sc.built["diagnostics"]:
            t0 = time.perf_counter()
            try:
                results[name] = _diagnose(name, sc, f, f.grid, bfun, cmap, solver_rec, artifacts)
            except QCLabError as exc:
                errors[name] = f"{type(exc).__name__}: {exc}"
                results[name] = {"error": errors[name]}
            timing[name] = time.perf_counter() - t0
    checks = _checks(sc, results, solver_rec, converged)
    passed = converged and not errors and all(c["pass"] for c in checks)
    timing["total"] = time.perf_counter() - t_start
    report = {
        "scenario": sc.config,
        "solver": dict(solver_rec, converged=converged),
        "results": results,
        "checks": checks,
        "passed": passed,
        "provenance": {"version": __version__, "seed": sc.seed,
                       "grid": {"n": (f.grid if f is not None else grid).n,
                                "h": (f.grid if f is not None else grid).h,
                                "interior_nodes": int((f.grid if f is not None else grid)
                                                      .interior.sum())},
                       "timing": timing},
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if f is not None:
            f.to_csv(out / f"{sc.name}.solution.csv")
        for key, obj in sorted(artifacts.items()):
            obj.to_csv(out / f"{sc.name}.{key}.csv")
        to_json(report, out / f"{sc.name}.report.json")
    return report


# ----------------------------------------------------------------------
# catalog and suite
# ----------------------------------------------------------------------
def catalog_entries():
    entries = [f"domain {k}({', '.join(_params_of(v))})" for k, v in DOMAIN_CATALOG.items()]
    entries += [f"surface {k}({', '.join(_params_of(v))})" for k, v in SURFACE_CATALOG.items()]
    entries.append("surface constant(value)")
    entries += [f"map {k}({', '.join(_params_of(v))})" for k, v in MAP_CATALOG.items()]
    entries.append("map theodorsen(domain)")
    entries += [f"solver {k}" for k in SOLVERS]
    entries += [f"diagnostic {k}" for k in DIAGNOSTICS]
    entries += [f"boundary {k}()" for k in FUNCTIONS]
    entries += [f"boundary {k}" for k in (*VARIABLES, *CONSTANTS)]
    return sorted(entries)


def list_catalog(filter_text=""):
    """Sorted catalog listing; lines not containing ``filter_text`` are dropped."""
    return [e for e in catalog_entries() if filter_text in e]


def run_suite(directory, out_dir=None, n=None, seed=None):
    """Run every ``*.ini`` scenario in ``directory`` (sorted by file name).

    Unreadable or invalid files are recorded as failures; the suite goes on.
    Returns ``(rows, any_failure)`` with one row per file.
    """
    rows = []
    for path in sorted(Path(directory).glob("*.ini")):
        t0 = time.perf_counter()
        try:
            sc = Scenario.from_file(path).with_overrides(n, seed)
            rep = run_scenario(sc, out_dir)
            status = "pass" if rep["passed"] else "fail"
            detail = "; ".join(f"{c['name']}={c['measured']}" for c in rep["checks"]
                               if not c["pass"]) or "ok"
            failed_diag = [k for k, v in rep["results"].items() if "error" in v]
            if failed_diag:
                detail += "; errors in " + ", ".join(failed_diag)
        except (ConfigError, OSError) as exc:
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        rows.append({"file": path.name, "status": status, "detail": detail,
                     "seconds": round(time.perf_counter() - t0, 3)})
    failed = any(r["status"] != "pass" for r in rows)
    if out_dir is not None and rows:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        to_json({"rows": rows, "failed": failed}, Path(out_dir) / "suite.report.json")
    return rows, failed


def format_table(rows):
    if not rows:
        return "(no scenarios)"
    w = max(len(r["file"]) for r in rows)
    lines = [f"{'scenario':<{w}}  status  detail"]
    lines += [f"{r['file']:<{w}}  {r['status']:<6}  {r['detail']}" for r in rows]
    return "\n".join(lines)


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------
def build_parser():
    p = argparse.ArgumentParser(prog="qclab", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--grid", type=int, default=None, help="override grid resolution n")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized diagnostics")
    r = sub.add_parser("run", parents=[common], help="run one scenario file")
    r.add_argument("scenario")
    s = sub.add_parser("suite", parents=[common], help="run every *.ini in a directory")
    s.add_argument("directory")
    c = sub.add_parser("catalog", help="list catalog entries")
    c.add_argument("filter", nargs="?", default="")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "catalog":
        for line in list_catalog(args.filter):
            print(line)
        return EXIT_OK
    if args.command == "run":
        try:
            sc = Scenario.from_file(args.scenario).with_overrides(args.grid, args.seed)
        except (ConfigError, OSError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        rep = run_scenario(sc, args.out or ".")
        for c in rep["checks"]:
            print(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}: measured {c['measured']} "
                  f"(expected {c['expected']})")
        for k, v in rep["results"].items():
            if "error" in v:
                print(f"FAIL {k}: {v['error']}")
        print(f"{sc.name}: {'pass' if rep['passed'] else 'fail'}")
        return EXIT_OK if rep["passed"] else EXIT_FAIL
    if not os.path.isdir(args.directory):
        print(f"config error: {args.directory} is not a directory", file=sys.stderr)
        return EXIT_CONFIG
    rows, failed = run_suite(args.directory, args.out, args.grid, args.seed)
    print(format_table(rows))
    return EXIT_FAIL if failed else EXIT_OK
