"""Command-line front end.

Usage::

    freeineq poincare --fn x
    freeineq refine --fn cheb:0,0,1 --kmax 3
    freeineq brascamp-lieb --potential quartic --fn "x^2"
    freeineq suite --format json --out reports.json

Exit codes: 0 when every report passes, 1 when any report fails, 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import ast
import dataclasses
import json
import math
import operator
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .cheb import REFERENCE, ChebSeries, OmegaKernel, default_nodes, divided_difference, omega_double_integral, project
from .equilibrium import Potential
from .errors import FreeIneqError
from .inequalities import (
    STATISTICAL,
    Report,
    render,
    run_brascamp_lieb,
    run_equality_case,
    run_equilibrium,
    run_interpolation,
    run_poincare,
    run_refinement,
    run_v_independence,
    run_wishart,
)
from .rmt import run_mc_fluctuations

COMMANDS = (
    "poincare",
    "refine",
    "equilibrium",
    "brascamp-lieb",
    "wishart",
    "v-independence",
    "interpolate",
    "mc-fluctuations",
    "suite",
)
FORMATS = ("json", "csv", "pretty")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    """Invalid function spec, potential spec or configuration value."""


# ------------------------------------------------------------ function specs

_FUNCS: dict[str, Callable] = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "arctan": np.arctan,
    "abs": np.abs,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _compile(node: ast.AST) -> Callable:
    if isinstance(node, ast.Expression):
        return _compile(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        v = float(node.value)
        return lambda x: v + 0.0 * x
    if isinstance(node, ast.Name):
        if node.id == "x":
            return lambda x: x
        if node.id in _CONSTS:
            v = _CONSTS[node.id]
            return lambda x: v + 0.0 * x
        raise ConfigError(f"unknown name {node.id!r} in function spec")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op, left, right = _BINOPS[type(node.op)], _compile(node.left), _compile(node.right)
        return lambda x: op(left(x), right(x))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        op, arg = _UNOPS[type(node.op)], _compile(node.operand)
        return lambda x: op(arg(x))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords and len(node.args) == 1:
        if node.func.id not in _FUNCS:
            raise ConfigError(f"unknown function {node.func.id!r} in function spec")
        fn, arg = _FUNCS[node.func.id], _compile(node.args[0])
        return lambda x: fn(arg(x))
    raise ConfigError(f"unsupported syntax in function spec: {ast.dump(node)[:60]}")


@dataclass(frozen=True)
class FunctionSpec:
    """Parsed ``--fn`` value.

    ``series`` is set for ``cheb:`` and ``mono:`` specs (exact coefficients);
    otherwise ``func`` is a vectorised callable to be projected.
    """

    text: str
    func: Callable | None = field(default=None, compare=False)
    series: ChebSeries | None = None
    mono: tuple[float, ...] | None = None

    @property
    def label(self) -> str:
        return self.text.replace(" ", "").replace("**", "^")

    def callable(self) -> Callable:
        if self.func is not None:
            return self.func
        if self.mono is not None:
            coeffs = np.array(self.mono)
            return lambda x: np.polynomial.polynomial.polyval(x, coeffs)
        s = self.series
        return lambda x: s(x)

    def on_reference(self, degree: int) -> ChebSeries:
        """Series on ``(-2, 2)``: exact for ``cheb:``, projected at ``degree`` otherwise."""
        if self.series is not None:
            return self.series
        if self.mono is not None:
            degree = max(degree, len(self.mono) - 1, 1)
        return project(self.callable(), degree, REFERENCE)


def _floats(body: str, spec: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in body.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad coefficient list in {spec!r}") from exc
    if not vals:
        raise ConfigError(f"empty coefficient list in {spec!r}")
    return vals


def parse_function(spec: str) -> FunctionSpec:
    """Parse a function spec.

    Accepted forms:
        ``cheb:a0,a1,...``  first-kind coefficients on ``(-2, 2)``;
        ``mono:c0,c1,...``  monomial coefficients;
        a bare function name such as ``exp`` meaning ``exp(x)``;
        an expression in ``x`` with ``+ - * / ^`` and elementary functions.

    Raises:
        ConfigError: on unknown names or unsupported syntax.
    """
    text = spec.strip()
    if not text:
        raise ConfigError("empty function spec")
    if text.startswith("cheb:"):
        return FunctionSpec(text, series=ChebSeries.phi(_floats(text[5:], spec)))
    if text.startswith("mono:"):
        return FunctionSpec(text, mono=_floats(text[5:], spec))
    if text in _FUNCS:
        return FunctionSpec(text, func=_FUNCS[text])
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse function spec {spec!r}: {exc.msg}") from exc
    return FunctionSpec(text, func=_compile(tree))


# ----------------------------------------------------------- potential specs

NAMED_POTENTIALS = {
    "gaussian": Potential(((2, 0.5),)),
    "quartic": Potential(((4, 0.25),)),
    "quartic-rescaled": Potential(((4, 1.0 / 12.0),)),
    "mixed": Potential(((2, 0.5), (4, 0.05))),
    "wishart": Potential(((1, 1.0),), 1.0),
    "wishart-quadratic": Potential(((2, 0.5),), 1.0),
}


def parse_potential(spec: str) -> Potential:
    """A named potential, ``poly:c0,c1,...`` (monomial coefficients), or a JSON record."""
    text = spec.strip()
    if text in NAMED_POTENTIALS:
        return NAMED_POTENTIALS[text]
    if text.startswith("poly:"):
        coeffs = _floats(text[5:], spec)
        return Potential(tuple((p, c) for p, c in enumerate(coeffs) if c != 0.0))
    if text.startswith("{"):
        try:
            return Potential.from_record(json.loads(text))
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(f"bad potential record: {exc}") from exc
    raise ConfigError(f"unknown potential {spec!r}; use one of {sorted(NAMED_POTENTIALS)}, poly:..., or a JSON record")


# ----------------------------------------------------------------- config


@dataclass
class RunConfig:
    """All knobs of one run.  ``to_text``/``from_text`` round-trip exactly."""

    command: str = "poincare"
    fn: str = "x"
    fn2: str = ""
    potentials: list[str] = field(default_factory=list)
    degree: int = 24
    galerkin_dim: int = 40
    quad_nodes: int = 0
    kmax: int = 6
    mc_n: int = 150
    mc_samples: int = 2000
    seed: int = 0
    format: str = "pretty"
    out: str = ""
    tol: float | None = None
    threads: int = 1
    suite: str = ""

    _BOUNDS = {
        "degree": (1, 512),
        "galerkin_dim": (1, 400),
        "quad_nodes": (0, 4096),
        "kmax": (1, 64),
        "mc_n": (1, 2000),
        "mc_samples": (8, 10**7),
        "seed": (0, 2**63 - 1),
        "threads": (1, 256),
    }

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        for key, (lo, hi) in self._BOUNDS.items():
            v = getattr(self, key)
            if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
                raise ConfigError(f"{key} = {v!r} outside [{lo}, {hi}]")
        if self.tol is not None and not (isinstance(self.tol, (int, float)) and self.tol >= 0 and math.isfinite(self.tol)):
            raise ConfigError(f"tol must be a finite number >= 0, got {self.tol!r}")
        if not isinstance(self.potentials, list) or not all(isinstance(p, str) for p in self.potentials):
            raise ConfigError("potentials must be a list of strings")
        return self

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    def to_text(self) -> str:
        """``key = value`` lines, values JSON-encoded."""
        return "".join(f"{k} = {json.dumps(getattr(self, k))}\n" for k in self.keys())

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            if key not in cls.keys():
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                values[key] = json.loads(value.strip())
            except json.JSONDecodeError:
                values[key] = value.strip()
        return cls.from_mapping(values)

    @classmethod
    def from_mapping(cls, values: dict, base: "RunConfig | None" = None) -> "RunConfig":
        unknown = set(values) - set(cls.keys())
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = dataclasses.replace(base or cls(), **values)
        if isinstance(cfg.tol, int) and not isinstance(cfg.tol, bool):
            cfg.tol = float(cfg.tol)
        return cfg.validate()


# ------------------------------------------------------------------ runners


def _potentials(cfg: RunConfig, default: Sequence[str]) -> list[Potential]:
    return [parse_potential(p) for p in (cfg.potentials or list(default))]


def _with_omega_quadrature(report: Report, phi: ChebSeries, nodes: int) -> Report:
    m = nodes or default_nodes(phi.degree)
    dd = divided_difference(phi)
    report.meta["omega_quadrature"] = omega_double_integral(lambda x, y: dd(x, y) ** 2, OmegaKernel(m))
    report.meta["quad_nodes"] = m
    return report


def run_command(cfg: RunConfig) -> list[Report]:
    """Run one non-suite command and return its reports."""
    cmd = cfg.command
    if cmd == "suite":
        return run_suite(cfg)
    if cmd == "poincare":
        spec = parse_function(cfg.fn)
        phi = spec.on_reference(cfg.degree)
        return [_with_omega_quadrature(run_poincare(phi, label=spec.label), phi, cfg.quad_nodes)]
    if cmd == "refine":
        spec = parse_function(cfg.fn)
        return [run_refinement(spec.on_reference(cfg.degree), cfg.kmax, label=spec.label)]
    if cmd == "interpolate":
        spec = parse_function(cfg.fn)
        other = parse_function(cfg.fn2) if cfg.fn2 else spec
        rep = run_interpolation(spec.on_reference(cfg.degree), other.on_reference(cfg.degree), label=spec.label)
        rep.meta["fn2"] = other.label
        return [rep]
    if cmd == "equilibrium":
        return [run_equilibrium(v) for v in _potentials(cfg, ["gaussian"])]
    if cmd == "brascamp-lieb":
        out = []
        for v in _potentials(cfg, ["quartic"]):
            if cfg.fn in ("", "V'"):
                out.append(run_equality_case(v))
            else:
                spec = parse_function(cfg.fn)
                out.append(run_brascamp_lieb(v, spec.callable(), label=spec.label))
        return out
    if cmd == "wishart":
        spec = parse_function(cfg.fn)
        out = []
        for v in _potentials(cfg, ["wishart"]):
            if not v.log_s > 0:
                raise ConfigError("wishart needs a potential with log_s > 0")
            out.append(run_wishart(Potential(v.monomials), v.log_s, spec.callable(), label=spec.label))
        return out
    if cmd == "v-independence":
        spec = parse_function(cfg.fn)
        pots = _potentials(cfg, ["gaussian", "quartic-rescaled", "mixed"])
        return [run_v_independence(pots, spec.on_reference(cfg.degree), cfg.galerkin_dim, label=spec.label)]
    if cmd == "mc-fluctuations":
        spec = parse_function(cfg.fn)
        return [
            run_mc_fluctuations(
                spec.on_reference(cfg.degree), cfg.mc_n, cfg.mc_samples, cfg.seed, threads=cfg.threads, label=spec.label
            )
        ]
    raise ConfigError(f"unknown command {cmd!r}")


DEFAULT_SUITE: list[dict] = [
    {"command": "poincare", "fn": "x"},
    {"command": "poincare", "fn": "cheb:0,0,1"},
    {"command": "poincare", "fn": "exp", "degree": 24},
    {"command": "refine", "fn": "cheb:0,0,1", "kmax": 2},
    {"command": "refine", "fn": "exp", "degree": 24, "kmax": 6},
    {"command": "refine", "fn": "cosh", "degree": 24, "kmax": 6},
    {"command": "refine", "fn": "1/(5-x)", "degree": 24, "kmax": 6},
    {"command": "interpolate", "fn": "exp", "degree": 24},
    {"command": "interpolate", "fn": "x^3", "fn2": "cosh", "degree": 24},
    {"command": "equilibrium", "potentials": ["gaussian", "quartic", "mixed", "wishart"]},
    {"command": "brascamp-lieb", "fn": "V'", "potentials": ["gaussian", "quartic-rescaled", "quartic", "mixed"]},
    {"command": "brascamp-lieb", "fn": "x^2", "potentials": ["gaussian", "quartic-rescaled", "mixed"]},
    {"command": "brascamp-lieb", "fn": "exp", "potentials": ["gaussian", "quartic-rescaled", "mixed"]},
    {"command": "v-independence", "fn": "cheb:0,0,1", "galerkin_dim": 40},
    {"command": "v-independence", "fn": "cheb:0,0,0,1", "galerkin_dim": 40},
    {"command": "v-independence", "fn": "x+x^3/10", "degree": 3, "galerkin_dim": 40},
    {"command": "wishart", "fn": "1/x", "potentials": ["wishart"]},
    {"command": "wishart", "fn": "x", "potentials": ["wishart"]},
    {"command": "wishart", "fn": "x-1/x", "potentials": ["wishart-quadratic"]},
    {"command": "mc-fluctuations", "fn": "x", "mc_n": 50, "mc_samples": 400, "seed": 1},
    {"command": "mc-fluctuations", "fn": "x^2", "mc_n": 50, "mc_samples": 400, "seed": 2},
]


def load_suite(path: str) -> list[dict]:
    """Read a JSON list of entries; each entry is a partial config with a ``command``."""
    try:
        with open(path, encoding="utf-8") as fh:
            entries = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read suite file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"suite file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"suite file {path!r} must contain a non-empty JSON list")
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or e.get("command") in (None, "suite"):
            raise ConfigError(f"suite entry {i} needs a non-suite 'command'")
    return entries


def _failure(cfg: RunConfig, exc: Exception) -> Report:
    return Report(
        cfg.command.replace("-", "_"),
        math.nan,
        math.nan,
        0.0,
        meta={"error": f"{type(exc).__name__}: {exc}", "fn": cfg.fn, "potentials": list(cfg.potentials)},
        checks={"completed": False},
    )


def run_suite(cfg: RunConfig) -> list[Report]:
    """Run the suite in declared order; library errors become failed reports."""
    entries = load_suite(cfg.suite) if cfg.suite else DEFAULT_SUITE
    base = dataclasses.replace(cfg, command="poincare", suite="")
    reports: list[Report] = []
    for entry in entries:
        sub = RunConfig.from_mapping(dict(entry), base=base)
        try:
            reports.extend(run_command(sub))
        except FreeIneqError as exc:
            reports.append(_failure(sub, exc))
    return reports


def apply_tolerance(reports: list[Report], tol: float | None) -> list[Report]:
    """Override every deterministic report's tolerance with ``tol`` when given."""
    if tol is not None:
        for r in reports:
            if r.kind != STATISTICAL:
                r.tol = tol
    return reports


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fn", help="function spec: expression in x, exp, cheb:a0,a1,..., mono:c0,c1,...")
    common.add_argument("--fn2", help="second function for interpolate")
    common.add_argument("--potential", action="append", dest="potentials", help="potential name, poly:..., or JSON record (repeatable)")
    common.add_argument("--degree", type=int)
    common.add_argument("--galerkin-dim", type=int, dest="galerkin_dim")
    common.add_argument("--quad-nodes", type=int, dest="quad_nodes")
    common.add_argument("--kmax", type=int)
    common.add_argument("--mc-n", type=int, dest="mc_n")
    common.add_argument("--mc-samples", type=int, dest="mc_samples")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out")
    common.add_argument("--tol", type=float)
    common.add_argument("--threads", type=int)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--suite", help="JSON suite file (suite command)")

    parser = argparse.ArgumentParser(prog="freeineq", description="Free functional inequality verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base = RunConfig()
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                base = RunConfig.from_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {ns.config!r}: {exc}") from exc
    overrides = {k: v for k, v in vars(ns).items() if k not in ("config",) and v is not None}
    return RunConfig.from_mapping(overrides, base=base)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = config_from_args(ns)
        reports = run_command(cfg)
    except ConfigError as exc:
        print(f"freeineq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FreeIneqError as exc:
        reports = [_failure(cfg, exc)]
    apply_tolerance(reports, cfg.tol)
    text = render(reports, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
