"""``adaptvqe`` command line: single-point runs, PES sweeps, pool dumps and the FCI oracle.

Settings resolve in the order defaults < ``--config`` JSON file <
``ADAPTVQE_*`` environment variables < flags. Exit codes: 2 configuration
error, 3 unreadable or malformed input, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import build_pool
from .estimators import ANSATZES, make_estimator
from .exceptions import (
    AdaptVQEError,
    ConfigurationError,
    DivergenceError,
    FcidumpParseError,
    OccupationError,
    PoolError,
    ResourceError,
    SectorError,
)
from .fci import fci_ground_state
from .optim import DEFAULT_MAX_EVALS, OPTIMIZERS
from .problem import MolecularProblem

ENV_PREFIX = "ADAPTVQE_"
CSV_HEADER = ["label", "bond_length", "e_hf", "e_fci", "e_method", "error", "n_params", "n_cnots", "n_evals", "wall_s"]
VARIATIONAL_SLACK = 1e-9

EXIT_CONFIG, EXIT_PARSE, EXIT_NUMERICAL = 2, 3, 4


@dataclass
class RunSpec:
    """Validated settings for ``run`` and ``pes``."""

    inputs: list = field(default_factory=list)
    ansatz: str = "uccsd"
    optimizer: str = "fd_bfgs"
    optimizer_options: dict = field(default_factory=dict)
    max_evals: int = DEFAULT_MAX_EVALS
    epsilon: float = 1e-3
    max_operators: int = 50
    top_k: int = 3
    keep_fraction: float = 0.25
    norm: str = "l2"
    hea_reps: int = 3
    hea_axes: str = "YZ"
    hea_entanglement: str = "linear"
    seed: int = 0
    out: str | None = None
    json: str | None = None
    resume: bool = False
    timing: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.ansatz not in ANSATZES:
            raise ConfigurationError(f"unknown ansatz {self.ansatz!r}; choose from {', '.join(ANSATZES)}")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigurationError(f"unknown optimizer {self.optimizer!r}; choose from {', '.join(OPTIMIZERS)}")
        if not isinstance(self.optimizer_options, dict):
            raise ConfigurationError("optimizer_options must be a mapping")
        if self.max_evals < 1 or self.jobs < 1 or self.top_k < 1 or self.max_operators < 1 or self.hea_reps < 1:
            raise ConfigurationError("max_evals, jobs, top_k, max_operators and hea_reps must be >= 1")
        if not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        if not 0 < self.keep_fraction <= 1:
            raise ConfigurationError("keep_fraction must lie in (0, 1]")
        if self.resume and not self.out:
            raise ConfigurationError("--resume needs --out")

    def estimator_params(self) -> dict:
        common = {"optimizer": self.optimizer, "optimizer_options": dict(self.optimizer_options),
                  "max_evals": self.max_evals, "seed": self.seed}
        if self.ansatz == "uccsd":
            return common
        if self.ansatz == "hea":
            return {**common, "hea_reps": self.hea_reps, "hea_axes": self.hea_axes,
                    "hea_entanglement": self.hea_entanglement}
        return {**common, "epsilon": self.epsilon, "max_operators": self.max_operators, "top_k": self.top_k,
                "keep_fraction": self.keep_fraction, "norm": self.norm}

    def method_config(self) -> dict:
        skip = {"inputs", "out", "json", "resume", "timing", "jobs"}
        return {k: v for k, v in dataclasses.asdict(self).items() if k not in skip}


_FIELDS = {f.name: f for f in dataclasses.fields(RunSpec)}
_BOOL = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False, "": False}


def _coerce(key: str, value):
    """Convert a config/env value to the type of ``RunSpec.<key>``."""
    default = _FIELDS[key].default
    if _FIELDS[key].default_factory is not dataclasses.MISSING:
        default = _FIELDS[key].default_factory()
    try:
        if isinstance(default, bool):
            if isinstance(value, bool):
                return value
            return _BOOL[str(value).strip().lower()]
        if isinstance(default, int):
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, dict):
            return json.loads(value) if isinstance(value, str) else dict(value)
        if isinstance(default, list):
            return [value] if isinstance(value, str) else list(value)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigurationError(f"bad value {value!r} for {key}") from exc
    return value if value is None else str(value)


def load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
    return {k: _coerce(k, v) for k, v in data.items()}


def env_overrides(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    out = {}
    for name, value in environ.items():
        if not name.startswith(ENV_PREFIX):
            continue
        key = name[len(ENV_PREFIX):].lower()
        if key not in _FIELDS or key == "inputs":
            raise ConfigurationError(f"unknown environment override {name}")
        out[key] = _coerce(key, value)
    return out


def build_spec(flags: dict, config_path=None, environ=None) -> RunSpec:
    merged = {}
    if config_path:
        merged.update(load_config(config_path))
    merged.update(env_overrides(environ))
    merged.update({k: v for k, v in flags.items() if v is not None})
    return RunSpec(**merged)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def solve(path: str, spec: RunSpec) -> dict:
    """Run one geometry; returns the report row plus a JSON-ready detail record."""
    start = time.perf_counter()
    problem = MolecularProblem.from_fcidump(path)
    est = make_estimator(spec.ansatz, **spec.estimator_params()).fit(problem)
    wall = time.perf_counter() - start
    e_hf, e_fci, e_method = (float(_fmt(v)) for v in (problem.e_hf, problem.e_fci, est.energy_))
    if e_method < e_fci - VARIATIONAL_SLACK:
        raise DivergenceError(f"{problem.label}: energy {e_method} lies below FCI {e_fci}")
    row = {
        "label": problem.label,
        "bond_length": "" if problem.bond_length is None else _fmt(problem.bond_length),
        "e_hf": _fmt(e_hf),
        "e_fci": _fmt(e_fci),
        "e_method": _fmt(e_method),
        "error": _fmt(e_method - e_fci),
        "n_params": str(est.n_parameters_),
        "n_cnots": str(est.n_cnots_),
        "n_evals": str(est.n_evaluations_),
        "wall_s": f"{wall:.3f}" if spec.timing else "",
    }
    detail = {"row": row, "n_qubits": problem.n_qubits, "n_electrons": problem.n_electrons,
              "reference_mask": problem.reference_mask}
    if hasattr(est, "result_") and hasattr(est.result_, "to_dict") and spec.ansatz.startswith("adapt"):
        detail["adapt"] = est.result_.to_dict()
    else:
        detail["parameters"] = [float(x) for x in est.parameters_]
    return detail


def _solve_job(args):
    return solve(*args)


def read_report(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ConfigurationError(f"{path} does not carry the report header")
        return list(reader)


def format_report(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for row in sorted(rows, key=lambda r: r["label"]):
        w.writerow(row)
    return buf.getvalue()


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def execute(spec: RunSpec) -> list[dict]:
    """Solve every input (skipping labels already in ``spec.out`` when resuming) and write reports."""
    previous = []
    if spec.resume and spec.out and Path(spec.out).exists():
        previous = read_report(spec.out)
    done = {r["label"] for r in previous}
    for p in spec.inputs:
        if not Path(p).is_file():
            raise FileNotFoundError(p)
    todo = [p for p in spec.inputs if _label(p) not in done]
    if spec.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(spec.jobs) as ex:
            details = list(ex.map(_solve_job, [(p, spec) for p in todo]))
    else:
        details = [solve(p, spec) for p in todo]
    rows = previous + [d["row"] for d in details]
    _write(spec.out, format_report(rows))
    if spec.json:
        doc = {"config": spec.method_config(),
               "runs": sorted(details, key=lambda d: d["row"]["label"])}
        _write(spec.json, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return rows


def _label(path) -> str:
    name = Path(path).name
    return name[: -len(".fcidump")] if name.lower().endswith(".fcidump") else name


def fcidump_files(directory) -> list[str]:
    d = Path(directory)
    if not d.is_dir():
        raise ConfigurationError(f"not a directory: {directory}")
    files = sorted(str(p) for p in d.iterdir() if p.suffix.lower() == ".fcidump")
    if not files:
        raise ConfigurationError(f"no .fcidump files in {directory}")
    return files


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ansatz", choices=ANSATZES)
    p.add_argument("--optimizer", choices=sorted(OPTIMIZERS))
    p.add_argument("--optimizer-options", dest="optimizer_options", type=json.loads,
                   help="JSON object of optimizer keyword options")
    p.add_argument("--max-evals", dest="max_evals", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--max-operators", dest="max_operators", type=int)
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--keep-fraction", dest="keep_fraction", type=float)
    p.add_argument("--norm", choices=("l2", "max"))
    p.add_argument("--hea-reps", dest="hea_reps", type=int)
    p.add_argument("--hea-axes", dest="hea_axes")
    p.add_argument("--hea-entanglement", dest="hea_entanglement", choices=("linear", "full"))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV report path (default: stdout)")
    p.add_argument("--json", help="write a JSON report with per-run details")
    p.add_argument("--resume", action="store_true", default=None, help="skip labels already in --out")
    p.add_argument("--timing", action="store_true", default=None, help="fill the wall_s column")
    p.add_argument("--jobs", type=int, help="parallel worker processes for sweeps")
    p.add_argument("--config", help="JSON file of defaults; unknown keys are rejected")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adaptvqe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="single geometry")
    run.add_argument("--fcidump", required=True)
    _add_run_flags(run)

    pes = sub.add_parser("pes", help="sweep every FCIDUMP in a directory")
    pes.add_argument("--dir", required=True)
    _add_run_flags(pes)

    pools = sub.add_parser("pools", help="dump operator pool sizes and contents as JSON")
    pools.add_argument("--fcidump", required=True)
    pools.add_argument("--keep-fraction", dest="keep_fraction", type=float, default=0.25)
    pools.add_argument("--seed", type=int, default=0)
    pools.add_argument("--flavor", choices=("fermionic", "qubit", "qeb"), action="append")
    pools.add_argument("--out")

    fci = sub.add_parser("fci", help="exact ground energies only")
    src = fci.add_mutually_exclusive_group(required=True)
    src.add_argument("--fcidump")
    src.add_argument("--dir")
    fci.add_argument("--out")
    return parser


def _cmd_pools(args) -> None:
    problem = MolecularProblem.from_fcidump(args.fcidump)
    flavors = args.flavor or ["fermionic", "qubit", "qeb"]
    doc = {"label": problem.label, "n_qubits": problem.n_qubits, "n_electrons": problem.n_electrons,
           "keep_fraction": args.keep_fraction, "seed": args.seed, "pools": {}}
    for fl in flavors:
        doc["pools"][fl] = build_pool(fl, problem.n_qubits, problem.n_electrons, args.keep_fraction, args.seed).to_dict()
    _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _cmd_fci(args) -> None:
    files = [args.fcidump] if args.fcidump else fcidump_files(args.dir)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "bond_length", "n_qubits", "n_electrons", "dimension", "e_hf", "e_fci"])
    rows = []
    for f in files:
        if not Path(f).is_file():
            raise FileNotFoundError(f)
        p = MolecularProblem.from_fcidump(f)
        res = fci_ground_state(p.spin_orbital, p.n_electrons, p.integrals.ms2)
        rows.append([p.label, "" if p.bond_length is None else _fmt(p.bond_length), p.n_qubits,
                     p.n_electrons, res.dimension, _fmt(p.e_hf), _fmt(res.energy)])
    w.writerows(sorted(rows))
    _write(args.out, buf.getvalue())


def main(argv=None, environ=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "pools":
            _cmd_pools(args)
        elif args.command == "fci":
            _cmd_fci(args)
        else:
            flags = {k: v for k, v in vars(args).items() if k in _FIELDS}
            if args.command == "run":
                flags["inputs"] = [args.fcidump]
            else:
                flags["inputs"] = fcidump_files(args.dir)
            spec = build_spec(flags, args.config, environ)
            execute(spec)
    except (ConfigurationError, PoolError, OccupationError, SectorError) as exc:
        return _fail(EXIT_CONFIG, "configuration error", exc)
    except (FcidumpParseError, FileNotFoundError, IsADirectoryError) as exc:
        return _fail(EXIT_PARSE, "input error", exc)
    except (DivergenceError, ResourceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, "numerical failure", exc)
    except AdaptVQEError as exc:
        return _fail(EXIT_NUMERICAL, "error", exc)
    return 0


def _fail(code: int, kind: str, exc: BaseException) -> int:
    msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
    print(f"adaptvqe: {kind}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
