"""Batch front end: ``simulate``, ``solve`` and ``verify`` driven by a JSON config.

Exit codes: 0 success, 2 bad configuration, 3 numerical blowup, 4 solver not
available for the algebra, 5 failed verification. Log level comes from the
``TAKIFF_TODA_LOG`` environment variable (default ``WARNING``).

Config keys (relative paths resolve against the config file's directory)::

    {
      "algebra": "A", "rank": 1,            # or "lattice" + "window", or "custom"
      "N": 2,
      "initial": {"q": [[...]], "p": [[...]]},   # or {"preset": "zero-velocity", "q": ...}
                                                 # optional "chart": "sl2-rescaled"
      "integrator": {"scheme": "rk4", "dt": 0.001, "T": 2.0},
      "outputs": {"trajectory_csv": "traj.csv", "diagnostics_json": "diag.json",
                  "report_json": "report.json"},
      "solver": {"kind": "factorized" | "jet" | "soliton", ...},
      "verify": ["ring_axioms", ...], "samples": 20, "seed": 0
    }

CSV columns: ``t``, then ``q_<i>_<n>`` and ``p_<i>_<n>`` (Cartan label ``i``
major, order ``n`` minor), then ``H`` and ``f_<k>_<l>`` sorted by ``(k, l)``.
Soliton output has ``t`` and ``r_<j>_<n>``. Floats use 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .dynamics import SCHEMES, diagnostics, integrate
from .errors import NonFiniteStateError, TakiffError
from .lie import RootData, from_config
from .phase import PhaseState, sl2_state, to_coeff, to_phase
from .series import Jet
from .solutions import jet_lift, sl2_base_solution, sl2_factorized, soliton, soliton_kappa
from .verify import run_checks

log = logging.getLogger("takiff_toda")

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_UNAVAILABLE, EXIT_VERIFY = 0, 2, 3, 4, 5
FLOAT_FMT = "%.16e"


class ConfigError(ValueError):
    pass


class SolverUnavailable(RuntimeError):
    pass


@dataclass
class RunConfig:
    root_data: RootData
    N: int
    initial: PhaseState | None = None
    scheme: str = "rk4"
    dt: float = 1e-3
    T: float = 1.0
    outputs: dict = field(default_factory=dict)
    verify: list | None = None
    samples: int = 20
    seed: int = 0
    solver: dict = field(default_factory=dict)
    base_dir: Path = Path(".")

    def output_path(self, key, override=None):
        p = override or self.outputs.get(key)
        if p is None:
            return None
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p


def _matrix(value, shape, what):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: not a numeric matrix ({exc})") from None
    if arr.ndim == 1 and shape[0] == 1:
        arr = arr[None, :]
    if arr.shape != shape:
        raise ConfigError(f"{what}: expected shape {shape}, got {arr.shape}")
    return arr


def _initial(spec, rd, N):
    chart = spec.get("chart", "generic")
    rows = 1 if chart == "sl2-rescaled" else rd.n_cartan
    if chart not in ("generic", "sl2-rescaled"):
        raise ConfigError(f"initial.chart must be 'generic' or 'sl2-rescaled', got {chart!r}")
    if chart == "sl2-rescaled" and rd.pairing.shape != (1, 1):
        raise ConfigError("the sl2-rescaled chart needs rank-one type A root data")
    preset = spec.get("preset")
    if "q" not in spec:
        raise ConfigError("initial.q is required")
    q = _matrix(spec["q"], (rows, N + 1), "initial.q")
    if preset == "zero-velocity":
        p = np.zeros_like(q)
    elif preset is None:
        if "p" not in spec:
            raise ConfigError("initial.p is required unless preset is 'zero-velocity'")
        p = _matrix(spec["p"], (rows, N + 1), "initial.p")
    else:
        raise ConfigError(f"unknown initial preset {preset!r}")
    return sl2_state(q, p) if chart == "sl2-rescaled" else PhaseState(q, p)


def parse_config(data: dict, base_dir=Path(".")) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        rd = from_config(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"algebra: {exc}") from None
    if "N" not in data:
        raise ConfigError("N (truncation order) is required")
    N = data["N"]
    if not isinstance(N, int) or N < 0:
        raise ConfigError(f"N must be a nonnegative integer, got {N!r}")
    cfg = RunConfig(root_data=rd, N=N, base_dir=Path(base_dir))
    if "initial" in data:
        cfg.initial = _initial(data["initial"], rd, N)
    integ = data.get("integrator", {})
    cfg.scheme = integ.get("scheme", "rk4")
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"integrator.scheme must be one of {SCHEMES}")
    try:
        cfg.dt = float(integ.get("dt", 1e-3))
        cfg.T = float(integ.get("T", 1.0))
    except (TypeError, ValueError):
        raise ConfigError("integrator.dt and integrator.T must be numbers") from None
    if not (math.isfinite(cfg.dt) and cfg.dt > 0):
        raise ConfigError(f"integrator.dt must be positive, got {cfg.dt}")
    if not (math.isfinite(cfg.T) and cfg.T >= cfg.dt):
        raise ConfigError(f"integrator.T={cfg.T} must be at least dt={cfg.dt}")
    cfg.outputs = dict(data.get("outputs", {}))
    cfg.verify = data.get("verify")
    cfg.samples = int(data.get("samples", 20))
    cfg.seed = int(data.get("seed", 0))
    cfg.solver = dict(data.get("solver", {}))
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(data, path.parent)


# -- output ----------------------------------------------------------------


def state_columns(rd: RootData, N: int):
    q = [f"q_{i}_{n}" for i in rd.cartan_labels for n in range(N + 1)]
    p = [f"p_{i}_{n}" for i in rd.cartan_labels for n in range(N + 1)]
    return q + p


def _diag_names(diag):
    fs = sorted((k for k in diag if k.startswith("f_")), key=lambda s: tuple(int(x) for x in s.split("_")[1:]))
    return ["H"] + fs


def trajectory_table(times, q, p, rd):
    """Header and rows for a run of states; diagnostics appended."""
    N = q.shape[-1] - 1
    diag = diagnostics(q, p, rd)
    names = _diag_names(diag)
    cols = [times[:, None], q.reshape(len(times), -1), p.reshape(len(times), -1)]
    cols += [np.asarray(diag[n])[:, None] for n in names]
    return ["t"] + state_columns(rd, N) + names, np.hstack(cols), diag


def write_csv(path, header, table):
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, table, fmt=FLOAT_FMT, delimiter=",", header=",".join(header), comments="")
    log.info("wrote %s (%d rows)", path, len(table))


def write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
        log.info("wrote %s", path)
    return text


def _time_grid(cfg):
    times = cfg.solver.get("times")
    if times is not None:
        return np.array(times, dtype=float)
    n = int(math.floor(cfg.T / cfg.dt + 1e-9))
    return cfg.dt * np.arange(n + 1)


# -- commands ----------------------------------------------------------------


def cmd_simulate(cfg: RunConfig, trajectory_csv=None, diagnostics_json=None) -> int:
    if cfg.initial is None:
        raise ConfigError("simulate needs an 'initial' block")
    try:
        traj = integrate(cfg.initial, cfg.root_data, cfg.dt, cfg.T, cfg.scheme, with_diagnostics=False)
    except NonFiniteStateError as exc:
        log.debug("blowup: %s", exc)
        print(f"error: numerical blowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    header, table, diag = trajectory_table(traj.times, traj.q, traj.p, cfg.root_data)
    write_csv(cfg.output_path("trajectory_csv", trajectory_csv), header, table)
    drift = {n: float(np.max(np.abs(diag[n] - diag[n][0])) / (1.0 + abs(diag[n][0]))) for n in _diag_names(diag)}
    summary = {
        "algebra": cfg.root_data.name,
        "N": cfg.N,
        "scheme": cfg.scheme,
        "dt": cfg.dt,
        "T": cfg.T,
        "steps": len(traj) - 1,
        "backend": kernels.BACKEND,
        "initial_H": float(diag["H"][0]),
        "final_H": float(diag["H"][-1]),
        "max_drift": drift,
    }
    text = write_json(cfg.output_path("diagnostics_json", diagnostics_json), summary)
    print(text)
    return EXIT_OK


def _is_sl2(rd):
    return rd.rep is not None and rd.pairing.shape == (1, 1) and rd.rep.dim == 2


def cmd_solve(cfg: RunConfig, trajectory_csv=None, diagnostics_json=None) -> int:
    kind = cfg.solver.get("kind")
    rd = cfg.root_data
    times = _time_grid(cfg)
    if kind in ("factorized", "jet"):
        if not _is_sl2(rd):
            raise SolverUnavailable(f"solver {kind!r} is only available for sl(2); got {rd.name}")
        if cfg.initial is None:
            raise ConfigError(f"solver {kind!r} needs an 'initial' block")
        ps0 = cfg.initial
        qs = np.empty((len(times),) + ps0.q.shape)
        ps = np.empty_like(qs)
        if kind == "factorized":
            cs0 = to_coeff(ps0, rd)
            for i, t in enumerate(times):
                s = to_phase(sl2_factorized(float(t), cs0), rd)
                qs[i], ps[i] = s.q, s.p
        else:
            X, Z = ps0.q / np.sqrt(2.0), ps0.p / np.sqrt(2.0)
            for i, t in enumerate(times):
                s = jet_lift(sl2_base_solution, X, Z, float(t))
                qs[i], ps[i] = np.sqrt(2.0) * s.q, np.sqrt(2.0) * s.p
        header, table, _ = trajectory_table(times, qs, ps, rd)
        write_csv(cfg.output_path("trajectory_csv", trajectory_csv), header, table)
        summary = {"solver": kind, "algebra": rd.name, "N": cfg.N, "samples": len(times)}
    elif kind == "soliton":
        if rd.rep is not None or not rd.name.startswith("lattice"):
            raise SolverUnavailable(f"soliton solver needs lattice root data; got {rd.name}")
        try:
            x0 = Jet(cfg.solver["x0"])
            x1 = Jet(cfg.solver["x1"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"solver.x0 / solver.x1 must be coefficient lists ({exc})") from None
        if x0.order != cfg.N or x1.order != cfg.N:
            raise ConfigError(f"solver.x0 and solver.x1 need N+1={cfg.N + 1} coefficients")
        sign = int(cfg.solver.get("sign", 1))
        sites = cfg.solver.get("sites", list(rd.cartan_labels[:-1]))
        kappa = soliton_kappa(x0, x1)
        header = ["t"] + [f"r_{j}_{n}" for j in sites for n in range(cfg.N + 1)]
        table = np.array([[t] + [c for j in sites for c in soliton(int(j), float(t), kappa, sign).coeffs]
                          for t in times])
        write_csv(cfg.output_path("trajectory_csv", trajectory_csv), header, table)
        summary = {"solver": kind, "algebra": rd.name, "N": cfg.N, "samples": len(times),
                   "kappa": kappa.coeffs.tolist(), "sign": sign}
    elif kind is None:
        raise ConfigError("solve needs solver.kind")
    else:
        raise ConfigError(f"unknown solver kind {kind!r}")
    print(write_json(cfg.output_path("diagnostics_json", diagnostics_json), summary))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, report_json=None) -> int:
    try:
        report = run_checks(cfg.root_data, cfg.N, cfg.verify, samples=cfg.samples, seed=cfg.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    print(write_json(cfg.output_path("report_json", report_json), report))
    failed = [k for k, v in report.items() if not v["pass"]]
    if failed:
        log.error("failed checks: %s", ", ".join(failed))
        return EXIT_VERIFY
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="takiff-toda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "solve"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--trajectory-csv", type=Path, help="overrides outputs.trajectory_csv")
        p.add_argument("--diagnostics-json", type=Path, help="overrides outputs.diagnostics_json")
    p = sub.add_parser("verify")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--report-json", type=Path, help="overrides outputs.report_json")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("TAKIFF_TODA_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.trajectory_csv, args.diagnostics_json)
        if args.command == "solve":
            return cmd_solve(cfg, args.trajectory_csv, args.diagnostics_json)
        return cmd_verify(cfg, args.report_json)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    except TakiffError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
