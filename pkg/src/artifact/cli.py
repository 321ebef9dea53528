"""Command-line interface: config ingestion, runs, sweeps, self-tests.

Subcommands
-----------
chern | parity | twist   index computations on a fresh disk model
oracle-tknn              momentum-space integer oracle for the same model
sweep                    one full run per radius, CSV output
selftest                 randomized property suites (wick | algebraic)

Exit codes: 0 ok, 1 selftest failure, 2 usage/config error, 3 computation
error. Reports are JSON with sorted keys; identical config and seed give
byte-identical output (the sweep CSV's wall_ms column is the documented
exception).
"""
from __future__ import annotations

import argparse
import copy
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ._util import ArtifactError, ComputationError, ConfigError
from .geometry import (DEFAULT_APEX_OFFSET, DEFAULT_BOUNDARY_ANGLES,
                       build_disk_lattice, make_good_partition)
from .invariants import (IndexReport, chern_number_with_residual, core_regions,
                         exchange_phase_closed, hall_sigma_with_residual,
                         parity_indices, twist_statistics)
from .models import CONVENTION_TAG, build_pip, build_qwz, build_trivial, stack_copies, tknn_chern
from .quasifree import (ground_projection, pfaffian_expectation, random_covariance,
                        wick_expectation, BasisProjection)
from .symgen import cyclic_charge, dress_charge, flux_unitary, parity_charge

_FAMILY_MAJORANA = {"qwz": 4, "pip": 2, "trivial": 2}

DEFAULT_CONFIG = {
    "model": {"family": "qwz", "u": 1.0, "mu": -1.0, "delta": 0.5},
    "geometry": {
        "family": "square",
        "radius": 8.0,
        "apex_offset": list(DEFAULT_APEX_OFFSET),
        "boundary_angles": list(DEFAULT_BOUNDARY_ANGLES),
        "gap_halfwidth": 0.15,
    },
    "numerics": {
        "gap_tol": None,  # per-family default: 1e-8 for trivial, 1e-4 for disks
        "core_fraction": 0.7,
        "nu_round_tol": 0.1,
        "phase_tol": 0.05,
        "kgrid": 200,
        "alpha": 0.1,
    },
    "copies": 3,
    "seed": 42,
}


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            user = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(user, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(user) - set(DEFAULT_CONFIG)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return _deep_merge(DEFAULT_CONFIG, user)


def validate_config(cfg: dict, task: str):
    family = cfg["model"].get("family")
    if family not in _FAMILY_MAJORANA:
        raise ConfigError(f"unknown model family {family!r}")
    radius = cfg["geometry"]["radius"]
    if not isinstance(radius, (int, float)) or radius < 4:
        raise ConfigError("geometry.radius must be a number >= 4")
    angles = cfg["geometry"]["boundary_angles"]
    if len(angles) != 3:
        raise ConfigError("geometry.boundary_angles must list three angles")
    cf = cfg["numerics"]["core_fraction"]
    if not 0.0 < cf <= 1.0:
        raise ConfigError("numerics.core_fraction must be in (0, 1]")
    if task == "twist":
        copies = cfg["copies"]
        if not isinstance(copies, int) or copies < 1 or copies % 2 == 0:
            raise ConfigError("copies must be odd")


def _gap_tol(cfg: dict) -> float:
    tol = cfg["numerics"]["gap_tol"]
    if tol is not None:
        return float(tol)
    return 1e-8 if cfg["model"]["family"] == "trivial" else 1e-4


def build_model(cfg: dict, copies: int = 1):
    g = cfg["geometry"]
    family = cfg["model"]["family"]
    geometry = build_disk_lattice(g["family"], float(g["radius"]),
                                  tuple(g["apex_offset"]),
                                  majorana_count=_FAMILY_MAJORANA[family])
    if family == "qwz":
        h = build_qwz(float(cfg["model"]["u"]), geometry)
    elif family == "pip":
        h = build_pip(float(cfg["model"]["mu"]), float(cfg["model"]["delta"]), geometry)
    else:
        h = build_trivial(geometry)
    if copies > 1:
        h = stack_copies(h, copies)
    return h


def build_partition(cfg: dict, geometry):
    return make_good_partition(geometry.apex,
                               tuple(float(a) for a in cfg["geometry"]["boundary_angles"]),
                               gap_halfwidth=float(cfg["geometry"]["gap_halfwidth"]))


def _model_parameters(cfg: dict) -> dict:
    family = cfg["model"]["family"]
    if family == "qwz":
        return {"u": float(cfg["model"]["u"])}
    if family == "pip":
        return {"mu": float(cfg["model"]["mu"]), "delta": float(cfg["model"]["delta"])}
    return {}


def compute_report(cfg: dict, task: str) -> IndexReport:
    copies = cfg["copies"] if task == "twist" else 1
    h = build_model(cfg, copies=copies)
    partition = build_partition(cfg, h.geometry)
    P = ground_projection(h, _gap_tol(cfg))
    cf = float(cfg["numerics"]["core_fraction"])
    report = IndexReport(diagnostics={
        "radius": float(cfg["geometry"]["radius"]),
        "copies": copies,
        "gap_used": P.gap_used,
        "core_fraction": cf,
    })
    if task == "twist":
        sigma, theta_N, omega_N = twist_statistics(P, copies, partition, cf)
        report.sigma = sigma
        report.theta_N = theta_N
        report.omega_N = omega_N
        report.validate()
        return report
    nu, nu_res = chern_number_with_residual(P, partition, cf)
    report.nu = nu
    report.diagnostics["nu_residual"] = nu_res
    nu_r = int(np.rint(nu))
    if abs(nu - nu_r) <= float(cfg["numerics"]["nu_round_tol"]):
        report.nu_rounded = nu_r
    if task == "parity":
        z2, z8 = parity_indices(P, partition, cf, float(cfg["numerics"]["nu_round_tol"]))
        report.z2 = z2
        report.z8_phase = z8
        report.theta = z8
    report.validate()
    return report


def _emit(payload: dict, out_path: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(cfg: dict, task: str, out_path: str | None) -> int:
    validate_config(cfg, task)
    report = compute_report(cfg, task)
    payload = {
        "task": task,
        "convention": CONVENTION_TAG,
        "config": cfg,
        "indices": report.to_json_dict(),
    }
    _emit(payload, out_path)
    return 0


def run_oracle(cfg: dict, out_path: str | None) -> int:
    validate_config(cfg, "oracle-tknn")
    family = cfg["model"]["family"]
    params = _model_parameters(cfg)
    value = tknn_chern(family, params, int(cfg["numerics"]["kgrid"]))
    payload = {
        "task": "oracle-tknn",
        "convention": CONVENTION_TAG,
        "config": cfg,
        "oracle": {"family": family, "parameters": params,
                   "kgrid": int(cfg["numerics"]["kgrid"]), "chern": value},
    }
    _emit(payload, out_path)
    return 0


# ---------------------------------------------------------------------------
# radius sweep


def _sweep_row(cfg: dict, radius: float):
    row_cfg = copy.deepcopy(cfg)
    row_cfg["geometry"]["radius"] = radius
    start = time.perf_counter()
    try:
        h = build_model(row_cfg)
        partition = build_partition(row_cfg, h.geometry)
        P = ground_projection(h, _gap_tol(row_cfg))
        cf = float(row_cfg["numerics"]["core_fraction"])
        nu, _ = chern_number_with_residual(P, partition, cf)
        ids, geom = core_regions(P, partition, cf)
        g0 = parity_charge(P, ids[0], geom)
        g1 = parity_charge(P, ids[1], geom)
        sigma, _ = hall_sigma_with_residual(P, g0, g1, partition, cf)
        err_nu = abs(nu - round(nu))
        wall_ms = int(round(1000 * (time.perf_counter() - start)))
        return (radius, f"{nu:.12g}", f"{sigma:.12g}", f"{err_nu:.12g}", wall_ms)
    except ArtifactError as exc:
        wall_ms = int(round(1000 * (time.perf_counter() - start)))
        return (radius, f"ERROR: {exc}", "", "", wall_ms)


def sweep_radius(cfg: dict, radii, jobs: int, out_path: str | None) -> int:
    validate_config(cfg, "sweep")
    if len(radii) < 2:
        raise ConfigError("sweep needs at least two radii")
    if sorted(radii) != list(radii) or len(set(radii)) != len(radii):
        raise ConfigError("radii must be strictly increasing")
    if any(r < 4 for r in radii):
        raise ConfigError("geometry.radius must be a number >= 4")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, [cfg] * len(radii), radii))
    else:
        rows = [_sweep_row(cfg, r) for r in radii]
    lines = ["radius,nu,sigma,err_nu,wall_ms"]
    for radius, nu, sigma, err_nu, wall_ms in rows:
        lines.append(f"{radius:.12g},{nu},{sigma},{err_nu},{wall_ms}")
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# self-tests


def _fail_counterexample(prop: str, detail: dict) -> int:
    sys.stderr.write(json.dumps({"property": prop, "counterexample": detail},
                                sort_keys=True, default=str) + "\n")
    return 1


def selftest_wick(seed: int, trials: int) -> int:
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    counts = {"pfaffian_vs_sum": 0, "odd_moments": 0, "pair_formula": 0,
              "car_anticommutator": 0}
    for trial in range(trials):
        dim = int(rng.choice([4, 6, 8, 10, 12]))
        S = random_covariance(dim, rng)
        n_vec = int(rng.choice([2, 4, 6, 8]))
        vs = [rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
              for _ in range(n_vec)]
        w = wick_expectation(S, vs)
        p = pfaffian_expectation(S, vs)
        if abs(w - p) > 1e-10:
            return _fail_counterexample("pfaffian_vs_sum",
                                        {"seed": seed, "trial": trial, "dim": dim,
                                         "n_vectors": n_vec, "wick": w, "pfaffian": p})
        counts["pfaffian_vs_sum"] += 1
        odd = wick_expectation(S, vs[:n_vec - 1])  # n_vec - 1 is odd
        if odd != 0:
            return _fail_counterexample("odd_moments",
                                        {"seed": seed, "trial": trial, "dim": dim,
                                         "value": odd})
        counts["odd_moments"] += 1
        f, g = vs[0], vs[1]
        if abs(wick_expectation(S, [f, g]) - f @ S.matrix @ g) > 1e-12:
            return _fail_counterexample("pair_formula",
                                        {"seed": seed, "trial": trial, "dim": dim})
        counts["pair_formula"] += 1
        car = wick_expectation(S, [f, g]) + wick_expectation(S, [g, f]) - f @ g
        if abs(car) > 1e-12 * max(1.0, float(np.abs(f @ g))):
            return _fail_counterexample("car_anticommutator",
                                        {"seed": seed, "trial": trial, "dim": dim,
                                         "residual": abs(car)})
        counts["car_anticommutator"] += 1
    for prop, n in sorted(counts.items()):
        print(f"{prop}: {n}/{trials} passed")
    return 0


def selftest_algebraic(seed: int, trials: int) -> int:
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    counts = {"parity_commutes": 0, "dress_commutes": 0, "dress_fixed_point": 0,
              "flux_group_law": 0, "charge_spectrum": 0}
    for trial in range(trials):
        dim = int(rng.choice([8, 10, 12, 14, 16]))
        P = BasisProjection(random_covariance(dim, rng).matrix, "random", 0.0)
        Pm = P.matrix
        T = np.eye(dim) - 2 * Pm
        mask = (rng.random(dim) < 0.5).astype(float)
        Pi = np.diag(mask)
        Qt = (Pi @ T + T @ Pi) / 2
        if float(np.max(np.abs(Pm @ Qt - Qt @ Pm))) > 1e-12:
            return _fail_counterexample("parity_commutes", {"seed": seed, "trial": trial})
        counts["parity_commutes"] += 1
        Q = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        Q = (Q + Q.conj().T) / 2
        g = dress_charge(P, Q)
        if float(np.max(np.abs(Pm @ g.Qtilde - g.Qtilde @ Pm))) > 1e-12:
            return _fail_counterexample("dress_commutes", {"seed": seed, "trial": trial})
        counts["dress_commutes"] += 1
        Qc = Pm @ Q @ Pm + (np.eye(dim) - Pm) @ Q @ (np.eye(dim) - Pm)
        Qc = (Qc + Qc.conj().T) / 2
        if float(np.max(np.abs(dress_charge(P, Qc).Qtilde - Qc))) > 1e-12:
            return _fail_counterexample("dress_fixed_point", {"seed": seed, "trial": trial})
        counts["dress_fixed_point"] += 1
        a, b = rng.uniform(-1, 1, size=2)
        Uab = flux_unitary(g, a) @ flux_unitary(g, b)
        if float(np.max(np.abs(Uab - flux_unitary(g, a + b)))) > 1e-10:
            return _fail_counterexample("flux_group_law", {"seed": seed, "trial": trial})
        counts["flux_group_law"] += 1
        N = int(rng.choice([1, 3, 5, 7]))
        ev = np.sort(np.linalg.eigvalsh(cyclic_charge(N).q))
        want = np.arange(-(N - 1) // 2, (N - 1) // 2 + 1)
        if not np.allclose(ev, want, atol=1e-10):
            return _fail_counterexample("charge_spectrum", {"seed": seed, "trial": trial, "N": N})
        counts["charge_spectrum"] += 1
    for prop, n in sorted(counts.items()):
        print(f"{prop}: {n}/{trials} passed")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub):
    sub.add_argument("--config", default=None, help="JSON config file")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--jobs", type=int, default=1, help="worker pool size for sweeps")
    sub.add_argument("--seed", type=int, default=None, help="seed for randomized self-tests")
    sub.add_argument("--radius", type=float, default=None, help="override geometry.radius")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact",
                                description="finite-disk topological index laboratory")
    subs = p.add_subparsers(dest="command", required=True)
    for name in ("chern", "parity"):
        sp = subs.add_parser(name, help=f"compute the {name} indices")
        _add_common(sp)
    sp = subs.add_parser("twist", help="copy-cycling defect statistics on a stack")
    _add_common(sp)
    sp.add_argument("--copies", type=int, default=None, help="number of stacked copies (odd)")
    sp = subs.add_parser("oracle-tknn", help="momentum-space integer oracle")
    _add_common(sp)
    sp = subs.add_parser("sweep", help="radius convergence sweep (CSV)")
    _add_common(sp)
    sp.add_argument("--radii", default=None, help="comma-separated radii, increasing")
    sp = subs.add_parser("selftest", help="randomized property suites")
    sp.add_argument("kind", choices=["wick", "algebraic"])
    sp.add_argument("--trials", type=int, default=100)
    _add_common(sp)
    return p


def _resolve(args) -> dict:
    cfg = load_config(args.config)
    if args.radius is not None:
        cfg["geometry"]["radius"] = float(args.radius)
    if args.seed is not None:
        cfg["seed"] = int(args.seed)
    if getattr(args, "copies", None) is not None:
        cfg["copies"] = int(args.copies)
    return cfg


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "selftest":
            seed = args.seed if args.seed is not None else 42
            if args.kind == "wick":
                return selftest_wick(seed, args.trials)
            return selftest_algebraic(seed, args.trials)
        cfg = _resolve(args)
        if args.command in ("chern", "parity", "twist"):
            return run(cfg, args.command, args.out)
        if args.command == "oracle-tknn":
            return run_oracle(cfg, args.out)
        if args.command == "sweep":
            if not args.radii:
                raise ConfigError("sweep needs at least two radii")
            try:
                radii = [float(r) for r in args.radii.split(",") if r.strip()]
            except ValueError:
                raise ConfigError("radii must be numbers") from None
            return sweep_radius(cfg, radii, max(1, args.jobs), args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except ComputationError as exc:
        sys.stderr.write(f"computation error: {exc}\n")
        return 3
    except ArtifactError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
