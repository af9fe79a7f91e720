"""Command-line pipeline: validate | scatter | waveop | winding | report.

A single JSON config describes the potential, the grids, the tolerances and
the output directory; its canonical hash is stamped into every output file
so results from different configs cannot be mixed silently.  Outputs are
deterministic given the config (no timestamps inside files); wall-clock
timings go to stdout only.

Exit codes: 0 pass, 2 config error, 3 decay assumption violated,
4 numerical failure, 5 identity-check mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import AssumptionError, CheckFailure, ConfigError, NumericsError
from .model import GridSpec, Potential, make_potential
from .rescaled import (coupling_symbol_stability, shift_identity_check,
                       wave_symbol_stability)
from .scattering import ScatteringData, eta_endpoints, levinson_residual, scattering_grid
from .specops import wave_identity_residual
from .topology import assemble_boundary, winding_number

#: pass/fail gates used by the report command
GATES = {
    "levinson_residual": 1e-3 * np.pi,
    "wave_identity_residual": 1e-6,
    "shift_exact_residual": 1e-6,
    "coupling_rank_fraction": 1.0 / 16.0,   # rank(0.1) <= m_beta/16
    "wave_rank_fraction": 1.0 / 8.0,        # rank(0.1) <= n_site/8
}

_GRID_KEYS = {"m_theta", "n_site", "n_tail", "beta_max", "m_beta", "z_max",
              "n_edge", "alpha_max"}
_TOL_KEYS = {"threshold", "root", "winding"}
_OUT_KEYS = {"directory", "formats"}
_POT_KEYS = {"kind", "v0", "site", "rho", "values", "seed", "rho_gen", "amplitude"}


def _reject_unknown(block: dict, allowed: set, where: str):
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def load_config(path: str):
    """Parse and validate the config file; returns (potential, grids, outputs,
    normalized-config-dict, hash)."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    _reject_unknown(raw, {"potential", "grids", "tolerances", "outputs"}, "config")
    pot_block = raw.get("potential")
    if pot_block is None:
        raise ConfigError("config needs a potential block")
    _reject_unknown(pot_block, _POT_KEYS, "potential")
    grids = dict(raw.get("grids", {}))
    _reject_unknown(grids, _GRID_KEYS, "grids")
    tols = dict(raw.get("tolerances", {}))
    _reject_unknown(tols, _TOL_KEYS, "tolerances")
    outputs = dict(raw.get("outputs", {}))
    _reject_unknown(outputs, _OUT_KEYS, "outputs")

    potential = make_potential(pot_block)
    g = GridSpec(**grids,
                 tol_threshold=tols.get("threshold", 1e-3),
                 tol_root=tols.get("root", 1e-10),
                 tol_winding=tols.get("winding", 0.05))
    out_dir = outputs.get("directory", "out")
    formats = outputs.get("formats", ["csv", "json"])
    bad = set(formats) - {"csv", "json"}
    if bad:
        raise ConfigError(f"unknown output formats: {sorted(bad)}")

    normalized = {
        "potential": pot_block,
        "grids": {k: getattr(g, k) for k in sorted(_GRID_KEYS)},
        "tolerances": {"threshold": g.tol_threshold, "root": g.tol_root,
                       "winding": g.tol_winding},
        "outputs": {"directory": out_dir, "formats": sorted(formats)},
    }
    blob = json.dumps(normalized, sort_keys=True, separators=(",", ":"))
    cfg_hash = hashlib.sha256(blob.encode()).hexdigest()[:16]
    return potential, g, {"directory": out_dir, "formats": sorted(formats)}, normalized, cfg_hash


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header: list, rows, cfg_hash: str):
    lines = [f"# config={cfg_hash}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating))
                              else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, obj: dict, cfg_hash: str):
    obj = {"config_hash": cfg_hash, **obj}
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _jsonable(x):
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    _, _, _, normalized, cfg_hash = load_config(args.config)
    print(json.dumps({"config_hash": cfg_hash, **normalized}, sort_keys=True, indent=2))
    return 0


def _scatter_outputs(p: Potential, g: GridSpec, d: ScatteringData,
                     out: Path, cfg_hash: str):
    rows = zip(d.lam, d.theta, d.omega.real, d.omega.imag, d.amplitude,
               d.eta, d.smatrix.real, d.smatrix.imag)
    _write_csv(out / "scatter.csv",
               ["lambda", "theta", "re_omega", "im_omega", "amplitude",
                "eta", "re_s", "im_s"], rows, cfg_hash)
    bs_rows = [(z, float(np.sign(z) / (abs(z) + np.sqrt(z * z - 1.0))),
                abs(_omega_at(p, z))) for z in d.bound_states]
    _write_csv(out / "boundstates.csv", ["z", "zeta", "residual"], bs_rows, cfg_hash)


def _omega_at(p: Potential, z: float) -> float:
    from .model import OffAxisPoint
    from .scattering import jost_function
    return jost_function(p, OffAxisPoint.from_z(z)).real


def _scatter_summary(d: ScatteringData) -> dict:
    em, ep = eta_endpoints(d)
    return {
        "count_n": d.count_n,
        "bound_states": d.bound_states,
        "delta_minus": d.delta_minus,
        "delta_plus": d.delta_plus,
        "omega_minus": d.omega_minus,
        "omega_plus": d.omega_plus,
        "eta_minus_1": em,
        "eta_plus_1": ep,
        "levinson_residual": levinson_residual(d),
    }


def cmd_scatter(args) -> int:
    p, g, outputs, _, cfg_hash = load_config(args.config)
    if args.refine:
        g = g.refined()
    out = Path(outputs["directory"])
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    d = scattering_grid(p, g)
    _scatter_outputs(p, g, d, out, cfg_hash)
    summary = _scatter_summary(d)
    print(f"scatter: N={summary['count_n']} delta=({d.delta_minus},{d.delta_plus}) "
          f"levinson_residual={summary['levinson_residual']:.3e} "
          f"[{time.perf_counter() - t0:.2f}s]")
    return 0


def _waveop_payload(p: Potential, g: GridSpec) -> dict:
    from dataclasses import replace
    d = scattering_grid(p, g)
    t0 = time.perf_counter()
    base = wave_identity_residual(d, p, g)
    g2 = replace(g, m_theta=2 * g.m_theta)
    d2 = scattering_grid(p, g2)
    refined = wave_identity_residual(d2, p, g2)
    shift = shift_identity_check(g)
    coup = coupling_symbol_stability(g)
    wave = wave_symbol_stability(d, p, g)
    elapsed = time.perf_counter() - t0
    payload = {
        "wave_identity": {
            "residual": base,
            "residual_refined": refined,
            "ratio": base / refined if refined > 0 else float("inf"),
        },
        "shift_identity": {
            "exact_residual": shift["exact_residual"],
            "naive_product_residual": shift["naive_product_residual"],
            "symbol_s1": shift["symbol_remainder"].s1,
            "symbol_rank_tenth": shift["symbol_remainder"].rank_at(0.1),
        },
        "coupling_symbol": {
            "s1": coup["base"].s1,
            "rank_tenth": coup["base"].rank_at(0.1),
            "s1_refined": coup["refined"].s1,
            "rel_change": coup["rel_change"],
            "singular_values": coup["base"].singular_values[:32],
        },
        "wave_symbol": {
            "s1": wave["base"].s1,
            "rank_tenth": wave["base"].rank_at(0.1),
            "s1_refined": wave["refined"].s1,
            "rel_change": wave["rel_change"],
            "singular_values": wave["base"].singular_values[:32],
        },
        "grids": {"m_theta": g.m_theta, "n_site": g.n_site, "m_beta": g.m_beta,
                  "beta_max": g.beta_max},
    }
    return payload, elapsed


def cmd_waveop(args) -> int:
    p, g, outputs, _, cfg_hash = load_config(args.config)
    if args.refine:
        g = g.refined()
    out = Path(outputs["directory"])
    out.mkdir(parents=True, exist_ok=True)
    payload, elapsed = _waveop_payload(p, g)
    _write_json(out / "waveop.json", _jsonable(payload), cfg_hash)
    wi = payload["wave_identity"]
    print(f"waveop: identity residual {wi['residual']:.3e} "
          f"(refined {wi['residual_refined']:.3e}, ratio {wi['ratio']:.1f}) "
          f"[{elapsed:.2f}s]")
    return 0


def _winding_payload(p: Potential, g: GridSpec, d: ScatteringData):
    curve = assemble_boundary(d, p, g)
    report = winding_number(curve, tol_winding=g.tol_winding, count_n=d.count_n)
    return curve, report


def cmd_winding(args) -> int:
    p, g, outputs, _, cfg_hash = load_config(args.config)
    if args.refine:
        g = g.refined()
    out = Path(outputs["directory"])
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    d = scattering_grid(p, g)
    curve, report = _winding_payload(p, g, d)
    ph = np.unwrap(np.angle(curve.points))
    rows = [(curve.edge_name(i), curve.params[i], curve.points[i].real,
             curve.points[i].imag, ph[i]) for i in range(len(curve.points))]
    _write_csv(out / "winding.csv",
               ["edge", "param", "re", "im", "phase_unwrapped"], rows, cfg_hash)
    _write_json(out / "winding.json", _jsonable({
        "winding": report.winding,
        "raw_phase_total": report.raw_phase_total,
        "per_edge": report.per_edge,
        "n_from_scattering": report.n_from_scattering,
        "match": report.match,
    }), cfg_hash)
    print(f"winding: {report.winding} (N={d.count_n}, match={report.match}) "
          f"[{time.perf_counter() - t0:.2f}s]")
    if args.check and not report.match:
        raise CheckFailure("winding number does not match the bound-state count")
    return 0


def cmd_report(args) -> int:
    p, g, outputs, normalized, cfg_hash = load_config(args.config)
    if args.refine:
        g = g.refined()
    out = Path(outputs["directory"])
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    d = scattering_grid(p, g)
    _scatter_outputs(p, g, d, out, cfg_hash)
    scatter = _scatter_summary(d)
    payload, _ = _waveop_payload(p, g)
    _write_json(out / "waveop.json", _jsonable(payload), cfg_hash)
    curve, wrep = _winding_payload(p, g, d)
    # a remainder at the rounding floor is trivially compact: its singular
    # values are pure noise and the rank summary is meaningless there
    def compact_ok(block, bound):
        return block["s1"] <= 1e-10 or block["rank_tenth"] <= bound

    passes = {
        "levinson": scatter["levinson_residual"] <= GATES["levinson_residual"],
        "wave_identity": payload["wave_identity"]["residual"] <= GATES["wave_identity_residual"],
        "shift_identity": payload["shift_identity"]["exact_residual"] <= GATES["shift_exact_residual"],
        "coupling_compact": compact_ok(payload["coupling_symbol"],
                                       GATES["coupling_rank_fraction"] * g.m_beta),
        "wave_compact": compact_ok(payload["wave_symbol"],
                                   GATES["wave_rank_fraction"] * g.n_site),
        "winding_match": wrep.match,
    }
    report = {
        "provenance": {"config": normalized},
        "scattering": scatter,
        "operators": payload,
        "winding": {
            "winding": wrep.winding,
            "raw_phase_total": wrep.raw_phase_total,
            "per_edge": wrep.per_edge,
            "match": wrep.match,
        },
        "pass": passes,
    }
    _write_json(out / "report.json", _jsonable(report), cfg_hash)
    elapsed = time.perf_counter() - t0
    for k, v in sorted(passes.items()):
        print(f"  {'PASS' if v else 'FAIL'} {k}")
    print(f"report: {'all pass' if all(passes.values()) else 'FAILURES'} "
          f"[{elapsed:.2f}s]")
    if not all(passes.values()):
        raise CheckFailure("report contains failing checks")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="halfline",
        description="Scattering theory for discrete Schrodinger operators "
                    "on the half-line")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("validate", cmd_validate), ("scatter", cmd_scatter),
                     ("waveop", cmd_waveop), ("winding", cmd_winding),
                     ("report", cmd_report)):
        sp = sub.add_parser(name)
        sp.add_argument("config", help="path to the JSON config")
        sp.add_argument("--check", action="store_true",
                        help="exit 5 when an identity check fails")
        sp.add_argument("--refine", action="store_true",
                        help="double the spectral grids before running")
        sp.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AssumptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
