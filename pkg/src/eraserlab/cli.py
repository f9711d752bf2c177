"""eraserlab command line.

    eraserlab <command> --config <file> [--out <dir>] [--seed <u64>] [--points <n>]

Every command writes ``<out>/<command>.csv`` and a ``<command>.json``
summary and prints a short human-readable report (angles in degrees).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, engine, optics
from .config import BenchConfig, ConfigError, load_config
from .qstate import EraserError
from .scan import expected_counts, simulate_scan

COMMANDS = ("pattern", "scan", "erase-demo", "whichpath", "ordering", "chsh")


def _num(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return None if not math.isfinite(v) else v


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


def _cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_clean(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _deg(v):
    return None if v is None else math.degrees(v)


def _params(cfg: BenchConfig) -> dict:
    g, e, s = cfg.geometry, cfg.elements, cfg.scan
    return {
        "phi_rad": cfg.source.phi,
        "mapping": cfg.source.mapping,
        "wavelength_m": g.wavelength,
        "slit_width_m": g.slit_width,
        "slit_separation_m": g.slit_separation,
        "distance_m": g.distance,
        "qwp1_rad": e.qwp1,
        "qwp2_rad": e.qwp2,
        "pol1_rad": e.pol1,
        "detection_order": e.detection_order,
        "peak_rate": s.peak_rate,
        "dwell_scale": s.dwell_scale,
        "misalignment_rad": s.misalignment,
    }


def _fit_dict(fit: analysis.VisibilityFit) -> dict:
    return {
        "offset": fit.offset,
        "amplitude": fit.amplitude,
        "phase_rad": fit.phase,
        "visibility": fit.visibility,
        "rms_residual": fit.rms_residual,
    }


def _state(cfg: BenchConfig, scfg):
    t1, t2 = scfg.plate_angles
    return engine.prepare(cfg.source, t1, t2)


def cmd_pattern(cfg, scfg, out):
    xs = scfg.positions()
    exp = expected_counts(scfg, xs)
    dens = engine.coincidence_pattern(_state(cfg, scfg), scfg.alpha, cfg.geometry, xs)
    write_csv(out / "pattern.csv", ["position_m", "expected", "density"], zip(xs, exp, dens))
    fit = analysis.fit_pattern(xs, dens, cfg.geometry)
    write_json(out / "pattern.json", {"command": "pattern", "parameters": _params(cfg), "points": len(xs), "fit": _fit_dict(fit)})
    return [f"pattern: {len(xs)} points, visibility {fit.visibility:.6f}"]


def cmd_scan(cfg, scfg, out):
    rec = simulate_scan(scfg)
    write_csv(out / "scan.csv", ["position_m", "expected", "counts"], zip(rec.positions, rec.expected, rec.coincidences))
    fit = analysis.fit_fringes(rec, cfg.geometry)
    sigma = analysis.bootstrap_visibility(rec, cfg.geometry, n_boot=200, seed=scfg.seed)
    write_json(
        out / "scan.json",
        {
            "command": "scan",
            "parameters": _params(cfg),
            "seed": rec.seed,
            "points": len(rec.positions),
            "total_counts": int(rec.coincidences.sum()),
            "fit": _fit_dict(fit),
            "visibility_bootstrap_std": sigma,
        },
    )
    return [f"scan: seed {rec.seed}, {int(rec.coincidences.sum())} counts, V = {fit.visibility:.4f} +/- {sigma:.4f}"]


def cmd_erase_demo(cfg, scfg, out):
    t1, t2 = scfg.plate_angles
    if t1 is None or t2 is None:
        raise ConfigError("erase-demo needs both qwp1 and qwp2 in [elements]")
    state = _state(cfg, scfg)
    g, xs = cfg.geometry, scfg.positions()
    theta = cfg.elements.qwp1
    scale = scfg.peak_rate / 2
    # polarized patterns at doubled dwell, compensating for POL1 losses
    fringe = 2 * scale * engine.coincidence_pattern(state, theta, g, xs)
    anti = 2 * scale * engine.coincidence_pattern(state, theta + math.pi / 2, g, xs)
    nopol = scale * engine.coincidence_pattern(state, None, g, xs)
    avg = (fringe + anti) / 2
    write_csv(
        out / "erase-demo.csv",
        ["position_m", "fringe", "antifringe", "averaged_sum", "no_polarizer"],
        zip(xs, fringe, anti, avg, nopol),
    )
    ff, fa, fn = (analysis.fit_pattern(xs, y, g) for y in (fringe, anti, nopol))
    dphase = abs(math.remainder(ff.phase - fa.phase, 2 * math.pi))
    write_json(
        out / "erase-demo.json",
        {
            "command": "erase-demo",
            "parameters": _params(cfg),
            "alpha_fringe_rad": theta,
            "alpha_antifringe_rad": theta + math.pi / 2,
            "fringe": _fit_dict(ff),
            "antifringe": _fit_dict(fa),
            "no_polarizer": _fit_dict(fn),
            "fringe_phase_difference_rad": dphase,
            "max_abs_averaged_sum_minus_no_polarizer": float(np.max(np.abs(avg - nopol))),
        },
    )
    return [
        f"erase-demo: POL1 at {_deg(theta):.3f} deg -> V = {ff.visibility:.6f}",
        f"            POL1 at {_deg(theta) + 90:.3f} deg -> V = {fa.visibility:.6f}",
        f"            phase difference {math.degrees(dphase):.6f} deg, no polarizer V = {fn.visibility:.6f}",
    ]


def cmd_whichpath(cfg, scfg, out):
    t1, t2 = scfg.plate_angles
    rows = engine.which_path_table(_state(cfg, scfg))
    write_csv(
        out / "whichpath.csv",
        ["p", "s", "joint_probability", "slit1", "slit2"],
        ([r["p"], r["s"], r["joint_probability"], r["slit1"], r["slit2"]] for r in rows),
    )
    write_json(out / "whichpath.json", {"command": "whichpath", "parameters": _params(cfg), "rows": rows})
    lines = [f"whichpath: plates at {_deg(t1)} / {_deg(t2)} deg"]
    for r in rows:
        lines.append(f"  p={r['p']} then s={r['s']}: P(slit1)={r['slit1']:.3f} P(slit2)={r['slit2']:.3f}")
    return lines


def cmd_ordering(cfg, scfg, out):
    state = _state(cfg, scfg)
    g, xs = cfg.geometry, scfg.positions()
    alphas = [scfg.alpha] if scfg.alpha is not None else [0.0, math.pi / 2]
    rows, worst = [], 0.0
    for a in alphas:
        pf = engine.pattern_by_ordering(state, a, g, xs, "p-first")
        sf = engine.pattern_by_ordering(state, a, g, xs, "s-first")
        worst = max(worst, float(np.max(np.abs(pf - sf))))
        rows.extend(zip([a] * len(xs), xs, pf, sf))
    write_csv(out / "ordering.csv", ["alpha_rad", "position_m", "p_first", "s_first"], rows)
    write_json(
        out / "ordering.json",
        {"command": "ordering", "parameters": _params(cfg), "alphas_rad": alphas, "max_deviation": worst},
    )
    return [f"ordering: max |p-first - s-first| = {worst:.3e}"]


def cmd_chsh(cfg, scfg, out):
    psi = optics.spdc_state(cfg.source)
    s_val, (a, a2, b, b2) = analysis.optimize_chsh(psi)
    pairs = [(a, b), (a, b2), (a2, b), (a2, b2)]
    write_csv(
        out / "chsh.csv",
        ["a_rad", "b_rad", "correlation"],
        ([x, y, analysis.correlation(psi, x, y)] for x, y in pairs),
    )
    write_json(
        out / "chsh.json",
        {
            "command": "chsh",
            "parameters": _params(cfg),
            "S": s_val,
            "angles_rad": {"a": a, "a_prime": a2, "b": b, "b_prime": b2},
            "classical_bound": 2.0,
            "tsirelson_bound": 2 * math.sqrt(2),
        },
    )
    return [
        f"chsh: S = {s_val:.9f} (classical bound 2, 2*sqrt2 = {2 * math.sqrt(2):.9f})",
        "      angles a, a', b, b' = " + ", ".join(f"{math.degrees(v):.4f}" for v in (a, a2, b, b2)) + " deg",
    ]


_HANDLERS = {
    "pattern": cmd_pattern,
    "scan": cmd_scan,
    "erase-demo": cmd_erase_demo,
    "whichpath": cmd_whichpath,
    "ordering": cmd_ordering,
    "chsh": cmd_chsh,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eraserlab", description="Double-slit quantum eraser simulator")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="bench configuration file")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--seed", type=int, default=None, help="override [scan] seed")
    p.add_argument("--points", type=int, default=None, help="override [scan] points")
    return p


def run(command: str, cfg: BenchConfig, out: Path, seed: int | None = None, points: int | None = None) -> list[str]:
    scfg = cfg.scan_config(seed=seed, points=points)
    out.mkdir(parents=True, exist_ok=True)
    return _HANDLERS[command](cfg, scfg, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        lines = run(args.command, cfg, Path(args.out), args.seed, args.points)
    except ConfigError as exc:
        print(f"eraserlab: config error in {args.config}: {exc}", file=sys.stderr)
        return 2
    except (EraserError, ValueError, OSError) as exc:
        print(f"eraserlab {args.command}: {exc}", file=sys.stderr)
        return 1
    for line in lines:
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
