"""Command-line front end: spectrum scans on grids, presets and oracle checks.

Exit codes: 0 success, 1 usage or parameter error, 2 verification failure,
3 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from fluorospec import kernel
from fluorospec.limits import (perfect_resolution_spectrum, stationary_grid,
                               stationary_spectrum, static_field_spectrum)
from fluorospec.model import (DotParams, DriveParams, FilterSettings, dot_params_from_d0,
                              dot_params_from_rates)
from fluorospec.numerics import DEFAULT_EPS_TRUNC
from fluorospec.oracle import finite_time_stationary_spectrum, quadrature_report
from fluorospec.scanio import emit
from fluorospec.spectrum import SpectrumScan, physical_spectrum, spectrum_scan

__all__ = ["PRESETS", "Preset", "main", "parse_grid", "build_scan", "verify_scan"]

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

MODES = ("full", "stationary", "perfect", "static", "finite-T")

# late-time verification uses the periodic attractor once e^{-G t} is negligible
_ASYMPTOTIC_GT = 40.0
_VERIFY_POINTS = 5
_VERIFY_T_MAX = 5.0  # in units of 1 / gamma_s; keeps the double quadrature cheap


@dataclass(frozen=True)
class Preset:
    mode: str
    delta_as: float
    omega_f: float
    phi: float = 0.0
    gamma_filter: float | None = None
    t_grid: str | None = None


PRESETS = {
    "fig1": Preset("perfect", 100.0, 10.0),
    "fig2": Preset("perfect", 10.0, 10.0),
    "fig3": Preset("perfect", 10.0, 0.1),
    "fig4": Preset("perfect", 1000.0, 10.0),
    "fig6": Preset("full", 10.0, 0.1, 0.0, 0.1, "0:1:100"),
    "fig7": Preset("full", 10.0, 10.0, 0.0, 0.1, "0:1:100"),
    "fig8": Preset("full", 10.0, 10.0, 0.0, 0.1, "0:0.1:1"),
    "fig9": Preset("full", 10.0, 10.0, math.pi / 2, 0.1, "0:0.1:1"),
    "fig10": Preset("full", 100.0, 10.0, 0.0, 0.1, "0:0.05:1"),
    "fig11": Preset("full", 100.0, 10.0, math.pi / 2, 0.1, "0:0.05:1"),
}
PRESET_POINTS = 401


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> np.ndarray:
    """Parse ``a:s:b`` (inclusive, step ``s > 0``) or a single number."""
    parts = text.split(":")
    try:
        nums = [float(x) for x in parts]
    except ValueError:
        raise UsageError(f"malformed grid {text!r}; expected a:s:b") from None
    if not all(math.isfinite(x) for x in nums):
        raise UsageError(f"grid {text!r} has non-finite entries")
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise UsageError(f"malformed grid {text!r}; expected a:s:b")
    a, s, b = nums
    if s <= 0 or b < a:
        raise UsageError(f"grid {text!r} needs step > 0 and b >= a")
    count = int(math.floor((b - a) / s + 1e-9)) + 1
    return a + s * np.arange(count)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fluorospec", description="Resonance fluorescence spectra of a quantum dot "
                "under a low-frequency drive.")
    p.add_argument("--preset", choices=sorted(PRESETS, key=lambda s: int(s[3:])))
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--gamma-s", type=float, default=1.0, help="dipole relaxation rate (default 1)")
    p.add_argument("--gamma", type=float, help="filter width")
    p.add_argument("--delta-as", type=float, help="drive coupling amplitude")
    p.add_argument("--omega-f", type=float, help="drive angular frequency")
    p.add_argument("--phi", type=float, help="drive phase")
    pump = p.add_mutually_exclusive_group()
    pump.add_argument("--d0", type=float, help="stationary inversion (default 0)")
    pump.add_argument("--gamma-p", type=float, help="pump rate")
    times = p.add_mutually_exclusive_group()
    times.add_argument("--t", type=float, help="single time (or integration time for finite-T)")
    times.add_argument("--t-grid", help="time grid a:s:b")
    p.add_argument("--detuning-grid", help="detuning grid a:s:b")
    p.add_argument("--eps-trunc", type=float, default=DEFAULT_EPS_TRUNC,
                   help=f"omitted Bessel mass (default {DEFAULT_EPS_TRUNC:g})")
    p.add_argument("--quad-n", type=int, default=2048, help="Simpson intervals for finite-T")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--verify", action="store_true", help="compare against brute-force quadrature")
    p.add_argument("--tol", type=float, default=1e-6, help="relative tolerance for --verify")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def _resolve(args) -> dict:
    preset = PRESETS[args.preset] if args.preset else None

    def pick(value, preset_attr):
        if value is not None:
            return value
        return getattr(preset, preset_attr) if preset else None

    mode = args.mode or (preset.mode if preset else "full")
    delta_as = pick(args.delta_as, "delta_as")
    omega_f = pick(args.omega_f, "omega_f")
    phi = pick(args.phi, "phi") or 0.0
    gamma = pick(args.gamma, "gamma_filter")
    if delta_as is None:
        raise UsageError("--delta-as is required (or use --preset)")
    if mode != "static" and omega_f is None:
        raise UsageError("--omega-f is required (or use --preset)")
    if mode in ("full", "stationary") and gamma is None:
        raise UsageError(f"--gamma is required for mode {mode}")

    if args.t is not None:
        t_grid = np.array([args.t])
    elif args.t_grid is not None:
        t_grid = parse_grid(args.t_grid)
    elif preset is not None and preset.t_grid is not None and mode in ("full", "stationary"):
        t_grid = parse_grid(preset.t_grid)
    elif mode in ("perfect", "static"):
        t_grid = None
    else:
        raise UsageError(f"--t or --t-grid is required for mode {mode}")

    if args.detuning_grid is not None:
        d_grid = parse_grid(args.detuning_grid)
    else:
        half = 2.0 * abs(delta_as) if delta_as else 10.0 * args.gamma_s
        d_grid = np.linspace(-half, half, PRESET_POINTS)

    if args.gamma_p is not None:
        dot = dot_params_from_rates(args.gamma_s, args.gamma_p)
    else:
        dot = dot_params_from_d0(args.gamma_s, 0.0 if args.d0 is None else args.d0)
    drive = DriveParams(delta_as, omega_f, phi) if omega_f is not None else None
    if not 0.0 < args.eps_trunc < 1.0:
        raise UsageError("--eps-trunc must lie in (0, 1)")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    return dict(mode=mode, dot=dot, drive=drive, delta_as=delta_as, gamma=gamma,
                t_grid=t_grid, d_grid=d_grid)


def build_scan(mode: str, dot: DotParams, drive: DriveParams | None, delta_as: float,
               gamma: float | None, t_grid, d_grid, eps_trunc: float = DEFAULT_EPS_TRUNC,
               workers: int = 1, quad_n: int = 2048) -> SpectrumScan:
    """Evaluate the requested mode on the grid and wrap it in a scan record.

    Infinite-time limits are stored with ``t = inf``; for ``finite-T`` the
    time axis holds the integration time.
    """
    d_grid = np.asarray(d_grid, dtype=float)
    if mode == "full":
        return spectrum_scan(dot, drive, gamma, t_grid, d_grid, eps_trunc, workers)
    if mode == "stationary":
        comb, osc = stationary_grid(dot, drive, gamma, t_grid, d_grid, eps_trunc)
        return SpectrumScan(dot, drive, gamma, eps_trunc, np.asarray(t_grid, dtype=float), d_grid,
                            comb + osc, comb, osc, "stationary")
    if mode == "perfect":
        vals = np.atleast_2d(perfect_resolution_spectrum(dot, drive, d_grid, eps_trunc))
        return SpectrumScan(dot, drive, 0.0, eps_trunc, np.array([math.inf]), d_grid,
                            vals, vals.copy(), np.zeros_like(vals), "perfect_resolution")
    if mode == "static":
        vals = np.atleast_2d(static_field_spectrum(dot, delta_as, d_grid))
        return SpectrumScan(dot, None, 0.0, eps_trunc, np.array([math.inf]), d_grid,
                            vals, vals.copy(), np.zeros_like(vals), "static_field",
                            {"static.delta_as": float(delta_as)})
    if mode == "finite-T":
        tg = np.asarray(t_grid, dtype=float)
        vals = np.array([[finite_time_stationary_spectrum(dot, drive, d, T, quad_n) for d in d_grid]
                         for T in tg])
        return SpectrumScan(dot, drive, 0.0, eps_trunc, tg, d_grid, vals, vals.copy(),
                            np.zeros_like(vals), "finite_T", {"quad_n": quad_n})
    raise UsageError(f"unknown mode {mode!r}")


def _spread(n: int, k: int) -> list[int]:
    if n <= k:
        return list(range(n))
    return sorted({int(round(x)) for x in np.linspace(0, n - 1, k)})


def verify_scan(scan: SpectrumScan, tol: float) -> tuple[bool, list[str]]:
    """Spot-check a full or stationary scan against independent evaluations.

    Early times (``0 < t <= 5 / gamma_s``) go to the self-converged
    double quadrature; late times with ``gamma t >= 40`` go to the
    periodic attractor. At most five times and five detunings are sampled.
    """
    lines = []
    ok = True
    dot, drive, g = scan.dot, scan.drive, scan.gamma_filter
    tg = scan.t_grid
    if scan.produced_by == "full":
        early = [i for i in range(tg.size) if 0 < tg[i] <= _VERIFY_T_MAX / dot.gamma_s]
        late = [i for i in range(tg.size) if g * tg[i] >= _ASYMPTOTIC_GT]
        rows = [early[i] for i in _spread(len(early), _VERIFY_POINTS)]
        rows += [late[i] for i in _spread(len(late), 2)]
    elif scan.produced_by == "stationary":
        rows = _spread(tg.size, _VERIFY_POINTS)
    else:
        raise UsageError(f"--verify is not available for {scan.produced_by}")
    if not rows:
        raise UsageError("no grid times suitable for verification")
    cols = _spread(scan.detuning_grid.size, _VERIFY_POINTS)
    worst = 0.0
    for i in rows:
        t = float(tg[i])
        for j in cols:
            d = float(scan.detuning_grid[j])
            filt = FilterSettings(g, d)
            value = float(scan.values[i, j])
            if scan.produced_by == "stationary":
                # shift by whole drive periods until the transient is gone
                period = 2.0 * math.pi / drive.omega_f
                shift = period * math.ceil(max(0.0, _ASYMPTOTIC_GT / g - t) / period)
                ref = physical_spectrum(dot, drive, filt, t + shift, scan.eps_trunc).value
                how = f"full at t+{shift:g}"
            elif g * t >= _ASYMPTOTIC_GT:
                ref = stationary_spectrum(dot, drive, filt, t, scan.eps_trunc)
                how = "attractor"
            else:
                report, _ = quadrature_report(value, dot, drive, filt, t)
                ref = report.oracle_value
                how = f"quadrature n={report.quadrature_nodes}"
            rel = abs(value - ref) / max(abs(ref), 1e-12)
            worst = max(worst, rel)
            passed = rel <= tol
            ok &= passed
            lines.append(f"{'ok  ' if passed else 'FAIL'} t={t:g} detuning={d:g} "
                         f"value={value:.12g} ref={ref:.12g} rel_err={rel:.2e} ({how})")
    lines.append(f"max rel_err {worst:.2e} (tol {tol:g}): {'PASS' if ok else 'FAIL'}")
    return ok, lines


def _attach_negative_values(argv: list[str], valued: set[str]) -> list[str]:
    # argparse reads "-5:1:5" as an option; glue such values onto their flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in valued and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    valued = {opt for action in parser._actions if action.nargs != 0 for opt in action.option_strings}
    args = parser.parse_args(_attach_negative_values(argv, valued))
    try:
        cfg = _resolve(args)
        scan = build_scan(cfg["mode"], cfg["dot"], cfg["drive"], cfg["delta_as"], cfg["gamma"],
                          cfg["t_grid"], cfg["d_grid"], args.eps_trunc, args.workers, args.quad_n)
        if args.preset:
            scan.extra["preset"] = args.preset
        scan.extra["backend"] = kernel.BACKEND
        verified = True
        if args.verify:
            verified, lines = verify_scan(scan, args.tol)
            for line in lines:
                print(line, file=sys.stderr)
    except (UsageError, ValueError) as exc:
        print(f"fluorospec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        text = emit(scan, args.format, args.out)
        if args.out is None:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"fluorospec: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if verified else EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
