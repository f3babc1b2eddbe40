"""Command-line front end: configs in, CSV/JSON and a gnuplot script out.

Exit codes: 0 pass, 1 usage or configuration error, 2 fail, 3 indeterminate.
All messages go to standard error; ``domain info`` prints its JSON to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, harmonic, tauberian, verify
from .berezin import SCAN_KINDS, KernelTruncation, PathSpec, TruncationError, berezin_scan, clear_caches, radial_path
from .config import ConfigError, ExperimentConfig, build_domain, build_symbol
from .domain import DomainError, PreconditionError
from .expressions import ExpressionError
from .moments import monomial_norm_sq, spectrum_table
from .output import read_sequence_csv, write_csv, write_json, write_plot_script
from .quadrature import QuadratureSpec
from .symbols import QuasiHomogeneousSymbol, from_quasi

EXPERIMENTS = ("moment-ratio", "edge-limit", "toeplitz", "hankel", "cesaro")
EXPERIMENT_ALIASES = {"eqn-ratio": "moment-ratio", "eqn5": "edge-limit"}
SYNTHETIC = {
    "harmonic": lambda k: 1.0 / (k + 1.0),
    "ones": lambda k: np.ones_like(k, dtype=float),
    "alternating": lambda k: np.where(k % 2 == 0, 1.0, -1.0) * (k + 1.0),
    "zero": lambda k: np.zeros_like(k, dtype=float),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _budget(text: str) -> tuple[int, int]:
    v = _ints(text)
    if len(v) != 2 or min(v) < 1:
        raise argparse.ArgumentTypeError("budget needs two positive integers, e.g. 4096,64")
    return v[0], v[1]


def _common(p: argparse.ArgumentParser, symbol: bool = True) -> None:
    p.add_argument("--config", help="experiment JSON (domain/symbol refs, grids, tolerances)")
    p.add_argument("--domain", help="domain JSON file")
    if symbol:
        p.add_argument("--symbol", help="symbol JSON file")
    p.add_argument("--out", default=None, help="output directory (default: out)")
    p.add_argument("--tol", type=float, default=None, help="experiment tolerance")
    p.add_argument("--budget", type=_budget, default=None, help="kernel index budget, e.g. 4096,64")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in reports (no command draws random numbers)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bergmanlab", description="Numerical experiments on Bergman spaces of Reinhardt domains in C^2.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("domain", help="inspect a domain")
    d.add_argument("action", choices=("info", "check"))
    _common(d, symbol=False)

    m = sub.add_parser("moments", help="monomial norms")
    m.add_argument("action", choices=("table",))
    _common(m, symbol=False)
    m.add_argument("--a1-max", type=int, default=32)
    m.add_argument("--a2-max", type=int, default=32)

    s = sub.add_parser("spectrum", help="Toeplitz weights and Hankel eigenvalues")
    _common(s)
    s.add_argument("--a1-max", type=int, default=32)
    s.add_argument("--a2-max", type=int, default=32)

    b = sub.add_parser("berezin", help="Berezin transform along a path")
    b.add_argument("action", choices=("scan",))
    _common(b)
    b.add_argument("--kind", choices=SCAN_KINDS, default="toeplitz")
    b.add_argument("--path", choices=("vertical", "radial"), default="vertical")
    b.add_argument("--y0", type=float, default=0.0, help="height of a vertical path")
    b.add_argument("--x-frac", type=float, default=0.5, help="target of a radial path, as a fraction of x_max")
    b.add_argument("--n-points", type=int, default=24)
    b.add_argument("--d-min", type=float, default=1e-4)

    c = sub.add_parser("decompose", help="quasi-homogeneous components and Cesaro means")
    _common(c)
    c.add_argument("--cutoff", type=int, default=2)
    c.add_argument("--k", type=_ints, default=[8, 32, 128])

    t = sub.add_parser("tauberian", help="Abel/Cesaro report for a coefficient sequence")
    _common(t)
    src = t.add_mutually_exclusive_group()
    src.add_argument("--sequence", help="CSV of k,b_k")
    src.add_argument("--synthetic", choices=sorted(SYNTHETIC))
    t.add_argument("--r", type=float, default=0.5, help="|z2| for a Berezin-derived sequence")
    t.add_argument("--n-terms", type=int, default=1024)
    t.add_argument("--lam", type=float, default=1.0)
    t.add_argument("--C", type=float, default=1.0)
    t.add_argument("--direct", action="store_true", help="use (k+1)A(k) with lam=2 instead of the regrouped sequence")
    t.add_argument("--threshold", type=float, default=tauberian.DEFAULT_THRESHOLD)

    v = sub.add_parser("verify", help="run a named experiment and report a verdict")
    v.add_argument("experiment", choices=EXPERIMENTS + tuple(EXPERIMENT_ALIASES))
    _common(v)
    v.add_argument("--alpha2", type=_ints, default=None, help="alpha2 values (moment-ratio, edge-limit, hankel)")
    v.add_argument("--alpha1-max", type=int, default=512)
    v.add_argument("--threshold", type=float, default=None, help="final-value threshold for scans")
    v.add_argument("--y0", type=_floats, default=None, help="heights of vertical scan paths")
    v.add_argument("--cutoff", type=int, default=2)
    v.add_argument("--k", type=_ints, default=None)
    return p


# -- helpers -------------------------------------------------------------------------------
def _merge(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig(args.command)
    for key in ("domain", "symbol", "out", "tol", "budget"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if cfg.out is None:
        cfg.out = "out"
    return cfg


def _domain(cfg):
    if cfg.domain is None:
        raise ConfigError("--domain is required")
    return build_domain(cfg.domain)


def _symbol(cfg, quasi: bool = True):
    if cfg.symbol is None:
        raise ConfigError("--symbol is required")
    s = build_symbol(cfg.symbol)
    if quasi and not isinstance(s, QuasiHomogeneousSymbol):
        raise ConfigError("this command needs a quasi-homogeneous symbol")
    return s


def _trunc(cfg) -> KernelTruncation:
    return KernelTruncation(budget=cfg.budget) if cfg.budget else KernelTruncation()


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands ----------------------------------------------------------------------------------
def cmd_domain(args, cfg) -> int:
    d = _domain(cfg)
    info = d.describe()
    if args.action == "info":
        print(json.dumps(info, indent=2, sort_keys=True))
        return 0
    ok = bool(info["convex_shadow"])
    _say(f"shadow convex: {ok} (worst violation {info['convexity_violation']:.3g}); "
         f"vertical disc: {info['has_vertical_disc']}; horizontal disc: {info['has_horizontal_disc']}")
    return 0 if ok else 2


def cmd_moments(args, cfg) -> int:
    d = _domain(cfg)
    quad = QuadratureSpec(rtol=cfg.tol) if cfg.tol else None
    rows = []
    for b in range(args.a2_max + 1):
        for a in range(args.a1_max + 1):
            e = monomial_norm_sq(d, (a, b), quad)
            rows.append((a, b, e.value, e.error))
    out = Path(cfg.out)
    write_csv(out / "norms.csv", ["a1", "a2", "norm_sq", "err"], rows)
    write_plot_script(out / "plot.gp", [("norms.csv", "a1", "norm_sq", "||z^a||^2")], "monomial norms", logy=True)
    _say(f"wrote {out / 'norms.csv'}")
    return 0


def cmd_spectrum(args, cfg) -> int:
    d, s = _domain(cfg), _symbol(cfg)
    quad = QuadratureSpec(rtol=cfg.tol) if cfg.tol else None
    tab = spectrum_table(d, s, range(args.a1_max + 1), range(args.a2_max + 1), quad)
    out = Path(cfg.out)
    rows = [(a, b, lp.real, ld, lam, e) for a, b, lp, ld, lam, e in tab.rows()]
    write_csv(out / "spectrum.csv", ["a1", "a2", "lambda_prime", "lambda_dprime", "lambda", "err"], rows)
    write_json(out / "report.json", {"domain": d.describe(), "symbol": s.name, "J": list(s.J),
                                     "all_ok": bool(np.all(tab.ok)), "clamped": int(np.sum(tab.clamped)),
                                     "diagnostics": tab.diagnostics})
    write_plot_script(out / "plot.gp", [("spectrum.csv", "a1", "lambda", "lambda"),
                                        ("spectrum.csv", "a1", "lambda_prime", "lambda'")], "spectrum")
    _say(f"wrote {out / 'spectrum.csv'}")
    return 0 if np.all(tab.ok) else 3


def cmd_berezin(args, cfg) -> int:
    d = _domain(cfg)
    s = _symbol(cfg, quasi=args.kind != "function")
    if args.path == "vertical":
        path = PathSpec("vertical", y0=args.y0, n_points=args.n_points, d_min=args.d_min)
    else:
        path = radial_path(d, args.x_frac, n_points=args.n_points, d_min=args.d_min)
    scan = berezin_scan(d, s, path, args.kind, _trunc(cfg))
    out = Path(cfg.out)
    write_csv(out / "scan.csv", ["t", "re", "im", "tail", "n1", "n2"], scan.rows())
    write_json(out / "report.json", {"domain": d.describe(), "symbol": s.name, "kind": args.kind,
                                     "path": path.describe(), "points": int(scan.t.size),
                                     "closest_distance": scan.closest_distance, "warnings": scan.warnings,
                                     "seed": args.seed})
    write_plot_script(out / "plot.gp", [("scan.csv", "t", "re", "Re"), ("scan.csv", "t", "im", "Im")],
                      f"Berezin {args.kind} scan")
    for w in scan.warnings:
        _say("warning: " + w)
    _say(f"wrote {out / 'scan.csv'} ({scan.t.size} points, closest distance {scan.closest_distance:.3g})")
    return 0 if scan.t.size else 3


def cmd_decompose(args, cfg) -> int:
    d = _domain(cfg)
    s = _symbol(cfg, quasi=False)
    f = from_quasi(s) if isinstance(s, QuasiHomogeneousSymbol) else s
    comps = harmonic.nonzero_components(f, d, args.cutoff)
    rows = []
    for J in comps:
        q = harmonic.project_QJ(f, J)
        rows.append((J[0], J[1], q.sup_norm(d), verify.boundary_sup(d, q)))
    out = Path(cfg.out)
    write_csv(out / "components.csv", ["j1", "j2", "sup", "boundary_sup"], rows)
    errs = [(k, harmonic.cesaro_mean(f, k).sup_error(d)) for k in args.k]
    write_csv(out / "cesaro.csv", ["k", "sup_error"], errs)
    write_plot_script(out / "plot.gp", [("cesaro.csv", "k", "sup_error", "sup |Lambda_k - phi|")],
                      "Cesaro reassembly", logx=True, logy=True)
    _say(f"{len(comps)} nonzero components with |j| <= {args.cutoff}; wrote {out}")
    return 0


def cmd_tauberian(args, cfg) -> int:
    out = Path(cfg.out)
    if args.sequence:
        seq = tauberian.CoefficientSequence(read_sequence_csv(Path(args.sequence)), args.lam, args.C,
                                            name=Path(args.sequence).stem)
    elif args.synthetic:
        seq = tauberian.CoefficientSequence.from_function(SYNTHETIC[args.synthetic], args.n_terms, args.lam,
                                                          args.C, args.synthetic)
    else:
        d, s = _domain(cfg), _symbol(cfg)
        if not d.normalized:
            s = s.pullback(d.x_max, float(d.rho1(d.x_max)))
            d = d.normalize_vertical_disc()
        seq = tauberian.berezin_coefficient_sequence(d, s, args.r, args.n_terms, args.C, regrouped=not args.direct)
    t_grid = tauberian.default_t_grid()
    dropped = []
    if seq.generator is None:
        dropped = [t for t in t_grid if tauberian.required_terms(seq, t) > len(seq)]
        t_grid = [t for t in t_grid if t not in dropped]
        if not t_grid:
            raise ValueError(f"sequence of {len(seq)} terms is too short for any Abel mean on the default grid")
    n_grid = [n for n in tauberian.default_n_grid() if n < len(seq)]
    rep = tauberian.tauberian_report(seq, t_grid, n_grid, threshold=args.threshold)
    for t in dropped:
        rep.notes.append(f"t={t:g} skipped: needs {tauberian.required_terms(seq, t)} terms, file has {len(seq)}")
    n = min(len(seq), max(args.n_terms, max(tauberian.default_n_grid()) + 1))
    write_csv(out / "sequence.csv", ["k", "b_k"], zip(range(n), seq.b[:n]))
    write_json(out / "report.json", rep.as_dict())
    write_plot_script(out / "plot.gp", [("sequence.csv", "k", "b_k", "b_k")], "coefficient sequence", logx=True)
    _say(f"verdict: {rep.verdict}")
    return 2 if rep.verdict == "violation" else 0


def cmd_verify(args, cfg) -> int:
    d = _domain(cfg)
    exp = EXPERIMENT_ALIASES.get(args.experiment, args.experiment)
    trunc = _trunc(cfg)
    thr = args.threshold if args.threshold is not None else cfg.threshold
    extra = {} if thr is None else {"threshold": thr}
    tol = {} if cfg.tol is None else {"tol": cfg.tol}
    grids = cfg.grids
    a2 = args.alpha2 if args.alpha2 is not None else grids.get("alpha2")
    paths = None
    y0 = args.y0 if args.y0 is not None else grids.get("y0")
    if y0 is not None:
        paths = [(f"vertical-y0={y:g}", PathSpec("vertical", y0=y)) for y in y0]
    if exp == "moment-ratio":
        rep = verify.verify_moment_ratio(d, a2 if a2 is not None else range(5), args.alpha1_max, **tol)
    elif exp == "edge-limit":
        s = _symbol(cfg)
        rep = verify.verify_edge_limit(d, s, (a2 or [1])[0], grids.get("alpha1"), **tol)
    elif exp == "toeplitz":
        rep = verify.verify_toeplitz_dichotomy(d, _symbol(cfg), paths, trunc=trunc, **tol, **extra)
    elif exp == "hankel":
        rep = verify.verify_hankel_dichotomy(d, _symbol(cfg), paths, a2 if a2 is not None else range(5),
                                             trunc=trunc, **tol, **extra)
    else:
        s = _symbol(cfg, quasi=False)
        f = from_quasi(s) if isinstance(s, QuasiHomogeneousSymbol) else s
        k = args.k or grids.get("k") or (8, 32, 128)
        rep = verify.verify_cesaro_reduction(d, f, k, args.cutoff, paths, trunc=trunc, **tol, **extra)
    out = Path(cfg.out)
    data = rep.as_dict()
    data["seed"] = args.seed
    write_json(out / "report.json", data)
    series = []
    for name, (header, rows) in rep.tables.items():
        write_csv(out / f"{name}.csv", header, rows)
        if name.startswith("scan_"):
            series.append((f"{name}.csv", "t", "re", name[5:]))
    if not series and rep.tables:
        name, (header, _) = next(iter(rep.tables.items()))
        series.append((f"{name}.csv", header[0], header[2], name))
    write_plot_script(out / "plot.gp", series, f"{exp} experiment")
    _say(f"{exp}: {rep.status}" + (f" ({rep.measured['verdict']})" if "verdict" in rep.measured else ""))
    if rep.status != verify.PASS:
        _say("expected: " + rep.expected)
        for line in rep.diagnostics:
            _say("  " + line)
    return rep.exit_code


COMMANDS = {"domain": cmd_domain, "moments": cmd_moments, "spectrum": cmd_spectrum, "berezin": cmd_berezin,
            "decompose": cmd_decompose, "tauberian": cmd_tauberian, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    # cached norm tables depend on request history at rounding level; start clean for byte-stable output
    clear_caches()
    try:
        args = parser.parse_args(argv)
        cfg = _merge(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        _say(str(exc))
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except TruncationError as exc:
        _say(f"indeterminate: {exc}")
        return 3
    except (ConfigError, DomainError, PreconditionError, ExpressionError, ValueError, OSError) as exc:
        _say(f"error: {exc}")
        return 1
