"""Command-line front end writing CSV result files.

Subcommands::

    estimate          one sample: f_hat, F_hat, w(F_hat), g_hat and the truth
    simulate          replicated 1000 x MISE of block, term-by-term and kernel
    sweep-kappa       mean L2 risk versus the threshold constant
    sweep-p           mean L_p risk versus p, block and term-by-term
    kernel-bandwidth  LSCV and Monte Carlo MISE curves versus the bandwidth
    compare           replicated block and kernel estimates of g for overlays

CSV columns:

    simulate          model, weight, param, n, method, reps, mise_x1000, seed
    sweep-kappa       model, kappa, risk_l2, is_universal
    sweep-p           model, p, method, risk_lp
    estimate          x, f_hat, F_hat, w_of_F_hat, g_hat, f_true, g_true
    kernel-bandwidth  model, curve, h, value   (curve: lscv | mise)
                      plus *_summary.csv: model, h_rot, h_lscv, h_mise
    compare           model, weight, replication, x, g_true, block, kernel

Options come from the command line, then an optional JSON ``--config``
file, then the defaults.  Exit status: 0 on success, 1 on a configuration
error, 2 on a runtime error.  ``WDEN_THREADS`` caps worker processes.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError, WdenError
from .estimator import decompose_sample, reconstruct
from .kernel import select_h_lscv, kde_eval
from .risk import METHODS, ExperimentConfig, h_mise_scan, kappa_sweep, mise_table, p_sweep
from .testbed import MODEL_NAMES, make_model, model_cdf, model_pdf, replication_stream, true_g
from .weights import EmpiricalCdf, parse_weight, weight_eval

DEFAULTS = {
    "model": None,
    "N": None,
    "n": 1000,
    "p": 2.0,
    "reps": None,
    "seed": 0,
    "T": 512,
    "j1": 3,
    "b": None,
    "kappa": "universal",
    "wavelet": "sym6",
    "folds": 10,
    "noise": "rms",
    "out": ".",
    "svg": False,
}

COMMAND_DEFAULTS = {
    "estimate": {"N": "degenerate:2", "reps": 1},
    "simulate": {"N": "geometric:0.5", "reps": 50},
    "sweep-kappa": {"N": "degenerate:2", "reps": 10},
    "sweep-p": {"N": "degenerate:2", "reps": 10},
    "kernel-bandwidth": {"N": "degenerate:1", "reps": 20},
    "compare": {"N": "geometric:0.5", "reps": 50},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _write_svg(path: Path, curves, xlabel="", ylabel="", width=480, height=320):
    """Minimal static line plot; `curves` maps a label to ``(x, y)`` arrays."""
    pad = 40
    xs = np.concatenate([np.asarray(c[0], float) for c in curves.values()])
    ys = np.concatenate([np.asarray(c[1], float) for c in curves.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="{pad}" y="{pad // 2}" width="{width - 1.5 * pad}" height="{height - 1.5 * pad}" fill="none" stroke="#888"/>',
    ]
    for i, (label, (cx, cy)) in enumerate(curves.items()):
        px = pad + (np.asarray(cx, float) - x0) / (x1 - x0) * (width - 1.5 * pad)
        py = height - pad - (np.asarray(cy, float) - y0) / (y1 - y0) * (height - 1.5 * pad)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = colors[i % len(colors)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        parts.append(f'<text x="{pad + 6}" y="{pad // 2 + 14 * (i + 1)}" font-size="11" fill="{color}">{label}</text>')
    parts.append(f'<text x="{width / 2}" y="{height - 8}" font-size="11" text-anchor="middle">{xlabel} [{x0:.3g}, {x1:.3g}]</text>')
    parts.append(f'<text x="4" y="{pad // 2 - 4}" font-size="11">{ylabel} [{y0:.3g}, {y1:.3g}]</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")
    return path


def build_parser():
    parser = _Parser(prog="wden", description=__doc__.split("\n")[0],
                     epilog=__doc__.split("\n", 1)[1], formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"wden {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name in COMMAND_DEFAULTS:
        sp = sub.add_parser(name, help=f"{name} experiment", formatter_class=argparse.RawDescriptionHelpFormatter,
                            epilog=__doc__.split("\n", 1)[1])
        sp.add_argument("--config", help="JSON file with option values (flags take precedence)")
        sp.add_argument("--model", help=f"test density: {', '.join(MODEL_NAMES)}"
                        + (" (default: all four)" if name != "estimate" else ""))
        sp.add_argument("--N", dest="N", help="weight / law of N, e.g. degenerate:2, geometric:0.9, poisson+1:1, order:3:2, pileup:geometric:0.5")
        sp.add_argument("--n", type=int, help="sample size (default 1000)")
        sp.add_argument("--p", type=float, help="risk exponent (default 2)")
        sp.add_argument("--reps", type=int, help="Monte Carlo replications")
        sp.add_argument("--seed", type=int, help="master seed (default 0)")
        sp.add_argument("--T", type=int, help="grid points, a power of two (default 512)")
        sp.add_argument("--j1", help="coarse level, integer or 'auto' (default 3)")
        sp.add_argument("--b", type=float, help="half-width of the estimation interval (default: model's)")
        sp.add_argument("--kappa", help="'universal' or a number (default universal)")
        sp.add_argument("--noise", choices=("rms", "mad"), help="noise scale behind the universal threshold")
        sp.add_argument("--wavelet", help="filter name (default sym6)")
        sp.add_argument("--folds", type=int, help="LSCV folds; 1 means exact leave-one-out (default 10)")
        sp.add_argument("--out", help="output directory (default .)")
        sp.add_argument("--svg", action="store_true", default=None, help="also write a static SVG plot per curve")
        if name == "simulate":
            sp.add_argument("--sizes", help="comma-separated sample sizes, overrides --n")
        if name == "sweep-p":
            sp.add_argument("--pgrid", help="comma-separated p values (default 1,1.5,2,2.5,3)")
    return parser


def _resolve(args):
    """Merge flags over the JSON config over the defaults."""
    opts = dict(DEFAULTS)
    opts.update(COMMAND_DEFAULTS[args.command])
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigurationError(f"cannot read config file {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigurationError("config file must hold a JSON object")
        unknown = set(loaded) - set(vars(args)) - set(DEFAULTS)
        if unknown:
            raise ConfigurationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        opts.update(loaded)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        opts[key] = value
    return opts


def _int_or_none(value, name):
    if value is None or str(value).lower() in ("auto", "none"):
        return None
    try:
        return int(value)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer or 'auto', got {value!r}") from None


def _experiment(opts, model, n=None, weight=None):
    T = int(opts["T"])
    if T < 16 or T & (T - 1):
        raise ConfigurationError(f"T must be a power of two >= 16, got {T}")
    kappa = opts["kappa"]
    if str(kappa).lower() != "universal":
        try:
            kappa = float(kappa)
        except ValueError:
            raise ConfigurationError(f"kappa must be 'universal' or a number, got {kappa!r}") from None
    else:
        kappa = "universal"
    return ExperimentConfig(
        model=model,
        weight=weight if weight is not None else parse_weight(opts["N"]),
        n=int(opts["n"] if n is None else n),
        p=float(opts["p"]),
        reps=int(opts["reps"]),
        seed=int(opts["seed"]),
        grid_levels=T.bit_length() - 1,
        half_support=None if opts["b"] is None else float(opts["b"]),
        coarse_level=_int_or_none(opts["j1"], "j1"),
        kappa=kappa,
        wavelet=str(opts["wavelet"]),
        folds=int(opts["folds"]),
        noise=str(opts["noise"]),
    )


def _models(opts, required=False):
    if opts["model"] is None:
        if required:
            raise ConfigurationError("--model is required")
        return list(MODEL_NAMES)
    return [str(m) for m in str(opts["model"]).split(",")]


def _meta(out: Path, command, opts, files):
    meta = {"command": command, "version": __version__, "options": opts, "files": [f.name for f in files]}
    (out / f"{command}.meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")


def cmd_estimate(opts, out):
    model_name = _models(opts, required=True)[0]
    cfg = _experiment(opts, model_name)
    model = make_model(model_name)
    x = cfg.sample(0)
    est_cfg = replace(cfg.estimator(), clip_nonnegative=True)
    est = reconstruct(decompose_sample(x, est_cfg))
    grid = est.grid
    F_hat = EmpiricalCdf(x)(grid)
    w_hat = weight_eval(cfg.weight, F_hat)
    rows = zip(grid, est.values, F_hat, w_hat, w_hat * est.values, model_pdf(model, grid), true_g(model, cfg.weight, grid))
    path = _write_csv(out / f"estimate_{model.label}.csv",
                      ["x", "f_hat", "F_hat", "w_of_F_hat", "g_hat", "f_true", "g_true"], rows)
    files = [path]
    if opts["svg"]:
        for col, est_v, true_v in (("f", est.values, model_pdf(model, grid)),
                                   ("F", F_hat, model_cdf(model, grid)),
                                   ("w", w_hat, weight_eval(cfg.weight, model_cdf(model, grid))),
                                   ("g", w_hat * est.values, true_g(model, cfg.weight, grid))):
            files.append(_write_svg(out / f"estimate_{model.label}_{col}.svg",
                                    {"estimate": (grid, est_v), "true": (grid, true_v)}, "x", col))
    print(f"estimate: {path} ({model.label}, {cfg.weight.label}, n={cfg.n}, seed={cfg.seed}, "
          f"j1={est.scales.j1}, j2={est.scales.j2}, L={est.scales.L}, kappa={est.scales.kappa:.4g})")
    return files


def cmd_simulate(opts, out):
    sizes = [int(s) for s in str(opts["sizes"]).split(",")] if opts.get("sizes") else [int(opts["n"])]
    weight = parse_weight(opts["N"])
    rows = []
    for model_name in _models(opts):
        for n in sizes:
            cfg = _experiment(opts, model_name, n=n, weight=weight)
            table = mise_table(cfg, [weight])
            for method in METHODS:
                rep = table[weight.label, method]
                rows.append((rep.model, weight.label, weight.param, n, method, cfg.reps, rep.mise_x1000, cfg.seed))
                print(f"simulate: {rep.model} {weight.label} n={n} {method}: 1000*MISE={rep.mise_x1000:.4f}")
    path = _write_csv(out / "simulate.csv",
                      ["model", "weight", "param", "n", "method", "reps", "mise_x1000", "seed"], rows)
    print(f"simulate: {path} ({len(rows)} rows, seed={opts['seed']})")
    return [path]


def cmd_sweep_kappa(opts, out):
    rows, files = [], []
    for model_name in _models(opts):
        cfg = _experiment(opts, model_name)
        sw = kappa_sweep(cfg)
        label = make_model(model_name).label
        for i, (k, r) in enumerate(zip(sw.kappas, sw.risks)):
            rows.append((label, k, r, int(i == sw.universal_index)))
        print(f"sweep-kappa: {label} universal={sw.universal:.4g} argmin={sw.argmin:.4g}")
        if opts["svg"]:
            files.append(_write_svg(out / f"sweep_kappa_{label}.svg", {label: (sw.kappas, sw.risks)}, "kappa", "L2 risk"))
    path = _write_csv(out / "sweep_kappa.csv", ["model", "kappa", "risk_l2", "is_universal"], rows)
    print(f"sweep-kappa: {path} (seed={opts['seed']})")
    return [path, *files]


def cmd_sweep_p(opts, out):
    p_grid = [float(v) for v in str(opts.get("pgrid") or "1,1.5,2,2.5,3").split(",")]
    rows, files = [], []
    for model_name in _models(opts, required=True):
        cfg = _experiment(opts, model_name)
        label = make_model(model_name).label
        res = p_sweep(cfg, p_grid)
        for p, block, term in res:
            rows.append((label, p, "block", block))
            rows.append((label, p, "termwise", term))
        print(f"sweep-p: {label} " + " ".join(f"p={p:g}:{b:.3g}/{t:.3g}" for p, b, t in res))
        if opts["svg"]:
            ps = np.array([r[0] for r in res])
            files.append(_write_svg(out / f"sweep_p_{label}.svg",
                                    {"block": (ps, np.log([r[1] for r in res])),
                                     "termwise": (ps, np.log([r[2] for r in res]))}, "p", "log risk"))
    path = _write_csv(out / "sweep_p.csv", ["model", "p", "method", "risk_lp"], rows)
    print(f"sweep-p: {path} (seed={opts['seed']})")
    return [path, *files]


def cmd_kernel_bandwidth(opts, out):
    rows, summary, files = [], [], []
    for model_name in _models(opts):
        cfg = _experiment(opts, model_name)
        label = make_model(model_name).label
        sel = select_h_lscv(cfg.sample(0), folds=cfg.folds, seed=cfg.seed)
        for h, s in sel.scan:
            rows.append((label, "lscv", h, s))
        h_mise, hs, mise = h_mise_scan(cfg)
        for h, m in zip(hs, mise):
            rows.append((label, "mise", h, m))
        summary.append((label, sel.h_rot, sel.h_lscv, h_mise))
        print(f"kernel-bandwidth: {label} h_rot={sel.h_rot:.4g} h_lscv={sel.h_lscv:.4g} h_mise={h_mise:.4g}")
        if opts["svg"]:
            files.append(_write_svg(out / f"kernel_lscv_{label}.svg", {"LSCV": (np.log(sel.hs), sel.scores)}, "log h", "LSCV"))
            files.append(_write_svg(out / f"kernel_mise_{label}.svg", {"MISE": (np.log(hs), mise)}, "log h", "MISE"))
    path = _write_csv(out / "kernel_bandwidth.csv", ["model", "curve", "h", "value"], rows)
    spath = _write_csv(out / "kernel_bandwidth_summary.csv", ["model", "h_rot", "h_lscv", "h_mise"], summary)
    print(f"kernel-bandwidth: {path}, {spath} (seed={opts['seed']})")
    return [path, spath, *files]


def cmd_compare(opts, out):
    rows, files = [], []
    for model_name in _models(opts):
        cfg = _experiment(opts, model_name)
        model = make_model(model_name)
        grid = cfg.grid
        g = true_g(model, cfg.weight, grid)
        curves = {"true": (grid, g)}
        for r in range(cfg.reps):
            x = cfg.sample(r)
            w_hat = weight_eval(cfg.weight, EmpiricalCdf(x)(grid))
            block = w_hat * reconstruct(decompose_sample(x, cfg.estimator())).values
            sel = select_h_lscv(x, folds=cfg.folds, seed=replication_stream(cfg.seed, r))
            kern = w_hat * kde_eval(x, sel.h_lscv, grid)
            rows.extend((model.label, cfg.weight.label, r, t, gt, bv, kv) for t, gt, bv, kv in zip(grid, g, block, kern))
            if r < 5:
                curves[f"block {r}"] = (grid, block)
        print(f"compare: {model.label} {cfg.weight.label} {cfg.reps} replications")
        if opts["svg"]:
            files.append(_write_svg(out / f"compare_{model.label}.svg", curves, "x", "g"))
    path = _write_csv(out / "compare.csv", ["model", "weight", "replication", "x", "g_true", "block", "kernel"], rows)
    print(f"compare: {path} (seed={opts['seed']})")
    return [path, *files]


COMMANDS = {
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "sweep-kappa": cmd_sweep_kappa,
    "sweep-p": cmd_sweep_p,
    "kernel-bandwidth": cmd_kernel_bandwidth,
    "compare": cmd_compare,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            raise UsageError("wden: error: a command is required")
        opts = _resolve(args)
        out = Path(opts["out"])
        out.mkdir(parents=True, exist_ok=True)
        files = COMMANDS[args.command](opts, out)
        _meta(out, args.command, opts, files)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ConfigurationError as exc:
        print(f"wden: configuration error: {exc}", file=sys.stderr)
        return 1
    except (WdenError, ArithmeticError, OSError, ValueError) as exc:
        print(f"wden: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
