"""Command-line front end: spectra, packings, Gram tables, bounds, certificates.

All data output is deterministic: floats are written as %.12e, JSON keys are
sorted, and no timestamps enter data files. Exit codes: 0 success, 1
computational failure (singular Gram, packing budget), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import bounds as bounds_mod
from .certify import CertificateReport, certify_lower_bound
from .fock import build_system, gram_csv_lines, gram_matrix
from .numerics import GramSingularError, NumericsError
from .packing import PackingBudgetError, covering_packing
from .prolate import PRECISION_FLOOR, plunge_count, prolate_spectrum

FLOAT_FMT = "%.12e"


class UsageError(ValueError):
    """Bad flag values; reported with usage text and exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    c: float = 0.0
    eps: float = 0.0
    b: float = 0.0
    rounds: int = 2
    nodes: int = 0
    out: str | None = None
    format: str = ""
    emit_plot: bool = False
    n_cap: int = 20000
    c_max: float = 0.0
    c_step: float = 1.0
    alpha: float | None = None
    strategy: str = "concentrated"


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


def _stable(obj):
    """Round every float to %.12e so serialized output is byte-stable."""
    if isinstance(obj, dict):
        return {k: _stable(obj[k]) for k in obj}
    if isinstance(obj, (list, tuple)):
        return [_stable(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return repr(obj)
        return float(_fmt(obj))
    return obj


def _dump_json(payload: dict) -> str:
    return json.dumps(_stable(payload), sort_keys=True, indent=2) + "\n"


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _emit_plot_script(csv_path: str, columns: tuple, title: str):
    """Write a standalone plotting script next to the CSV (display only)."""
    script_path = csv_path + ".plot.py"
    xcol, ycol = columns
    body = f"""#!/usr/bin/env python3
# Plots {os.path.basename(csv_path)}; run with any matplotlib install.
import csv
import matplotlib.pyplot as plt

xs, ys = [], []
with open({os.path.basename(csv_path)!r}) as fh:
    for row in csv.DictReader(r for r in fh if not r.startswith("#")):
        try:
            xs.append(float(row[{xcol!r}]))
            ys.append(float(row[{ycol!r}]))
        except (KeyError, ValueError):
            continue
plt.plot(xs, ys, marker="o", linestyle="-")
plt.xlabel({xcol!r})
plt.ylabel({ycol!r})
plt.title({title!r})
plt.grid(True)
plt.show()
"""
    with open(script_path, "w") as fh:
        fh.write(body)
    return script_path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_eigs(cfg: RunConfig) -> int:
    spec = prolate_spectrum(cfg.c, cfg.nodes or None)
    lines = ["n,lambda_n,one_minus_lambda_log10"]
    for i, lam in enumerate(spec.eigenvalues):
        gap = 1.0 - lam
        tag = "floor" if gap < PRECISION_FLOOR else _fmt(math.log10(gap))
        lines.append(f"{i + 1},{_fmt(lam)},{tag}")
    lines.append(f"# trace_defect,{_fmt(spec.trace_defect)}")
    lines.append(f"# node_count,{spec.node_count}")
    text = "\n".join(lines) + "\n"
    _write(text, cfg.out)
    if cfg.emit_plot and cfg.out:
        _emit_plot_script(cfg.out, ("n", "lambda_n"), f"localization eigenvalues, c={cfg.c}")
    return 0


def _cmd_pack(cfg: RunConfig) -> int:
    packing = covering_packing(cfg.rounds, cfg.n_cap)
    _write(_dump_json(packing.to_json_dict()), cfg.out)
    return 0


def _cmd_system(cfg: RunConfig) -> int:
    system = build_system(covering_packing(cfg.rounds, cfg.n_cap), cfg.c)
    if cfg.format == "json":
        payload = {
            "c": cfg.c,
            "rounds": cfg.rounds,
            "members": [
                {"disk": m.disk_index, "degree": m.degree, "x0": m.x0, "xi0": m.xi0}
                for m in system.members
            ],
        }
        _write(_dump_json(payload), cfg.out)
    else:
        lines = ["disk,degree,x0,xi0"]
        lines += [
            f"{m.disk_index},{m.degree},{_fmt(m.x0)},{_fmt(m.xi0)}" for m in system.members
        ]
        _write("\n".join(lines) + "\n", cfg.out)
    return 0


def _cmd_gram(cfg: RunConfig) -> int:
    system = build_system(covering_packing(cfg.rounds, cfg.n_cap), cfg.c)
    gram = gram_matrix(system)
    _write("\n".join(gram_csv_lines(gram)) + "\n", cfg.out)
    return 0


def _cmd_bounds(cfg: RunConfig) -> int:
    n_lw, target = bounds_mod.landau_widom(cfg.c, cfg.b) if cfg.c > 1 else (None, None)
    n_ref = max(math.floor((1.0 - cfg.eps) * cfg.c), 1)
    asym = bounds_mod.classical_asymptotics(cfg.c, n_ref)
    packing = covering_packing(cfg.rounds, cfg.n_cap)
    constants = bounds_mod.certificate_constants(packing, alpha=cfg.alpha)
    main = bounds_mod.main_lower_bound(constants, cfg.c, n_ref)
    payload = {
        "c": cfg.c,
        "eps": cfg.eps,
        "b": cfg.b,
        "rounds": cfg.rounds,
        "karnik_plunge_bound": bounds_mod.karnik_plunge_bound(cfg.c, cfg.eps),
        "landau_widom": {"n": n_lw, "target": target},
        "reference_n": n_ref,
        "asymptotics": {
            "bjk_lower": asym.bjk_lower,
            "fuchs_gap_log10": asym.fuchs_gap.log10() if asym.fuchs_gap else None,
            "widom_decay_log10": asym.widom_decay.log10(),
        },
        "certificate_constants": {
            "gamma": constants.gamma,
            "r_min": constants.r_min,
            "nu0": constants.nu0,
            "c_eps": constants.c_eps,
            "c_gauss": constants.c_gauss,
            "alpha": constants.alpha,
            "alpha_floor": constants.alpha_floor,
            "pair_bound_log10": bounds_mod.proposition_pair_bound(constants, cfg.c).log10(),
            "tail_bound_log10": bounds_mod.proposition_tail_bound(constants, cfg.c).log10(),
        },
        "main_lower_bound": main.to_json_dict(),
    }
    _write(_dump_json(payload), cfg.out)
    return 0


def _cmd_certify(cfg: RunConfig) -> int:
    report = certify_lower_bound(
        cfg.c,
        cfg.eps,
        cfg.rounds,
        n_cap=cfg.n_cap,
        strategy=cfg.strategy,
        rule_nodes=cfg.nodes or None,
        alpha=cfg.alpha,
    )
    _write(_dump_json(report.to_json_dict()), cfg.out)
    return 0


def _sweep_one(c: float, cfg: RunConfig) -> str:
    spec = prolate_spectrum(c, cfg.nodes or None)
    kb = bounds_mod.karnik_plunge_bound(c, cfg.eps)
    count = plunge_count(spec, cfg.eps)
    lam_at_c = spec.lambda_(min(int(math.floor(c)), spec.eigenvalues.size)) if c >= 1 else spec.lambda_(1)
    return ",".join(
        [
            _fmt(c),
            str(spec.node_count),
            _fmt(lam_at_c),
            str(count),
            _fmt(kb),
            _fmt(spec.trace_defect),
        ]
    )


def _cmd_sweep(cfg: RunConfig) -> int:
    cs = []
    c = cfg.c
    while c <= cfg.c_max + 1e-12:
        cs.append(round(c, 12))
        c += cfg.c_step
    if not cs:
        raise UsageError("empty sweep range")
    workers = max(1, int(os.environ.get("PLUNGE_LAB_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda cc: _sweep_one(cc, cfg), cs))
    else:
        rows = [_sweep_one(cc, cfg) for cc in cs]
    header = "c,n_nodes,lambda_at_c,plunge_count,karnik_bound,trace_defect"
    text = "\n".join([header] + rows) + "\n"
    _write(text, cfg.out)
    if cfg.emit_plot and cfg.out:
        _emit_plot_script(cfg.out, ("c", "plunge_count"), f"plunge census, eps={cfg.eps}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plunge-lab",
        description="eigenvalues, packings and certificates for time-frequency localization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, c=False, eps=False, b=False, rounds=False, nodes=False, fmt=None):
        if c:
            p.add_argument("--c", type=float, required=True, help="time-bandwidth product (> 0)")
        if eps:
            p.add_argument("--eps", type=float, default=0.01, help="plunge margin / coverage defect")
        if b:
            p.add_argument("--b", type=float, default=0.0, help="drift parameter")
        if rounds:
            p.add_argument("--rounds", type=int, default=2, help="packing construction rounds (>= 1)")
        if nodes:
            p.add_argument("--nodes", type=int, default=0, help="quadrature nodes (0 = default)")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        if fmt:
            p.add_argument("--format", type=str, default=fmt[0], choices=fmt, help="output format")
        p.add_argument("--n-cap", type=int, default=20000, help="grid cap for the packing construction")
        p.add_argument("--emit-plot", action="store_true", help="also write a plotting script")

    common(sub.add_parser("eigs", help="Nystrom eigenvalue table"), c=True, nodes=True, fmt=("csv",))
    common(sub.add_parser("pack", help="disk packing of the square"), rounds=True, fmt=("json",))
    common(sub.add_parser("system", help="shifted-Hermite member table"), c=True, rounds=True, fmt=("csv", "json"))
    common(sub.add_parser("gram", help="Gram magnitude table"), c=True, rounds=True, fmt=("csv",))
    pb = sub.add_parser("bounds", help="all bound formulas at (c, eps, b)")
    common(pb, c=True, eps=True, b=True, rounds=True, fmt=("json",))
    pb.add_argument("--alpha", type=float, default=None, help="override the certificate alpha")
    pc = sub.add_parser("certify", help="min-max certificate report")
    common(pc, c=True, eps=True, rounds=True, nodes=True, fmt=("json",))
    pc.add_argument("--alpha", type=float, default=None, help="override the certificate alpha")
    pc.add_argument(
        "--strategy",
        type=str,
        default="concentrated",
        choices=("concentrated", "lexicographic"),
        help="member selection strategy",
    )
    ps = sub.add_parser("sweep", help="summary row per c over a range")
    common(ps, c=True, eps=True, nodes=True, fmt=("csv",))
    ps.add_argument("--c-max", type=float, required=True, help="inclusive upper end of the sweep")
    ps.add_argument("--c-step", type=float, default=1.0, help="sweep step (> 0)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        c=getattr(args, "c", 0.0),
        eps=getattr(args, "eps", 0.0),
        b=getattr(args, "b", 0.0),
        rounds=getattr(args, "rounds", 2),
        nodes=getattr(args, "nodes", 0),
        out=getattr(args, "out", None),
        format=getattr(args, "format", ""),
        emit_plot=getattr(args, "emit_plot", False),
        n_cap=getattr(args, "n_cap", 20000),
        c_max=getattr(args, "c_max", 0.0),
        c_step=getattr(args, "c_step", 1.0),
        alpha=getattr(args, "alpha", None),
        strategy=getattr(args, "strategy", "concentrated"),
    )
    if cfg.command in ("eigs", "system", "gram", "bounds", "certify", "sweep") and cfg.c <= 0:
        raise UsageError(f"--c must be > 0, got {cfg.c}")
    if cfg.command in ("bounds", "certify", "sweep") and not 0 < cfg.eps < 1:
        raise UsageError(f"--eps must be in (0, 1), got {cfg.eps}")
    if cfg.command in ("pack", "system", "gram", "bounds", "certify") and cfg.rounds < 1:
        raise UsageError(f"--rounds must be >= 1, got {cfg.rounds}")
    if cfg.nodes < 0:
        raise UsageError(f"--nodes must be >= 0, got {cfg.nodes}")
    if cfg.command == "sweep":
        if cfg.c_max < cfg.c:
            raise UsageError("--c-max must be >= --c")
        if cfg.c_step <= 0:
            raise UsageError("--c-step must be > 0")
    return cfg


_DISPATCH = {
    "eigs": _cmd_eigs,
    "pack": _cmd_pack,
    "system": _cmd_system,
    "gram": _cmd_gram,
    "bounds": _cmd_bounds,
    "certify": _cmd_certify,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code) if exc.code else 0
    try:
        cfg = _config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _DISPATCH[cfg.command](cfg)
    except (GramSingularError, PackingBudgetError, NumericsError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
