"""Command-line front end.

Commands: single-fisher, sweep, optimality-scan, joint-prob, figure, validate.
Values can come from a flat key=value config file (--config); command-line
flags win over config entries. Exit codes: 0 success, 2 invalid
configuration, 3 numeric-domain failure (with the offending point named).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bayes, fisher, report, validate
from .channel import ChannelParams, SchmidtInput
from .errors import NumericDomainError
from .fisher import DensityFamily

DEFAULTS = {
    "alpha": "3",
    "eta": "0.25",
    "tau": "0.1",
    "theta": "pi/4",
    "gamma": "0.5",
    "channel": "single",
    "grid_gamma": "0,1,51",
    "grid_tau": "0.02,2,100",
    "grid_theta": "0,2pi,721",
}

CHANNELS = ("single", "mixed", "double")


@dataclass(frozen=True)
class FigurePreset:
    """Pinned sweep configuration behind one named figure."""

    name: str
    kind: str
    theta: float
    alpha: float = 3.0
    eta: float = 0.25
    grid_gamma: str = "0,1,51"
    grid_tau: str = "0.02,2,100"


FIGURE_PRESETS = {
    "fig3": FigurePreset("fig3", "double", math.pi / 4),
    "fig4": FigurePreset("fig4", "mixed", 0.0),
    "fig5": FigurePreset("fig5", "double", 0.0),
}


class ConfigError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Parse a radian value; accepts plain floats and 'pi' forms like '3pi/4'."""
    raw = str(text).strip().replace(" ", "")
    try:
        return float(raw)
    except ValueError:
        pass
    sign = 1.0
    if raw.startswith("-"):
        sign, raw = -1.0, raw[1:]
    if "pi" not in raw:
        raise ConfigError(f"cannot parse angle {text!r}")
    head, _, tail = raw.partition("pi")
    try:
        coeff = float(head) if head else 1.0
        if tail:
            if not tail.startswith("/"):
                raise ValueError
            coeff /= float(tail[1:])
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None
    return sign * coeff * math.pi


def parse_grid(text: str, *, angle: bool = False) -> np.ndarray:
    """Parse 'start,stop,count' into an inclusive uniform grid."""
    parts = str(text).split(",")
    if len(parts) != 3:
        raise ConfigError(f"grid spec must be 'start,stop,count', got {text!r}")
    convert = parse_angle if angle else float
    try:
        start, stop = convert(parts[0]), convert(parts[1])
        count = int(parts[2])
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"bad grid spec {text!r}: {exc}") from None
    if count < 1:
        raise ConfigError(f"grid count must be >= 1, got {count}")
    if start > stop:
        raise ConfigError(f"grid start {start!r} exceeds stop {stop!r}")
    return np.linspace(start, stop, count)


def load_config(path: str) -> dict:
    """Read a flat key=value file; '#' starts a comment, blank lines ignored."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = body.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(args, config: dict, key: str) -> str:
    flag = getattr(args, key, None)
    if flag is not None:
        return str(flag)
    if key in config:
        return config[key]
    return DEFAULTS[key]


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run request (flags over config over defaults)."""

    command: str
    channel_kind: str
    alpha: float
    eta: float
    tau: float
    theta: float
    gamma: float
    grid_gamma: np.ndarray
    grid_tau: np.ndarray
    grid_theta: np.ndarray
    out: str | None
    format: str
    figure_name: str | None = None
    plot: bool = True

    def params(self, tau: float | None = None) -> ChannelParams:
        return ChannelParams(eta=self.eta, tau=self.tau if tau is None else tau, alpha=self.alpha)

    def probe(self, gamma: float | None = None, theta: float | None = None) -> SchmidtInput:
        return SchmidtInput(
            gamma=self.gamma if gamma is None else gamma,
            theta=self.theta if theta is None else theta,
        )


def resolve_config(args) -> RunConfig:
    config = load_config(args.config) if getattr(args, "config", None) else {}
    kind = _resolve(args, config, "channel")
    if kind not in CHANNELS:
        raise ConfigError(f"channel must be one of {CHANNELS}, got {kind!r}")
    fmt = getattr(args, "format", None) or config.get("format")
    if fmt is None:
        fmt = "json" if args.command == "single-fisher" else "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        cfg = RunConfig(
            command=args.command,
            channel_kind=kind,
            alpha=float(_resolve(args, config, "alpha")),
            eta=float(_resolve(args, config, "eta")),
            tau=float(_resolve(args, config, "tau")),
            theta=parse_angle(_resolve(args, config, "theta")),
            gamma=float(_resolve(args, config, "gamma")),
            grid_gamma=parse_grid(_resolve(args, config, "grid_gamma")),
            grid_tau=parse_grid(_resolve(args, config, "grid_tau")),
            grid_theta=parse_grid(_resolve(args, config, "grid_theta"), angle=True),
            out=getattr(args, "out", None) or config.get("out"),
            format=fmt,
            figure_name=getattr(args, "name", None),
            plot=not getattr(args, "no_plot", False),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not 0.0 <= cfg.gamma <= 1.0:
        raise ConfigError(f"gamma must lie in [0, 1], got {cfg.gamma!r}")
    return cfg


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        report.write_text(cfg.out, text)
    else:
        sys.stdout.write(text)


def _rows_payload(header: list[str], rows) -> list[dict]:
    return [dict(zip(header, row)) for row in rows]


def _family(cfg: RunConfig, gamma=None, tau=None) -> DensityFamily:
    return DensityFamily(kind=cfg.channel_kind, probe=cfg.probe(gamma=gamma), params=cfg.params(tau=tau))


def cmd_single_fisher(cfg: RunConfig) -> None:
    rep = fisher.fisher_report(_family(cfg))
    payload = {
        "channel": cfg.channel_kind,
        "alpha": cfg.alpha,
        "eta": cfg.eta,
        "tau": cfg.tau,
        "theta": cfg.theta,
        "gamma": cfg.gamma,
        "chi": cfg.params().chi,
        "j_numeric": rep.j_numeric,
        "j_closed_form": rep.j_closed_form,
        "j_chi": rep.j_chi,
        "sld_residual": rep.sld_residual,
        "derivative_method": rep.derivative_method,
        "kernel_rank": rep.kernel_rank,
        "agrees": rep.agrees,
    }
    if cfg.format == "json":
        _emit(cfg, report.json_text(payload))
    else:
        header = list(payload)
        _emit(cfg, report.table_text({"command": "single-fisher"}, header, [list(payload.values())]))


def _sweep_rows(cfg: RunConfig):
    template = _family(cfg)
    return fisher.sweep_j(template, cfg.grid_gamma, cfg.grid_tau)


def _emit_sweep(cfg: RunConfig, rows, metadata: dict) -> None:
    header = ["gamma", "tau", "j_numeric", "j_closed_form"]
    if cfg.format == "json":
        _emit(cfg, report.json_text({"metadata": metadata, "rows": _rows_payload(header, rows)}))
    else:
        _emit(cfg, report.table_text(metadata, header, rows))


def cmd_sweep(cfg: RunConfig) -> None:
    metadata = {
        "command": "sweep",
        "channel": cfg.channel_kind,
        "alpha": cfg.alpha,
        "eta": cfg.eta,
        "theta": cfg.theta,
    }
    _emit_sweep(cfg, _sweep_rows(cfg), metadata)


def cmd_figure(cfg: RunConfig) -> None:
    preset = FIGURE_PRESETS[cfg.figure_name]
    run = RunConfig(
        command="figure",
        channel_kind=preset.kind,
        alpha=preset.alpha,
        eta=preset.eta,
        tau=cfg.tau,
        theta=preset.theta,
        gamma=cfg.gamma,
        grid_gamma=parse_grid(preset.grid_gamma),
        grid_tau=parse_grid(preset.grid_tau),
        grid_theta=cfg.grid_theta,
        out=cfg.out,
        format=cfg.format,
        figure_name=preset.name,
        plot=cfg.plot,
    )
    rows = _sweep_rows(run)
    metadata = {
        "command": "figure",
        "name": preset.name,
        "channel": preset.kind,
        "alpha": preset.alpha,
        "eta": preset.eta,
        "theta": preset.theta,
    }
    _emit_sweep(run, rows, metadata)
    if run.plot and run.out:
        surface = np.array([row[2] for row in rows]).reshape(
            len(run.grid_gamma), len(run.grid_tau)
        )
        png = _plot_path(run.out)
        report.render_surface(
            png,
            x=run.grid_gamma,
            y=run.grid_tau,
            values=surface.T,
            xlabel="gamma",
            ylabel="tau",
            title=f"{preset.name}: J ({preset.kind} channel, theta={preset.theta:.6g})",
        )
        print(f"wrote {png}", file=sys.stderr)


def _plot_path(out: str) -> str:
    stem, dot, suffix = out.rpartition(".")
    if dot and suffix.lower() in ("csv", "json", "txt", "dat"):
        return f"{stem}.png"
    return f"{out}.png"


def cmd_optimality_scan(cfg: RunConfig) -> None:
    chi = cfg.params().chi
    k = 2.0 * cfg.gamma - 1.0
    rows = []
    for theta in cfg.grid_theta:
        lam_minus, lam_plus = bayes.gap_eigenvalues(float(theta), chi, k)
        rows.append(
            (
                float(theta),
                lam_minus,
                lam_plus,
                bayes.zero_product_residual(float(theta), chi, k),
            )
        )
    metadata = {
        "command": "optimality-scan",
        "chi": chi,
        "k": k,
        "alpha": cfg.alpha,
        "eta": cfg.eta,
        "tau": cfg.tau,
    }
    header = ["theta", "lambda_minus", "lambda_plus", "product_residual"]
    if cfg.format == "json":
        _emit(cfg, report.json_text({"metadata": metadata, "rows": _rows_payload(header, rows)}))
    else:
        _emit(cfg, report.table_text(metadata, header, rows))


def cmd_joint_prob(cfg: RunConfig, gammas=None, thetas=None) -> None:
    params = cfg.params()
    gammas = [cfg.gamma] if gammas is None else gammas
    thetas = [cfg.theta] if thetas is None else thetas
    rows = []
    for gamma in gammas:
        for theta in thetas:
            res = bayes.joint_probability(SchmidtInput(float(gamma), float(theta)), params)
            rows.append(
                (res.theta, res.gamma, res.p_mixed, res.p_double, res.printed_formula_value)
            )
    metadata = {
        "command": "joint-prob",
        "chi": params.chi,
        "alpha": cfg.alpha,
        "eta": cfg.eta,
        "tau": cfg.tau,
    }
    header = ["theta", "gamma", "p_mixed_direct", "p_double_direct", "p_printed_formula"]
    if cfg.format == "json":
        _emit(cfg, report.json_text({"metadata": metadata, "rows": _rows_payload(header, rows)}))
    else:
        _emit(cfg, report.table_text(metadata, header, rows))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lossy-estimator",
        description="Cat-state probes of bosonic loss channels: Fisher information, "
        "Bayesian measurement optimality, joint-measurement probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--alpha", type=float, help="probe amplitude modulus |alpha| (> 0)")
        p.add_argument("--eta", type=float, help="energy decay rate (>= 0)")
        p.add_argument("--tau", type=float, help="interaction time (>= 0)")
        p.add_argument("--theta", type=str, help="basis angle in radians (accepts pi forms)")
        p.add_argument("--gamma", type=float, help="Schmidt weight in [0, 1]")
        p.add_argument("--channel", choices=CHANNELS, help="channel kind")
        p.add_argument("--grid-gamma", dest="grid_gamma", help="gamma grid 'start,stop,count'")
        p.add_argument("--grid-tau", dest="grid_tau", help="tau grid 'start,stop,count'")
        p.add_argument("--grid-theta", dest="grid_theta", help="theta grid 'start,stop,count'")
        p.add_argument("--out", help="output file path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--config", help="flat key=value config file; flags win")

    add_common(sub.add_parser("single-fisher", help="Fisher information at one point"))
    add_common(sub.add_parser("sweep", help="Fisher information over a (gamma, tau) grid"))
    add_common(sub.add_parser("optimality-scan", help="risk-gap spectrum over theta"))
    joint = sub.add_parser("joint-prob", help="joint projector click probabilities")
    add_common(joint)
    joint.add_argument(
        "--scan",
        choices=("theta", "gamma", "both"),
        help="expand the matching grid flag(s) instead of a single point",
    )
    figure = sub.add_parser("figure", help="regenerate a pinned figure surface")
    figure.add_argument("name", choices=sorted(FIGURE_PRESETS), help="figure preset")
    add_common(figure)
    figure.add_argument("--no-plot", action="store_true", help="skip the rendered image")
    sub.add_parser("validate", help="run the numeric invariant suite")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return validate.run(print)
    try:
        cfg = resolve_config(args)
        if args.command == "single-fisher":
            cmd_single_fisher(cfg)
        elif args.command == "sweep":
            cmd_sweep(cfg)
        elif args.command == "optimality-scan":
            cmd_optimality_scan(cfg)
        elif args.command == "joint-prob":
            scan = getattr(args, "scan", None)
            gammas = cfg.grid_gamma if scan in ("gamma", "both") else None
            thetas = cfg.grid_theta if scan in ("theta", "both") else None
            cmd_joint_prob(cfg, gammas=gammas, thetas=thetas)
        elif args.command == "figure":
            cmd_figure(cfg)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericDomainError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
