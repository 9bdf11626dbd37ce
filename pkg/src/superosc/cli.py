"""``superosc`` command-line tool.

Every written file carries the fully resolved run configuration: JSON outputs
embed it under ``"config"``, CSV outputs get a ``<file>.meta.json`` sidecar.
"""

from __future__ import annotations

import math
import os
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import click

from . import additive, bases, experiments, multiplicative, oscillator, spectral
from .errors import SuperoscError
from .jsonio import dumps, loads, read_json, write_csv, write_json
from .signals import from_dict, sample_grid

OUT_DIR_ENV = "SUPEROSC_OUT_DIR"

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"


def _out_path(path) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _config(ctx: click.Context, seed=None) -> dict:
    params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(ctx.params.items())}
    return {"tool": "superosc", "version": __version__, "command": ctx.info_name, "seed": seed, "params": params}


def _write_csv_with_meta(path, header, rows, config, extra=None) -> Path:
    p = _out_path(path)
    write_csv(p, header, rows)
    meta = {"config": config}
    if extra:
        meta.update(extra)
    write_json(p.with_name(p.name + ".meta.json"), meta)
    return p


def _parse_floats(text: str) -> list[float]:
    """Inline list "a,b,c" / JSON list, or a path to a JSON file holding a list."""
    text = text.strip()
    p = Path(text)
    if p.suffix == ".json" and p.exists():
        data = read_json(p)
        if isinstance(data, dict):
            data = data.get("zeros", data.get("points"))
        return [float(x) for x in data]
    if text.startswith("["):
        return [float(x) for x in loads(text)]
    return [float(x) for x in text.split(",") if x.strip()]


def _parse_ints(text: str) -> list[int]:
    """"2..8" (inclusive) or "2,3,5"."""
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _band(band, band_hz) -> float:
    if (band is None) == (band_hz is None):
        raise click.UsageError("give exactly one of --band (rad per unit time) or --band-hz")
    return float(band) if band is not None else 2 * math.pi * float(band_hz)


def load_signal(path):
    data = read_json(path)
    try:
        return from_dict(data["signal"] if "signal" in data else data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path} is not a signal file (missing {exc})") from None


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (SuperoscError, ValueError) as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            ctx.exit(1)


@click.group(cls=_Group)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON file supplying any option of the subcommand; command-line flags win.")
@click.version_option(__version__, prog_name="superosc")
@click.pass_context
def main(ctx, config_path):
    """Synthesize and analyze superoscillatory bandlimited signals."""
    if config_path is None or ctx.invoked_subcommand is None:
        return
    cfg = read_json(config_path)
    if not isinstance(cfg, dict):
        raise click.UsageError("config file must hold a JSON object")
    sub = main.get_command(ctx, ctx.invoked_subcommand)
    # keys may be parameter names or long option names ("band-hz", "band_hz")
    names = {}
    for p in sub.params:
        names[p.name] = p.name
        for opt in p.opts:
            if opt.startswith("--"):
                names[opt[2:]] = names[opt[2:].replace("-", "_")] = p.name
    unknown = sorted(set(cfg) - set(names))
    if unknown:
        raise click.UsageError(f"unknown config keys for {ctx.invoked_subcommand}: {', '.join(unknown)}")
    ctx.default_map = {ctx.invoked_subcommand: {names[k]: v for k, v in cfg.items()}}


@main.command()
@click.option("--method", type=click.Choice(["mult", "minnorm", "basis"]), required=True)
@click.option("--band", type=float, help="Total bandwidth, rad per unit time.")
@click.option("--band-hz", type=float, help="Total bandwidth in Hz (converted by 2*pi).")
@click.option("--zeros", help="Zero crossings: JSON file, JSON list or comma list (mult).")
@click.option("--family", type=click.Choice(multiplicative.FAMILIES), default=multiplicative.SINE, show_default=True)
@click.option("--constraints", type=click.Path(exists=True, dir_okay=False),
              help='JSON file {"points": [...], "amps": [...]} (minnorm, basis).')
@click.option("--basis", "basis_name", type=click.Choice(bases.registered()), help="Basis family (basis).")
@click.option("--basis-params", default="{}", show_default=True, help="JSON object of basis parameters.")
@click.option("--out", required=True, help="Signal JSON output.")
@click.option("--report", "report_path", help="Solve report JSON (minnorm, basis).")
@click.option("--samples", help="Also write samples as CSV t,f.")
@click.option("--range", "sample_range", type=float, nargs=2, help="Sample interval a b.")
@click.option("--oversample", type=int, default=32, show_default=True)
@click.pass_context
def generate(ctx, method, band, band_hz, zeros, family, constraints, basis_name, basis_params, out,
             report_path, samples, sample_range, oversample):
    """Build a superoscillatory signal."""
    config = _config(ctx)
    report = None
    if method == "mult":
        if zeros is None:
            raise click.UsageError("--method mult needs --zeros")
        spec = multiplicative.ZeroSpec(tuple(_parse_floats(zeros)), _band(band, band_hz), family)
        signal = multiplicative.generate_multiplicative(spec)
        default_range = multiplicative.reference_interval(spec)
    else:
        if constraints is None:
            raise click.UsageError(f"--method {method} needs --constraints")
        data = read_json(constraints)
        cs = additive.ConstraintSet(tuple(data["points"]), tuple(data["amps"]))
        if method == "minnorm":
            signal, report = additive.solve_minnorm(cs.points, cs.amplitudes, _band(band, band_hz))
        else:
            if basis_name is None:
                raise click.UsageError("--method basis needs --basis")
            params = loads(basis_params)
            if basis_name == "sinc" and "centers" not in params:
                params["centers"] = list(cs.points)
            basis = bases.make_basis(basis_name, **params)
            signal, report = additive.solve_generic(basis, cs)
        pad = 4 * (cs.points[-1] - cs.points[0]) + 1.0
        default_range = (cs.points[0] - pad, cs.points[-1] + pad)
    write_json(_out_path(out), {"config": config, "signal": signal.to_dict()})
    if report is not None and report_path:
        write_json(_out_path(report_path), {"config": config, "report": report.to_dict()})
    if samples:
        lo, hi = sample_range or default_range
        t = sample_grid(signal, (lo, hi), oversample)
        _write_csv_with_meta(samples, ("t", "f"), zip(t, signal.evaluate(t)), config)


@main.command()
@click.option("--signal", "signal_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--window", type=float, nargs=2, help="Window t1 t2 for the antisymmetry report.")
@click.option("--freq", type=float, help="Probe frequency (rad per unit time), above the bandwidth.")
@click.option("--tmax", type=float, help="Truncation of the complement.")
@click.option("--ladder", type=int, default=1, show_default=True, help="Report T_max, 2 T_max, ... (this many rungs).")
@click.option("--local-freq", type=float, nargs=2, help="Interval a b for local frequency (CSV t,omega_local).")
@click.option("--out", help="Output file (stdout if omitted).")
@click.pass_context
def analyze(ctx, signal_path, window, freq, tmax, ladder, local_freq, out):
    """Windowed-spectrum antisymmetry or zero-crossing local frequency."""
    config = _config(ctx)
    if local_freq is None and (window is None or freq is None or tmax is None):
        raise click.UsageError("antisymmetry needs --window, --freq and --tmax (or use --local-freq)")
    signal = load_signal(signal_path)
    if local_freq is not None:
        rows = spectral.local_frequency(signal, local_freq)
        if out:
            _write_csv_with_meta(out, ("t", "omega_local"), rows, config)
        else:
            click.echo("t,omega_local")
            for t, w in rows:
                click.echo(f"{t!r},{w!r}")
        return
    reports = spectral.cancellation_ladder(signal, window, freq, [tmax * 2**k for k in range(max(1, ladder))])
    body = {"config": config, "reports": [r.to_dict() for r in reports]}
    if out:
        write_json(_out_path(out), body)
    else:
        click.echo(dumps(body, indent=1))


@main.command()
@click.option("--signal", "signal_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--omega0", type=float, required=True)
@click.option("--span", type=float, nargs=2, required=True)
@click.option("--step", type=float, required=True)
@click.option("--collision-rate", default="0", show_default=True, help="Rate, or comma list of rates for a sweep.")
@click.option("--seeds", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, help="Trace CSV t,x,v,E,D, or sweep CSV lambda,mean_D,std_D,n_seeds.")
@click.pass_context
def oscillate(ctx, signal_path, omega0, span, step, collision_rate, seeds, seed, out):
    """Drive a resonant oscillator with a signal."""
    config = _config(ctx, seed)
    signal = load_signal(signal_path)
    rates = _parse_floats(collision_rate)
    cfg = oscillator.OscillatorConfig(omega0, span[0], span[1], step, rates[0], seed)
    if len(rates) == 1 and seeds == 1:
        trace = oscillator.simulate(signal, cfg)
        _write_csv_with_meta(out, ("t", "x", "v", "E", "D"), trace.rows(), config,
                             {"collisions": len(trace.collisions), "work": float(trace.work[-1])})
        return
    rows = oscillator.absorption_sweep(signal, cfg, rates, seeds, seed)
    _write_csv_with_meta(out, ("lambda", "mean_D", "std_D", "n_seeds"),
                         [(r.rate, r.mean_dissipated, r.std_dissipated, r.n_seeds) for r in rows], config)


@main.command()
@click.option("--length", type=float, required=True, help="Length scale in meters.")
@click.option("--speed", type=float, required=True, help="Speed in meters per second.")
@click.option("--label", default="", help="Name for the estimate.")
def estimate(length, speed, label):
    """Order-of-magnitude time scale t = L / v."""
    click.echo(dumps(oscillator.timescale_estimate(length, speed, label).to_dict()))


@main.command()
@click.option("--method", type=click.Choice([experiments.MULT, experiments.MINNORM]), required=True)
@click.option("--band", type=float)
@click.option("--band-hz", type=float)
@click.option("--n", "n_range", default="2..8", show_default=True)
@click.option("--compression", default="0.4,0.2,0.1,0.05", show_default=True)
@click.option("--oversample", type=int, default=16, show_default=True)
@click.option("--out", required=True)
@click.pass_context
def scaling(ctx, method, band, band_hz, n_range, compression, oversample, out):
    """Dynamic-range scaling with N and with compression."""
    config = _config(ctx)
    report = experiments.scaling_experiment(
        method, _parse_ints(n_range), _parse_floats(compression), _band(band, band_hz), oversample
    )
    p = _write_csv_with_meta(
        out, ("method", "N", "c", "D", "kappa", "ref_lo", "ref_hi"), [r.row() for r in report.rows], config
    )
    write_json(p.with_name(p.stem + ".fit.json"), {"config": config, **report.summary()})


@main.command()
@click.option("--band-hz", type=float, required=True)
@click.option("--snr", type=float, required=True)
def capacity(band_hz, snr):
    """Shannon-Hartley capacity in bits per unit time."""
    click.echo(dumps({"capacity_bits_per_s": experiments.shannon_hartley(band_hz, snr)}))


@main.command("capacity-consistency")
@click.option("--n", "n_range", default="2..8", show_default=True)
@click.option("--compression", help="Comma list of spacings over pi/band.")
@click.option("--tau", type=float, help="Pack the N constraints into this duration instead.")
@click.option("--band", type=float)
@click.option("--band-hz", type=float)
@click.option("--oversample", type=int, default=16, show_default=True)
@click.option("--out", required=True)
@click.pass_context
def capacity_consistency(ctx, n_range, compression, tau, band, band_hz, oversample, out):
    """Superoscillatory bit rate against the dynamic-range capacity form."""
    config = _config(ctx)
    w = _band(band, band_hz)
    if (compression is None) == (tau is None):
        raise click.UsageError("give exactly one of --compression or --tau")
    rows = []
    for n in _parse_ints(n_range):
        if tau is not None:
            rows.append(experiments.capacity_consistency(n, w, tau=tau, oversampling=oversample).row())
        else:
            for c in _parse_floats(compression):
                rows.append(experiments.capacity_consistency(n, w, compression=c, oversampling=oversample).row())
    conventions = {"snr_proxy": "D^2", "band_hz": "band/(2*pi)", "bit_rate": "N/tau_total"}
    _write_csv_with_meta(out, experiments.CAPACITY_HEADER, rows, config, {"conventions": conventions})


if __name__ == "__main__":
    sys.exit(main())
