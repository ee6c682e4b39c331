"""``spincirc`` command-line front end.

Exit codes: 0 success, 1 user error (flags, preset, configuration),
2 numerical failure (singular resolvent, non-convergence, failed validation).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from . import analysis
from .engine import single_resonator_smatrix, smatrix
from .errors import ConfigError, NumericalError, ParameterError, PresetError, SpinCircError
from .io import Config, dumps, parse_config, preset_document, reduced_document, sweep_document, write_csv
from .params import fig4_scenarios, g_factor, load_preset, preset_names
from .validation import format_table, run_validation

UNITS_NOTE = (
    "All frequencies, shifts, rates and detunings are angular frequencies in "
    "rad/s; a value quoted as 29 kHz or 1.2 MHz is entered as 29e3 or 1.2e6 "
    "(no 2*pi factor)."
)


class UsageError(SpinCircError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse only recognises "-3" and "-.5" as negative numbers; detunings
    # are routinely written "-8e6"
    _NEGATIVE = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = self._NEGATIVE

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class _Source:
    config: Config
    sweep_min: float | None = None
    sweep_max: float | None = None
    single: bool = False
    name: str | None = None


def _load_source(args) -> _Source:
    if args.preset is not None:
        p = load_preset(args.preset)
        cfg = Config(p.physical, p.spin, p.reduced())
        return _Source(cfg, p.sweep_min, p.sweep_max, p.single_resonator, p.name)
    try:
        text = Path(args.config).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc.strerror}") from None
    return _Source(parse_config(text))


def _window(args, src: _Source, rp) -> tuple[float, float]:
    lo, hi = (src.sweep_min, src.sweep_max) if src.sweep_min is not None else analysis.default_window(rp)
    if args.delta_min is not None:
        lo = args.delta_min
    if args.delta_max is not None:
        hi = args.delta_max
    if not lo < hi:
        raise UsageError(f"--delta-min ({lo!r}) must be below --delta-max ({hi!r})")
    return lo, hi


@contextmanager
def _sink(path: str | None, stdout: IO[str]):
    if path is None:
        yield stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _point_document(p: analysis.CirculatorPoint) -> dict:
    return {
        "delta": p.delta,
        "direction": p.direction.name,
        "cycle": str(p.direction),
        "fidelity": p.fidelity,
        "mean_fidelity": p.mean_fidelity,
    }


def cmd_spectrum(args, out):
    src = _load_source(args)
    rp = src.config.resolve()
    lo, hi = _window(args, src, rp)
    res = analysis.sweep(rp, lo, hi, args.steps, single=src.single, workers=args.workers)
    with _sink(args.out, out) as fh:
        if args.format == "csv":
            write_csv(res, fh)
        else:
            fh.write(dumps(sweep_document(res)))


def cmd_smatrix(args, out):
    src = _load_source(args)
    rp = src.config.resolve()
    if src.single:
        s = single_resonator_smatrix(rp.gamma_a, rp.gamma_b, rp.delta_f1, rp.chi_1, args.delta)
    else:
        s = smatrix(rp, args.delta)
    doc = {
        "delta": s.delta,
        "params": reduced_document(rp),
        "convention": "row = output port j, column = input port i, entry = t_{i->j}",
        "S_real": s.entries.real.tolist(),
        "S_imag": s.entries.imag.tolist(),
        "T": s.transmission.tolist(),
    }
    with _sink(args.out, out) as fh:
        fh.write(dumps(doc))


def cmd_points(args, out):
    src = _load_source(args)
    rp = src.config.resolve()
    lo, hi = _window(args, src, rp)
    pts = analysis.find_circulator_points(rp, lo, hi, args.threshold)
    candidates = None
    if not rp.has_backscatter:
        candidates = [
            {"delta": d, "direction": k.name, "cycle": str(k)}
            for d, k in analysis.closed_form_points(rp)
        ]
    doc = {
        "params": reduced_document(rp),
        "threshold": args.threshold,
        "delta_min": lo,
        "delta_max": hi,
        "points": [_point_document(p) for p in pts],
        "closed_form_candidates": candidates,
    }
    with _sink(args.out, out) as fh:
        fh.write(dumps(doc))


def cmd_routing(args, out):
    src = _load_source(args)
    rp = src.config.resolve()
    r = analysis.find_complete_routing(rp)
    g = g_factor(src.config.physical)
    doc = {
        "params": reduced_document(rp),
        "delta_star": r.delta_star,
        "shift_star": r.shift_star,
        "omega_star": r.shift_star / g,
        "min_cross": r.min_cross,
        "candidates": dict(r.candidates),
        "matched": list(r.matched),
    }
    with _sink(args.out, out) as fh:
        fh.write(dumps(doc))


def _scenarios_from_file(path: str):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise ConfigError(f"scenario file {path!r} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("scenarios"), list):
        raise ConfigError("scenario file must be an object with a 'scenarios' list")
    unknown = sorted(set(doc) - {"scenarios", "delta_min", "delta_max"})
    if unknown:
        raise ConfigError(f"unknown key(s) in scenario file: {', '.join(unknown)}")
    scenarios = []
    for k, entry in enumerate(doc["scenarios"]):
        if not isinstance(entry, dict) or "label" not in entry:
            raise ConfigError(f"scenarios[{k}] must be an object with a 'label'")
        body = {key: v for key, v in entry.items() if key != "label"}
        if set(body) == {"preset"}:
            rp = load_preset(body["preset"]).reduced()
        else:
            try:
                rp = parse_config(json.dumps(body)).resolve()
            except ConfigError as exc:
                raise ConfigError(f"scenarios[{k}]: {exc}") from None
        scenarios.append((str(entry["label"]), rp))
    return scenarios, doc.get("delta_min", -8e6), doc.get("delta_max", 8e6)


def cmd_robustness(args, out):
    if args.fig4:
        scenarios, lo, hi = fig4_scenarios(), -8e6, 8e6
    else:
        scenarios, lo, hi = _scenarios_from_file(args.scenario_file)
    reports = analysis.backscatter_report(scenarios, float(lo), float(hi))
    doc = [
        {"label": r.label, "peak_T13": r.peak, "location": r.location, "centroid": r.centroid}
        for r in reports
    ]
    with _sink(args.out, out) as fh:
        fh.write(dumps(doc))


def cmd_preset(args, out):
    if args.list:
        doc = [{"name": n, "label": load_preset(n).label} for n in preset_names()]
    else:
        p = load_preset(args.show)
        doc = {
            "name": p.name,
            "label": p.label,
            "single_resonator": p.single_resonator,
            "sweep_min": p.sweep_min,
            "sweep_max": p.sweep_max,
            "config": preset_document(p),
            "reduced": reduced_document(p.reduced()),
        }
    with _sink(args.out, out) as fh:
        fh.write(dumps(doc))


def cmd_validate(args, out):
    results = run_validation(args.samples, args.seed)
    with _sink(args.out, out) as fh:
        fh.write(format_table(results) + "\n")
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spincirc",
        description="Single-photon transport through two spinning resonators. " + UNITS_NOTE,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_source(p, window=True):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--preset", metavar="NAME", help=f"one of: {', '.join(preset_names())}")
        group.add_argument("--config", metavar="PATH", help="JSON configuration file")
        if window:
            p.add_argument("--delta-min", type=float, help="lowest detuning [rad/s]")
            p.add_argument("--delta-max", type=float, help="highest detuning [rad/s]")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")

    p = sub.add_parser("spectrum", help="transmission spectra over a detuning grid", description=UNITS_NOTE)
    with_source(p)
    p.add_argument("--steps", type=int, default=2001)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("smatrix", help="complex S and T at one detuning", description=UNITS_NOTE)
    with_source(p, window=False)
    p.add_argument("--delta", type=float, required=True, help="detuning [rad/s]")
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_smatrix)

    p = sub.add_parser("points", help="circulator frequency points", description=UNITS_NOTE)
    with_source(p)
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("routing", help="complete-routing search", description=UNITS_NOTE)
    with_source(p, window=False)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_routing)

    p = sub.add_parser("robustness", help="peak T13 under backscattering", description=UNITS_NOTE)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario-file", metavar="PATH")
    group.add_argument("--fig4", action="store_true", help="the built-in five backscatter scenarios")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("preset", help="list or show catalog entries")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--list", action="store_true")
    group.add_argument("--show", metavar="NAME")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("validate", help="run the randomised invariant suites")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_validate)
    return parser


def run_cli(argv: Sequence[str] | None = None, stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        code = args.func(args, stdout)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except (ConfigError, PresetError, ParameterError) as exc:
        print(f"spincirc: error: {exc}", file=stderr)
        return 1
    except NumericalError as exc:
        print(f"spincirc: numerical failure: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"spincirc: error: {exc}", file=stderr)
        return 1
    return 0 if code is None else int(code)


def main() -> None:
    sys.exit(run_cli())
