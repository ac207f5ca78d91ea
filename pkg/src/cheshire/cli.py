"""Command line interface.

Subcommands: run, sweep, weakvalues, reproduce, analyze.  Scenario options
can come from flags, from a flat ``key = value`` config file (``--config``),
or both, with flags taking precedence.  Exit codes: 0 on success (and on
benchmark agreement), 1 on usage or validation errors, 2 when ``reproduce``
finds a theory/measurement disagreement.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path as FilePath

import numpy as np

from .analysis import cheshire_witness, reproduce_benchmark_table, truncation_scan
from .elements import Truncation
from .experiment import (
    DEFAULT_SCALE_REF_CPS,
    I_REF_NORM,
    Absorber,
    Detector,
    IntensityRecord,
    Magnet,
    Scenario,
    run,
    sweep_alpha,
    sweep_chi,
)
from .qcore import Path
from .weak import exact_weak_values, projective_spin_expectation

__all__ = [
    "CliError",
    "ScenarioConfig",
    "parse_scenario_config",
    "format_scenario_config",
    "main",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISAGREE = 2

CONFIG_KEYS = (
    "insertion",
    "path",
    "alpha_deg",
    "alpha_rad",
    "transmissivity",
    "chi_deg",
    "chi_rad",
    "truncation",
    "scale_ref_cps",
)


class CliError(Exception):
    """Usage or configuration error; mapped to exit code 1."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario settings in canonical (radian) form.

    ``None`` means "not set"; cross-field rules are enforced here so that a
    config is either rejected with a message or guaranteed convertible to a
    :class:`Scenario`.
    """

    insertion: str = "none"
    path: Path | None = None
    alpha_rad: float | None = None
    transmissivity: float | None = None
    chi_rad: float = 0.0
    truncation: Truncation | None = None
    scale_ref_cps: float = DEFAULT_SCALE_REF_CPS

    def __post_init__(self) -> None:
        if self.insertion not in ("none", "absorber", "magnet"):
            raise ValueError(f"insertion must be none, absorber or magnet, got {self.insertion!r}")
        if not math.isfinite(self.chi_rad):
            raise ValueError(f"chi must be finite, got {self.chi_rad!r}")
        if not (math.isfinite(self.scale_ref_cps) and self.scale_ref_cps > 0.0):
            raise ValueError(f"scale_ref_cps must be positive, got {self.scale_ref_cps!r}")
        if self.insertion == "none":
            for name in ("path", "alpha_rad", "transmissivity", "truncation"):
                if getattr(self, name) is not None:
                    raise ValueError(f"{name} requires insertion = absorber or magnet")
        elif self.insertion == "absorber":
            if self.path is None:
                raise ValueError("insertion = absorber requires a path")
            if self.transmissivity is None:
                raise ValueError("insertion = absorber requires a transmissivity")
            if self.alpha_rad is not None:
                raise ValueError("alpha requires insertion = magnet")
            if self.truncation is not None:
                raise ValueError("truncation requires insertion = magnet")
        else:
            if self.path is None:
                raise ValueError("insertion = magnet requires a path")
            if self.alpha_rad is None:
                raise ValueError("insertion = magnet requires an alpha")
            if self.transmissivity is not None:
                raise ValueError("transmissivity requires insertion = absorber")

    def to_scenario(self) -> Scenario:
        if self.insertion == "absorber":
            ins: Absorber | Magnet | None = Absorber(
                path=self.path, transmissivity=self.transmissivity
            )
        elif self.insertion == "magnet":
            ins = Magnet(
                path=self.path,
                alpha_rad=self.alpha_rad,
                truncation=self.truncation or Truncation.EXACT,
            )
        else:
            ins = None
        return Scenario(insertion=ins, chi_rad=self.chi_rad)


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"{key}: expected a number, got {text!r}") from None


def _parse_path(text: str) -> Path:
    try:
        return Path[text]
    except KeyError:
        raise ValueError(f"path must be I or II, got {text!r}") from None


def _parse_truncation(text: str) -> Truncation:
    try:
        return Truncation(text)
    except ValueError:
        raise ValueError(f"truncation must be exact, linear or quadratic, got {text!r}") from None


def parse_scenario_config(text: str) -> ScenarioConfig:
    """Parse a flat ``key = value`` config (one pair per line, ``#`` comments).

    Unknown and duplicate keys are errors, as is giving both the degree and
    radian spelling of the same angle.
    """
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        if key not in CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        pairs[key] = value

    if "alpha_deg" in pairs and "alpha_rad" in pairs:
        raise ValueError("give at most one of alpha_deg and alpha_rad")
    if "chi_deg" in pairs and "chi_rad" in pairs:
        raise ValueError("give at most one of chi_deg and chi_rad")

    fields: dict[str, object] = {}
    if "insertion" in pairs:
        fields["insertion"] = pairs["insertion"]
    if "path" in pairs:
        fields["path"] = _parse_path(pairs["path"])
    if "alpha_deg" in pairs:
        fields["alpha_rad"] = math.radians(_parse_float("alpha_deg", pairs["alpha_deg"]))
    if "alpha_rad" in pairs:
        fields["alpha_rad"] = _parse_float("alpha_rad", pairs["alpha_rad"])
    if "transmissivity" in pairs:
        fields["transmissivity"] = _parse_float("transmissivity", pairs["transmissivity"])
    if "chi_deg" in pairs:
        fields["chi_rad"] = math.radians(_parse_float("chi_deg", pairs["chi_deg"]))
    if "chi_rad" in pairs:
        fields["chi_rad"] = _parse_float("chi_rad", pairs["chi_rad"])
    if "truncation" in pairs:
        fields["truncation"] = _parse_truncation(pairs["truncation"])
    if "scale_ref_cps" in pairs:
        fields["scale_ref_cps"] = _parse_float("scale_ref_cps", pairs["scale_ref_cps"])
    return ScenarioConfig(**fields)


def format_scenario_config(config: ScenarioConfig) -> str:
    """Serialize a config in canonical radian form; re-parsing reproduces it exactly."""
    lines = [f"insertion = {config.insertion}"]
    if config.path is not None:
        lines.append(f"path = {config.path.name}")
    if config.alpha_rad is not None:
        lines.append(f"alpha_rad = {config.alpha_rad!r}")
    if config.transmissivity is not None:
        lines.append(f"transmissivity = {config.transmissivity!r}")
    if config.truncation is not None:
        lines.append(f"truncation = {config.truncation.value}")
    lines.append(f"chi_rad = {config.chi_rad!r}")
    lines.append(f"scale_ref_cps = {config.scale_ref_cps!r}")
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise CliError(message)


def _add_scenario_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key = value scenario file")
    sub.add_argument("--insertion", choices=["none", "absorber", "magnet"])
    sub.add_argument("--path", choices=["I", "II"])
    sub.add_argument("--alpha-deg", dest="alpha_deg", type=float)
    sub.add_argument("--alpha-rad", dest="alpha_rad", type=float)
    sub.add_argument("--transmissivity", type=float)
    sub.add_argument("--chi-deg", dest="chi_deg", type=float)
    sub.add_argument("--chi-rad", dest="chi_rad", type=float)
    sub.add_argument("--truncation", choices=["exact", "linear", "quadratic"])
    sub.add_argument("--scale-ref-cps", dest="scale_ref_cps", type=float)


def _merged_config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config is not None:
        try:
            text = FilePath(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read config file: {exc}") from None
        config = parse_scenario_config(text)
    else:
        config = ScenarioConfig()

    if args.alpha_deg is not None and args.alpha_rad is not None:
        raise CliError("give at most one of --alpha-deg and --alpha-rad")
    if args.chi_deg is not None and args.chi_rad is not None:
        raise CliError("give at most one of --chi-deg and --chi-rad")

    updates: dict[str, object] = {}
    if args.insertion is not None:
        updates["insertion"] = args.insertion
    if args.path is not None:
        updates["path"] = _parse_path(args.path)
    if args.alpha_deg is not None:
        updates["alpha_rad"] = math.radians(args.alpha_deg)
    if args.alpha_rad is not None:
        updates["alpha_rad"] = args.alpha_rad
    if args.transmissivity is not None:
        updates["transmissivity"] = args.transmissivity
    if args.chi_deg is not None:
        updates["chi_rad"] = math.radians(args.chi_deg)
    if args.chi_rad is not None:
        updates["chi_rad"] = args.chi_rad
    if args.truncation is not None:
        updates["truncation"] = _parse_truncation(args.truncation)
    if args.scale_ref_cps is not None:
        updates["scale_ref_cps"] = args.scale_ref_cps
    return dataclasses.replace(config, **updates)


def _num(value: float) -> str:
    return format(float(value), ".12e")


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _scenario_id(scenario: Scenario) -> str:
    ins = scenario.insertion
    if ins is None:
        return "none"
    if isinstance(ins, Absorber):
        return f"absorber:{ins.path.name}:T={ins.transmissivity:.12g}"
    return f"magnet:{ins.path.name}:{ins.truncation.value}"


def _sweep_csv_lines(records: list[IntensityRecord]) -> list[str]:
    lines = ["scenario_id,detector,chi_rad,alpha_rad,truncation,intensity_norm,intensity_cps"]
    for rec in records:
        ins = rec.scenario.insertion
        alpha = _num(ins.alpha_rad) if isinstance(ins, Magnet) else ""
        trunc = ins.truncation.value if isinstance(ins, Magnet) else ""
        lines.append(
            ",".join(
                [
                    _scenario_id(rec.scenario),
                    rec.detector.value,
                    _num(rec.scenario.chi_rad),
                    alpha,
                    trunc,
                    _num(rec.intensity_norm),
                    _num(rec.intensity_cps),
                ]
            )
        )
    return lines


def _write_csv(path_text: str | None, lines: list[str]) -> None:
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    if path_text is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        FilePath(path_text).write_bytes(payload)
        print(f"wrote {len(lines) - 1} rows to {path_text}")


def cmd_run(args: argparse.Namespace) -> int:
    config = _merged_config(args)
    scenario = config.to_scenario()
    result = run(scenario, config.scale_ref_cps)
    print(f"scenario: {_scenario_id(scenario)}  chi_rad={scenario.chi_rad:.12g}")
    rows = [
        [det.value, f"{result[det].intensity_norm:.12g}", f"{result[det].intensity_cps:.12g}"]
        for det in Detector
    ]
    print(_table(["detector", "intensity_norm", "intensity_cps"], rows))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _merged_config(args)
    template = config.to_scenario()

    if args.vary == "chi":
        start = 0.0 if args.start is None else args.start
        stop = 2.0 * math.pi if args.stop is None else args.stop
        points = 361 if args.points is None else args.points
    else:
        start = 0.01 if args.start is None else args.start
        stop = 0.3 if args.stop is None else args.stop
        points = 50 if args.points is None else args.points

    if points < 2:
        raise CliError("--points must be at least 2")
    if not (math.isfinite(start) and math.isfinite(stop) and start < stop):
        raise CliError("--start must be less than --stop")

    if args.vary == "chi":
        grid = np.linspace(start, stop, points)
        records = sweep_chi(template, grid, config.scale_ref_cps)
    else:
        if start <= 0.0:
            raise CliError("alpha sweeps need --start > 0 (log-spaced grid)")
        grid = np.geomspace(start, stop, points)
        records = sweep_alpha(template, grid, config.scale_ref_cps)

    _write_csv(args.csv, _sweep_csv_lines(records))
    return EXIT_OK


def cmd_weakvalues(args: argparse.Namespace) -> int:
    values = exact_weak_values()
    rows = [
        ["pi_I", f"{values.pi_i.real:.12g}", f"{values.pi_i.imag:.12g}"],
        ["pi_II", f"{values.pi_ii.real:.12g}", f"{values.pi_ii.imag:.12g}"],
        ["sigma_pi_I", f"{values.sigma_pi_i.real:.12g}", f"{values.sigma_pi_i.imag:.12g}"],
        ["sigma_pi_II", f"{values.sigma_pi_ii.real:.12g}", f"{values.sigma_pi_ii.imag:.12g}"],
    ]
    print(_table(["weak_value", "re", "im"], rows))
    print("note: the sign of sigma_pi_I depends on the transverse-basis phase")
    print("convention; only its magnitude is fixed by intensities.")
    for path in (Path.I, Path.II):
        print(f"projective_sigma_z_{path.name} = {projective_spin_expectation(path):.12g}")
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    scale = DEFAULT_SCALE_REF_CPS if args.scale_ref_cps is None else args.scale_ref_cps
    table = reproduce_benchmark_table(scale)
    rows = [
        [
            row.quantity,
            f"{row.theory_norm:.12g}",
            f"{row.theory_cps:.12g}",
            f"{row.theory_sigma_cps:.3g}",
            f"{row.measured_cps:.12g}",
            f"{row.measured_sigma_cps:.3g}",
            "yes" if row.agrees else "NO",
        ]
        for row in table
    ]
    print(
        _table(
            [
                "quantity",
                "theory_norm",
                "theory_cps",
                "theory_sigma",
                "measured_cps",
                "measured_sigma",
                "agrees",
            ],
            rows,
        )
    )
    agreeing = sum(row.agrees for row in table)
    print(f"agreement: {agreeing}/{len(table)} rows within 2 sigma")
    return EXIT_OK if agreeing == len(table) else EXIT_DISAGREE


def cmd_analyze(args: argparse.Namespace) -> int:
    path = _parse_path(args.path)
    if args.points < 10:
        raise CliError("--points must be at least 10")
    if not (0.0 < args.alpha_min < args.alpha_max):
        raise CliError("need 0 < --alpha-min < --alpha-max")
    grid = np.geomspace(args.alpha_min, args.alpha_max, args.points)
    report = truncation_scan(path, grid)

    header = [
        "alpha_rad",
        "i_exact_norm",
        "i_linear_norm",
        "i_quadratic_norm",
        "deficit_exact_norm",
        "deficit_linear_norm",
        "deficit_quadratic_norm",
    ]
    table_rows = []
    csv_lines = [",".join(header)]
    for i, alpha in enumerate(report.alpha_grid):
        cells = [
            alpha,
            report.i_exact[i],
            report.i_linear[i],
            report.i_quadratic[i],
            I_REF_NORM - report.i_exact[i],
            I_REF_NORM - report.i_linear[i],
            I_REF_NORM - report.i_quadratic[i],
        ]
        table_rows.append([f"{c:.6g}" for c in cells])
        csv_lines.append(",".join(_num(c) for c in cells))

    print(f"truncation scan: magnet on path {path.name}, chi = 0, {len(grid)} angles")
    print(_table(header, table_rows))
    print(f"fitted |I_linear - I_exact| exponent:    {report.error_exponent_linear:.4f}")
    print(f"fitted |I_quadratic - I_exact| exponent: {report.error_exponent_quadratic:.4f}")
    witness = cheshire_witness(float(grid[-1]))
    print(
        f"witness at alpha = {witness.alpha_rad:.6g} rad: "
        f"deficit exact = {witness.deficit_exact:.6g}, "
        f"linear = {witness.deficit_linear:.6g}, "
        f"quadratic = {witness.deficit_quadratic:.6g}"
    )
    if args.csv is not None:
        _write_csv(args.csv, csv_lines)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cheshire",
        description=(
            "Two-path spin interferometer simulator: exact intensities, "
            "weak values and truncation-order analysis."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario and print detector intensities")
    _add_scenario_args(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep chi or alpha and emit CSV")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--vary", choices=["chi", "alpha"], required=True)
    p_sweep.add_argument("--start", type=float)
    p_sweep.add_argument("--stop", type=float)
    p_sweep.add_argument("--points", type=int)
    p_sweep.add_argument("--csv", help="output CSV path (stdout when omitted)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_weak = sub.add_parser("weakvalues", help="print the four canonical weak values")
    p_weak.set_defaults(func=cmd_weakvalues)

    p_repr = sub.add_parser("reproduce", help="compare predictions with published benchmarks")
    p_repr.add_argument("--scale-ref-cps", dest="scale_ref_cps", type=float)
    p_repr.set_defaults(func=cmd_reproduce)

    p_ana = sub.add_parser("analyze", help="truncation-order scan and witness deficits")
    p_ana.add_argument("--path", choices=["I", "II"], required=True)
    p_ana.add_argument("--alpha-min", dest="alpha_min", type=float, default=0.01)
    p_ana.add_argument("--alpha-max", dest="alpha_max", type=float, default=0.3)
    p_ana.add_argument("--points", type=int, default=50)
    p_ana.add_argument("--csv", help="also write the scan as CSV")
    p_ana.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
