#!/usr/bin/env python3
"""singosc4: spectra, interbasis tables, spheroidal bases and verification of the
four-dimensional double singular oscillator, written as CSV or JSON."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from src.config.settings import settings
from src.models.quantum_models import SystemParams
from src.models.result_models import CoefficientMethod, OutputFormat, RecursionSource
from src.models.run_config import RunConfig
from src.services.interbasis import InterbasisCalculator
from src.services.oscillator import energy, enumerate_sectors, multiplet_size, sector
from src.services.printed_forms import typo_ledger
from src.services.quadrature import ConvergenceError
from src.services.serialization import (
    checks_frame,
    coefficient_frame,
    deviation_summary,
    frame_records,
    ledger_frame,
    sector_block,
    spectrum_frame,
    spheroidal_frame,
    to_csv,
    to_json,
    write_output,
)
from src.services.specfun import DomainError
from src.services.spheroidal import SpheroidalSolver
from src.services.verification import Verifier

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONVERGENCE = 2
EXIT_VERIFICATION = 3

# Flags that map straight onto SystemParams
PARAM_KEYS = ("mu", "omega", "hbar", "c1", "c2")


def read_config_file(path: str) -> dict[str, str]:
    """
    Parse a flat "key = value" file; blank lines and lines starting with # are skipped.

    Raises:
        ValueError: If a line has no "=" or the file cannot be read
    """
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValueError(f"Cannot read config file {path}: {e}") from e
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{number}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _split(value: Any) -> list[str]:
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [part.strip() for part in str(value).split(",") if part.strip()]


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge the config file with the command-line flags (flags win) and validate.

    Raises:
        ValueError: If any value is malformed (pydantic's ValidationError included)
    """
    merged: dict[str, Any] = read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in ("config", "command", "log_level") or value is None:
            continue
        merged[key] = value

    params = SystemParams(**{key: float(merged.pop(key)) for key in PARAM_KEYS if key in merged})
    fields: dict[str, Any] = {"params": params}
    for key in ("m", "s"):
        if key in merged:
            fields[key] = str(merged.pop(key))
    for key in ("n", "n_max"):
        if key in merged:
            fields[key] = int(merged.pop(key))
    if "r_list" in merged:
        fields["r_list"] = [float(v) for v in _split(merged.pop("r_list"))]
    if "methods" in merged:
        fields["methods"] = [CoefficientMethod(v) for v in _split(merged.pop("methods"))]
    if "suite" in merged:
        fields["suites"] = _split(merged.pop("suite"))
    if "format" in merged:
        fields["output_format"] = OutputFormat(merged.pop("format"))
    if "output" in merged:
        fields["output_path"] = merged.pop("output")
    if "report" in merged:
        fields["report_path"] = merged.pop("report")
    if "tol" in merged:
        fields["tolerance"] = float(merged.pop("tol"))
    if "perturb_cg" in merged:
        fields["perturb_cg"] = float(merged.pop("perturb_cg"))
    if merged:
        raise ValueError(f"Unknown configuration key(s): {', '.join(sorted(merged))}")
    return RunConfig(**fields)


def _require(value: Optional[Any], name: str) -> Any:
    if value is None:
        raise ValueError(f"--{name.replace('_', '-')} is required for this command")
    return value


def _config_sector(config: RunConfig):
    if config.m is None:
        raise ValueError("--m and --s are required for this command")
    return sector(config.params, config.m, config.s)


def cmd_spectrum(config: RunConfig) -> str:
    """Energies and multiplet sizes for N = 0..n_max, one sector or all of them."""
    n_max = _require(config.n_max if config.n_max is not None else config.n, "n_max")
    rows = []
    for N in range(n_max + 1):
        sectors = [_config_sector(config)] if config.m is not None else enumerate_sectors(N, config.params)
        for sec in sectors:
            size = multiplet_size(N, sec)
            if size == 0:
                continue
            rows.append(
                {
                    "N": N,
                    "m": str(sec.m),
                    "s": str(sec.s),
                    "M1": sec.M1,
                    "M2": sec.M2,
                    "delta1": sec.delta1,
                    "delta2": sec.delta2,
                    "energy": energy(config.params, N, sec),
                    "multiplet_size": size,
                }
            )
    frame = spectrum_frame(rows)
    logger.info(f"Spectrum: {len(frame)} rows up to N={n_max}")
    if config.output_format == OutputFormat.CSV:
        return to_csv(frame, "spectrum")
    return to_json(config, {"spectrum": frame_records(frame)})


def cmd_coeffs(config: RunConfig) -> str:
    """W tables for every requested method and their pairwise deviations."""
    N = _require(config.n, "n")
    sec = _config_sector(config)
    tables = [
        InterbasisCalculator.coefficient_table(N, sec, method, config.params) for method in config.methods
    ]
    summary = deviation_summary(tables)
    frame = coefficient_frame(tables)
    if config.output_format == OutputFormat.CSV:
        lines = "".join(f"# max_deviation {key}={settings.float_format % value}\n" for key, value in summary.items())
        text = to_csv(frame, "coefficients")
        header, body = text.split("\n", 1)
        return f"{header}\n{lines}{body}"
    results = {
        "N": N,
        "sector": sector_block(sec),
        "tables": frame_records(frame),
        "max_deviation": summary,
    }
    return to_json(config, results)


def cmd_spheroidal(config: RunConfig) -> str:
    """Q spectra, U and V vectors and both recursion residual reports for each R."""
    N = _require(config.n, "n")
    sec = _config_sector(config)
    solutions, deltas, residuals = [], [], []
    for R in config.r_list:
        solution = SpheroidalSolver.solve_spheroidal(N, sec, R)
        solutions.append(solution)
        deltas.append(SpheroidalSolver.spectrum_delta(N, sec, R))
        residuals.append(
            (
                SpheroidalSolver.recursion_residual(solution, RecursionSource.ORACLE_CONSISTENT),
                SpheroidalSolver.recursion_residual(solution, RecursionSource.PRINTED),
            )
        )
    if config.output_format == OutputFormat.CSV:
        return to_csv(spheroidal_frame(solutions, deltas, residuals), "spheroidal")
    results = {
        "N": N,
        "sector": sector_block(sec),
        "solutions": [
            {
                "R": solution.R,
                "j_values": solution.j_values,
                "n1_values": solution.n1_values,
                "q_values": solution.q_values,
                "spectrum_delta": delta,
                "U": solution.U,
                "V": solution.V,
                "residuals": {report.source.value: report.model_dump(mode="json") for report in pair},
            }
            for solution, delta, pair in zip(solutions, deltas, residuals)
        ],
    }
    return to_json(config, results)


def cmd_verify(config: RunConfig) -> tuple[str, bool]:
    """Run the acceptance suites; the JSON report goes to report_path when given."""
    report = Verifier(tolerance=config.tolerance, perturb_cg=config.perturb_cg).run(config.suites)
    document = to_json(config, {"suites": report.suites, "passed": report.passed}, report.checks)
    if config.report_path:
        write_output(document, config.report_path)
    if config.output_format == OutputFormat.JSON:
        return document, report.passed
    return to_csv(checks_frame(report.checks), "checks"), report.passed


def cmd_ledger(config: RunConfig) -> str:
    """Deviations of the printed closed forms from the corrected ones."""
    n_max = config.n_max if config.n_max is not None else 6
    entries = typo_ledger(n_max=n_max, r_values=tuple(r for r in config.r_list if r > 0) or (1.0,))
    frame = ledger_frame(entries)
    if config.output_format == OutputFormat.CSV:
        return to_csv(frame, "ledger")
    return to_json(config, {"ledger": frame_records(frame)})


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="Flat 'key = value' file; flags override its values")
    parser.add_argument("--c1", type=float, help="Singular strength on the (u0, u1) plane (default: 0)")
    parser.add_argument("--c2", type=float, help="Singular strength on the (u2, u3) plane (default: 0)")
    parser.add_argument("--mu", type=float, help="Mass (default: 1)")
    parser.add_argument("--omega", type=float, help="Frequency (default: 1)")
    parser.add_argument("--hbar", type=float, help="Reduced Planck constant (default: 1)")
    parser.add_argument("--format", type=str, choices=["csv", "json"], help="Output format (default: csv)")
    parser.add_argument("--output", "-o", type=str, help="Output file (default: stdout)")
    parser.add_argument("--log-level", type=str, default=None, help="Logging level (default: LOG_LEVEL or INFO)")


def _add_sector(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=str, help="Charge m as an exact integer or half-integer, e.g. 1/2")
    parser.add_argument("--s", type=str, help="Charge s, same form as --m")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singosc4",
        description="Four-dimensional double singular oscillator: spectra, interbasis expansions and verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  singosc4 spectrum --n-max 8 --c1 0.5 --c2 2.0 --m 0 --s 0 --format csv
  singosc4 coeffs --n 6 --m 1/2 --s 1/2 --c1 0.5 --c2 2.0 --methods 3f2,cg,quad
  singosc4 spheroidal --n 8 --m 0 --s 0 --r-list 0,0.1,1,10
  singosc4 verify --suite all --tol 1e-8 --report report.json
  singosc4 ledger --n-max 6 --format json

Exit codes: 0 success, 1 usage or domain error, 2 quadrature non-convergence, 3 verification failure
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", help="Energy levels and multiplet sizes")
    _add_common(spectrum)
    _add_sector(spectrum)
    spectrum.add_argument("--n-max", type=int, help="Highest principal quantum number")

    coeffs = commands.add_parser("coeffs", help="Interbasis coefficient tables")
    _add_common(coeffs)
    _add_sector(coeffs)
    coeffs.add_argument("--n", type=int, help="Principal quantum number")
    coeffs.add_argument("--methods", type=str, help="Comma-separated subset of 3f2,cg,quad (default: 3f2,cg)")

    spheroidal = commands.add_parser("spheroidal", help="Spheroidal spectra and expansion vectors")
    _add_common(spheroidal)
    _add_sector(spheroidal)
    spheroidal.add_argument("--n", type=int, help="Principal quantum number")
    spheroidal.add_argument("--r-list", type=str, help="Comma-separated couplings R = a^2 d^2 / 4 (default: 0,0.1,1,10)")

    verify = commands.add_parser("verify", help="Run the acceptance suites")
    _add_common(verify)
    verify.add_argument("--suite", type=str, help="Comma-separated suite names or 'all' (default: all)")
    verify.add_argument("--tol", type=float, help="Bound for the oracle-level checks (default: ORACLE_TOLERANCE)")
    verify.add_argument("--report", type=str, help="Write the JSON report to this file")
    verify.add_argument("--perturb-cg", type=float, help="Add this to one Clebsch-Gordan entry per table")

    ledger = commands.add_parser("ledger", help="Deviations of the printed closed forms")
    _add_common(ledger)
    ledger.add_argument("--n-max", type=int, help="Highest principal quantum number (default: 6)")
    ledger.add_argument("--r-list", type=str, help="Couplings for the printed recursion residuals")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level:
        settings.log_level = args.log_level
    settings.setup_logging()

    try:
        config = build_config(args)
        if args.command == "verify":
            text, passed = cmd_verify(config)
            write_output(text, config.output_path)
            if not passed:
                logger.error("Verification failed")
                return EXIT_VERIFICATION
            return EXIT_OK
        handlers = {
            "spectrum": cmd_spectrum,
            "coeffs": cmd_coeffs,
            "spheroidal": cmd_spheroidal,
            "ledger": cmd_ledger,
        }
        write_output(handlers[args.command](config), config.output_path)
        return EXIT_OK
    except ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        print(f"diagnostics: last_delta={e.delta} nodes={e.nodes} value={e.value}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValidationError, DomainError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
