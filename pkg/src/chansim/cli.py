"""Command-line front end: ``chansim simulate|fit|validate|pathloss``.

Exit codes: 0 success, 1 usage error or invalid parameters, 2 data or
validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import dataio
from .cirgen import generate_batch
from .errors import ChansimError, DataError, ParameterError, ScenarioLookupError, ValidationError
from .params import Condition, load_config, scenario_for
from .pathloss import ci_path_loss_db
from .randvar import RngStream
from .stats import pdp_from_realization, rms_delay_spread_ns

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
LOW_SAMPLE_WARNING = 1000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("CHANSIM_SEED")
    if raw is None:
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"CHANSIM_SEED must be an integer, got {raw!r}") from None
    if seed < 0:
        raise UsageError("CHANSIM_SEED must be non-negative")
    return seed


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chansim", description="Indoor mmWave/sub-THz statistical channel simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="generate channel realizations")
    sim.add_argument("--freq-ghz", type=float)
    sim.add_argument("--condition", choices=["LOS", "NLOS"], type=str.upper)
    src = sim.add_mutually_exclusive_group()
    src.add_argument("--dataset", choices=["All28", "Common28", "Common140", "Interpolated"])
    src.add_argument("--config", type=Path, help="key = value parameter file")
    sim.add_argument("--distance-m", type=float, default=10.0)
    sim.add_argument("--count", type=_pos_int, default=1)
    sim.add_argument("--seed", type=_nonneg_int)
    sim.add_argument("--tx-power-dbm", type=float, default=0.0)
    sim.add_argument("--out", type=Path, required=True)
    sim.add_argument("--format", choices=["csv", "json"], default="csv")

    fit = sub.add_parser("fit", help="refit parameters from measurement tables")
    group = fit.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", type=Path, help="measurement CSV")
    group.add_argument("--embedded", type=int, choices=[28, 140])

    val = sub.add_parser("validate", help="Monte Carlo validation against reference statistics")
    val.add_argument("--count", type=_pos_int, default=10_000)
    val.add_argument("--seed", type=_nonneg_int)
    val.add_argument("--tolerance-pct", type=float, default=20.0)
    val.add_argument("--out", type=Path)
    val.add_argument("--no-angular", action="store_true", help="skip APS-based statistics")

    pl = sub.add_parser("pathloss", help="evaluate the CI path loss model")
    pl.add_argument("--freq-ghz", type=float, required=True)
    pl.add_argument("--distance-m", type=float, required=True)
    pl.add_argument("--ple", type=float, required=True)
    pl.add_argument("--sigma-db", type=float, default=0.0)
    pl.add_argument("--seed", type=_nonneg_int)
    return parser


def _cmd_simulate(args) -> int:
    if args.config is not None:
        params = load_config(args.config.read_text())
        if args.freq_ghz is not None and args.freq_ghz != params.frequency_ghz:
            raise UsageError("--freq-ghz disagrees with the config file")
        if args.condition is not None and Condition(args.condition) is not params.condition:
            raise UsageError("--condition disagrees with the config file")
    else:
        if args.freq_ghz is None or args.condition is None:
            raise UsageError("--freq-ghz and --condition are required without --config")
        params = scenario_for(args.freq_ghz, args.condition, args.dataset)
    seed = args.seed if args.seed is not None else _default_seed()
    realizations = generate_batch(params, args.distance_m, args.count, seed, tx_power_dbm=args.tx_power_dbm)
    args.out.write_bytes(dataio.export_realizations(realizations, args.format))

    n = np.array([r.num_clusters for r in realizations])
    m = np.array([r.num_subpaths for r in realizations])
    ds = np.array([rms_delay_spread_ns(pdp_from_realization(r)) for r in realizations])
    print(f"scenario: {params.frequency_ghz:g} GHz {params.condition.value} ({params.dataset.value})")
    print(f"realizations: {len(realizations)}  seed: {seed}  -> {args.out}")
    print(f"mean clusters N: {n.mean():.3f}")
    print(f"mean subpaths per cluster M_n: {m.sum() / n.sum():.3f}")
    print(f"median omni RMS DS: {np.median(ds):.3f} ns")
    return EXIT_OK


def _fit_block(records, frequency) -> list[str]:
    lines = []
    for cond in (Condition.LOS, Condition.NLOS):
        rows = [r for r in records if r.condition is cond]
        if not rows:
            lines.append(f"  {cond.value}: no records")
            continue
        lam = dataio.refit_lambda_c(rows)
        ref = dataio.REFERENCE_LAMBDA_C.get((frequency, cond))
        ref_txt = f"  (reference {ref})" if ref is not None else ""
        lines.append(f"  {cond.value}: lambda_c = {lam:.4f}{ref_txt}  [{len(rows)} records]")
    try:
        ple_los, ple_nlos = dataio.refit_ple(records, frequency)
    except DataError as exc:
        lines.append(f"  PLE: not fitted ({exc})")
    else:
        refs = dataio.REFERENCE_PLE_28GHZ if frequency == 28 else {}
        for cond, value in ((Condition.LOS, ple_los), (Condition.NLOS, ple_nlos)):
            ref = refs.get(cond)
            ref_txt = f"  (reference {ref})" if ref is not None else ""
            lines.append(f"  {cond.value}: PLE = {value:.4f}{ref_txt}")
    return lines


def _cmd_fit(args) -> int:
    if args.embedded is not None:
        records = dataio.embedded_measurements(args.embedded)
    else:
        records = dataio.import_measurement_csv(args.input.read_bytes())
    if not records:
        raise DataError("no measurement records")
    for freq in sorted({r.frequency_ghz for r in records}):
        print(f"{freq} GHz")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", dataio.DataQualityWarning)
            lines = _fit_block([r for r in records if r.frequency_ghz == freq], freq)
        for line in lines:
            print(line)
        for w in caught:
            print(f"  warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    if not args.tolerance_pct > 0:
        raise UsageError("--tolerance-pct must be positive")
    if args.count < 100:
        raise UsageError("--count must be at least 100")
    if args.count < LOW_SAMPLE_WARNING:
        print(f"warning: only {args.count} realizations per scenario; medians will be noisy", file=sys.stderr)
    seed = args.seed if args.seed is not None else _default_seed()
    report = dataio.run_validation(args.count, seed, args.tolerance_pct, angular=not args.no_angular)
    if args.out is not None:
        args.out.write_text(report.to_json() + "\n")
    for key, checks in report.checks.items():
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status} {key} {c.name}: {c.value:.4g} vs {c.reference:.4g}")
    print("validation passed" if report.passed else "validation FAILED")
    return EXIT_OK if report.passed else EXIT_DATA


def _cmd_pathloss(args) -> int:
    rng = None
    if args.sigma_db > 0:
        seed = args.seed if args.seed is not None else _default_seed()
        rng = RngStream(seed)
    pl = ci_path_loss_db(args.freq_ghz * 1e9, args.distance_m, args.ple, args.sigma_db, rng)
    print(f"{pl:.2f} dB")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "fit": _cmd_fit,
    "validate": _cmd_validate,
    "pathloss": _cmd_pathloss,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ParameterError, ScenarioLookupError) as exc:
        print(f"chansim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValidationError, OSError) as exc:
        print(f"chansim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ChansimError as exc:
        print(f"chansim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
