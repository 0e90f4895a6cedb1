"""Subcommand handlers.

Each handler takes the parsed arguments, writes its result to stdout and
returns the process exit code. Errors propagate as ``OdhallError`` and are
mapped to exit codes by ``odhall.cli.main``.
"""

import csv
import math
import sys
from pathlib import Path
from typing import (
    List,
    Sequence,
)

from colorama import (
    Fore,
    Style,
)

from odhall.core.logging import logger
from odhall.domain.services import build_model
from odhall.domain.services.littlewood_paley import (
    besov_norm,
    block_table,
    build_filter_bank,
)
from odhall.infrastructure.storage import (
    load_config,
    read_series,
    read_snapshot,
    uniform_spacing,
)
from odhall.schemas import (
    FitResult,
    RateCheck,
    TimeSeriesRecord,
)
from odhall.services.diagnostics import (
    check_decay_rates,
    derived_series,
    energy_inequality_check,
    fit_decay,
    tracker_series,
)
from odhall.services.initial_data import generate
from odhall.services.integrator import linear_verify
from odhall.services.run_service import (
    RunService,
    sweep,
)
from odhall.shared.constants import (
    CONFIG_COPY_FILENAME,
    EXIT_CHECK_FAILED,
    EXIT_OK,
    FLOAT_FORMAT,
    LINEAR_VERIFY_TOL,
    M_TRACKER_COLUMNS,
)
from odhall.shared.exceptions import (
    SeriesFormatError,
    UsageError,
)


def _fmt(value: float) -> str:
    return format(value, FLOAT_FORMAT)


def _verdict(passed: bool) -> str:
    if not sys.stdout.isatty():
        return "pass" if passed else "fail"
    if passed:
        return f"{Fore.GREEN}pass{Style.RESET_ALL}"
    return f"{Fore.RED}fail{Style.RESET_ALL}"


def _csv_writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def cmd_run(args) -> int:
    config_path = Path(args.config)
    config = load_config(config_path)
    service = RunService(config, config_text=config_path.read_text(encoding="utf-8"))
    result = service.run(args.out)
    print(f"{result.out_dir} rows={len(result.records)} snapshots={len(result.snapshots)}")
    return EXIT_OK


def cmd_linear_verify(args) -> int:
    config = load_config(args.config)
    grid = config.build_grid()
    params = config.model_params()
    model = build_model(config.model, grid, params)
    n_steps = args.steps if args.steps is not None else config.n_steps
    if n_steps < 1:
        raise UsageError("linear-verify needs at least one step (raise time.t_end or pass --steps)")
    initial = generate(config.ic, grid, config.model, params, model.workspace)
    result = linear_verify(model, initial.to_array(), config.time.dt, n_steps)
    passed = result.max_error <= LINEAR_VERIFY_TOL
    logger.info(
        "linear_verify_finished",
        model=config.model.value,
        max_error=result.max_error,
        worst_mode=list(result.worst_mode),
        modes=result.populated_modes,
        t=result.t,
    )
    print(
        f"max_rel_error={result.max_error:.3e} worst_mode={result.worst_mode} "
        f"modes={result.populated_modes} t={result.t:g} {_verdict(passed)}"
    )
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_fit(args) -> int:
    records = read_series(args.series)
    windows = args.window
    writer = _csv_writer()
    if args.header:
        writer.writerow(FitResult.CSV_HEADER)
    for window in windows:
        fit = fit_decay(derived_series(records, args.column), window, args.column)
        writer.writerow(fit.to_row())
    return EXIT_OK


def cmd_rates(args) -> int:
    records = read_series(args.series)
    checks: List[RateCheck] = check_decay_rates(records, args.model, args.window, args.tolerance)
    writer = _csv_writer()
    writer.writerow(RateCheck.CSV_HEADER)
    for check in checks:
        writer.writerow(check.to_row())
    return EXIT_OK if all(check.passed for check in checks) else EXIT_CHECK_FAILED


def cmd_lp(args) -> int:
    state, t = read_snapshot(args.snapshot)
    bank = build_filter_bank(state.grid)
    unknowns = {"rho": state.rho, "u": state.u, state.EXTRA_NAME: state.extra}
    if args.field != "all" and args.field not in unknowns:
        raise UsageError(f"field must be one of {sorted(unknowns)} or all, got {args.field!r}")
    selected = unknowns if args.field == "all" else {args.field: unknowns[args.field]}

    tables = [block_table(field, args.s, bank) for field in selected.values()]
    writer = _csv_writer()
    writer.writerow(("j", "scale", "block_l2", "weighted"))
    for rows in zip(*tables):
        # "all" combines the unknowns into one l2 norm per block
        scale = rows[0]["scale"]
        norm = math.hypot(*(row["block_l2"] for row in rows))
        writer.writerow((rows[0]["j"], _fmt(scale), _fmt(norm), _fmt(scale**args.s * norm)))
    target = state if args.field == "all" else selected[args.field]
    print(f"# t={_fmt(t)} besov({args.s:g})={_fmt(besov_norm(target, args.s, bank))}", file=sys.stderr)
    return EXIT_OK


def _trackers_match(records: Sequence[TimeSeriesRecord], m_column: str) -> bool:
    recomputed = tracker_series(records, m_column)
    return all(
        trackers.n == record.n_tracker and trackers.m == record.m_tracker
        for trackers, record in zip(recomputed, records)
    )


def cmd_analyze(args) -> int:
    series_path = Path(args.series)
    records = read_series(series_path)
    if not records:
        raise SeriesFormatError("Series holds no records", series_path)
    config_copy = series_path.parent / CONFIG_COPY_FILENAME
    if config_copy.exists():
        config = load_config(config_copy)
        dt = config.time.dt
        m_column = M_TRACKER_COLUMNS[float(config.params.m_sigma)]
    else:
        dt = uniform_spacing(records)
        m_column = M_TRACKER_COLUMNS[1.0]

    passed = True
    for sigma in (0, 1):
        e_start = records[0].value(f"E{sigma}")
        threshold = args.rel_tol * e_start / dt
        if len(records) < 2:
            worst = 0.0
        else:
            worst = energy_inequality_check(records, sigma, quadrature="min")
        ok = worst <= threshold
        passed = passed and ok
        print(f"sigma={sigma} worst_violation={_fmt(worst)} threshold={_fmt(threshold)} {_verdict(ok)}")

    trackers_ok = _trackers_match(records, m_column)
    passed = passed and trackers_ok
    print(f"trackers recomputed={'exact' if trackers_ok else 'mismatch'} {_verdict(trackers_ok)}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    results = sweep(args.configs, args.jobs)
    for path, code in results:
        print(f"{path} exit={code}")
    return max(code for _, code in results)


COMMANDS = {
    "run": cmd_run,
    "linear-verify": cmd_linear_verify,
    "fit": cmd_fit,
    "rates": cmd_rates,
    "lp": cmd_lp,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
}
