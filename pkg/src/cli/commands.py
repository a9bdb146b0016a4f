"""Command implementations behind ``run.py``.

Each command takes a validated RunConfig, writes its output and returns
the process exit code (0 pass, 1 verification failure).
"""

import json
import logging
from typing import Dict, List, Optional

import numpy as np

from src.cli.config import OutputFormat, RunConfig, VerifyTarget, parse_grid
from src.numerics.ballharmonic import AxisymProfile, BallPoint, linear_profile, sample_sphere, sign_profile
from src.numerics.heinz import (check_coefficient_split, check_constants_decreasing,
                                check_monotone_v, check_positivity_2f1, closed_form_oracle,
                                heinz_constant, u_profile, v_profile)
from src.numerics.specfun import check_kummer_quadratic, check_transform_3f2_to_4f3
from src.reporting.formatting import rows_to_csv, rows_to_table
from src.reporting.report import VerificationPoint, VerificationReport, merge_reports
from src.utils.output import write_output
from src.verify.maps import random_trig_map, sign_map
from src.verify.theorems import (sharpness_sweep, verify_generalized_schwarz, verify_into_ball,
                                 verify_norm_derivative_inequality, verify_ratio_bound)

logger = logging.getLogger("HeinzConstants.CLI")

ORACLE_DIMENSIONS = (2, 3, 4)
DEFAULT_R: Dict[VerifyTarget, List[float]] = {
    VerifyTarget.IDENTITIES: [0.1, 0.5, 0.9],
    VerifyTarget.SHARPNESS: [0.9, 0.99, 0.999],
    VerifyTarget.DERIVATIVE: [0.25, 0.5, 0.75],
}
DEFAULT_GRID: Dict[VerifyTarget, str] = {
    VerifyTarget.MONOTONE: "0:0.01:1",
    VerifyTarget.POSITIVITY: "0:0.05:1",
}
SHARPNESS_MIN_TOL = 1e-9

def _render_rows(config: RunConfig, headers, rows) -> str:
    fmt = config.output_format
    if fmt is OutputFormat.CSV:
        return rows_to_csv(headers, rows)
    if fmt is OutputFormat.JSON:
        records = [dict(zip(headers, row)) for row in rows]
        return json.dumps({'name': config.command.value, 'rows': records}, indent=2, sort_keys=True) + "\n"
    return rows_to_table(headers, rows)

def cmd_constants(config: RunConfig) -> int:
    """Print n, C_n and, for n = 2, 3, 4, the closed-form reference."""
    rows = []
    for n in config.n_values:
        c_n = heinz_constant(n, config.tol)
        reference: Optional[float] = None
        discrepancy: Optional[float] = None
        if n in ORACLE_DIMENSIONS:
            reference = closed_form_oracle(n, "V", 1.0)
            discrepancy = abs(c_n.value - reference)
        rows.append([n, c_n.value, c_n.error_bound, reference, discrepancy])
        logger.info(f"C_{n} = {c_n.value:.15f}")
    write_output(_render_rows(config, ["n", "C_n", "error_bound", "reference", "discrepancy"], rows),
                 config.output)
    return 0

def cmd_profile(config: RunConfig) -> int:
    """Tabulate U(rN) or V(r) on the grid for every requested dimension."""
    evaluate = u_profile if config.which == "U" else v_profile
    rows = []
    for n in config.n_values:
        for r in config.grid:
            result = evaluate(n, r, config.tol)
            oracle: Optional[float] = None
            discrepancy: Optional[float] = None
            if n in ORACLE_DIMENSIONS:
                oracle = closed_form_oracle(n, config.which, r)
                discrepancy = abs(result.value - oracle)
            rows.append([n, r, result.value, result.error_bound, oracle, discrepancy])
    logger.info(f"Tabulated {config.which} at {len(rows)} points")
    write_output(_render_rows(config, ["n", "r", "value", "error_bound", "oracle", "discrepancy"], rows),
                 config.output)
    return 0

def _map_rng(config: RunConfig, n: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([config.seed, n]))

def _schwarz_reports(config: RunConfig, n: int) -> List[VerificationReport]:
    rng = _map_rng(config, n)
    axis = [BallPoint.on_axis(n, r) for r in config.radii]
    sign_report = verify_generalized_schwarz(sign_map(n), axis, config.samples, config.seed, config.tol)
    # the sign map is extremal: equality on the axis up to twice the budget
    saturation = VerificationReport(name=f"schwarz-saturation n={n}")
    for point in sign_report.points:
        saturation.add(VerificationPoint.identity(point.x, point.lhs, point.rhs, 2 * point.budget,
                                                 label=f"saturation {point.label}"))
    reports = [sign_report, saturation]

    for i in range(config.maps):
        bmap = random_trig_map(n, rng, odd=False, label=f"trig{i}")
        directions = sample_sphere(rng, len(config.radii), n)
        grid = [BallPoint.along(d, r) for d, r in zip(directions, config.radii)]
        seed = int(rng.integers(2 ** 32))
        reports.append(verify_generalized_schwarz(bmap, axis + grid, config.samples, seed, config.tol))
    return reports

def _ratio_reports(config: RunConfig, n: int) -> List[VerificationReport]:
    rng = _map_rng(config, n)
    north = [0.0] * (n - 1) + [1.0]
    reports = [verify_ratio_bound(sign_map(n), config.radii, north, config.samples, config.seed, config.tol)]
    for i in range(config.maps):
        bmap = random_trig_map(n, rng, odd=True, label=f"trig{i}")
        direction = sample_sphere(rng, 1, n)[0]
        seed = int(rng.integers(2 ** 32))
        reports.append(verify_ratio_bound(bmap, config.radii, direction, config.samples, seed, config.tol))
    return reports

def _identity_reports(config: RunConfig, n: int, r_values: List[float]) -> List[VerificationReport]:
    report = VerificationReport(name=f"identities n={n}", metadata={'n': n})
    for r in r_values:
        report.add(check_transform_3f2_to_4f3(n, r))
        report.add(check_kummer_quadratic(n, r))
    return [report, check_coefficient_split(n, config.k_max)]

def _mixed_components(config: RunConfig, n: int) -> List[AxisymProfile]:
    """(cos a sign(t), sin a t) with the angle a drawn from the seed; maps into the ball."""
    angle = float(_map_rng(config, n).uniform(0.0, 0.5 * np.pi))
    return [sign_profile(n).scaled(np.cos(angle)), linear_profile(n).scaled(np.sin(angle))]

def _derivative_reports(config: RunConfig, n: int, r_values: List[float]) -> List[VerificationReport]:
    component_sets = {
        'sign': [sign_profile(n)],
        'identity': [linear_profile(n)],
        'mixed': _mixed_components(config, n),
    }
    report = VerificationReport(name=f"derivative n={n}", metadata={'n': n, 'seed': config.seed})
    for label, components in component_sets.items():
        report.add(verify_into_ball(components, label=label))
        for r in r_values:
            report.add(verify_norm_derivative_inequality(components, r, label=label))
    return [report]

def build_report(config: RunConfig) -> VerificationReport:
    """Run the verification selected by ``config.target`` for every dimension."""
    target = config.target
    r_values = config.r_values or DEFAULT_R.get(target)
    grid = config.grid or (parse_grid(DEFAULT_GRID[target]) if target in DEFAULT_GRID else None)
    reports: List[VerificationReport] = []
    norm_defects: Dict[str, Dict[str, float]] = {}

    if target is VerifyTarget.CONSTANTS:
        reports.append(check_constants_decreasing(sorted(config.n_values), config.tol))
    for n in config.n_values if target is not VerifyTarget.CONSTANTS else []:
        logger.info(f"verify {target.value}: n={n}")
        if target is VerifyTarget.SCHWARZ:
            reports.extend(_schwarz_reports(config, n))
        elif target is VerifyTarget.RATIO:
            reports.extend(_ratio_reports(config, n))
        elif target is VerifyTarget.MONOTONE:
            reports.append(check_monotone_v(n, grid, config.tol))
        elif target is VerifyTarget.SHARPNESS:
            table = sharpness_sweep(n, config.m_values, r_values, max(config.tol, SHARPNESS_MIN_TOL),
                                    literal=config.literal)
            reports.append(table.to_report())
            norm_defects[str(n)] = table.norm_defect_metadata()
        elif target is VerifyTarget.IDENTITIES:
            reports.extend(_identity_reports(config, n, r_values))
        elif target is VerifyTarget.POSITIVITY:
            reports.append(check_positivity_2f1(n, grid, config.tol))
        elif target is VerifyTarget.DERIVATIVE:
            reports.extend(_derivative_reports(config, n, r_values))

    metadata = {
        'target': target.value,
        'n': list(config.n_values),
        'tol': config.tol,
        'seed': config.seed,
        'samples': config.samples,
        'maps': config.maps,
    }
    if target is VerifyTarget.SHARPNESS:
        metadata['literal'] = config.literal
        metadata['norm_defect'] = norm_defects
    return merge_reports(f"verify {target.value}", reports, metadata)

def cmd_verify(config: RunConfig) -> int:
    """Run a verification, write the report and return 0 on pass, 1 on failure."""
    report = build_report(config)
    fmt = config.output_format
    if fmt is OutputFormat.CSV:
        text = report.to_csv()
    elif fmt is OutputFormat.TABLE:
        text = report.to_table()
    else:
        text = report.to_json()
    write_output(text, config.output)

    summary = report.summary
    if summary.passed:
        logger.info(f"{report.name}: all {summary.points} points pass")
        return 0
    logger.error(f"{report.name}: {summary.failures} of {summary.points} points fail, "
                 f"worst {summary.worst_label!r}")
    return 1

def run_command(config: RunConfig) -> int:
    handlers = {
        'constants': cmd_constants,
        'profile': cmd_profile,
        'verify': cmd_verify,
    }
    return handlers[config.command.value](config)
