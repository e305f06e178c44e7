"""
Command-line entry point for the long-range chain toolkit.

This module exposes every capability as a subcommand through `fire`. It includes:
    - bounds: certify zeta_alpha and tabulate W_alpha(L).
    - contours: decompose a spin configuration into triangles and contours.
    - census: run the entropy check for one contour mass.
    - peierls: bound the critical inverse temperature.
    - simulate / scan: Metropolis runs from a flat configuration file.

Every command writes its results under the output directory and returns an exit
code: 0 on success, 1 when a valid run finds a bound violation or fails
certification, 2 on usage or domain errors.

Example usage:
    dyson bounds --alpha 0.2 --limit 10000 --out results/
    dyson contours --spins "[1,1,-1,1,1]"
    dyson simulate --config sim.cfg --seed 7
"""

import functools
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import fire
import numpy as np
import pandas as pd

from dyson.chain.constants import (
    COMMANDS,
    DEFAULT_CENSUS_C,
    DEFAULT_GROUPING_C,
    DEFAULT_SEARCH_LIMIT,
    MAX_ORACLE_ANNOTATION_SITES,
    Boundary,
    KcVariant,
)
from dyson.chain.contour_census import beta_c_bound, entropy_check
from dyson.chain.contour_geometry import (
    build_triangles,
    check_separation,
    group_contours,
)
from dyson.chain.lattice_core import (
    CouplingParams,
    FieldProfile,
    SpinConfiguration,
    exact_partition,
)
from dyson.chain.mc_simulator import (
    SimParams,
    gap_scan,
    measurement_frame,
    measurement_record,
    run,
)
from dyson.chain.rigor_bounds import chi_table, w_table, zeta_alpha
from dyson.chain.schemas import ContourConfigurationModel, TriangleModel
from dyson.lib.filesystem_utils import (
    OutputDirectories,
    read_json,
    write_csv,
    write_json,
)
from dyson.lib.logging_utils import LOGGER, configure_logging, run_context
from dyson.lib.run_config import (
    ScanConfigFile,
    SimConfigFile,
    load_flat_config,
    resolve_seed,
)


EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _guarded(name: str, seed: Optional[int] = None) -> Callable:
    """
    Run a command inside a run context and map domain errors to exit code 2.
    """

    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> int:
            with run_context(command=name, seed=kwargs.get("seed", seed)):
                try:
                    return func(*args, **kwargs)
                except (ValueError, FileNotFoundError, ArithmeticError) as e:
                    LOGGER.error(f"❌ {name} failed: {e}")
                    return EXIT_USAGE

        return wrapper

    return decorator


def _output_dir(out: Optional[str]) -> OutputDirectories:
    directories = OutputDirectories()
    directories.set_path(out)
    return directories


# --------------------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------------------


@_guarded("bounds")
def bounds(
    alpha: float, limit: int = DEFAULT_SEARCH_LIMIT, out: Optional[str] = None
) -> int:
    """
    Certify W_alpha(L) >= zeta_alpha chi_alpha(L) for L <= limit.

    :param alpha: Coupling exponent in [0, alpha*).
    :param limit: Largest L checked.
    :param out: Output directory.
    :return: Exit code, 0 iff certified.
    """

    report = zeta_alpha(float(alpha), int(limit))
    lengths = np.arange(1, report.checked_up_to + 1)
    weights = w_table(report.checked_up_to, report.alpha)[1:]
    lower = report.zeta_alpha * chi_table(report.checked_up_to, report.alpha)[1:]
    table = pd.DataFrame(
        {"L": lengths, "W_alpha": weights, "zeta_chi": lower, "margin": weights - lower}
    )

    output = COMMANDS.get("bounds")
    directories = _output_dir(out)
    parameters = {"alpha": report.alpha, "limit": report.checked_up_to}
    write_json(
        directories.file(output.json_file),
        {"parameters": parameters, "reports": [report.to_dict()]},
    )
    write_csv(directories.file(output.csv_file), table)
    LOGGER.info(
        f"{output.emoji} {output.description}:\n"
        f"   alpha = {report.alpha}\n"
        f"   zeta_alpha = {report.zeta_alpha:.8g} (L1/L2 = {report.threshold_L})\n"
        f"   certified up to {report.checked_up_to}: {report.certified}"
    )
    return EXIT_OK if report.certified else EXIT_VIOLATION


def parse_spins(
    spins: Union[str, Sequence[Any]], boundary: str = "plus"
) -> SpinConfiguration:
    """
    Read a configuration from a JSON file, a JSON object or an inline list.

    Inline lists hold +1/-1 (or "+"/"-") values and use `boundary`.

    :param spins: File path, JSON text or sequence of spins.
    :param boundary: Boundary condition for inline lists.
    :return: The configuration.
    """

    if isinstance(spins, dict):
        return SpinConfiguration.from_dict(spins)
    if isinstance(spins, (list, tuple)):
        values = list(spins)
    else:
        text = str(spins).strip()
        if text.startswith("{"):
            return SpinConfiguration.from_dict(json.loads(text))
        if text.endswith(".json") or Path(text).is_file():
            return SpinConfiguration.from_dict(read_json(Path(text)))
        values = [v for v in text.strip("[]").replace(",", " ").split() if v]
    signs = {"+": 1, "-": -1, "+1": 1, "1": 1, "-1": -1}
    parsed = []
    for index, value in enumerate(values):
        key = str(value).strip()
        if key not in signs:
            raise ValueError(f"spin at index {index} is {value}, expected +1 or -1")
        parsed.append(signs[key])
    return SpinConfiguration.from_dict(
        {"N": (len(parsed) - 1) // 2, "boundary": boundary, "spins": parsed}
    )


@_guarded("contours")
def contours(
    spins: Union[str, Sequence[Any]],
    c: float = DEFAULT_GROUPING_C,
    boundary: str = "plus",
    out: Optional[str] = None,
) -> int:
    """
    Decompose a configuration into triangles and contours.

    :param spins: JSON file, JSON object or inline list of spins.
    :param c: Grouping constant.
    :param boundary: Boundary condition for inline lists.
    :param out: Output directory.
    :return: Exit code, 0 iff the contours are well separated.
    """

    sigma = parse_spins(spins, boundary)
    family = build_triangles(sigma)
    cfg = group_contours(family, float(c))
    separated, violations = check_separation(cfg)
    compatible = family.is_compatible()

    output = COMMANDS.get("contours")
    directories = _output_dir(out)
    write_json(
        directories.file(output.json_file),
        {
            "parameters": {"c": cfg.grouping_c, **sigma.to_dict()},
            "triangles": [
                TriangleModel.model_validate(t).model_dump() for t in family.to_list()
            ],
            "configuration": ContourConfigurationModel.model_validate(
                cfg.to_dict()
            ).model_dump(),
            "compatible": compatible,
            "separated": separated,
            "violations": [asdict(v) for v in violations],
        },
    )
    LOGGER.info(
        f"{output.emoji} {len(family)} triangles in {len(cfg)} contours "
        f"(separated: {separated}, compatible: {compatible})."
    )
    return EXIT_OK if separated and compatible else EXIT_VIOLATION


@_guarded("census")
def census(
    m: int,
    c: float = DEFAULT_CENSUS_C,
    b: float = 5.0,
    alpha: float = 0.0,
    n_jobs: int = 1,
    out: Optional[str] = None,
) -> int:
    """
    Entropy check for contours of mass m through the origin.

    :return: Exit code, 0 iff the bound holds.
    """

    check = entropy_check(int(m), float(c), float(b), float(alpha), int(n_jobs))
    output = COMMANDS.get("census")
    record = check.to_dict()
    record["parameters"] = {"m": check.m, "c": check.c, "b": check.b, "alpha": alpha}
    write_json(_output_dir(out).file(output.json_file), record)
    return EXIT_OK if check.passed else EXIT_VIOLATION


@_guarded("peierls")
def peierls(
    alpha: float,
    gamma: Optional[float] = None,
    hstar: float = 0.0,
    c: float = DEFAULT_GROUPING_C,
    kc_variant: str = KcVariant.CORRECTED.value,
    n_jobs: int = 1,
    out: Optional[str] = None,
) -> int:
    """
    Upper bound on beta_c, with or without a decaying field.

    :param gamma: Field decay exponent; when given it must satisfy the decay
        hypothesis, even without a field.
    :return: Exit code, 0 iff a finite bound exists.
    """

    bound = beta_c_bound(
        float(alpha),
        None if gamma is None else float(gamma),
        float(hstar),
        float(c),
        KcVariant(kc_variant),
        int(n_jobs),
    )
    output = COMMANDS.get("peierls")
    record = bound.to_dict()
    record["parameters"] = {
        "alpha": alpha,
        "gamma": bound.gamma,
        "h_star": hstar,
        "c": c,
        "kc_variant": bound.kc_variant.value,
    }
    write_json(_output_dir(out).file(output.json_file), record)
    LOGGER.info(
        f"{output.emoji} beta_c <= {bound.beta_c:.8g} ({bound.regime}, "
        f"alpha' = {bound.alpha_prime}, L = {bound.L_required})."
    )
    return EXIT_OK if np.isfinite(bound.beta_c) else EXIT_VIOLATION


def _sim_params(config: SimConfigFile, seed: int) -> SimParams:
    return SimParams(
        coupling=CouplingParams(config.alpha, config.j1),
        field=FieldProfile(config.h_star, config.gamma, config.cutoff_L),
        beta=config.beta,
        window_radius=config.window_radius,
        boundary=Boundary.parse(config.boundary),
        sweeps=config.sweeps,
        burn_in=config.burn_in,
        seed=seed,
        measure_every=config.measure_every,
    )


def _oracle_columns(params: SimParams, record: Dict[str, Any]) -> None:
    exact = exact_partition(
        params.coupling,
        params.field,
        params.window_radius,
        params.boundary,
        params.beta,
    )
    record["exact_prob_origin_minus"] = exact.prob_origin_minus
    # Standard error of (1 - s)/2 is half that of s.
    error = 0.5 * record["std_error"]
    difference = record["prob_origin_minus"] - exact.prob_origin_minus
    record["z_score"] = difference / error if error > 0 else np.nan


@_guarded("simulate")
def simulate(config: str, seed: Optional[int] = None, out: Optional[str] = None) -> int:
    """
    One Metropolis run described by a flat configuration file.

    :param config: Path of the `key = value` configuration file.
    :param seed: Master seed; falls back to DYSON_SEED, then the file.
    :param out: Output directory.
    :return: Exit code.
    """

    settings = SimConfigFile(**load_flat_config(Path(config)))
    params = _sim_params(settings, resolve_seed(seed, settings.seed))
    measurement = run(params)
    record = measurement_record(params, measurement)
    if params.size <= MAX_ORACLE_ANNOTATION_SITES:
        _oracle_columns(params, record)

    output = COMMANDS.get("simulate")
    write_csv(_output_dir(out).file(output.csv_file), measurement_frame([record]))
    LOGGER.info(
        f"{output.emoji} <sigma_0> = {measurement.mean_spin_origin:.5f} "
        f"± {measurement.std_error:.5f} over {measurement.samples} samples."
    )
    return EXIT_OK


@_guarded("scan")
def scan(
    config: str,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    n_jobs: Optional[int] = None,
) -> int:
    """
    Paired plus/minus runs over the grid of a scan configuration file.

    :param config: Path of the `key = value` configuration file.
    :param seed: Master seed; falls back to DYSON_SEED, then the file.
    :param out: Output directory.
    :param n_jobs: Workers; overrides the `n_jobs` key.
    :return: Exit code.
    """

    settings = ScanConfigFile(**load_flat_config(Path(config)))
    base = SimParams(
        coupling=CouplingParams(settings.alpha, settings.j1),
        field=FieldProfile(settings.h_star, settings.gamma[0], settings.cutoff_L),
        beta=settings.beta[0],
        window_radius=settings.window_radius[0],
        boundary=Boundary.PLUS,
        sweeps=settings.sweeps,
        burn_in=settings.burn_in,
        seed=resolve_seed(seed, settings.seed),
        measure_every=settings.measure_every,
    )
    frame = gap_scan(
        base,
        settings.beta,
        settings.gamma,
        settings.window_radius,
        n_jobs=int(n_jobs or settings.n_jobs),
    )
    output = COMMANDS.get("scan")
    write_csv(_output_dir(out).file(output.csv_file), frame)
    return EXIT_OK


# --------------------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------------------


def _exiting(func: Callable[..., int]) -> Callable[..., None]:
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> None:
        sys.exit(func(*args, **kwargs))

    return wrapper


COMMAND_FUNCTIONS: Dict[str, Callable[..., int]] = {
    "bounds": bounds,
    "contours": contours,
    "census": census,
    "peierls": peierls,
    "simulate": simulate,
    "scan": scan,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, run one command and return its exit code.

    :param argv: Arguments without the program name; defaults to sys.argv[1:].
    :return: Exit code.
    """

    argv = list(sys.argv[1:] if argv is None else argv)
    verbose = "--verbose" in argv
    argv = [arg for arg in argv if arg != "--verbose"]
    configure_logging(logging.DEBUG if verbose else logging.INFO)

    commands = {name: _exiting(func) for name, func in COMMAND_FUNCTIONS.items()}
    try:
        fire.Fire(commands, command=argv, name="dyson")
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
