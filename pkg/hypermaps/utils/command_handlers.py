"""
Command handlers for the chirality CLI.

This module contains all command handling logic separated from the main application
entry point for better code organization and maintainability.

Design Pattern: Command Pattern - Each handler is a separate function that encapsulates
the logic for handling a specific CLI command.
"""

from dataclasses import dataclass, replace
from math import factorial
from typing import Any, Optional

from hypermaps.app.errors import CapExceededError, ClaimFailure, UsageError
from hypermaps.config.settings import SETTINGS, Settings
from hypermaps.utils.console import log
from hypermaps.utils.export import emit, render

LONG_RUN_CAP = 1_000_000

# Which Settings field --cap overrides for each command.
_CAP_FIELDS = {
    'group': 'enum_cap',
    'delta': 'delta_cap',
    'census': 'census_cap',
    'strongly-symmetric': 'delta_cap',
    'lemma': 'lemma_cap',
    'verify': 'enum_cap',
}


@dataclass
class RunConfig:
    command: str
    settings: Settings
    family: Optional[str] = None
    n: Optional[int] = None
    q: Optional[int] = None
    threads: int = 1
    seed: int = SETTINGS.seed
    output_format: str = 'json'
    out_path: Optional[str] = None
    sample: Optional[int] = None
    long: bool = False


def build_run_config(args: Any) -> RunConfig:
    """Combine parsed flags with the environment-derived SETTINGS."""
    overrides = {}
    cap = getattr(args, 'cap', None)
    if cap is not None:
        overrides[_CAP_FIELDS[args.command]] = cap
    long_run = bool(getattr(args, 'long', False))
    if long_run:
        overrides['enum_cap'] = max(overrides.get('enum_cap', SETTINGS.enum_cap), LONG_RUN_CAP)
    seed = getattr(args, 'seed', None)
    return RunConfig(
        command=args.command,
        settings=replace(SETTINGS, **overrides),
        family=getattr(args, 'family', None),
        n=getattr(args, 'n', None),
        q=getattr(args, 'q', None),
        threads=getattr(args, 'threads', 1),
        seed=SETTINGS.seed if seed is None else seed,
        output_format=getattr(args, 'format', 'json'),
        out_path=getattr(args, 'out', None),
        sample=getattr(args, 'sample', None),
        long=long_run,
    )


def _expected_order(config: RunConfig) -> int:
    from hypermaps.app.services.matgrp import classical_order

    if config.family == 'ALT':
        if config.n is None:
            raise UsageError('ALT needs --n')
        return factorial(config.n) // 2
    if config.q is None:
        raise UsageError(f'{config.family} needs --q')
    n = 3 if config.family == 'PSU' and config.n is None else config.n
    if n is None:
        raise UsageError(f'{config.family} needs --n')
    return classical_order(config.family, n, config.q)


def _load_model(config: RunConfig, cap: int):
    """Family model and its constructed Aut, after a cap pre-check."""
    from hypermaps.app.families import build_model
    from hypermaps.app.services.autgrp import aut_constructed

    order = _expected_order(config)
    if order > cap:
        raise CapExceededError(f'{config.family} group', order, cap)
    model = build_model(config.family, config.n, config.q, config.settings.enum_cap)
    A = aut_constructed(model, validate=False, cap=config.settings.enum_cap)
    return model, A


def handle_group(args: Any) -> None:
    """
    Handle the 'group' command: build a group and print its summary.

    Args:
        args: Parsed command line arguments containing family, n and q
    """
    config = build_run_config(args)
    log(f"🔧 Building {config.family} group (n={config.n}, q={config.q})...")
    modelled = config.family == 'ALT' or config.family == 'PSU' or (config.family == 'PSL' and config.n in (2, 3))
    if modelled:
        model, A = _load_model(config, config.settings.enum_cap)
        aut = A.summary()
        summary = model.S.summary().model_copy(update={
            'aut_order': aut.order, 'inner': aut.inner, 'outer': aut.outer,
        })
    else:
        from hypermaps.app.services.gf import field_of_order
        from hypermaps.app.services.matgrp import build_matrix_group

        if config.n is None or config.q is None:
            raise UsageError(f'{config.family} needs --n and --q')
        G = build_matrix_group(config.family, config.n, field_of_order(config.q), cap=config.settings.enum_cap)
        summary = G.summary()
    emit(summary, config.output_format, config.out_path)
    log(f"✅ {summary.name}: order {summary.order}")


def handle_delta(args: Any) -> None:
    """
    Handle the 'delta' command: exact or sampled proportion of symmetric pairs.

    Args:
        args: Parsed command line arguments containing family, n, q, sample and seed
    """
    from hypermaps.app.services.chirality import delta_statistic

    config = build_run_config(args)
    model, A = _load_model(config, config.settings.enum_cap)
    report = delta_statistic(
        model.S, A,
        cap=config.settings.delta_cap,
        sample=config.sample,
        seed=config.seed,
        threads=config.threads,
    )
    emit(report, config.output_format, config.out_path)


def handle_census(args: Any) -> None:
    """
    Handle the 'census' command: classify the orientably regular hypermaps of a group.

    Args:
        args: Parsed command line arguments containing family, n, q and output options
    """
    from hypermaps.app.services.chirality import hypermap_census

    config = build_run_config(args)
    model, A = _load_model(config, config.settings.census_cap)
    report = hypermap_census(model.S, A, threads=config.threads, cap=config.settings.census_cap)
    emit(report, config.output_format, config.out_path)


def handle_strongly_symmetric(args: Any) -> None:
    """
    Handle the 'strongly-symmetric' command.

    Args:
        args: Parsed command line arguments containing family, n, q and strategy
    """
    from hypermaps.app.services.chirality import is_strongly_symmetric

    config = build_run_config(args)
    model, A = _load_model(config, config.settings.enum_cap)
    verdict = is_strongly_symmetric(
        model.S, A,
        strategy=getattr(args, 'strategy', 'exhaustive'),
        singer_order=model.singer_order,
        cap=config.settings.delta_cap,
    )
    emit(verdict, config.output_format, config.out_path)


def handle_lemma(args: Any) -> None:
    """
    Handle the 'lemma' command: scan GammaL(n, q) around a Singer cycle.

    Args:
        args: Parsed command line arguments containing n and q
    """
    from hypermaps.app.services.gf import field_of_order
    from hypermaps.app.services.matgrp import verify_singer_lemma

    config = build_run_config(args)
    report = verify_singer_lemma(
        config.n, field_of_order(config.q),
        threads=config.threads,
        cap=config.settings.lemma_cap,
    )
    emit(report, config.output_format, config.out_path)
    if report.counterexamples:
        log(f"⚠️ {len(report.counterexamples)} counterexample(s) to the Singer lemma")


def handle_verify(args: Any) -> None:
    """
    Handle the 'verify' command: recompute the claim ledger.

    Args:
        args: Parsed command line arguments containing all/claim/long flags

    Raises:
        ClaimFailure: At least one claim failed
    """
    from hypermaps.app.services.verify import run_ledger

    config = build_run_config(args)
    prefix = None if getattr(args, 'all', False) else args.claim
    include_long = config.long or bool(prefix and prefix.startswith('psu3.q5'))
    log("📋 Running the claim ledger" + (f" (prefix {prefix})" if prefix else "") + "...")
    results = run_ledger(
        include_long=include_long,
        threads=config.threads,
        cap=max(config.settings.enum_cap, LONG_RUN_CAP) if include_long else config.settings.enum_cap,
        prefix=prefix,
    )
    if not results:
        raise UsageError(f"no claim id starts with {prefix!r}")
    emit(results, config.output_format, config.out_path)
    if config.output_format == 'json':
        log(render(results, 'table'))
    failed = [c.claim_id for c in results if not c.passed]
    if failed:
        raise ClaimFailure(failed)


def get_command_handlers() -> dict:
    """
    Get a dictionary mapping command names to their handler functions.

    Returns:
        Dictionary mapping command names to handler functions
    """
    return {
        'group': handle_group,
        'delta': handle_delta,
        'census': handle_census,
        'strongly-symmetric': handle_strongly_symmetric,
        'lemma': handle_lemma,
        'verify': handle_verify,
    }
