"""
Configuration Settings Management

This module handles centralized configuration for the group computations.
Only the enumeration caps are read from the environment (prefix ``CHIRALITY_``);
everything else a run needs (threads, seed, output format) comes from CLI flags.

Features:
- Type-safe settings with dataclass representation
- Automatic environment variable loading with dotenv support
- Helper functions for parsing ints and bools

Usage:
    from hypermaps.config.settings import SETTINGS

    if order > SETTINGS.enum_cap:
        ...

Environment Variables (all optional):
    CHIRALITY_CAP: largest group that may be enumerated (default 250000)
    CHIRALITY_DELTA_CAP: largest group for an exact delta statistic (default 7000)
    CHIRALITY_CENSUS_CAP: largest group for a hypermap census (default 7000)
    CHIRALITY_ORACLE_CAP: largest group for the brute-force automorphism oracle (default 5000)
    CHIRALITY_TABLE_CAP: largest group with a memoized multiplication table (default 8192)
    CHIRALITY_MAP_CAP: largest |Aut|*|S| stored as materialized index maps (default 20000000)
    CHIRALITY_LEMMA_CAP: largest semilinear group streamed by the Singer lemma scan (default 4000000)
    CHIRALITY_QUIET: silence progress lines on stderr (default false)
"""

from dataclasses import dataclass
import os
from dotenv import load_dotenv
load_dotenv()


def _get_bool(name: str, default: bool = False) -> bool:
    val = os.getenv(name)
    if val is None:
        return default
    return val.strip().lower() in {"1", "true", "yes", "y"}


def _get_int(name: str, default: int) -> int:
    val = os.getenv(name)
    if val is None or not val.strip():
        return default
    return int(val.strip().replace("_", ""))


@dataclass(frozen=True)
class Settings:
    # Enumeration caps
    enum_cap: int = _get_int("CHIRALITY_CAP", 250_000)  # Largest enumerated group (elements)
    delta_cap: int = _get_int("CHIRALITY_DELTA_CAP", 7_000)  # Exact delta statistic up to this order
    census_cap: int = _get_int("CHIRALITY_CENSUS_CAP", 7_000)  # Hypermap census up to this order
    oracle_cap: int = _get_int("CHIRALITY_ORACLE_CAP", 5_000)  # Brute-force Aut and exhaustive checks
    table_cap: int = _get_int("CHIRALITY_TABLE_CAP", 8_192)  # Dense multiplication table up to this order
    aut_map_cap: int = _get_int("CHIRALITY_MAP_CAP", 20_000_000)  # |Aut|*|S| entries kept in memory
    lemma_cap: int = _get_int("CHIRALITY_LEMMA_CAP", 4_000_000)  # Streamed, never stored

    # Run defaults (overridden by CLI flags, never by the environment)
    threads: int = 1
    seed: int = 20170401  # Deterministic random searches and delta sampling
    quiet: bool = _get_bool("CHIRALITY_QUIET", False)


SETTINGS = Settings()
