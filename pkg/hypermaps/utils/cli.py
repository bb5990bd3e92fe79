"""
Command line argument parser for the chirality toolkit.
Provides CLI commands for group summaries, delta statistics, hypermap census,
strong-symmetry decisions, the Singer lemma scan and the claim ledger.
"""

import argparse
import sys
from typing import Optional

FAMILY_CHOICES = ["ALT", "PSL", "PSU", "GL", "SL", "PGL", "PGU", "SP2"]


def _add_group_args(parser: argparse.ArgumentParser, families: Optional[list] = None) -> None:
    parser.add_argument(
        '--family',
        type=str.upper,
        required=True,
        choices=families or FAMILY_CHOICES,
        help='Group family'
    )
    parser.add_argument('--n', type=int, default=None, help='Degree (ALT) or dimension (matrix families)')
    parser.add_argument('--q', type=int, default=None, help='Field order (prime power)')


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--format',
        choices=['json', 'csv', 'table'],
        default='json',
        help='Output format (default: json)'
    )
    parser.add_argument('--out', type=str, default=None, help='Write output to this file instead of stdout')
    parser.add_argument('--threads', type=int, default=1, help='Worker threads (default: 1)')
    parser.add_argument('--cap', type=int, default=None, help="Override the command's size cap")


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser with subcommands."""
    parser = argparse.ArgumentParser(
        prog="hypermaps",
        description="Symmetric generating pairs, chirality and hypermap census for finite simple groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m hypermaps.main group --family PSL --n 2 --q 7
  python -m hypermaps.main delta --family ALT --n 5
  python -m hypermaps.main census --family ALT --n 7 --format csv --out alt7.csv
  python -m hypermaps.main strongly-symmetric --family PSL --n 3 --q 4 --strategy witness-first
  python -m hypermaps.main lemma --n 3 --q 3
  python -m hypermaps.main verify --all
        """)

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Group summary command
    group_parser = subparsers.add_parser('group', help='Build a group and summarize order, classes and Aut')
    _add_group_args(group_parser)
    _add_output_args(group_parser)

    # Delta statistic command
    delta_parser = subparsers.add_parser('delta', help='Proportion of symmetric generating pairs')
    _add_group_args(delta_parser, ['ALT', 'PSL', 'PSU'])
    _add_output_args(delta_parser)
    delta_parser.add_argument(
        '--sample',
        type=int,
        default=None,
        help='Estimate from this many random pairs instead of counting exactly'
    )
    delta_parser.add_argument('--seed', type=int, default=None, help='Sampling seed')

    # Census command
    census_parser = subparsers.add_parser('census', help='Orientably regular hypermaps and their chirality')
    _add_group_args(census_parser, ['ALT', 'PSL', 'PSU'])
    _add_output_args(census_parser)

    # Strong symmetry command
    strong_parser = subparsers.add_parser(
        'strongly-symmetric',
        help='Decide whether every generating pair is symmetric'
    )
    _add_group_args(strong_parser, ['ALT', 'PSL', 'PSU'])
    _add_output_args(strong_parser)
    strong_parser.add_argument(
        '--strategy',
        choices=['exhaustive', 'witness-first'],
        default='exhaustive',
        help='Search strategy (default: exhaustive)'
    )

    # Singer lemma command
    lemma_parser = subparsers.add_parser('lemma', help='Exhaustive semilinear scan around a Singer cycle')
    lemma_parser.add_argument('--n', type=int, required=True, help='Dimension (>= 3)')
    lemma_parser.add_argument('--q', type=int, required=True, help='Field order')
    _add_output_args(lemma_parser)

    # Verify command
    verify_parser = subparsers.add_parser('verify', help='Recompute the claim ledger')
    scope = verify_parser.add_mutually_exclusive_group(required=True)
    scope.add_argument('--all', action='store_true', help='Run every claim')
    scope.add_argument('--claim', type=str, default=None, help='Run claims whose id starts with this prefix')
    verify_parser.add_argument(
        '--long',
        action='store_true',
        help='Include PSU(3,5) (raises the enumeration cap to at least 1000000)'
    )
    _add_output_args(verify_parser)

    return parser


def parse_args(args: Optional[list] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = create_parser()
    if args is None:
        args = sys.argv[1:]

    parsed = parser.parse_args(args)

    if getattr(parsed, 'threads', 1) < 1:
        parser.error('--threads must be at least 1')
    if getattr(parsed, 'cap', None) is not None and parsed.cap < 1:
        parser.error('--cap must be positive')
    if getattr(parsed, 'sample', None) is not None and parsed.sample < 1:
        parser.error('--sample must be positive')

    return parsed
