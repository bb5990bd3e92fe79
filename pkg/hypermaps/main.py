"""
Chirality toolkit for finite simple groups

Symmetric generating pairs, orientably regular hypermaps and their chirality,
computed on concrete permutation and matrix models.

CLI commands:
 - group: Build a group and summarize order, classes and Aut
 - delta: Proportion of generating pairs that are symmetric
 - census: Orientably regular hypermaps, reflexible or chiral
 - strongly-symmetric: Decide whether every generating pair is symmetric
 - lemma: Exhaustive semilinear scan around a Singer cycle
 - verify: Recompute the claim ledger

Reports go to stdout (or --out); progress lines go to stderr.
Exit codes: 0 success, 1 failed claim or defect, 2 usage error, 3 cap exceeded.
"""

import sys

from hypermaps.utils.cli import parse_args
from hypermaps.utils.command_handlers import get_command_handlers
from hypermaps.utils.console import log


def main(argv=None):
    """Main CLI entry point for the chirality toolkit."""
    try:
        args = parse_args(argv)

        handlers = get_command_handlers()

        if args.command in handlers:
            handlers[args.command](args)
        else:
            log("❌ No command specified. Use --help to see available commands.")
            sys.exit(2)

    except KeyboardInterrupt:
        log("\n🛑 Operation interrupted by user")
        sys.exit(0)
    except Exception as e:
        log(f"❌ Command failed: {e}")
        sys.exit(getattr(e, 'exit_code', 1))


if __name__ == "__main__":
    main()
