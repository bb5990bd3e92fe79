"""Progress lines for long computations, written to stderr so stdout stays parseable."""

import sys

from hypermaps.config.settings import SETTINGS


def log(message: str) -> None:
    if SETTINGS.quiet:
        return
    print(message, file=sys.stderr, flush=True)
