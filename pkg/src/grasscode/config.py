"""Runtime size caps.

The caps live in a mutable module-level object so tests and the CLI can
raise or lower them; library functions read them at call time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass
class Caps:
    field: int = 2**16  # largest base field order q
    table: int = 2**20  # largest q^n with log/antilog tables
    enumeration: int = 10**7  # largest Grassmannian streamed in one call


def _from_env() -> Caps:
    caps = Caps()
    env = os.environ.get("GRASSCODE_CAP")
    if env:
        caps.enumeration = int(env)
    return caps


CAPS = _from_env()
