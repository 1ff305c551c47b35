"""Enumeration guards shared by every exhaustive routine.

Defaults can be overridden per process with environment variables named
``DPPHARD_GUARD_<FIELD>`` (for example ``DPPHARD_GUARD_GAME_LABELINGS=1000``).
"""

from __future__ import annotations

import dataclasses
import os


class GuardExceeded(RuntimeError):
    """An exhaustive computation was asked to run past its configured size."""


@dataclasses.dataclass(frozen=True)
class Guards:
    # labelings enumerated by the exact game-value search
    game_labelings: int = 10**7
    # matrix order for unconstrained exact DetMax
    detmax_order: int = 25
    # number of subsets for size-constrained exact DetMax
    detmax_k_subsets: int = 10**6
    # matrix order for E-DPP normalizers and tables
    edpp_order: int = 20
    # truth assignments enumerated by exact Max-3SAT
    sat_assignments: int = 2**22
    # block-family parameter m
    block_m: int = 12
    # sigma * |E| table entries allowed in a product game
    product_entries: int = 10**7

    @classmethod
    def from_env(cls, environ=None) -> "Guards":
        environ = os.environ if environ is None else environ
        values = {}
        for field in dataclasses.fields(cls):
            raw = environ.get(f"DPPHARD_GUARD_{field.name.upper()}")
            if raw is not None:
                values[field.name] = int(raw)
        return cls(**values)


def guards() -> Guards:
    """Current guard settings, re-read from the environment on every call."""
    return Guards.from_env()


def check_guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise GuardExceeded(f"instance too large for exact {what}: {size} > guard {limit}")
