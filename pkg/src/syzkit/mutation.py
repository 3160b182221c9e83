"""Deliberately weakened admissibility criteria, for checking that the identity test can fail.

A mutant drops one of the four conditions.  Its correction series is summed
over every sequence in a widened box that passes the remaining conditions, and
is then fed to :func:`syzkit.mirror.find_mismatch` in place of the real one.
"""

from __future__ import annotations

import re

from .enumerative import ALL_CONDITIONS, _validate, sequences_for_conditions
from .errors import IdentityMismatch
from .mirror import DeltaFn, find_mismatch
from .multipoly import MultiPoly

_NAME = re.compile(r"drop-cond-([1-4])")


def parse_mutation(name: str) -> int:
    """'drop-cond-N' -> N."""
    match = _NAME.fullmatch(name.strip())
    if not match:
        raise ValueError(f"unknown mutation {name!r}; expected drop-cond-1 .. drop-cond-4")
    return int(match.group(1))


def mutated_delta(dropped: int) -> DeltaFn:
    """A delta_i built from the criterion with condition ``dropped`` removed."""
    if dropped not in ALL_CONDITIONS:
        raise ValueError(f"condition {dropped} is not one of 1..4")
    keep = ALL_CONDITIONS - {dropped}

    def delta(m: int, i: int) -> MultiPoly:
        _validate((0,) * (m - 1), i, m)
        total = MultiPoly.zero(m - 1)
        if i == m:
            return total
        for s in sequences_for_conditions(m, i, keep):
            if any(s):
                total = total + MultiPoly.monomial(s)
        return total

    return delta


def first_break(dropped: int, m_max: int = 4) -> IdentityMismatch | None:
    """The first mismatch the mutant produces for m = 1..m_max, or None if it survives."""
    delta = mutated_delta(dropped)
    for m in range(1, m_max + 1):
        mismatch = find_mismatch(m, delta=delta)
        if mismatch is not None:
            return mismatch
    return None
