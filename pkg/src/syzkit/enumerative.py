"""Open Gromov-Witten invariants of toric Calabi-Yau surfaces.

For X = X_{Sigma_m}, the one-pointed disk invariant of the class
beta_l + sum_k s_k [D_k] is 1 exactly when (s_1, ..., s_{m-1}) is *admissible
with center l*, and 0 otherwise:

1. s_k >= 0 for all k;
2. s_i <= s_{i+1} <= s_i + 1 for i < l;
3. s_i >= s_{i+1} >= s_i - 1 for i >= l;
4. s_1 <= 1 and s_{m-1} <= 1.

Conditions (2) and (3) run over the consecutive pairs i = 1..m-2.  Center m
(needed only for counting, since delta_m = 0) is read with the boundary value
s_m = 0 appended, so that condition (2) climbs down to it; equivalently the
only admissible sequence with center m is zero.  For centers 1..m-1 this
boundary reading coincides with the four conditions above.

The enumeration box 0 <= s_k <= min(k, m-k) follows from the conditions:
left of the center s climbs by at most one per step from s_1 <= 1, and right
of the center it can only stay level or fall by one, so s_k <= k; reading
the sequence backwards from s_{m-1} <= 1 gives s_k <= m - k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Collection, Sequence

from .errors import CenterOutOfRange, LengthMismatch, SyzkitError
from .multipoly import MultiPoly

ALL_CONDITIONS = frozenset({1, 2, 3, 4})


def _validate(s: Sequence[int], l: int, m: int, *, max_center: int | None = None) -> None:
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if len(s) != m - 1:
        raise LengthMismatch(f"sequence of length {len(s)} for m={m} (need {m - 1})")
    top = m if max_center is None else max_center
    if not 1 <= l <= top:
        raise CenterOutOfRange(f"center l={l} outside 1..{top}")


def check_conditions(s: Sequence[int], l: int, m: int,
                     conditions: Collection[int] = ALL_CONDITIONS) -> bool:
    """Evaluate the selected admissibility conditions without argument checks."""
    n = m - 1
    if 1 in conditions:
        for x in s:
            if x < 0:
                return False
    if 2 in conditions:
        for i in range(1, l):
            a = s[i - 1]
            b = s[i] if i < n else 0
            if b < a or b > a + 1:
                return False
    if 3 in conditions:
        for i in range(l, n):
            a, b = s[i - 1], s[i]
            if b > a or b < a - 1:
                return False
    if 4 in conditions and n:
        if s[0] > 1 or s[-1] > 1:
            return False
    return True


def is_admissible(s: Sequence[int], l: int, m: int) -> bool:
    """True iff ``s`` is admissible with center ``l`` (1 <= l <= m)."""
    _validate(s, l, m)
    return check_conditions(s, l, m)


def open_gw(m: int, l: int, alpha: Sequence[int]) -> int:
    """The open invariant n_{beta_l + alpha} for alpha = sum_k alpha_k [D_k]."""
    _validate(alpha, l, m, max_center=m - 1)
    return 1 if check_conditions(alpha, l, m) else 0


@dataclass(frozen=True, order=True)
class AdmissibleSequence:
    """An admissible sequence; encodes alpha = sum_k s_k [D_k] with n_{beta_l + alpha} = 1."""

    s: tuple[int, ...]
    l: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if not is_admissible(self.s, self.l, self.m):
            raise ValueError(f"{self.s} is not admissible with center {self.l} (m={self.m})")

    def monomial(self) -> MultiPoly:
        """q^alpha = prod_k q_k^{s_k}."""
        return MultiPoly.monomial(self.s)

    def is_zero(self) -> bool:
        return not any(self.s)


def enumeration_bound(k: int, m: int) -> int:
    return min(k, m - k)


def _search(m: int, l: int, lower: int, upper: Callable[[int], int],
            conditions: Collection[int]) -> list[tuple[int, ...]]:
    """All sequences in the box lower <= s_k <= upper(k) passing ``conditions``.

    Prefixes are pruned with the pairwise conditions as they are built; every
    survivor is re-checked with :func:`check_conditions`.
    """
    n = m - 1
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []
    use1, use2, use3, use4 = (c in conditions for c in (1, 2, 3, 4))

    def extend(k: int) -> None:
        if k > n:
            s = tuple(prefix)
            if check_conditions(s, l, m, conditions):
                out.append(s)
            return
        for x in range(lower, upper(k) + 1):
            if use1 and x < 0:
                continue
            if use4 and (k == 1 or k == n) and x > 1:
                continue
            if k > 1:
                a = prefix[-1]
                i = k - 1
                if i < l and use2 and not a <= x <= a + 1:
                    continue
                if i >= l and use3 and not a - 1 <= x <= a:
                    continue
            prefix.append(x)
            extend(k + 1)
            prefix.pop()

    extend(1)
    return out


def enumerate_admissible(m: int, l: int) -> list[AdmissibleSequence]:
    """Every sequence admissible with center ``l``, in lexicographic order.

    There are exactly binomial(m, l) of them.
    """
    _validate((0,) * (m - 1), l, m)
    found = _search(m, l, 0, lambda k: enumeration_bound(k, m), ALL_CONDITIONS)
    return [AdmissibleSequence(s, l, m) for s in sorted(found)]


def sequences_for_conditions(m: int, l: int, conditions: Collection[int]) -> list[tuple[int, ...]]:
    """Sequences passing only the chosen conditions, searched over a widened box.

    The box -1 <= s_k <= min(k, m-k) + 1 is large enough that dropping any one
    condition lets in a sequence the full criterion rejects.  Used for mutation
    testing.
    """
    _validate((0,) * (m - 1), l, m)
    return sorted(_search(m, l, -1, lambda k: enumeration_bound(k, m) + 1, conditions))


def delta_series(m: int, i: int) -> MultiPoly:
    """Correction term delta_i = sum over nonzero admissible alpha (center i) of q^alpha."""
    _validate((0,) * (m - 1), i, m)
    if i == m:
        return MultiPoly.zero(m - 1)
    total = MultiPoly.zero(m - 1)
    for seq in enumerate_admissible(m, i):
        if not seq.is_zero():
            total = total + seq.monomial()
    return total


class DecompositionFailed(SyzkitError):
    """The greedy interval decomposition did not produce a valid k-tuple."""

    def __init__(self, step: int, residual: tuple[int, ...], reason: str):
        self.step = step
        self.residual = residual
        self.reason = reason
        super().__init__(f"step j={step}: {reason}; residual {residual}")


@dataclass(frozen=True)
class IntervalDecomposition:
    """k_1 < ... < k_p with alpha = sum_j (D_j + ... + D_{k_j}); k_j = j-1 is empty."""

    k: tuple[int, ...]
    m: int

    def intervals(self) -> list[tuple[int, int]]:
        return [(j, kj) for j, kj in enumerate(self.k, start=1) if kj >= j]

    def reconstruct(self) -> tuple[int, ...]:
        s = [0] * (self.m - 1)
        for j, kj in self.intervals():
            for idx in range(j, kj + 1):
                s[idx - 1] += 1
        return tuple(s)


def _greedy(s: Sequence[int], l: int):
    """Run the greedy strip; returns (k_tuple, None) or (None, (step, residual, reason))."""
    r = list(s)
    for x in r:
        if x < 0:
            return None, (l, tuple(r), "negative coefficient")
    ks = [0] * l
    top = len(r)
    for j in range(l, 0, -1):
        while top and r[top - 1] == 0:
            top -= 1
        if top == 0:
            ks[j - 1] = j - 1
            continue
        if top < j:
            return None, (j, tuple(r), f"largest nonzero index {top} < {j}")
        for idx in range(j - 1, top):
            r[idx] -= 1
            if r[idx] < 0:
                return None, (j, tuple(r), f"negative residual at D_{idx + 1}")
        ks[j - 1] = top
    if any(r):
        return None, (1, tuple(r), f"nonzero residual after {l} strips")
    for a, b in zip(ks, ks[1:]):
        if a >= b:
            return None, (1, tuple(r), f"k-tuple {tuple(ks)} not strictly increasing")
    return tuple(ks), None


def greedy_succeeds(s: Sequence[int], l: int) -> bool:
    """Fast yes/no form of :func:`decompose_intervals` without argument checks."""
    return _greedy(s, l)[0] is not None


def decompose_intervals(s: Sequence[int], l: int, m: int) -> IntervalDecomposition:
    """Greedy decomposition of alpha into ``l`` nested intervals.

    Starting from j = l and working down to j = 1, strip D_j + ... + D_K where
    K is the largest index with a nonzero residual coefficient (an empty
    interval, k_j = j - 1, once the residual is zero).

    Raises
    ------
    DecompositionFailed
        If a strip would leave a negative residual, the largest nonzero index
        lies left of j, something is left over after l strips, or the k_j are
        not strictly increasing.
    """
    _validate(s, l, m)
    ks, failure = _greedy(s, l)
    if ks is None:
        raise DecompositionFailed(*failure)
    return IntervalDecomposition(ks, m)
