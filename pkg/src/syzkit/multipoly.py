"""Sparse multivariate polynomials in q_1, ..., q_n with exact integer coefficients."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

Exponents = tuple[int, ...]


def _order_key(exps: Exponents):
    # graded lexicographic: total degree first, then q_1 > q_2 > ...
    return (sum(exps), tuple(-e for e in exps))


class MultiPoly:
    """Immutable sparse polynomial ``sum c_e q^e`` over the integers.

    Terms are kept in a dict from exponent tuples to Python ints, so
    coefficients never overflow.  Zero coefficients are never stored.
    Exponents are normally non-negative; negative exponents (Laurent
    monomials) are accepted so that deliberately broken enumerations can still
    be represented and compared, see :attr:`is_polynomial`.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, int] | Iterable[tuple[Exponents, int]] = (),
                 nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponents, int] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if nvars is None:
                nvars = len(exps)
            elif len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} does not have {nvars} entries")
            if int(c) != c:
                raise TypeError(f"coefficient {c!r} is not an integer")
            acc[exps] = acc.get(exps, 0) + int(c)
        self.nvars = 0 if nvars is None else nvars
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls({}, nvars)

    @classmethod
    def constant(cls, c: int, nvars: int) -> MultiPoly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def one(cls, nvars: int) -> MultiPoly:
        return cls.constant(1, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> MultiPoly:
        return cls({tuple(exps): coeff}, len(exps))

    @classmethod
    def var(cls, k: int, nvars: int) -> MultiPoly:
        """The variable q_k (1-based)."""
        if not 1 <= k <= nvars:
            raise IndexError(f"q_{k} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[k - 1] = 1
        return cls.monomial(exps)

    # access

    def terms(self) -> list[tuple[Exponents, int]]:
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]))

    def __iter__(self) -> Iterator[tuple[Exponents, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_polynomial(self) -> bool:
        return all(e >= 0 for exps in self._terms for e in exps)

    def has_nonnegative_coefficients(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def coefficient_sum(self) -> int:
        """Value at q_1 = ... = q_n = 1."""
        return sum(self._terms.values())

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    # arithmetic

    def _check(self, other: MultiPoly):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return MultiPoly(acc, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly(acc, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = MultiPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # evaluation

    def evaluate(self, q: Sequence[complex]) -> complex:
        if len(q) != self.nvars:
            raise ValueError(f"need {self.nvars} values, got {len(q)}")
        total = 0
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(q, exps):
                if e:
                    term = term * x**e
            total = total + term
        return total

    # formatting

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.terms():
            factors = []
            for k, e in enumerate(exps, start=1):
                if e == 1:
                    factors.append(f"q{k}")
                elif e:
                    factors.append(f"q{k}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r}, nvars={self.nvars})"

    def to_json(self) -> list[dict]:
        return [{"exps": list(e), "c": str(c)} for e, c in self.terms()]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], nvars: int) -> MultiPoly:
        return cls({tuple(t["exps"]): int(t["c"]) for t in data}, nvars)


def first_difference(a: MultiPoly, b: MultiPoly) -> tuple[Exponents, int, int] | None:
    """First exponent (canonical order) where the coefficients of ``a`` and ``b`` differ."""
    a._check(b)
    keys = sorted(set(a._terms) | set(b._terms), key=_order_key)
    for e in keys:
        ca, cb = a.coefficient(e), b.coefficient(e)
        if ca != cb:
            return e, ca, cb
    return None
