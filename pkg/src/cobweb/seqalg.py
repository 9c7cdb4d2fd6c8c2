"""Sequence algebra: shift, pointwise product, and periodic factorization.

The factorization machinery rewrites a positive sequence F as a pointwise
product of period-j components: h(1) enters through a constant component and
each h(j) with j >= 2 through a component equal to h(j) at multiples of j and
1 elsewhere.  The factor h(n) is term(n) divided by the lcm of the terms at
the proper divisors of n; when that division fails the sequence has no such
factorization and the failing index is returned as a witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from . import fseq
from .errors import DescriptorError, ZeroTermError
from .fseq import FSeq

__all__ = [
    "shift",
    "point_product",
    "build",
    "unit",
    "HSequence",
    "DivisibilityWitness",
    "h_natural",
    "h_general",
    "reconstruct",
]


def shift(seq: FSeq, s: int) -> FSeq:
    """Prepend s ones; term(n) = 1 for n <= s and term(n - s) of seq past that."""
    return fseq.shifted(seq, s)


def point_product(left: FSeq, right: FSeq) -> FSeq:
    """Pointwise product sequence.

    Generalized binomials factor termwise, so the product of two admissible
    prefixes stays admissible.
    """
    return fseq.product(left, right)


_BUILDERS = {
    "natural": fseq.natural,
    "fibonacci": fseq.fibonacci,
    "constant": fseq.constant,
    "nondiminishing": fseq.nondiminishing,
    "periodic": fseq.periodic,
    "geometric": fseq.geometric,
    "rec2": fseq.rec2,
    "explicit": fseq.explicit,
}


def build(kind: str, **params) -> FSeq:
    """Construct a primitive family by name, validating parameters."""
    maker = _BUILDERS.get(kind)
    if maker is None:
        raise DescriptorError(f"unknown builder kind {kind!r}")
    return maker(**params)


def unit() -> FSeq:
    """The all-ones sequence, identity of the pointwise product."""
    return fseq.constant(1)


@dataclass(frozen=True)
class HSequence:
    """Periodic-component factors h(1..N) of a base sequence."""

    base: FSeq
    terms: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "base": fseq.to_descriptor(self.base),
            "h": [str(t) for t in self.terms],
        }


@dataclass(frozen=True)
class DivisibilityWitness:
    """Index where term(n) is not divisible by the lcm of its divisor terms."""

    n: int
    term: int
    lcm: int


def h_natural(n: int) -> int:
    """Component factor of the natural sequence: p when n is a prime power p**m, else 1."""
    if n < 1:
        raise ValueError(f"index must be positive, got {n}")
    if n == 1:
        return 1
    primes = set()
    rest = n
    d = 2
    while d * d <= rest:
        while rest % d == 0:
            primes.add(d)
            rest //= d
        d += 1
    if rest > 1:
        primes.add(rest)
    return primes.pop() if len(primes) == 1 else 1


def h_general(seq: FSeq, N: int) -> Union[HSequence, DivisibilityWitness]:
    """Factors h(n) = term(n) / lcm{term(d) : d | n, d < n} for n = 1..N.

    Returns the factor sequence, or the first divisibility failure as a
    witness, in which case no periodic factorization of this shape exists.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    terms = []
    for n in range(1, N + 1):
        t = seq.term(n)
        if t < 1:
            raise ZeroTermError(f"term {n} of {seq.label()} is not positive")
        divisor_lcm = 1
        for d in range(1, n):
            if n % d == 0:
                divisor_lcm = math.lcm(divisor_lcm, seq.term(d))
        if t % divisor_lcm:
            return DivisibilityWitness(n=n, term=t, lcm=divisor_lcm)
        terms.append(t // divisor_lcm)
    return HSequence(base=seq, terms=tuple(terms))


def reconstruct(h: HSequence, s: int) -> FSeq:
    """Pointwise product of the first s periodic components.

    The result has term(i) = product of h(j) over divisors j <= s of i, so it
    agrees with any base whose factors multiply back along divisors (the
    natural and fibonacci families do) on indices 1..s and continues
    periodically past s.
    """
    if s < 1 or s > len(h.terms):
        raise ValueError(f"s must be within 1..{len(h.terms)}, got {s}")
    out = fseq.constant(h.terms[0]) if h.terms[0] != 1 else unit()
    for j in range(2, s + 1):
        factor = h.terms[j - 1]
        if factor != 1:
            out = point_product(out, fseq.periodic(factor, j))
    return out
