"""Exact kernel for cobweb poset sequences.

A cobweb poset is determined by a sequence of nonnegative integers.  This
module evaluates such sequences and the generalized binomial coefficients
built from them.  Everything is exact: terms are Python ints, generalized
binomials are Fraction values, and admissibility is a divisibility verdict,
so no floating point appears anywhere.

Index 0 of every sequence is fixed to 1 regardless of the descriptor, so
factorial-style products over empty ranges are total.  The classical value
0 at index 0 of the Fibonacci family corresponds to the poset's empty root
and never enters a product.

Descriptors form a small closed algebra: primitive families (natural,
fibonacci, constant, nondiminishing, periodic, geometric, rec2, explicit)
plus two combinators (shift, product).  Descriptors round-trip through
JSON with term values rendered as decimal strings, since terms exceed
64-bit range for modest indices in the geometric and rec2 families.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DescriptorError, SequenceRangeError, ZeroTermError

__all__ = [
    "FSeq",
    "FNomial",
    "natural",
    "fibonacci",
    "constant",
    "nondiminishing",
    "periodic",
    "geometric",
    "rec2",
    "explicit",
    "shifted",
    "product",
    "term",
    "prefix",
    "f_factorial",
    "falling",
    "fnomial",
    "is_admissible_prefix",
    "check_identity_1",
    "check_identity_2",
    "from_descriptor",
    "to_descriptor",
    "from_json",
    "to_json",
]

KINDS = (
    "natural",
    "fibonacci",
    "constant",
    "nondiminishing",
    "periodic",
    "geometric",
    "rec2",
    "shift",
    "product",
    "explicit",
)


class FSeq:
    """Nonnegative integer sequence with memoized terms; term(0) == 1.

    Instances are immutable apart from the memo, whose entries are pure and
    write-once: concurrent readers observe either a missing entry or the
    final value, so repeated queries agree regardless of schedule.
    """

    __slots__ = ("kind", "params", "_memo")

    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = params
        self._memo: dict[int, int] = {}

    def term(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"term index must be nonnegative, got {n}")
        got = self._memo.get(n)
        if got is None:
            got = self._compute(n)
            self._memo[n] = got
        return got

    def _compute(self, n: int) -> int:
        if n == 0:
            return 1
        kind = self.kind
        p = self.params
        if kind == "natural":
            return n
        if kind == "fibonacci":
            if n <= 2:
                return 1
            a, b = 1, 1
            for _ in range(n - 2):
                a, b = b, a + b
            return b
        if kind == "constant":
            return p["t"]
        if kind == "nondiminishing":
            return p["c"] if n >= p["M"] else 1
        if kind == "periodic":
            return p["c"] if n % p["M"] == 0 else 1
        if kind == "geometric":
            return p["alpha"] ** (n - 1) * p["c"] ** n
        if kind == "rec2":
            # two-term recurrence t(n) = f2 * t(n-1) + t(n-2)
            if n == 1:
                return p["f1"]
            if n == 2:
                return p["f2"]
            a, b = p["f1"], p["f2"]
            for _ in range(n - 2):
                a, b = b, p["f2"] * b + a
            return b
        if kind == "shift":
            s = p["s"]
            return 1 if n <= s else p["inner"].term(n - s)
        if kind == "product":
            return p["left"].term(n) * p["right"].term(n)
        if kind == "explicit":
            terms = p["terms"]
            if n >= len(terms):
                raise SequenceRangeError(
                    f"explicit sequence has {len(terms) - 1} terms past index 0; "
                    f"index {n} is out of range"
                )
            return terms[n]
        raise DescriptorError(f"unknown sequence kind {kind!r}")

    def __repr__(self) -> str:
        return f"FSeq({self.label()})"

    def label(self) -> str:
        """Short human-readable tag used in diagnostics."""
        kind = self.kind
        p = self.params
        if kind == "constant":
            return f"constant({p['t']})"
        if kind == "nondiminishing":
            return f"nondiminishing(c={p['c']}, M={p['M']})"
        if kind == "periodic":
            return f"periodic(c={p['c']}, M={p['M']})"
        if kind == "geometric":
            return f"geometric(alpha={p['alpha']}, c={p['c']})"
        if kind == "rec2":
            return f"rec2({p['f1']}, {p['f2']})"
        if kind == "shift":
            return f"shift({p['inner'].label()}, s={p['s']})"
        if kind == "product":
            return f"product({p['left'].label()}, {p['right'].label()})"
        if kind == "explicit":
            return f"explicit[{len(p['terms']) - 1} terms]"
        return kind


# ---------------------------------------------------------------------------
# constructors

def _check_int(value: int, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DescriptorError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DescriptorError(f"{name} must be >= {minimum}, got {value}")
    return value


def natural() -> FSeq:
    """The sequence whose n-th term is n."""
    return FSeq("natural", {})


def fibonacci() -> FSeq:
    """Terms 1, 1, 2, 3, 5, ... from index 1."""
    return FSeq("fibonacci", {})


def constant(t: int) -> FSeq:
    """Every term from index 1 on equals t."""
    return FSeq("constant", {"t": _check_int(t, "t", 1)})


def nondiminishing(c: int, M: int) -> FSeq:
    """Terms are 1 before index M and c from index M on."""
    return FSeq(
        "nondiminishing",
        {"c": _check_int(c, "c", 1), "M": _check_int(M, "M", 1)},
    )


def periodic(c: int, M: int) -> FSeq:
    """Term is c at indices divisible by M, else 1."""
    return FSeq(
        "periodic",
        {"c": _check_int(c, "c", 1), "M": _check_int(M, "M", 1)},
    )


def geometric(alpha: int, c: int) -> FSeq:
    """Term alpha**(n-1) * c**n."""
    return FSeq(
        "geometric",
        {"alpha": _check_int(alpha, "alpha", 1), "c": _check_int(c, "c", 1)},
    )


def rec2(f1: int, f2: int) -> FSeq:
    """Two-term recurrence t(n) = t(2) * t(n-1) + t(n-2) seeded with f1, f2."""
    return FSeq(
        "rec2",
        {"f1": _check_int(f1, "f1", 1), "f2": _check_int(f2, "f2", 1)},
    )


def explicit(terms) -> FSeq:
    """Finite term list indexed from 0; access past the end is an error."""
    parsed = []
    for i, value in enumerate(terms):
        if isinstance(value, str):
            try:
                value = int(value, 10)
            except ValueError:
                raise DescriptorError(f"explicit term {i} is not an integer: {value!r}")
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise DescriptorError(f"explicit term {i} must be a nonnegative integer")
        parsed.append(value)
    if not parsed or parsed[0] != 1:
        raise DescriptorError("explicit term list must start with 1 at index 0")
    return FSeq("explicit", {"terms": tuple(parsed)})


def shifted(inner: FSeq, s: int) -> FSeq:
    """Prepend s ones: term(n) = 1 for n <= s, inner term(n - s) past that."""
    if not isinstance(inner, FSeq):
        raise DescriptorError("shift needs an inner sequence")
    return FSeq("shift", {"s": _check_int(s, "s", 0), "inner": inner})


def product(left: FSeq, right: FSeq) -> FSeq:
    """Pointwise product of two sequences."""
    if not isinstance(left, FSeq) or not isinstance(right, FSeq):
        raise DescriptorError("product needs two sequences")
    return FSeq("product", {"left": left, "right": right})


# ---------------------------------------------------------------------------
# descriptor serialization

def to_descriptor(seq: FSeq) -> dict:
    """Plain-data descriptor; term values are decimal strings."""
    kind = seq.kind
    p = seq.params
    if kind in ("natural", "fibonacci"):
        return {"kind": kind}
    if kind == "constant":
        return {"kind": kind, "t": p["t"]}
    if kind in ("nondiminishing", "periodic"):
        return {"kind": kind, "c": p["c"], "M": p["M"]}
    if kind == "geometric":
        return {"kind": kind, "alpha": p["alpha"], "c": p["c"]}
    if kind == "rec2":
        return {"kind": kind, "f1": p["f1"], "f2": p["f2"]}
    if kind == "shift":
        return {"kind": kind, "s": p["s"], "inner": to_descriptor(p["inner"])}
    if kind == "product":
        return {
            "kind": kind,
            "left": to_descriptor(p["left"]),
            "right": to_descriptor(p["right"]),
        }
    if kind == "explicit":
        return {"kind": kind, "terms": [str(t) for t in p["terms"]]}
    raise DescriptorError(f"unknown sequence kind {kind!r}")


def _descriptor_int(d: dict, key: str) -> int:
    if key not in d:
        raise DescriptorError(f"descriptor kind {d.get('kind')!r} needs field {key!r}")
    value = d[key]
    if isinstance(value, str):
        try:
            value = int(value, 10)
        except ValueError:
            raise DescriptorError(f"field {key!r} is not an integer: {value!r}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise DescriptorError(f"field {key!r} is not an integer: {value!r}")
    return value


def from_descriptor(d: dict) -> FSeq:
    """Build a sequence from a plain-data descriptor, validating parameters."""
    if not isinstance(d, dict):
        raise DescriptorError(f"descriptor must be an object, got {type(d).__name__}")
    kind = d.get("kind")
    if kind == "natural":
        return natural()
    if kind == "fibonacci":
        return fibonacci()
    if kind == "constant":
        return constant(_descriptor_int(d, "t"))
    if kind == "nondiminishing":
        return nondiminishing(_descriptor_int(d, "c"), _descriptor_int(d, "M"))
    if kind == "periodic":
        return periodic(_descriptor_int(d, "c"), _descriptor_int(d, "M"))
    if kind == "geometric":
        return geometric(_descriptor_int(d, "alpha"), _descriptor_int(d, "c"))
    if kind == "rec2":
        return rec2(_descriptor_int(d, "f1"), _descriptor_int(d, "f2"))
    if kind == "shift":
        if "inner" not in d:
            raise DescriptorError("shift descriptor needs field 'inner'")
        return shifted(from_descriptor(d["inner"]), _descriptor_int(d, "s"))
    if kind == "product":
        for side in ("left", "right"):
            if side not in d:
                raise DescriptorError(f"product descriptor needs field {side!r}")
        return product(from_descriptor(d["left"]), from_descriptor(d["right"]))
    if kind == "explicit":
        if "terms" not in d or not isinstance(d["terms"], (list, tuple)):
            raise DescriptorError("explicit descriptor needs a 'terms' array")
        return explicit(d["terms"])
    raise DescriptorError(f"unknown sequence kind {kind!r}")


def to_json(seq: FSeq) -> str:
    return json.dumps(to_descriptor(seq), sort_keys=True)


def from_json(text: str) -> FSeq:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor is not valid JSON: {exc}") from exc
    return from_descriptor(data)


# ---------------------------------------------------------------------------
# term arithmetic

def term(seq: FSeq, n: int) -> int:
    """The n-th term; term(seq, 0) == 1 for every descriptor."""
    return seq.term(n)


def prefix(seq: FSeq, count: int) -> list[int]:
    """Terms 1..count as a list."""
    return [seq.term(n) for n in range(1, count + 1)]


def f_factorial(seq: FSeq, n: int) -> int:
    """Product of terms 1..n (distinct from the ordinary factorial of term n)."""
    if n < 0:
        raise ValueError(f"factorial index must be nonnegative, got {n}")
    out = 1
    for j in range(1, n + 1):
        out *= seq.term(j)
    return out


def falling(seq: FSeq, n: int, k: int) -> int:
    """Product of the k terms ending at index n: term(n-k+1) * ... * term(n)."""
    if k < 0 or k > n:
        raise ValueError(f"falling product needs 0 <= k <= n, got n={n}, k={k}")
    out = 1
    for j in range(n - k + 1, n + 1):
        out *= seq.term(j)
    return out


@dataclass(frozen=True)
class FNomial:
    """Generalized binomial: raw falling product over raw factorial."""

    numerator: int
    denominator: int
    value: Fraction
    is_integer: bool


def fnomial(seq: FSeq, n: int, k: int) -> FNomial:
    """Exact generalized binomial falling(n, k) / f_factorial(k).

    A zero term inside the denominator range is an error; a zero inside the
    numerator only makes the value 0.
    """
    if k < 0 or k > n:
        raise ValueError(f"fnomial needs 0 <= k <= n, got n={n}, k={k}")
    den = 1
    for j in range(1, k + 1):
        t = seq.term(j)
        if t == 0:
            raise ZeroTermError(
                f"term {j} of {seq.label()} is zero; denominator undefined"
            )
        den *= t
    num = falling(seq, n, k)
    value = Fraction(num, den)
    return FNomial(num, den, value, num % den == 0)


def is_admissible_prefix(seq: FSeq, N: int) -> Optional[tuple[int, int]]:
    """First (n, k) with a non-integral fnomial for 0 <= k <= n <= N, else None.

    Pairs are scanned in lexicographic order, so the reported witness is the
    least failure.
    """
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    for n in range(N + 1):
        for k in range(n + 1):
            if not fnomial(seq, n, k).is_integer:
                return (n, k)
    return None


def check_identity_1(seq: FSeq, N: int) -> Optional[tuple[int, int]]:
    """First (m, k) with term(m + k) != term(m) + term(k), else None.

    Scans m >= 2, k >= 1, m + k <= N in lexicographic order.  By symmetry of
    the right-hand side this covers every unordered instance except (1, 1),
    whose value is pinned by the side condition term(1) = 1 rather than by
    the identity.
    """
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    for m in range(2, N):
        for k in range(1, N - m + 1):
            if seq.term(m + k) != seq.term(m) + seq.term(k):
                return (m, k)
    return None


def check_identity_2(seq: FSeq, N: int) -> Optional[tuple[int, int]]:
    """First (m, k) violating the convolution identity, else None.

    Checks term(m + k) == term(k + 1) * term(m) + term(m - 1) * term(k) for
    m > 1, k >= 1, m + k <= N, in lexicographic order.
    """
    if N < 3:
        raise ValueError(f"N must be at least 3, got {N}")
    for m in range(2, N):
        for k in range(1, N - m + 1):
            lhs = seq.term(m + k)
            rhs = seq.term(k + 1) * seq.term(m) + seq.term(m - 1) * seq.term(k)
            if lhs != rhs:
                return (m, k)
    return None
