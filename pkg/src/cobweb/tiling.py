"""Layer tilings: constructive recursions, verification, exhaustive search.

Two constructive tilers split the top level of a layer and recurse on the
shape (the tuple of level sizes), which fully determines the sub-problems:

* the additive variant peels term(m) top slots under a sum split
  term(n) = term(m) + term(k - 1) of the top level, and moves the remainder
  below the bottom level by an index remapping;
* the convolution variant peels term(k) groups of term(m) slots and
  term(m - 1) groups of term(k - 1) slots under the split
  term(n) = term(k) * term(m) + term(m - 1) * term(k - 1).

Both recursions memoize finished sub-tilings by shape signature.  The
enumerate-all policy walks every choice in the same recursion and yields
distinct tilings (role-symmetric choices can collapse to the same tiling,
so streams are deduplicated per shape).

Exhaustive enumeration is an exact-cover search over the chain universe
with minimum-remaining-candidates element selection; its count and
canonical tiling list are invariant across worker counts.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product as iproduct
from math import comb, factorial
from typing import Iterator, Optional

from . import fseq
from .errors import (
    CapExceeded,
    IdentityError,
    NonIntegralError,
    TilingError,
)
from .fseq import FSeq
from .poset import (
    DEFAULT_CHAIN_CAP,
    BlockPlacement,
    Layer,
    Tiling,
    build_layer,
    enumerate_chains,
    enumerate_placements,
    make_tiling,
    prime_level_sizes,
)

__all__ = [
    "DEFAULT_NODE_CAP",
    "TilePolicy",
    "TilingViolation",
    "TilingEnumeration",
    "UpperBoundCheck",
    "Triangle",
    "TRIANGLE_KINDS",
    "tile_additive",
    "tile_fibonacci",
    "needs_identity",
    "detect_variant",
    "iter_tiling_choices_additive",
    "iter_tiling_choices_fibonacci",
    "verify_tiling",
    "enumerate_tilings",
    "count_tilings_additive",
    "count_tilings_fibonacci",
    "stirling_lambda",
    "equal_block_bound",
    "check_count_upper_bound",
    "triangle",
]

DEFAULT_NODE_CAP = 10**8
DEFAULT_ROW_CAP = 200

POLICY_MODES = ("first-slots", "seeded-random", "enumerate-all")


@dataclass(frozen=True)
class TilePolicy:
    """Slot-choice policy for the constructive tilers.

    first-slots takes the lexicographically least slots at every split;
    seeded-random draws them from a seeded generator; enumerate-all is
    served by the iter_tiling_choices_* functions.
    """

    mode: str = "first-slots"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.mode not in POLICY_MODES:
            raise ValueError(f"policy mode must be one of {POLICY_MODES}, got {self.mode!r}")


# ---------------------------------------------------------------------------
# constructive recursion, additive split

def _single_level_blocks(seq: FSeq, size: int) -> tuple:
    one = seq.term(1)
    if one < 1 or size % one:
        raise TilingError(
            f"one-level layer of size {size} cannot split into blocks of size {one}"
        )
    return tuple((tuple(range(i, i + one)),) for i in range(0, size, one))


def _tile_shape_additive(seq: FSeq, shape: tuple[int, ...], choose, memo: dict) -> tuple:
    cached = memo.get(shape)
    if cached is not None:
        return cached
    m = len(shape)
    if m == 1:
        blocks = _single_level_blocks(seq, shape[0])
    elif shape == prime_level_sizes(seq, m):
        blocks = (tuple(tuple(range(size)) for size in shape),)
    else:
        top = shape[-1]
        m_f = seq.term(m)
        rest = top - m_f
        if rest < 0:
            raise TilingError(
                f"top level of shape {shape} is smaller than the peel size {m_f}"
            )
        chosen = choose(shape, top, m_f)
        chosen_set = set(chosen)
        left = tuple(x for x in range(top) if x not in chosen_set)
        out = [b + (chosen,) for b in _tile_shape_additive(seq, shape[:-1], choose, memo)]
        if rest:
            moved = _tile_shape_additive(seq, (rest,) + shape[:-1], choose, memo)
            for b in moved:
                out.append(b[1:] + (tuple(left[i] for i in b[0]),))
        blocks = tuple(sorted(out))
    memo[shape] = blocks
    return blocks


# ---------------------------------------------------------------------------
# constructive recursion, convolution split

def _fib_split(seq: FSeq, shape: tuple[int, ...]) -> tuple[int, int, int, int]:
    """Group parameters (kappa, m_f, mu, small) for the convolution split."""
    m = len(shape)
    top = shape[-1]
    kappa = shape[0]
    m_f = seq.term(m)
    mu = seq.term(m - 1)
    rest = top - kappa * m_f
    if rest < 0 or mu < 1 or rest % mu:
        raise TilingError(
            f"top level of shape {shape} does not split as {kappa}*{m_f} + {mu}*q"
        )
    return kappa, m_f, mu, rest // mu


def _tile_shape_fib(seq: FSeq, shape: tuple[int, ...], choose_groups, memo: dict) -> tuple:
    cached = memo.get(shape)
    if cached is not None:
        return cached
    m = len(shape)
    if m == 1:
        blocks = _single_level_blocks(seq, shape[0])
    elif shape == prime_level_sizes(seq, m):
        blocks = (tuple(tuple(range(size)) for size in shape),)
    else:
        kappa, m_f, mu, small = _fib_split(seq, shape)
        top = shape[-1]
        groups_a, groups_b = choose_groups(shape, top, m_f, kappa, small, mu if small else 0)
        sub_top = _tile_shape_fib(seq, shape[:-1], choose_groups, memo)
        out = [b + (g,) for g in groups_a for b in sub_top]
        if small:
            moved = _tile_shape_fib(seq, (small,) + shape[:-1], choose_groups, memo)
            for g in groups_b:
                for b in moved:
                    out.append(b[1:] + (tuple(g[i] for i in b[0]),))
        blocks = tuple(sorted(out))
    memo[shape] = blocks
    return blocks


# ---------------------------------------------------------------------------
# policies

def _subset_chooser(policy: TilePolicy):
    if policy.mode == "first-slots":
        def choose(shape, top, want):
            return tuple(range(want))
    else:
        rng = random.Random(policy.seed)

        def choose(shape, top, want):
            return tuple(sorted(rng.sample(range(top), want)))
    return choose


def _group_chooser(policy: TilePolicy):
    if policy.mode == "first-slots":
        def choose(shape, top, size_a, count_a, size_b, count_b):
            order = list(range(top))
            return _chunk_groups(order, size_a, count_a, size_b, count_b)
    else:
        rng = random.Random(policy.seed)

        def choose(shape, top, size_a, count_a, size_b, count_b):
            order = rng.sample(range(top), top)
            return _chunk_groups(order, size_a, count_a, size_b, count_b)
    return choose


def _chunk_groups(order: list[int], size_a: int, count_a: int, size_b: int, count_b: int):
    groups_a = []
    pos = 0
    for _ in range(count_a):
        groups_a.append(tuple(sorted(order[pos:pos + size_a])))
        pos += size_a
    groups_b = []
    for _ in range(count_b):
        groups_b.append(tuple(sorted(order[pos:pos + size_b])))
        pos += size_b
    return tuple(sorted(groups_a)), tuple(sorted(groups_b))


def needs_identity(seq: FSeq, k: int, n: int) -> bool:
    """Whether tiling levels k..n ever splits a level (prime-shaped and
    one-level layers are pure base cases and need no identity)."""
    if k < 2 or n <= k:
        return False
    m = n - k + 1
    shape = tuple(seq.term(j) for j in range(k, n + 1))
    return shape != prime_level_sizes(seq, m)


def detect_variant(seq: FSeq, k: int, n: int):
    """Recursion variant for the layer: ("additive" | "fibonacci", None, None),
    or (None, witness1, witness2) when neither identity holds."""
    if not needs_identity(seq, k, n):
        return "additive", None, None
    w1 = fseq.check_identity_1(seq, n)
    if w1 is None:
        return "additive", None, None
    w2 = fseq.check_identity_2(seq, n)
    if w2 is None:
        return "fibonacci", None, None
    return None, w1, w2


def _check_precondition(seq: FSeq, k: int, n: int, which: int) -> None:
    if not needs_identity(seq, k, n):
        return
    if which == 1:
        witness = fseq.check_identity_1(seq, n)
    else:
        witness = fseq.check_identity_2(seq, n)
    if witness is not None:
        raise IdentityError(which, witness)


def _raw_to_tiling(layer: Layer, raw_blocks) -> Tiling:
    blocks = [BlockPlacement(subsets=b) for b in raw_blocks]
    return make_tiling(layer, blocks)


def _capped_layer(seq: FSeq, k: int, n: int, chain_cap: Optional[int]) -> Layer:
    layer = build_layer(seq, k, n)
    limit = DEFAULT_CHAIN_CAP if chain_cap is None else chain_cap
    if layer.chain_count > limit:
        raise CapExceeded("chains", limit, needed=layer.chain_count)
    return layer


def tile_additive(
    seq: FSeq,
    k: int,
    n: int,
    policy: Optional[TilePolicy] = None,
    *,
    chain_cap: Optional[int] = None,
) -> Tiling:
    """Tile the layer over levels k..n of a sum-split sequence.

    Requires the additive identity term(m + k) = term(m) + term(k) on the
    range the recursion touches; the first violation is raised as an error.
    """
    policy = policy or TilePolicy()
    if policy.mode == "enumerate-all":
        raise ValueError("use iter_tiling_choices_additive for the enumerate-all policy")
    layer = _capped_layer(seq, k, n, chain_cap)
    _check_precondition(seq, k, n, 1)
    raw = _tile_shape_additive(seq, layer.sizes, _subset_chooser(policy), {})
    return _raw_to_tiling(layer, raw)


def tile_fibonacci(
    seq: FSeq,
    k: int,
    n: int,
    policy: Optional[TilePolicy] = None,
    *,
    chain_cap: Optional[int] = None,
) -> Tiling:
    """Tile the layer over levels k..n of a convolution-split sequence.

    Requires the identity term(m + k) = term(k + 1) * term(m) +
    term(m - 1) * term(k) on the range the recursion touches.
    """
    policy = policy or TilePolicy()
    if policy.mode == "enumerate-all":
        raise ValueError("use iter_tiling_choices_fibonacci for the enumerate-all policy")
    layer = _capped_layer(seq, k, n, chain_cap)
    _check_precondition(seq, k, n, 2)
    raw = _tile_shape_fib(seq, layer.sizes, _group_chooser(policy), {})
    return _raw_to_tiling(layer, raw)


# ---------------------------------------------------------------------------
# enumerate-all choice streams

def _iter_shape_additive(seq: FSeq, shape: tuple[int, ...], memo: dict) -> list:
    cached = memo.get(shape)
    if cached is not None:
        return cached
    m = len(shape)
    if m == 1:
        result = [_single_level_blocks(seq, shape[0])]
    elif shape == prime_level_sizes(seq, m):
        result = [(tuple(tuple(range(size)) for size in shape),)]
    else:
        top = shape[-1]
        m_f = seq.term(m)
        rest = top - m_f
        if rest < 0:
            raise TilingError(
                f"top level of shape {shape} is smaller than the peel size {m_f}"
            )
        subs_top = _iter_shape_additive(seq, shape[:-1], memo)
        subs_moved = (
            _iter_shape_additive(seq, (rest,) + shape[:-1], memo) if rest else None
        )
        seen = set()
        for chosen in combinations(range(top), m_f):
            chosen_set = set(chosen)
            left = tuple(x for x in range(top) if x not in chosen_set)
            for t1 in subs_top:
                capped = [b + (chosen,) for b in t1]
                if subs_moved is None:
                    seen.add(tuple(sorted(capped)))
                    continue
                for t2 in subs_moved:
                    blocks = list(capped)
                    for b in t2:
                        blocks.append(b[1:] + (tuple(left[i] for i in b[0]),))
                    seen.add(tuple(sorted(blocks)))
        result = sorted(seen)
    memo[shape] = result
    return result


def _unordered_groups(slots: tuple[int, ...], size: int) -> Iterator[tuple]:
    """Partitions of slots into unordered groups of a fixed positive size."""
    if not slots:
        yield ()
        return
    head = slots[0]
    rest = slots[1:]
    for mates in combinations(rest, size - 1):
        mate_set = set(mates)
        leftover = tuple(x for x in rest if x not in mate_set)
        group = (head,) + mates
        for tail in _unordered_groups(leftover, size):
            yield (group,) + tail


def _iter_shape_fib(seq: FSeq, shape: tuple[int, ...], memo: dict) -> list:
    cached = memo.get(shape)
    if cached is not None:
        return cached
    m = len(shape)
    if m == 1:
        result = [_single_level_blocks(seq, shape[0])]
    elif shape == prime_level_sizes(seq, m):
        result = [(tuple(tuple(range(size)) for size in shape),)]
    else:
        kappa, m_f, mu, small = _fib_split(seq, shape)
        top = shape[-1]
        subs_top = _iter_shape_fib(seq, shape[:-1], memo)
        subs_moved = (
            _iter_shape_fib(seq, (small,) + shape[:-1], memo) if small else None
        )
        seen = set()
        slots = tuple(range(top))
        for region in combinations(slots, kappa * m_f):
            region_set = set(region)
            remainder = tuple(x for x in slots if x not in region_set)
            for groups_a in _unordered_groups(region, m_f):
                b_options = (
                    [()] if subs_moved is None
                    else list(_unordered_groups(remainder, small))
                )
                for groups_b in b_options:
                    for picks_a in iproduct(subs_top, repeat=len(groups_a)):
                        capped = [
                            b + (g,)
                            for g, t1 in zip(groups_a, picks_a)
                            for b in t1
                        ]
                        if not groups_b:
                            seen.add(tuple(sorted(capped)))
                            continue
                        for picks_b in iproduct(subs_moved, repeat=len(groups_b)):
                            blocks = list(capped)
                            for g, t2 in zip(groups_b, picks_b):
                                for b in t2:
                                    blocks.append(
                                        b[1:] + (tuple(g[i] for i in b[0]),)
                                    )
                            seen.add(tuple(sorted(blocks)))
        result = sorted(seen)
    memo[shape] = result
    return result


def iter_tiling_choices_additive(
    seq: FSeq, k: int, n: int, *, chain_cap: Optional[int] = None
) -> Iterator[Tiling]:
    """Every distinct tiling reachable by the additive recursion's choices."""
    layer = _capped_layer(seq, k, n, chain_cap)
    _check_precondition(seq, k, n, 1)
    for raw in _iter_shape_additive(seq, layer.sizes, {}):
        yield _raw_to_tiling(layer, raw)


def iter_tiling_choices_fibonacci(
    seq: FSeq, k: int, n: int, *, chain_cap: Optional[int] = None
) -> Iterator[Tiling]:
    """Every distinct tiling reachable by the convolution recursion's choices."""
    layer = _capped_layer(seq, k, n, chain_cap)
    _check_precondition(seq, k, n, 2)
    for raw in _iter_shape_fib(seq, layer.sizes, {}):
        yield _raw_to_tiling(layer, raw)


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class TilingViolation:
    """First violated tiling clause with a concrete witness."""

    clause: str
    detail: str
    witness: object = None


def verify_tiling(tiling: Tiling) -> Optional[TilingViolation]:
    """None when valid, else the first violated clause.

    Clauses in order: every block's size multiset equals the prime level
    sizes; blocks are pairwise chain-disjoint; the blocks cover the chain
    universe; the block count equals the layer's generalized binomial.
    """
    layer = tiling.layer
    m = layer.m
    expected = sorted(prime_level_sizes(layer.seq, m))
    for bi, block in enumerate(tiling.blocks):
        if len(block.subsets) != m:
            return TilingViolation(
                "block-sizes", f"block {bi} has {len(block.subsets)} levels, layer has {m}", bi
            )
        for li, subset in enumerate(block.subsets):
            ok = (
                len(subset) > 0
                and all(0 <= s < layer.sizes[li] for s in subset)
                and tuple(sorted(set(subset))) == tuple(subset)
            )
            if not ok:
                return TilingViolation(
                    "block-sizes",
                    f"block {bi} level {layer.k + li} subset {subset} is not a sorted "
                    f"set of slots below {layer.sizes[li]}",
                    (bi, li),
                )
        got = sorted(len(s) for s in block.subsets)
        if got != expected:
            return TilingViolation(
                "block-sizes",
                f"block {bi} has size multiset {got}, expected {expected}",
                bi,
            )
    seen: dict[tuple, int] = {}
    for bi, block in enumerate(tiling.blocks):
        for chain in block.chains():
            other = seen.get(chain)
            if other is not None:
                return TilingViolation(
                    "shared-chain",
                    f"chain {chain} lies in blocks {other} and {bi}",
                    (chain, other, bi),
                )
            seen[chain] = bi
    if len(seen) != layer.chain_count:
        for chain in iproduct(*(range(size) for size in layer.sizes)):
            if chain not in seen:
                return TilingViolation(
                    "uncovered-chain", f"chain {chain} is covered by no block", chain
                )
    law = fseq.fnomial(layer.seq, layer.n, m)
    if not law.is_integer or len(tiling.blocks) != law.value:
        return TilingViolation(
            "block-count",
            f"{len(tiling.blocks)} blocks, law requires {law.value}",
            len(tiling.blocks),
        )
    return None


# ---------------------------------------------------------------------------
# exhaustive enumeration by exact cover

@dataclass(frozen=True)
class TilingEnumeration:
    """Exact result of exhaustive tiling enumeration."""

    count: int
    complete: bool
    truncated: bool
    tilings: Optional[tuple[Tiling, ...]]
    nodes: int


def _build_cover(n_elems: int, rows: list[tuple[int, ...]]):
    X: dict[int, set[int]] = {e: set() for e in range(n_elems)}
    for rid, elems in enumerate(rows):
        for e in elems:
            X[e].add(rid)
    return X


def _cover(X, rows, rid):
    removed = []
    for e in rows[rid]:
        for other in X[e]:
            for e2 in rows[other]:
                if e2 != e:
                    X[e2].discard(other)
        removed.append((e, X.pop(e)))
    return removed


def _uncover(X, rows, removed):
    for e, column in reversed(removed):
        X[e] = column
        for other in column:
            for e2 in rows[other]:
                if e2 != e:
                    X[e2].add(other)


class _SearchState:
    __slots__ = ("count", "nodes", "solutions", "node_cap")

    def __init__(self, node_cap: int, collect: bool):
        self.count = 0
        self.nodes = 0
        self.solutions: Optional[list] = [] if collect else None
        self.node_cap = node_cap


def _search(X, rows, stack: list[int], state: _SearchState) -> None:
    state.nodes += 1
    if state.nodes > state.node_cap:
        raise CapExceeded("nodes", state.node_cap, partial_count=state.count)
    if not X:
        state.count += 1
        if state.solutions is not None:
            state.solutions.append(tuple(stack))
        return
    col = min(X, key=lambda e: (len(X[e]), e))
    candidates = sorted(X[col])
    for rid in candidates:
        stack.append(rid)
        removed = _cover(X, rows, rid)
        _search(X, rows, stack, state)
        _uncover(X, rows, removed)
        stack.pop()


def _run_branch(n_elems, rows, node_cap, collect, forced):
    X = _build_cover(n_elems, rows)
    state = _SearchState(node_cap, collect)
    stack: list[int] = []
    if forced is not None:
        stack.append(forced)
        _cover(X, rows, forced)
    _search(X, rows, stack, state)
    return state


def enumerate_tilings(
    layer: Layer,
    limit: Optional[int] = None,
    *,
    workers: int = 1,
    chain_cap: Optional[int] = None,
    placement_cap: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> TilingEnumeration:
    """Count (exactly) and optionally list all tilings of a layer.

    The count is always exact when the function returns; passing a limit
    requests the tilings themselves, canonically sorted, with a truncation
    flag when the count exceeds the limit.  Results are identical for any
    worker count.  Exceeding a cap raises instead of truncating.
    """
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    node_limit = DEFAULT_NODE_CAP if node_cap is None else node_cap
    chains = list(enumerate_chains(layer, cap=chain_cap))
    chain_ids = {c: i for i, c in enumerate(chains)}
    placements = list(enumerate_placements(layer, cap=placement_cap))
    rows = [
        tuple(sorted(chain_ids[c] for c in placement.chains()))
        for placement in placements
    ]
    collect = limit is not None
    n_elems = len(chains)

    if workers == 1:
        states = [_run_branch(n_elems, rows, node_limit, collect, None)]
    else:
        X = _build_cover(n_elems, rows)
        root = min(X, key=lambda e: (len(X[e]), e))
        branch_rows = sorted(X[root])
        if not branch_rows:
            states = []
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_run_branch, n_elems, rows, node_limit, collect, rid)
                    for rid in branch_rows
                ]
                states = [f.result() for f in futures]

    count = sum(s.count for s in states)
    nodes = sum(s.nodes for s in states)
    tilings: Optional[tuple[Tiling, ...]] = None
    truncated = False
    if collect:
        raw = []
        for s in states:
            for solution in s.solutions:
                raw.append(tuple(sorted(placements[rid].subsets for rid in solution)))
        raw.sort()
        if len(raw) > limit:
            raw = raw[:limit]
            truncated = True
        tilings = tuple(_raw_to_tiling(layer, blocks) for blocks in raw)
    return TilingEnumeration(
        count=count, complete=True, truncated=truncated, tilings=tilings, nodes=nodes
    )


# ---------------------------------------------------------------------------
# counting recurrences

def count_tilings_additive(seq: FSeq, n: int, k: int) -> int:
    """Outcome count of the additive recursion's choice tree for levels k..n."""
    if k < 1 or n < k:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if k != n and k != 1:
        witness = fseq.check_identity_1(seq, n)
        if witness is not None:
            raise IdentityError(1, witness)
    memo: dict[tuple[int, int], int] = {}

    def rec(nn: int, kk: int) -> int:
        if kk == nn or kk == 1:
            return 1
        key = (nn, kk)
        got = memo.get(key)
        if got is None:
            m = nn - kk + 1
            got = (
                comb(seq.term(nn), seq.term(m))
                * rec(nn - 1, kk)
                * rec(nn - 1, kk - 1)
            )
            memo[key] = got
        return got

    return rec(n, k)


def count_tilings_fibonacci(seq: FSeq, n: int, k: int, mode: str = "derived") -> int:
    """Choice count of the convolution recursion for levels k..n.

    paper mode evaluates the printed closed form verbatim: an ordered
    multinomial of ordinary factorials of term values times both sub-counts
    to the first power.  derived mode counts unordered group families and
    raises the sub-counts to the group-count powers, which matches the
    deduplicated enumerate-all stream on the ranges tested.
    """
    if mode not in ("paper", "derived"):
        raise ValueError(f"mode must be 'paper' or 'derived', got {mode!r}")
    if k < 1 or n < k:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if k not in (n, n - 1, 1):
        witness = fseq.check_identity_2(seq, n)
        if witness is not None:
            raise IdentityError(2, witness)
    memo: dict[tuple[int, int], int] = {}

    def rec(nn: int, kk: int) -> int:
        if kk in (nn, nn - 1, 1):
            return 1
        key = (nn, kk)
        got = memo.get(key)
        if got is not None:
            return got
        m = nn - kk + 1
        kappa = seq.term(kk)
        mu = seq.term(m - 1)
        m_f = seq.term(m)
        small = seq.term(kk - 1)
        n_f = seq.term(nn)
        if kappa * m_f + mu * small != n_f:
            raise TilingError(
                f"split {kappa}*{m_f} + {mu}*{small} != {n_f} at (n, k) = ({nn}, {kk})"
            )
        denom = factorial(m_f) ** kappa * factorial(small) ** mu
        if mode == "derived":
            denom *= factorial(kappa) * factorial(mu)
        quotient, remainder = divmod(factorial(n_f), denom)
        if remainder:
            raise NonIntegralError(
                f"multinomial {n_f}! / {denom} is not an integer at (n, k) = ({nn}, {kk})"
            )
        if mode == "paper":
            got = quotient * rec(nn - 1, kk) * rec(nn - 1, kk - 1)
        else:
            got = quotient * rec(nn - 1, kk) ** kappa * rec(nn - 1, kk - 1) ** mu
        memo[key] = got
        return got

    return rec(n, k)


def stirling_lambda(eta: int, kappa: int, lam: int) -> int:
    """Partitions of an eta-set into kappa unlabeled blocks, all of size lam."""
    if eta < 0 or kappa < 0 or lam < 0:
        raise ValueError("eta, kappa, lam must be nonnegative")
    if eta != kappa * lam:
        return 0
    if kappa == 0:
        return 1
    if lam == 0:
        return 0
    return factorial(eta) // (factorial(kappa) * factorial(lam) ** kappa)


@dataclass(frozen=True)
class UpperBoundCheck:
    """Comparison of a constructive count against its equal-block bound."""

    holds: bool
    lhs: int
    rhs: int
    eta: int
    kappa: int
    lam: int


def _bound_parameters(seq: FSeq, n: int, k: int) -> tuple[int, int, int]:
    if k < 1 or n < k:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    m = n - k + 1
    f = fseq.fnomial(seq, n, k - 1)
    if not f.is_integer:
        raise NonIntegralError(
            f"fnomial({n}, {k - 1}) = {f.value} is not an integer; no block count"
        )
    kappa = int(f.value)
    lam = fseq.f_factorial(seq, m)
    eta = fseq.falling(seq, n, m)
    return eta, kappa, lam


def equal_block_bound(seq: FSeq, n: int, k: int) -> int:
    """Partitions of the falling product of the layer's m top-window terms
    into fnomial(n, k - 1) blocks of size f_factorial(m)."""
    eta, kappa, lam = _bound_parameters(seq, n, k)
    return stirling_lambda(eta, kappa, lam)


def check_count_upper_bound(seq: FSeq, n: int, k: int) -> UpperBoundCheck:
    """Check count <= equal-block partition bound for the layer over k..n."""
    eta, kappa, lam = _bound_parameters(seq, n, k)
    rhs = stirling_lambda(eta, kappa, lam)
    lhs = count_tilings_additive(seq, n, k)
    return UpperBoundCheck(holds=lhs <= rhs, lhs=lhs, rhs=rhs, eta=eta, kappa=kappa, lam=lam)


# ---------------------------------------------------------------------------
# triangles

TRIANGLE_KINDS = ("fnomial", "additive", "fibonacci", "equal-blocks")


@dataclass(frozen=True)
class Triangle:
    """Lower-triangular table of exact integers with per-cell error notes."""

    kind: str
    rows: int
    include_zero: bool
    cells: dict
    notes: dict

    def to_csv(self) -> str:
        lines = ["n,k,value"]
        for n in range(1, self.rows + 1):
            start = 0 if self.include_zero and self.kind == "fnomial" else 1
            for k in range(start, n + 1):
                if (n, k) in self.cells:
                    value = str(self.cells[(n, k)])
                else:
                    value = "!" + self.notes[(n, k)].replace(",", ";")
                lines.append(f"{n},{k},{value}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        rendered = {}
        width = 1
        for n in range(1, self.rows + 1):
            start = 0 if self.include_zero and self.kind == "fnomial" else 1
            for k in range(start, n + 1):
                if (n, k) in self.cells:
                    text = str(self.cells[(n, k)])
                else:
                    text = "!" + self.notes[(n, k)]
                rendered[(n, k)] = text
                width = max(width, len(text))
        lines = []
        for n in range(1, self.rows + 1):
            start = 0 if self.include_zero and self.kind == "fnomial" else 1
            row = " ".join(
                rendered[(n, k)].rjust(width) for k in range(start, n + 1)
            )
            lines.append(f"{n:>3} | {row}")
        return "\n".join(lines) + "\n"


def triangle(
    seq: FSeq,
    kind: str,
    rows: int,
    mode: str = "derived",
    include_zero: bool = False,
    row_cap: Optional[int] = None,
) -> Triangle:
    """Table of fnomials, constructive counts, or equal-block bounds.

    Cells whose evaluation fails a precondition are annotated instead of
    aborting the whole table.
    """
    if kind not in TRIANGLE_KINDS:
        raise ValueError(f"kind must be one of {TRIANGLE_KINDS}, got {kind!r}")
    limit = DEFAULT_ROW_CAP if row_cap is None else row_cap
    if rows < 1:
        raise ValueError(f"rows must be positive, got {rows}")
    if rows > limit:
        raise CapExceeded("rows", limit, needed=rows)
    cells: dict = {}
    notes: dict = {}
    for n in range(1, rows + 1):
        start = 0 if include_zero and kind == "fnomial" else 1
        for k in range(start, n + 1):
            try:
                if kind == "fnomial":
                    f = fseq.fnomial(seq, n, k)
                    if not f.is_integer:
                        notes[(n, k)] = f"non-integer {f.value}"
                    else:
                        cells[(n, k)] = int(f.value)
                elif kind == "additive":
                    cells[(n, k)] = count_tilings_additive(seq, n, k)
                elif kind == "fibonacci":
                    cells[(n, k)] = count_tilings_fibonacci(seq, n, k, mode=mode)
                else:
                    cells[(n, k)] = equal_block_bound(seq, n, k)
            except (IdentityError, NonIntegralError, TilingError) as exc:
                notes[(n, k)] = str(exc)
    return Triangle(
        kind=kind, rows=rows, include_zero=include_zero, cells=cells, notes=notes
    )
