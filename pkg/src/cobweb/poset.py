"""Finite layers of a cobweb poset: chains, block placements, DOT export.

A layer spans levels k..n of the graded poset defined by a sequence; level j
carries term(j) anonymous vertex slots and consecutive levels are completely
bipartite.  A maximal chain picks one slot per level.  A block placement is a
choice of one nonempty slot subset per level whose size multiset equals the
multiset of prime sizes {term(1), ..., term(m)}; its chain set is the
Cartesian product of the subsets.  A tiling partitions the chain universe
into such blocks.

Enumeration here is brute force and capped: exceeding a cap raises a named
error rather than truncating output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations, product as iproduct
from typing import Iterator, Optional, Sequence

from . import fseq
from .errors import CapExceeded, ZeroTermError
from .fseq import FSeq

__all__ = [
    "DEFAULT_CHAIN_CAP",
    "DEFAULT_PLACEMENT_CAP",
    "Vertex",
    "Chain",
    "Layer",
    "BlockPlacement",
    "Tiling",
    "build_layer",
    "prime_level_sizes",
    "enumerate_chains",
    "placement_count",
    "enumerate_placements",
    "make_tiling",
    "tiling_to_dict",
    "to_dot",
]

DEFAULT_CHAIN_CAP = 10**5
DEFAULT_PLACEMENT_CAP = 10**6

# A maximal chain is one slot index per level, bottom to top.
Chain = tuple[int, ...]


@dataclass(frozen=True)
class Vertex:
    """One anonymous slot on one level."""

    level: int
    slot: int


@dataclass(frozen=True)
class Layer:
    """Levels k..n of the poset of a sequence, with per-level slot counts."""

    k: int
    n: int
    sizes: tuple[int, ...]
    seq: FSeq = field(compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def chain_count(self) -> int:
        return math.prod(self.sizes)

    def levels(self) -> range:
        return range(self.k, self.n + 1)


def build_layer(seq: FSeq, k: int, n: int) -> Layer:
    """Layer over levels k..n; every level must have at least one slot."""
    if k < 1 or n < k:
        raise ValueError(f"layer needs 1 <= k <= n, got k={k}, n={n}")
    sizes = []
    for j in range(k, n + 1):
        size = seq.term(j)
        if size < 1:
            raise ZeroTermError(f"level {j} of {seq.label()} has zero slots")
        sizes.append(size)
    return Layer(k=k, n=n, sizes=tuple(sizes), seq=seq)


def prime_level_sizes(seq: FSeq, m: int) -> tuple[int, ...]:
    """Sizes term(1..m): the level sizes of the m-level prime layer."""
    return tuple(seq.term(j) for j in range(1, m + 1))


@dataclass(frozen=True)
class BlockPlacement:
    """Per-level slot subsets forming one block; subsets are sorted tuples."""

    subsets: tuple[tuple[int, ...], ...]

    @property
    def size_assignment(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.subsets)

    @property
    def chain_count(self) -> int:
        return math.prod(len(s) for s in self.subsets)

    def chains(self) -> Iterator[Chain]:
        return iproduct(*self.subsets)


@dataclass(frozen=True)
class Tiling:
    """A canonical, sorted family of block placements over one layer."""

    layer: Layer
    blocks: tuple[BlockPlacement, ...]


def make_tiling(layer: Layer, blocks: Sequence[BlockPlacement]) -> Tiling:
    ordered = tuple(sorted(blocks, key=lambda b: b.subsets))
    return Tiling(layer=layer, blocks=ordered)


def tiling_to_dict(tiling: Tiling) -> dict:
    """JSON-ready form with sorted slot arrays."""
    return {
        "layer": {
            "k": tiling.layer.k,
            "n": tiling.layer.n,
            "seq": fseq.to_descriptor(tiling.layer.seq),
        },
        "blocks": [
            [list(subset) for subset in block.subsets] for block in tiling.blocks
        ],
    }


def enumerate_chains(layer: Layer, cap: Optional[int] = None) -> Iterator[Chain]:
    """All maximal chains in lexicographic order; errors if over the cap."""
    limit = DEFAULT_CHAIN_CAP if cap is None else cap
    total = layer.chain_count
    if total > limit:
        raise CapExceeded("chains", limit, needed=total)
    return iproduct(*(range(size) for size in layer.sizes))


def _fitting_assignments(layer: Layer) -> list[tuple[int, ...]]:
    base = prime_level_sizes(layer.seq, layer.m)
    fits = []
    for assignment in sorted(set(permutations(base))):
        if all(a <= size for a, size in zip(assignment, layer.sizes)):
            fits.append(assignment)
    return fits


def placement_count(layer: Layer) -> int:
    """Number of distinct block placements, counted without materializing."""
    total = 0
    for assignment in _fitting_assignments(layer):
        total += math.prod(
            math.comb(size, a) for size, a in zip(layer.sizes, assignment)
        )
    return total


def enumerate_placements(layer: Layer, cap: Optional[int] = None) -> Iterator[BlockPlacement]:
    """All distinct block placements in deterministic order.

    Placements are identified by their subset families: two size assignments
    that agree as sequences are the same placement family, so assignments are
    deduplicated before expansion.  Order is by size assignment, then by the
    lexicographic order of each level's subset.
    """
    limit = DEFAULT_PLACEMENT_CAP if cap is None else cap
    total = placement_count(layer)
    if total > limit:
        raise CapExceeded("placements", limit, needed=total)

    def generate() -> Iterator[BlockPlacement]:
        for assignment in _fitting_assignments(layer):
            pools = [
                combinations(range(size), a)
                for size, a in zip(layer.sizes, assignment)
            ]
            for subsets in iproduct(*pools):
                yield BlockPlacement(subsets=subsets)

    return generate()


_DOT_PALETTE = (
    "#e41a1c",
    "#377eb8",
    "#4daf4a",
    "#984ea3",
    "#ff7f00",
    "#a65628",
    "#f781bf",
    "#999999",
    "#66c2a5",
    "#fc8d62",
    "#8da0cb",
    "#e78ac3",
)


def to_dot(layer: Layer, tiling: Optional[Tiling] = None) -> str:
    """DOT digraph of the layer; with a tiling, edges are colored by block.

    Without a tiling the output contains exactly one node line per slot and
    one edge line per bipartite pair of consecutive levels.  With a tiling,
    each block contributes its own bipartite edges in the block's color;
    blocks may repeat a structural edge, which DOT renders as a multi-edge.
    """
    lines = ["digraph layer {", "  rankdir=BT;", "  node [shape=circle];"]
    for level, size in zip(layer.levels(), layer.sizes):
        names = "; ".join(f"v{level}_{s}" for s in range(size))
        lines.append(f"  {{ rank=same; {names}; }}")
    for level, size in zip(layer.levels(), layer.sizes):
        for s in range(size):
            lines.append(f'  v{level}_{s} [label="{level}:{s}"];')
    if tiling is None:
        for i in range(layer.m - 1):
            lo, hi = layer.k + i, layer.k + i + 1
            for a in range(layer.sizes[i]):
                for b in range(layer.sizes[i + 1]):
                    lines.append(f"  v{lo}_{a} -> v{hi}_{b};")
    else:
        for index, block in enumerate(tiling.blocks):
            color = _DOT_PALETTE[index % len(_DOT_PALETTE)]
            for i in range(layer.m - 1):
                lo, hi = layer.k + i, layer.k + i + 1
                for a in block.subsets[i]:
                    for b in block.subsets[i + 1]:
                        lines.append(
                            f'  v{lo}_{a} -> v{hi}_{b} [color="{color}"];'
                        )
    lines.append("}")
    return "\n".join(lines) + "\n"
