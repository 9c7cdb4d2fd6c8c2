"""Tilers, verifier, exhaustive enumeration, counters, triangles."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobweb import errors, fseq, poset, tiling


def _blocks(t):
    return tuple(b.subsets for b in t.blocks)


# ---------------------------------------------------------------------------
# constructive tilers

def test_policy_validation():
    with pytest.raises(ValueError):
        tiling.TilePolicy(mode="nope")
    with pytest.raises(ValueError):
        tiling.tile_additive(fseq.natural(), 2, 3, tiling.TilePolicy("enumerate-all"))


def test_tile_additive_smallest_split():
    t = tiling.tile_additive(fseq.natural(), 2, 3)
    assert _blocks(t) == (
        ((0,), (0, 1)),
        ((0, 1), (2,)),
        ((1,), (0, 1)),
    )
    assert tiling.verify_tiling(t) is None


def test_tile_fibonacci_matching_layer():
    t = tiling.tile_fibonacci(fseq.fibonacci(), 3, 4)
    assert _blocks(t) == (
        ((0,), (0,)),
        ((0,), (1,)),
        ((0,), (2,)),
        ((1,), (0,)),
        ((1,), (1,)),
        ((1,), (2,)),
    )
    assert tiling.verify_tiling(t) is None


def test_tile_grids_satisfy_block_count_law():
    nat = fseq.natural()
    for k in range(1, 7):
        for n in range(k, 7):
            t = tiling.tile_additive(nat, k, n)
            assert tiling.verify_tiling(t) is None, (k, n)
            law = fseq.fnomial(nat, n, n - k + 1)
            assert len(t.blocks) == law.value, (k, n)
    fib = fseq.fibonacci()
    for k in range(1, 8):
        for n in range(k, 8):
            t = tiling.tile_fibonacci(fib, k, n)
            assert tiling.verify_tiling(t) is None, (k, n)
            law = fseq.fnomial(fib, n, n - k + 1)
            assert len(t.blocks) == law.value, (k, n)


def test_seeded_policy_is_deterministic_and_valid():
    p42 = tiling.TilePolicy("seeded-random", 42)
    t1 = tiling.tile_additive(fseq.natural(), 2, 5, p42)
    t2 = tiling.tile_additive(fseq.natural(), 2, 5, tiling.TilePolicy("seeded-random", 42))
    assert _blocks(t1) == _blocks(t2)
    assert tiling.verify_tiling(t1) is None
    t3 = tiling.tile_fibonacci(fseq.fibonacci(), 2, 6, p42)
    assert tiling.verify_tiling(t3) is None


def test_identity_precondition_enforced():
    with pytest.raises(errors.IdentityError) as err:
        tiling.tile_additive(fseq.fibonacci(), 2, 4)
    assert err.value.which == 1
    assert err.value.witness == (2, 2)
    with pytest.raises(errors.IdentityError) as err:
        tiling.tile_fibonacci(fseq.natural(), 2, 4)
    assert err.value.which == 2
    assert err.value.witness == (2, 1)


def test_prime_and_one_level_layers_need_no_identity():
    c5 = fseq.constant(5)
    assert not tiling.needs_identity(c5, 3, 4)
    t = tiling.tile_additive(c5, 3, 4)
    assert len(t.blocks) == 1
    assert tiling.verify_tiling(t) is None
    t = tiling.tile_additive(c5, 3, 3)
    assert len(t.blocks) == 1
    assert tiling.verify_tiling(t) is None
    # bottom level 1 reproduces the prime layer
    t = tiling.tile_fibonacci(fseq.fibonacci(), 1, 5)
    assert len(t.blocks) == 1


def test_detect_variant():
    assert tiling.detect_variant(fseq.natural(), 2, 4)[0] == "additive"
    assert tiling.detect_variant(fseq.fibonacci(), 2, 5)[0] == "fibonacci"
    assert tiling.detect_variant(fseq.constant(5), 3, 4)[0] == "additive"
    prod = fseq.product(fseq.periodic(2, 2), fseq.periodic(3, 3))
    variant, w1, w2 = tiling.detect_variant(prod, 5, 7)
    assert variant is None
    assert w1 == (2, 2)
    assert w2 == (2, 1)


def test_chain_cap_respected():
    with pytest.raises(errors.CapExceeded) as err:
        tiling.tile_additive(fseq.natural(), 2, 5, chain_cap=100)
    assert err.value.cap_name == "chains"
    assert err.value.needed == 120


# ---------------------------------------------------------------------------
# choice streams

def test_additive_stream_counts_match_counter():
    nat = fseq.natural()
    for n in range(1, 6):
        for k in range(1, n + 1):
            got = sum(1 for _ in tiling.iter_tiling_choices_additive(nat, k, n))
            assert got == tiling.count_tilings_additive(nat, n, k), (k, n)


def test_fibonacci_stream_counts_match_derived_counter():
    fib = fseq.fibonacci()
    expected = {(2, 4): 3, (2, 5): 30, (3, 5): 45}
    for (k, n), want in expected.items():
        stream = list(tiling.iter_tiling_choices_fibonacci(fib, k, n))
        assert len(stream) == want
        assert len(stream) == tiling.count_tilings_fibonacci(fib, n, k, mode="derived")
        for t in stream:
            assert tiling.verify_tiling(t) is None


def test_streams_yield_distinct_sorted_tilings():
    stream = list(tiling.iter_tiling_choices_additive(fseq.natural(), 2, 4))
    raw = [_blocks(t) for t in stream]
    assert raw == sorted(raw)
    assert len(set(raw)) == len(raw)


def test_stream_identity_precondition():
    with pytest.raises(errors.IdentityError):
        list(tiling.iter_tiling_choices_additive(fseq.fibonacci(), 2, 4))


# ---------------------------------------------------------------------------
# verifier clauses

def _natural_23_blocks():
    return [
        poset.BlockPlacement(subsets=((0,), (0, 1))),
        poset.BlockPlacement(subsets=((1,), (0, 1))),
        poset.BlockPlacement(subsets=((0, 1), (2,))),
    ]


def test_verify_accepts_valid_tiling():
    layer = poset.build_layer(fseq.natural(), 2, 3)
    assert tiling.verify_tiling(poset.make_tiling(layer, _natural_23_blocks())) is None


def test_verify_block_sizes_clause():
    layer = poset.build_layer(fseq.natural(), 2, 3)
    blocks = _natural_23_blocks()
    blocks[0] = poset.BlockPlacement(subsets=((0, 1), (0, 1)))
    v = tiling.verify_tiling(poset.make_tiling(layer, blocks))
    assert v is not None and v.clause == "block-sizes"


def test_verify_rejects_out_of_range_slot():
    layer = poset.build_layer(fseq.natural(), 2, 3)
    blocks = _natural_23_blocks()
    blocks[0] = poset.BlockPlacement(subsets=((5,), (0, 1)))
    v = tiling.verify_tiling(poset.make_tiling(layer, blocks))
    assert v is not None and v.clause == "block-sizes"


def test_verify_shared_chain_clause():
    layer = poset.build_layer(fseq.natural(), 2, 3)
    blocks = _natural_23_blocks()
    blocks[1] = poset.BlockPlacement(subsets=((0,), (0, 2)))
    v = tiling.verify_tiling(poset.make_tiling(layer, blocks))
    assert v is not None and v.clause == "shared-chain"


def test_verify_uncovered_chain_clause():
    layer = poset.build_layer(fseq.natural(), 2, 3)
    v = tiling.verify_tiling(poset.make_tiling(layer, _natural_23_blocks()[:2]))
    assert v is not None and v.clause == "uncovered-chain"
    assert v.witness == (0, 2)


# ---------------------------------------------------------------------------
# exhaustive enumeration

def test_enumeration_exact_counts():
    nat = fseq.natural()
    expected = {(1, 3): 1, (2, 3): 4, (2, 4): 32, (3, 4): 132}
    for (k, n), want in expected.items():
        layer = poset.build_layer(nat, k, n)
        res = tiling.enumerate_tilings(layer)
        assert res.count == want, (k, n)
        assert res.complete and not res.truncated
        assert res.tilings is None


def test_enumeration_dominates_constructive_counter():
    nat = fseq.natural()
    for (k, n) in [(2, 3), (2, 4), (3, 4), (2, 5), (4, 5)]:
        layer = poset.build_layer(nat, k, n)
        res = tiling.enumerate_tilings(layer)
        assert res.count >= tiling.count_tilings_additive(nat, n, k), (k, n)


def test_enumeration_zero_for_unstructured_product():
    prod = fseq.product(fseq.periodic(2, 2), fseq.periodic(3, 3))
    layer = poset.build_layer(prod, 5, 7)
    assert layer.sizes == (1, 6, 1)
    res = tiling.enumerate_tilings(layer)
    assert res.count == 0


def test_enumeration_listing_and_truncation():
    layer = poset.build_layer(fseq.natural(), 2, 3)
    res = tiling.enumerate_tilings(layer, limit=10)
    assert res.count == 4 and len(res.tilings) == 4 and not res.truncated
    for t in res.tilings:
        assert tiling.verify_tiling(t) is None
    raw = [_blocks(t) for t in res.tilings]
    assert raw == sorted(raw)
    res = tiling.enumerate_tilings(layer, limit=2)
    assert res.count == 4 and len(res.tilings) == 2 and res.truncated


def test_enumeration_worker_invariance():
    layer = poset.build_layer(fseq.natural(), 3, 4)
    results = [
        tiling.enumerate_tilings(layer, limit=500, workers=w) for w in (1, 2, 4)
    ]
    counts = {r.count for r in results}
    assert counts == {132}
    listings = [[_blocks(t) for t in r.tilings] for r in results]
    assert listings[0] == listings[1] == listings[2]


def test_enumeration_node_cap():
    layer = poset.build_layer(fseq.natural(), 3, 4)
    with pytest.raises(errors.CapExceeded) as err:
        tiling.enumerate_tilings(layer, node_cap=50)
    assert err.value.cap_name == "nodes"
    assert err.value.partial_count is not None
    with pytest.raises(ValueError):
        tiling.enumerate_tilings(layer, workers=0)


def test_enumeration_respects_placement_cap():
    layer = poset.build_layer(fseq.natural(), 3, 4)
    with pytest.raises(errors.CapExceeded) as err:
        tiling.enumerate_tilings(layer, placement_cap=5)
    assert err.value.cap_name == "placements"


# ---------------------------------------------------------------------------
# counters and bounds

def test_count_additive_values():
    nat = fseq.natural()
    expected = {
        (3, 2): 3,
        (4, 2): 12,
        (4, 3): 18,
        (5, 2): 60,
        (5, 3): 2160,
        (5, 4): 180,
    }
    for (n, k), want in expected.items():
        assert tiling.count_tilings_additive(nat, n, k) == want
    for n in range(1, 8):
        assert tiling.count_tilings_additive(nat, n, 1) == 1
        assert tiling.count_tilings_additive(nat, n, n) == 1


def test_count_additive_requires_identity():
    with pytest.raises(errors.IdentityError):
        tiling.count_tilings_additive(fseq.fibonacci(), 4, 2)
    # boundary cells skip the identity check entirely
    assert tiling.count_tilings_additive(fseq.fibonacci(), 4, 4) == 1
    assert tiling.count_tilings_additive(fseq.fibonacci(), 4, 1) == 1


def test_count_fibonacci_modes():
    fib = fseq.fibonacci()
    derived = {
        (5, 2): 30, (5, 3): 45,
        (6, 2): 1680, (6, 3): 510300000, (6, 4): 18900,
        (7, 2): 2162160, (7, 5): 5108103000,
    }
    for (n, k), want in derived.items():
        assert tiling.count_tilings_fibonacci(fib, n, k, mode="derived") == want
    paper = {(5, 2): 60, (5, 3): 90, (6, 2): 20160, (6, 4): 226800}
    for (n, k), want in paper.items():
        assert tiling.count_tilings_fibonacci(fib, n, k, mode="paper") == want
    for n in range(1, 8):
        for k in (1, n - 1, n):
            if 1 <= k <= n:
                assert tiling.count_tilings_fibonacci(fib, n, k) == 1
    with pytest.raises(ValueError):
        tiling.count_tilings_fibonacci(fib, 5, 2, mode="nope")
    with pytest.raises(errors.IdentityError):
        tiling.count_tilings_fibonacci(fseq.natural(), 5, 2)


def test_stirling_lambda():
    assert tiling.stirling_lambda(6, 3, 2) == 15
    assert tiling.stirling_lambda(7, 3, 2) == 0
    assert tiling.stirling_lambda(0, 0, 0) == 1
    assert tiling.stirling_lambda(0, 0, 5) == 1
    assert tiling.stirling_lambda(0, 3, 0) == 0
    assert tiling.stirling_lambda(4, 2, 2) == 3
    with pytest.raises(ValueError):
        tiling.stirling_lambda(-1, 1, 1)


def test_equal_block_bound():
    nat = fseq.natural()
    assert tiling.equal_block_bound(nat, 3, 2) == 15
    with pytest.raises(errors.NonIntegralError):
        tiling.equal_block_bound(fseq.explicit(["1", "3", "2"]), 2, 2)


def test_upper_bound_check():
    nat = fseq.natural()
    chk = tiling.check_count_upper_bound(nat, 3, 2)
    assert chk == tiling.UpperBoundCheck(
        holds=True, lhs=3, rhs=15, eta=6, kappa=3, lam=2
    )
    for n in range(1, 7):
        for k in range(1, n + 1):
            chk = tiling.check_count_upper_bound(nat, n, k)
            assert chk.holds, (n, k)
            assert chk.eta == chk.kappa * chk.lam


# ---------------------------------------------------------------------------
# triangles

def test_triangle_fnomial_is_pascal_for_natural():
    table = tiling.triangle(fseq.natural(), "fnomial", 5, include_zero=True)
    from math import comb

    for n in range(1, 6):
        for k in range(n + 1):
            assert table.cells[(n, k)] == comb(n, k)
    assert not table.notes


def test_triangle_additive_boundaries():
    table = tiling.triangle(fseq.natural(), "additive", 4)
    for n in range(1, 5):
        assert table.cells[(n, 1)] == 1
        assert table.cells[(n, n)] == 1
    assert table.cells[(4, 2)] == 12
    assert table.cells[(4, 3)] == 18


def test_triangle_annotates_failing_cells():
    table = tiling.triangle(fseq.fibonacci(), "additive", 4)
    assert (4, 2) in table.notes
    assert (4, 2) not in table.cells
    csv = table.to_csv()
    assert csv.startswith("n,k,value\n")
    assert "!" in csv
    # annotations never add CSV columns
    for line in csv.strip().split("\n")[1:]:
        assert line.count(",") == 2


def test_triangle_csv_exact():
    table = tiling.triangle(fseq.fibonacci(), "fnomial", 4, include_zero=True)
    lines = table.to_csv().strip().split("\n")
    assert lines[0] == "n,k,value"
    assert lines[-5:] == ["4,0,1", "4,1,3", "4,2,6", "4,3,3", "4,4,1"]


def test_triangle_text_alignment():
    text = tiling.triangle(fseq.natural(), "additive", 4).to_text()
    rows = text.strip().split("\n")
    assert len(rows) == 4
    assert rows[3].split("|")[1].split() == ["1", "12", "18", "1"]


def test_triangle_equal_blocks():
    table = tiling.triangle(fseq.fibonacci(), "equal-blocks", 5)
    # bound applies without any identity requirement
    assert not table.notes
    assert table.cells[(5, 2)] >= 30


def test_triangle_validation():
    with pytest.raises(ValueError):
        tiling.triangle(fseq.natural(), "nope", 3)
    with pytest.raises(ValueError):
        tiling.triangle(fseq.natural(), "fnomial", 0)
    with pytest.raises(errors.CapExceeded):
        tiling.triangle(fseq.natural(), "fnomial", 10, row_cap=5)


# ---------------------------------------------------------------------------
# properties

_policy_seeds = st.integers(0, 10_000)


@given(_policy_seeds, st.integers(2, 5), st.integers(0, 2))
@settings(max_examples=40, deadline=None)
def test_random_policy_tilings_always_verify(seed, k, extra):
    n = min(k + extra, 6)
    t = tiling.tile_additive(
        fseq.natural(), k, n, tiling.TilePolicy("seeded-random", seed)
    )
    assert tiling.verify_tiling(t) is None


@given(_policy_seeds, st.integers(1, 4), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_random_policy_fibonacci_tilings_always_verify(seed, k, extra):
    n = min(k + extra, 7)
    t = tiling.tile_fibonacci(
        fseq.fibonacci(), k, n, tiling.TilePolicy("seeded-random", seed)
    )
    assert tiling.verify_tiling(t) is None
