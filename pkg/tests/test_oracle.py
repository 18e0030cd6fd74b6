import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from gwtoll.errors import TooLarge
from gwtoll.oracle import (
    brute_counts,
    brute_dominating,
    brute_independent,
    brute_matching,
    caterpillar,
    complete_tree,
    counts_per_node,
    dp_counts,
    enumerate_trees,
    exact_expectation,
    iter_trees,
    scan_dominating,
    scan_independent,
    scan_matching,
    variance_positivity_witness,
)
from gwtoll.sampler import exact_size_prob, make_offspring
from gwtoll.trees import build_tree, single_node

from conftest import trees


def T(*seq):
    return build_tree(list(seq))


def _counts(c):
    return (c.total, c.without_root) + ((c.star,) if c.star is not None else ())


@pytest.mark.parametrize(
    "fn,seq,want",
    [
        (brute_independent, (0,), (2, 1)),
        (brute_independent, (2, 0, 0), (5, 4)),
        (brute_independent, (1, 1, 0), (5, 3)),
        (brute_matching, (0,), (1, 1)),
        (brute_matching, (1, 0), (2, 1)),
        (brute_matching, (1, 1, 0), (3, 2)),
        (brute_dominating, (0,), (1, 0, 1)),
        (brute_dominating, (1, 0), (3, 1, 0)),
        # {r,c}, {a}, {r,a}, {a,c}, {r,a,c}
        (brute_dominating, (1, 1, 0), (5, 2, 1)),
    ],
)
def test_brute_examples(fn, seq, want):
    assert _counts(fn(T(*seq))) == want


@given(t=trees(max_degree=3, max_len=6))
@settings(max_examples=80)
def test_scan_equals_dp(t):
    for fam, scan in (("indset", scan_independent), ("matching", scan_matching), ("domset", scan_dominating)):
        assert scan(t) == dp_counts(t, fam)


def test_scan_equals_dp_exhaustive(small_trees):
    for t in small_trees:
        for fam in ("indset", "matching", "domset"):
            brute_counts(t, fam)  # raises if the two routes disagree


def test_dp_beyond_scan_range():
    t = complete_tree(2, 6)
    assert t.n == 127
    c = dp_counts(t, "indset")
    assert c.total > 2**40
    assert counts_per_node(t, "matching")[0] == (dp_counts(t, "matching").total, dp_counts(t, "matching").without_root)


def test_too_large():
    with pytest.raises(TooLarge):
        dp_counts(build_tree([1] * 2000 + [0]), "indset")
    with pytest.raises(TooLarge):
        scan_dominating(build_tree([1] * 30 + [0]))
    with pytest.raises(TooLarge):
        enumerate_trees(13)


def test_catalan_counts():
    for n in range(1, 12):
        assert sum(1 for _ in iter_trees(n)) == math.comb(2 * n - 2, n - 1) // n
    assert len(enumerate_trees(1).trees) == 1
    assert len(enumerate_trees(4).trees) == 5
    assert len(enumerate_trees(5).trees) == 14
    assert len(set(iter_trees(8))) == 429


@pytest.mark.parametrize("name", ["geometric", "poisson", "binary"])
def test_weights_sum_to_size_probability(name):
    d = make_offspring(name)
    for n in range(1, 11):
        assert enumerate_trees(n, d).pi_n == pytest.approx(exact_size_prob(d, n), rel=1e-10, abs=1e-300)


def test_exact_expectation_examples():
    mu, EF = exact_expectation("indset", "geometric", 1)
    assert mu == pytest.approx(math.log(2)) and EF == pytest.approx(math.log(2))
    for d in ("geometric", "poisson", "binary"):
        assert exact_expectation("matching", d, 1) == (0.0, 0.0)
    mu, EF = exact_expectation("indset", "geometric", 3)
    assert mu == pytest.approx((math.log(5 / 3) + math.log(5 / 4)) / 2, abs=1e-15)
    assert EF == pytest.approx(math.log(5), abs=1e-15)
    assert enumerate_trees(3).weights.tolist() == [1 / 32, 1 / 32]
    assert enumerate_trees(3).pi_n == 1 / 16


def test_witness_shapes():
    assert complete_tree(2, 3).n == 15 and caterpillar(2, 7).n == 15
    assert complete_tree(1, 3) == caterpillar(1, 3) == T(1, 1, 1, 0)


def test_witness_values():
    w1 = variance_positivity_witness(1)
    assert w1.degenerate and not w1.holds and (w1.I1, w1.I2, w1.I01, w1.I02) == (8, 8, 5, 5)
    w2 = variance_positivity_witness(2)
    assert (w2.size1, w2.size2) == (15, 15)
    assert (w2.I1, w2.I2, w2.I01, w2.I02) == (2306, 2120, 1681, 1552)
    assert w2.eta == Fraction(1681, 1552) and w2.holds
    w3 = variance_positivity_witness(3)
    assert (w3.size1, w3.size2) == (40, 40)
    assert (w3.I1, w3.I2, w3.I01, w3.I02) == (2298661010, 1460588544, 1911240521, 1209991168)
    assert w3.holds
    w4 = variance_positivity_witness(4)
    assert w4.size1 == 85
    assert w4.I1 == 542300238144346452482 and w4.I2 == 165622523964573089792
    assert w4.I01 == 493639046268679584001 and w4.I02 == 148891251391873417216


def test_witness_rejects_zero():
    with pytest.raises(ValueError):
        variance_positivity_witness(0)


def test_single_node_ratios():
    assert dp_counts(single_node(), "domset").ratios() == (Fraction(0), Fraction(1))
    assert dp_counts(single_node(), "indset").as_strings() == ["2", "1"]
