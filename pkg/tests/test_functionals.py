import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from gwtoll.functionals import (
    FunctionalFamily,
    eval_dominating,
    eval_fringe_count,
    eval_independent,
    eval_matching,
    eval_outdegree_count,
    evaluate,
    fringe_matches,
    parse_family,
    toll_value,
)
from gwtoll.oracle import dp_counts
from gwtoll.sampler import make_offspring, make_rng, sample_conditioned
from gwtoll.trees import build_tree, fringe_at

from conftest import trees

ALL_FAMILIES = ["indset", "matching", "domset", "reduction:leaf:1", "reduction:oldpath:2", "fringe:1 0", "outdeg:0"]


def T(*seq):
    return build_tree(list(seq))


# ---- worked examples


def test_independent_examples():
    ev, st = eval_independent(T(0))
    assert st.rho[0] == 0.5 and ev.F_value == pytest.approx(math.log(2))
    assert math.exp(evaluate(T(2, 0, 0), "indset").F_value) == pytest.approx(5)
    ev, st = eval_independent(T(1, 0))
    assert math.exp(ev.F_value) == pytest.approx(3) and st.rho[0] == pytest.approx(2 / 3)


def test_matching_examples():
    ev, st = eval_matching(T(0))
    assert st.rho[0] == 1.0 and ev.F_value == 0.0
    ev, st = eval_matching(T(1, 0))
    assert st.rho[0] == 0.5 and math.exp(ev.F_value) == pytest.approx(2)
    assert math.exp(evaluate(T(2, 0, 0), "matching").F_value) == pytest.approx(3)


def test_dominating_examples():
    ev, st = eval_dominating(T(0))
    assert (st.rho0[0], st.rho_star[0], ev.F_value) == (0.0, 1.0, 0.0)
    for seq, d, d0 in [((1, 0), 3, 1), ((2, 0, 0), 5, 1)]:
        ev, st = eval_dominating(T(*seq))
        assert math.exp(ev.F_value) == pytest.approx(d)
        assert st.rho0[0] == pytest.approx(d0 / d) and st.rho_star[0] == 0.0


def test_dominating_path_three():
    # {a,b,c}: {r,c},{a},{r,a},{a,c},{r,a,c} -> 5 sets, d0 = 2, d* = 1
    ev, st = eval_dominating(T(1, 1, 0))
    assert math.exp(ev.F_value) == pytest.approx(5)
    assert st.rho0[0] == pytest.approx(2 / 5) and st.rho_star[0] == pytest.approx(1 / 5)


def test_fringe_and_outdeg_examples():
    t = T(2, 1, 0, 0)
    assert eval_fringe_count(t, T(0)).F_value == 2
    assert eval_fringe_count(t, t).F_value >= 1
    assert eval_fringe_count(t, T(1, 0)).F_value == 1
    assert eval_outdegree_count(t, {0}).F_value == 2
    assert eval_outdegree_count(t, {0, 1, 2}).F_value == t.n
    assert eval_outdegree_count(t, {1}).F_value == 1


def test_toll_value_examples():
    assert toll_value("indset", T(0)) == pytest.approx(math.log(2))
    assert toll_value("matching", T(2, 0, 0)) == pytest.approx(math.log(3))
    assert toll_value("domset", T(0)) == 0.0


# ---- oracle equivalence on every tree with at most 10 nodes


@pytest.mark.parametrize("fam,ev", [("indset", eval_independent), ("matching", eval_matching), ("domset", eval_dominating)])
def test_oracle_equivalence_exhaustive(trees_upto_10, fam, ev):
    for t in trees_upto_10:
        res, st = ev(t)
        exact = dp_counts(t, fam)
        assert abs(math.exp(res.F_value) / exact.total - 1) <= 1e-9
        ratios = exact.ratios()
        got = (st.rho[0],) if fam != "domset" else (st.rho0[0], st.rho_star[0])
        for g, q in zip(got, ratios):
            assert abs(g - float(q)) <= 1e-12


def test_node_ratios_match_fractions(small_trees):
    from gwtoll.oracle import counts_per_node

    for t in small_trees[::7]:
        per = counts_per_node(t, "domset")
        _, st = eval_dominating(t)
        for v, (d, d0, ds) in enumerate(per):
            assert abs(st.rho0[v] - float(Fraction(d0, d))) <= 1e-12
            assert abs(st.rho_star[v] - float(Fraction(ds, d))) <= 1e-12


# ---- additivity and ranges


@pytest.mark.parametrize("fam", ALL_FAMILIES)
@given(t=trees())
@settings(max_examples=60)
def test_additivity(fam, t):
    whole = evaluate(t, fam)
    branches = sum(evaluate(b, fam).F_value for b in t.branches())
    assert whole.F_value == pytest.approx(branches + toll_value(fam, t), rel=1e-9, abs=1e-9)
    assert float(np.sum(whole.toll)) == pytest.approx(whole.F_value, rel=1e-9, abs=1e-12)
    for v in range(0, t.n, 3):
        assert whole.toll[v] == pytest.approx(toll_value(fam, fringe_at(t, v)), abs=1e-12)


def test_integer_families_exact(small_trees):
    for t in small_trees[::11]:
        for fam in ("reduction:path:2", "outdeg:0,2", "fringe:0"):
            ev = evaluate(t, fam)
            assert isinstance(ev.F_value, int) and ev.F_value == int(ev.toll.sum())


def _check_ranges(t):
    _, si = eval_independent(t)
    assert np.all((si.rho >= 0.5) & (si.rho <= 1.0))
    _, sm = eval_matching(t)
    assert np.all((sm.rho > 0) & (sm.rho <= 1.0))
    assert np.all(sm.rho >= 1.0 / (1.0 + t.outdeg) - 1e-15)
    ftm = -np.log(sm.rho)
    assert np.all((ftm >= 0) & (ftm <= np.log1p(t.outdeg) + 1e-12))
    _, sd = eval_dominating(t)
    assert np.all((sd.rho0 >= 0) & (sd.rho0 <= 0.5) & (sd.rho_star >= 0) & (sd.rho_star <= 1))
    leaf_child = np.zeros(t.n, dtype=bool)
    leaf_child[t.parent[1:][t.outdeg[1:] == 0]] = True
    internal = t.outdeg > 0
    assert np.array_equal(sd.rho_star[internal] == 0, leaf_child[internal])
    fd = -np.log(sd.rho0 + sd.rho_star)
    assert np.all(fd >= -math.log(1.5) - 1e-12)
    assert np.all(fd <= math.log(2) * t.outdeg + 1 + 1e-12)


@given(t=trees(max_len=80))
@settings(max_examples=200)
def test_ranges_hypothesis(t):
    _check_ranges(t)


@pytest.mark.slow
def test_ranges_fuzz_conditioned():
    rng = make_rng(123)
    dists = [make_offspring(x) for x in ("geometric", "poisson", "binary")]
    sizes = [11, 101, 1001, 10001]
    for i in range(10_000):
        d = dists[i % 3]
        n = sizes[i % 4] if i % 50 == 0 else sizes[i % 3]
        _check_ranges(sample_conditioned(d, n, rng=rng))


# ---- fringe counts


def test_linear_decomposition(small_trees):
    # f = 2 on a single node, -1 on [1,0], 3 on [2,0,0]
    support = {(0,): 2, (1, 0): -1, (2, 0, 0): 3}
    for t in small_trees[::5]:
        direct = sum(support.get(fringe_at(t, v).preorder_outdegrees(), 0) for v in range(t.n))
        combo = sum(c * eval_fringe_count(t, build_tree(s)).F_value for s, c in support.items())
        assert direct == combo


@given(t=trees(max_len=60), s=trees(max_len=8))
@settings(max_examples=150)
def test_fringe_hash_has_no_false_hits(t, s):
    mask = fringe_matches(t, s)
    want = [fringe_at(t, v) == s for v in range(t.n)]
    assert mask.tolist() == want


# ---- family parsing


def test_parse_family_forms():
    assert parse_family("indset") == FunctionalFamily.indset()
    f = parse_family("reduction:oldpath:2")
    assert f.tag == "reduction" and f.r == 2 and f.integer_valued
    assert parse_family("fringe:1 0").pattern == build_tree([1, 0])
    assert parse_family("outdeg:0,2").R == frozenset({0, 2})
    assert parse_family({"tag": "reduction", "kind": "leaf", "r": 1}) == FunctionalFamily.reduction("leaf", 1)
    assert parse_family(parse_family("domset")).tag == "domset"


@pytest.mark.parametrize("bad", ["reduction:leaf:0", "outdeg:", "fringe:1", "colouring"])
def test_parse_family_rejects(bad):
    with pytest.raises(ValueError):
        parse_family(bad)


def test_toll_array_optional():
    ev = evaluate(T(2, 0, 0), "indset", keep_toll=False)
    assert ev.toll is None and ev.F_value == pytest.approx(math.log(5))
