from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grcp.errors import NotGenerated, PreconditionError, UnsupportedInstance
from grcp.exactlin import GF, QQ
from grcp.graded import check_grading
from grcp.groupoid import groupoid_from_relation, random_groupoid
from grcp.instances.boundary import ESTAR_H0, ESTAR_H1, ESTAR_HM1, boundary_path_groupoid, parse_arrow
from grcp.instances.graph import Graph, estar_graph
from grcp.report import FAIL, PASS
from grcp.steinberg import (
    HTriple,
    check_decomposition,
    check_htriple_generation,
    check_htriple_hypothesis,
    check_htriple_products,
    check_unperforated,
    decompose_indicator,
    indicator,
    random_bisection,
    steinberg_algebra,
    steinberg_annihilator,
    steinberg_realization_data,
)

G = boundary_path_groupoid(estar_graph())


def arrows(xs):
    return [parse_arrow(x) for x in xs]


H = HTriple.of(arrows(ESTAR_H0), arrows(ESTAR_H1), arrows(ESTAR_HM1))


# examples


def test_boundary_groupoid_shape():
    assert len(G) == 25 and len(G.units) == 5
    assert G.check_axioms() is None and G.check_cocycle() is None
    assert G.cocycle_range() == (-2, 2)
    assert len(G.orbits()) == 1


def test_boundary_groupoid_needs_acyclic():
    loop = Graph(("v",), ("e",), {"e": "v"}, {"e": "v"})
    with pytest.raises(UnsupportedInstance):
        boundary_path_groupoid(loop)


def test_parse_arrow():
    assert parse_arrow(" (ef, 1, f) ") == ("ef", 1, "f")
    with pytest.raises(ValueError):
        parse_arrow("ef,1,f")


def test_standard_htriple_passes():
    for check in (check_htriple_products, check_htriple_hypothesis, check_htriple_generation):
        assert check(G, H).status == PASS


def test_inverse_gap_reported():
    sr = steinberg_realization_data(G, H)
    assert ("g", -1, "ef") in sr.inverse_gap
    assert sr.remark.status == "not-applicable"


def test_inverse_closed_case_passes():
    full = HTriple.full(G)
    sr = steinberg_realization_data(G, full)
    assert sr.remark.status == PASS and not sr.inverse_gap


def test_annihilator_and_unperforated():
    res = steinberg_annihilator(G, H.H0, H.H1)
    assert res.equal
    assert [next(iter(b)) for b in res.formula.basis] == [("v", 0, "v")]
    assert check_unperforated(G).status == PASS


def test_steinberg_algebra_is_graded():
    A = steinberg_algebra(G, GF(5))
    assert check_grading(A).ok
    assert sum(len(A.basis(n)) for n in A.window.degrees()) == 25


# fault injection


def test_fault_missing_unit_breaks_products():
    bad = HTriple.of(H.H0 - {("v", 0, "v")}, H.H1, H.Hm1)
    v = check_htriple_products(G, bad)
    assert v.status == FAIL and v.data["rule"] == "H-1 H1 in H0"
    assert G.compose(v.data["left"], v.data["right"]) == v.data["product"]
    assert v.data["product"] not in bad.H0
    with pytest.raises(PreconditionError):
        steinberg_realization_data(G, bad)


def test_fault_wrong_degree():
    bad = HTriple.of(H.H0, H.H1 | {("f", 0, "f")}, H.Hm1)
    assert check_htriple_products(G, bad).status == FAIL


def test_fault_product_not_closed():
    bad = HTriple.of(H.H0 | {("g", 0, "f")}, H.H1, H.Hm1)
    v = check_htriple_products(G, bad)
    assert v.status == FAIL and v.data["product"] not in v.data["target"]


def test_fault_hypothesis():
    K = groupoid_from_relation([[0, 1]])
    bad = HTriple.of({(0, 1, 0)}, set(), set())
    v = check_htriple_hypothesis(K, bad)
    assert v.status == FAIL and v.data["source"] == (1, 1, 0)


def test_fault_generation():
    bad = HTriple.of({("v", 0, "v")}, {("f", 1, "v")}, {("v", -1, "f")})
    v = check_htriple_generation(G, bad)
    assert v.status == FAIL and v.data["missing"]


def test_fault_perforated():
    K = groupoid_from_relation([[0, 1]], {0: 2})
    v = check_unperforated(K)
    assert v.status == FAIL and v.data["degree"] == 2


def test_decomposition_not_generated():
    with pytest.raises(NotGenerated):
        decompose_indicator(G, [("ef", 2, "v")], [H.H0])


def test_decomposition_rejects_non_bisection():
    with pytest.raises(PreconditionError):
        decompose_indicator(G, [("f", 0, "f"), ("f", 0, "g")], [H.H0, H.H1, H.Hm1])


@pytest.mark.parametrize("strategy", ["singleton", "maximal"])
@pytest.mark.parametrize("fixed", [False, True])
def test_decompose_estar(strategy, fixed):
    C = frozenset([("ef", 1, "f"), ("eg", 2, "v"), ("g", 0, "g")])
    Ds = [H.H0, H.H1, H.Hm1]
    if fixed:
        C = frozenset([("f", 0, "g"), ("eg", 0, "ef")])
    dec = decompose_indicator(G, C, Ds, fixed, strategy)
    assert check_decomposition(G, dec, Ds) is None
    assert dec.evaluate(G) == indicator(C, QQ)


# properties


@given(st.integers(0, 10_000), st.sampled_from(["singleton", "maximal"]))
def test_decomposition_on_random_groupoids(seed, strategy):
    rng = random.Random(seed)
    K = random_groupoid(rng)
    assert K.check_axioms() is None and K.check_cocycle() is None
    Ds = [K.degree(n) for n in sorted(set(K.cocycle.values()))]
    C = random_bisection(K, rng)
    assert K.is_bisection(C)
    dec = decompose_indicator(K, C, Ds, strategy=strategy)
    assert check_decomposition(K, dec, Ds) is None


@given(st.integers(0, 10_000))
def test_annihilator_formula_matches_brute_force(seed):
    rng = random.Random(seed)
    K = random_groupoid(rng)
    H0 = {g for g in K.degree(0) if rng.random() < 0.6}
    H1 = {g for g in K.arrows if rng.random() < 0.4}
    assert steinberg_annihilator(K, H0, H1).equal


@given(st.integers(0, 10_000))
def test_random_steinberg_algebras_are_graded(seed):
    K = random_groupoid(random.Random(seed), max_arrows=12)
    assert check_grading(steinberg_algebra(K)).ok
