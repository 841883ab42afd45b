from fractions import Fraction

import numpy as np
import pytest

from adetl.dynkin import build, chebyshev_trace, coxeter_number, exponent_trace, exponents_of, parse_algebra
from adetl.exceptions import ModelError


###########################################
# Dynkin data
###########################################
@pytest.mark.parametrize("name, coxeter, exponents", [
    ("A3", 4, [1, 2, 3]),
    ("D4", 6, [1, 3, 5, 3]),
    ("D5", 8, [1, 3, 5, 7, 4]),
    ("E6", 12, [1, 4, 5, 7, 8, 11]),
])
def test_coxeter_numbers_and_exponents(name, coxeter, exponents):
    g = build(name)
    assert g.coxeter == coxeter
    assert g.exponents == exponents


def test_e_family_coxeter_numbers():
    assert coxeter_number("E", 7) == 18
    assert coxeter_number("E", 8) == 30
    assert exponents_of("E", 8)[-1] == 29


@pytest.mark.parametrize("text", ["E9", "D3", "B2", "A0"])
def test_invalid_algebras(text):
    with pytest.raises(ModelError):
        parse_algebra(text)


def test_parse_spellings():
    assert parse_algebra("a_3") == ("A", 3)
    assert parse_algebra("E6") == ("E", 6)


def test_eigenvectors_are_unnormalized():
    g = build("A3")
    assert g.S(1, 1) == 1
    assert g.S(2, 1) ** 2 == 2
    assert g.S(3, 1) == 1
    # every S_mu is an eigenvector with eigenvalue beta_mu
    for mu in g.nodes:
        for a in g.nodes:
            total = sum((g.S(b, mu) for b in g.neighbors(a)), g.field.zero())
            assert total == g.S(a, mu) * g.beta(mu)


def test_normalized_eigenvectors():
    vec = build("A3").normalized_eigvecs()[1]
    assert np.allclose(vec, [0.5, np.sqrt(2) / 2, 0.5])


def test_allowed_exponents():
    g = build("A3")
    assert [mu for mu in g.nodes if g.is_allowed_mu(mu)] == [1, 3]
    with pytest.raises(ModelError):
        g.check_mu(2)
    with pytest.raises(ModelError):
        g.check_mu(7)


def test_bipartite_coloring():
    g = build("E6")
    for a, b in g.graph.edges:
        assert g.coloring[a] != g.coloring[b]


###########################################
# automorphisms
###########################################
def test_conjugacy_class_representatives():
    assert [K.name for K in build("D4").automorphisms()] == ["id", "P34", "P134"]
    assert [K.name for K in build("A3").automorphisms()] == ["id", "R"]
    assert [K.name for K in build("E6").automorphisms()] == ["id", "P"]
    assert [K.name for K in build("E7").automorphisms()] == ["id"]


def test_automorphism_orders_and_fixed_nodes():
    g = build("D4")
    assert g.automorphism("P134").order == 3
    assert g.automorphism("P34").fixed_nodes() == [1, 2]
    assert g.compose(g.automorphism("P134"), g.automorphism("P134")).perm == g.automorphism("P143").perm
    assert not g.commutes(g.automorphism("P34"), g.automorphism("P134"))
    with pytest.raises(ModelError):
        g.automorphism("R")


def test_kappa_signs():
    g = build("A2")
    R = g.automorphism("R")
    assert g.kappa(R, 1) == 1
    assert g.kappa(R, 2) == -1
    assert build("D4").kappa(build("D4").automorphism("P134"), 1) == 1


@pytest.mark.parametrize("name, K, exponents", [
    ("A3", "R", [2]),
    ("D4", "P34", [2, 4]),
    ("E6", "P", [4, 8]),
])
def test_fixed_subgraph_exponents(name, K, exponents):
    g = build(name)
    fixed = g.fixed_subgraph(g.automorphism(K))
    assert fixed.exponents == exponents
    assert fixed.S(fixed.nodes[0], 1) == 1


def test_fixed_subgraph_empty():
    g = build("A2")
    assert g.fixed_subgraph(g.automorphism("R")).is_empty()


###########################################
# fused adjacency and traces
###########################################
def test_fused_adjacency_chebyshev_recursion():
    g = build("A3")
    assert np.array_equal(g.fused_adjacency(1), np.eye(3, dtype=np.int64))
    assert np.array_equal(g.fused_adjacency(2), g.adjacency)
    assert np.array_equal(g.fused_adjacency(3), np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]]))
    assert np.array_equal(g.fused_adjacency(-2), -g.adjacency)
    assert not g.fused_adjacency(4).any()


@pytest.mark.parametrize("name", ["A3", "D5", "E6"])
def test_chebyshev_trace_matches_exponents(name):
    g = build(name)
    for s in range(4):
        assert exponent_trace(g, s) == chebyshev_trace(g, s)


def test_chebyshev_trace_value():
    assert chebyshev_trace(build("A3"), 1) == Fraction(-1)
    assert chebyshev_trace(build("A3"), 0) == Fraction(3)


def test_to_dict():
    data = build("E6").to_dict()
    assert data["exponents"] == [1, 4, 5, 7, 8, 11]
    assert data["allowed_mu"] == [1, 3, 4, 6]
    assert len(data["adjacency"]) == 6
