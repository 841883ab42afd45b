from fractions import Fraction

import pytest

from adetl.diagram import generator
from adetl.exceptions import DiagramError, InsertionStateError
from adetl.linkmod import (D_k, LinkFamily, QuotientModule, check_insertion_state, d_k, insertion_map,
                           normalize_twist, quotient_dimension_V, standard_dimension)
from adetl.scalars import RootOfUnity, make_field
from adetl.utils import SparseOp, vec_equal


@pytest.fixture(scope="module")
def roots():
    # Ising point, (p, p') = (3, 4)
    return RootOfUnity(make_field(4), 4, 3)


###########################################
# dimensions
###########################################
def test_d_k():
    assert d_k(4, 0) == 6
    assert d_k(4, 1) == 4
    assert d_k(4, 2) == 1
    assert d_k(3, Fraction(1, 2)) == 3
    assert d_k(4, Fraction(1, 2)) == 0
    assert d_k(2, 2) == 0


def test_D_k_sums_over_the_period():
    assert D_k(8, 0, 4) == d_k(8, 0) + d_k(8, 4)
    assert D_k(6, 1, 4) == d_k(6, 1)


def test_standard_dimensions():
    assert standard_dimension("V", 4, 0) == 2
    assert standard_dimension("V", 4, 1) == 3
    assert standard_dimension("W", 4, 0) == 6


@pytest.mark.parametrize("N, k, expected", [
    (2, 0, 1), (4, 0, 2), (6, 0, 4),
    (2, 1, 1), (4, 1, 2),
])
def test_quotient_dimensions_at_pprime_4(N, k, expected):
    assert quotient_dimension_V(N, k, 4) == expected


###########################################
# link states
###########################################
def test_link_states(roots):
    V0 = LinkFamily("V", 0, roots.field, roots.beta)
    V1 = LinkFamily("V", 1, roots.field, roots.beta)
    Vh = LinkFamily("V", Fraction(1, 2), roots.field, roots.beta)
    assert [str(st) for st in V0.states(2)] == ["()"]
    assert [str(st) for st in V1.states(2)] == ["||"]
    assert [str(st) for st in Vh.states(3)] == ["|()", "()|"]
    assert V0.dim(3) == 0


def test_periodic_states_cross_the_seam(roots):
    W = LinkFamily("W", 0, roots.field, roots.beta, roots.power(1))
    assert [str(st) for st in W.states(2)] == ["()", ")("]


@pytest.mark.parametrize("kind, k, N", [("V", 0, 4), ("V", 1, 4), ("V", 0, 6), ("W", 0, 4), ("W", 1, 4)])
def test_family_dimensions(roots, kind, k, N):
    x = roots.power(1) if kind == "W" else None
    family = LinkFamily(kind, k, roots.field, roots.beta, x)
    assert family.dim(N) == standard_dimension(kind, N, k)


def test_family_errors(roots):
    with pytest.raises(DiagramError):
        LinkFamily("U", 0, roots.field, roots.beta)
    with pytest.raises(DiagramError):
        LinkFamily("W", 0, roots.field, roots.beta)
    with pytest.raises(DiagramError):
        LinkFamily("V", Fraction(1, 3), roots.field, roots.beta)


def test_arc_closing_gives_beta(roots):
    V0 = LinkFamily("V", 0, roots.field, roots.beta)
    e1 = V0.operator(generator("e", 2, 1, roots.beta))
    assert vec_equal(e1.apply({0: roots.field.one()}), {0: roots.beta})


###########################################
# twists and quotients
###########################################
def test_normalize_twist(roots):
    q = roots.power(1)
    assert normalize_twist(0, q, roots) == (1, 1)
    assert normalize_twist(0, -q, roots) == (-1, 1)
    # q^-1 = -q^3 at p odd
    assert normalize_twist(0, q.inverse(), roots) == (-1, 3)
    assert normalize_twist(0, roots.field.one(), roots) is None


@pytest.mark.parametrize("k, sizes", [(0, (2, 4, 6)), (1, (2, 4))])
def test_quotient_module_dimensions(roots, k, sizes):
    Q = QuotientModule(LinkFamily("V", k, roots.field, roots.beta), roots)
    for N in sizes:
        assert Q.dim(N) == quotient_dimension_V(N, k, roots.pprime)
    assert Q.label == f"Q_{k}"


###########################################
# insertion maps
###########################################
def test_insertion_of_the_family_into_itself(roots):
    V1 = LinkFamily("V", 1, roots.field, roots.beta)
    check_insertion_state(V1, V1.u_k, V1)
    image = insertion_map(V1, V1.u_k, V1, 4)
    assert image == SparseOp.identity(V1.dim(4), roots.field.one())


def test_insertion_state_errors(roots):
    V0 = LinkFamily("V", 0, roots.field, roots.beta)
    V1 = LinkFamily("V", 1, roots.field, roots.beta)
    with pytest.raises(InsertionStateError):
        check_insertion_state(V0, {0: roots.field.one()}, V1)
    with pytest.raises(InsertionStateError):
        check_insertion_state(V1, {}, V1)
