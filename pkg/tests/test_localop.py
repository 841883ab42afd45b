import pytest

from adetl.decomp import boundary_insertion_states
from adetl.dynkin import build
from adetl.exceptions import DiagramError, ModelError
from adetl.heights import HeightModel
from adetl.localop import (boundary_operator, boundary_psi, connectivity, connectivity_relations, dual_pairing,
                           fusion_check, fusion_table, literal_equation, pairing, pasquier_op, pasquier_state, phi,
                           verify_boundary_equation, verify_difference_equation)


@pytest.fixture(scope="module")
def a3():
    return HeightModel(build("A3"), 1)


@pytest.fixture(scope="module")
def a2():
    return HeightModel(build("A2"), 1)


@pytest.fixture(scope="module")
def d4():
    return HeightModel(build("D4"), 1)


###########################################
# Pasquier operators
###########################################
@pytest.mark.parametrize("nu", [1, 2, 3])
def test_phi_of_pasquier_state_is_diagonal(a3, nu):
    M = a3.periodic()
    state = pasquier_state(M, nu)
    for N in (0, 2, 4):
        assert phi(state, M, N) == pasquier_op(M, nu, N)
    assert connectivity(state, M).at(4, 1) == pasquier_op(M, nu, 4, 1)


@pytest.mark.parametrize("nu", [1, 2, 3])
def test_pasquier_relations(a3, nu):
    M = a3.periodic()
    op = connectivity(pasquier_state(M, nu), M)
    report = connectivity_relations(op, range(0, 5))
    assert report.passed
    assert report.kind == "phi"


def test_pasquier_errors(a3):
    M = a3.periodic()
    with pytest.raises(ModelError):
        pasquier_state(M, 4)
    with pytest.raises(DiagramError):
        pasquier_op(M, 1, 2, 3)
    with pytest.raises(DiagramError):
        connectivity(pasquier_state(M, 1), a3.boundary(1, 1)).at(2, 1)


###########################################
# fusion
###########################################
def test_fusion_table_a3(a3):
    table = fusion_table(a3)
    product = table.product(2, 2)
    assert sorted(product) == [1, 3]
    assert all(abs(value - 1) < 1e-9 for value in product.values())
    assert table.associativity()


def test_fusion_check(a3):
    assert fusion_check(a3.periodic(), 2).passed
    assert fusion_check(a3.periodic(), 4, 1).passed


def test_twisted_fusion(d4):
    P34 = d4.g.automorphism("P34")
    report = fusion_check(d4.periodic(), 2, K=P34)
    assert report.passed
    assert report.data["table"]["twist"] == "P34"


def test_twisted_fusion_needs_an_involution(d4):
    with pytest.raises(ModelError):
        fusion_check(d4.periodic(), 2, K=d4.g.automorphism("P134"))


###########################################
# difference equations
###########################################
def test_pairing(a3):
    assert pairing(a3, a3.field.zero()) == [(2, 1), (2, -1)]
    assert dual_pairing(a3, 2, 1) == (2, -1)


@pytest.mark.parametrize("nu, s, eps", [(1, 1, -1), (2, 2, 1), (3, 1, 1)])
def test_a3_difference_equations(a3, nu, s, eps):
    report = verify_difference_equation(a3.periodic(), nu, N=4)
    assert (report.data["s"], report.data["eps"]) == (s, eps)
    assert report.passed


@pytest.mark.parametrize("nu", [1, 2])
def test_a2_difference_equations(a2, nu):
    report = verify_difference_equation(a2.periodic(), nu, N=4)
    assert report.passed


def test_displayed_equation_s1(a2):
    M = a2.periodic()
    op = connectivity(pasquier_state(M, 2), M)
    assert literal_equation(op, 1, 1, 2).is_zero()
    assert not literal_equation(op, 1, -1, 2).is_zero()
    with pytest.raises(DiagramError):
        literal_equation(op, 4, 1, 4)


def test_difference_equation_needs_untwisted_module(a3):
    with pytest.raises(ModelError):
        verify_difference_equation(a3.periodic("R"), 1)


###########################################
# boundary operators
###########################################
@pytest.fixture(scope="module")
def psi(a3):
    (state,) = boundary_insertion_states(a3.boundary(1, 3), 1)
    return boundary_operator(state, a3.boundary(3, 2))


def test_boundary_operator_target(psi):
    assert psi.target.label == "M_A3,1,1,2"
    assert psi.matrix(1).shape == (psi.target.dim(3), 1)
    assert boundary_psi(psi.state, psi.source, 3) == psi.matrix(3)


def test_boundary_relations(psi):
    assert connectivity_relations(psi, range(0, 5)).passed


def test_boundary_equation(psi):
    report = verify_boundary_equation(psi, range(0, 4))
    assert report.passed
    assert {c.name for c in report.checks} == {"lambda-hat", "displayed-equation"}


def test_boundary_operator_errors(a3):
    (state,) = boundary_insertion_states(a3.boundary(1, 3), 1)
    with pytest.raises(ModelError):
        boundary_operator(state, a3.boundary(2, 2))
    with pytest.raises(ModelError):
        connectivity(state, a3.periodic())
