import pytest

from adetl.diagram import (AffineDiagram, c_diagram, compose_diagrams, decode, factorize, from_word, generator,
                           identity_diagram, omega_diagram, planar_diagrams, transfer_diagram, word)
from adetl.exceptions import DiagramError
from adetl.scalars import loop_weight, make_field, model_q


@pytest.fixture(scope="module")
def beta():
    # A3 weight, beta = sqrt(2)
    return loop_weight(model_q(make_field(4), 4, 3))


###########################################
# text form
###########################################
def test_encode_identity():
    assert identity_diagram(2).encode() == "2;2;O1-I1,O2-I2;0"


def test_encode_seam_crossing():
    assert c_diagram(0, 2).encode() == "0;2;I1-I2:-1;0"


@pytest.mark.parametrize("diagram", [
    identity_diagram(3),
    c_diagram(0, 4),
    c_diagram(2, 4).dagger(),
    omega_diagram(3, -2),
    AffineDiagram(0, 0, (), 2),
])
def test_decode_inverts_encode(diagram):
    assert decode(diagram.encode()) == diagram


@pytest.mark.parametrize("text", ["garbage", "2;2;O1-I1;0", "1;1;X1-I1;0"])
def test_decode_rejects_bad_text(text):
    with pytest.raises(DiagramError):
        decode(text)


def test_dagger_is_an_involution():
    d = compose_diagrams(omega_diagram(2, 1), c_diagram(1, 4))[0]
    assert d.dagger().dagger() == d
    assert (d.dagger().n_out, d.dagger().n_in) == (4, 2)


###########################################
# relations
###########################################
@pytest.mark.parametrize("N, j", [(2, 0), (3, 1), (4, 0), (4, 3)])
def test_e_is_quasi_idempotent(beta, N, j):
    e = generator("e", N, j, beta)
    assert e @ e == e * beta


def test_braid_and_far_commutation(beta):
    e = [generator("e", 4, j, beta) for j in range(4)]
    assert e[1] @ e[2] @ e[1] == e[1]
    assert e[3] @ e[0] @ e[3] == e[3]
    assert e[0] @ e[2] == e[2] @ e[0]


def test_rotation_shifts_generators(beta):
    omega = generator("Omega", 4, beta=beta)
    omega_inv = generator("Omegainv", 4, beta=beta)
    assert omega @ omega_inv == generator("id", 4, beta=beta)
    assert omega @ generator("e", 4, 2, beta) @ omega_inv == generator("e", 4, 1, beta)
    assert omega @ generator("e", 4, 1, beta) @ omega_inv == generator("e", 4, 0, beta)


def test_full_rotation_is_not_the_identity(beta):
    full = word([("Omega", 1, 3)] * 3, beta)
    assert full == generator("Omega", 3, 3, beta)
    assert not full == generator("id", 3, beta=beta)


def test_cap_cup_products(beta):
    for j in (0, 1):
        product = generator("c", 2, j, beta) @ generator("cdag", 2, j, beta)
        assert product == generator("id", 0, beta=beta) * beta
    # a cap closing a cup across the seam leaves a non-contractible loop
    assert generator("c", 2, 1, beta) @ generator("cdag", 2, 0, beta) == generator("f", 0, 1, beta)


def test_generator_errors(beta):
    with pytest.raises(DiagramError):
        generator("e", 1, 0, beta)
    with pytest.raises(DiagramError):
        generator("f", 2, 1, beta)
    with pytest.raises(DiagramError):
        generator("E", 3, beta=beta)
    with pytest.raises(DiagramError):
        generator("x", 2, 0, beta)
    with pytest.raises(DiagramError):
        generator("id", 2)


def test_compose_size_mismatch():
    with pytest.raises(DiagramError):
        compose_diagrams(identity_diagram(2), identity_diagram(3))


###########################################
# enumeration and factorization
###########################################
@pytest.mark.parametrize("n, catalan", [(1, 1), (2, 2), (3, 5), (4, 14)])
def test_planar_square_diagrams_are_catalan(n, catalan):
    assert len(planar_diagrams(n, n)) == catalan
    assert all(d.is_planar for d in planar_diagrams(n, n))


@pytest.mark.parametrize("n_out, n_in", [(0, 4), (2, 4), (4, 4), (1, 3)])
def test_factorize_round_trips_planar(n_out, n_in):
    for d in planar_diagrams(n_out, n_in):
        assert from_word(factorize(d), n_in) == d


def test_factorize_rotations():
    assert factorize(identity_diagram(3)) == ()
    assert factorize(omega_diagram(3, 1)) == (("Omega", 1, 3),)
    twisted = compose_diagrams(omega_diagram(2, 1), c_diagram(1, 4))[0]
    assert from_word(factorize(twisted), 4) == twisted


###########################################
# transfer diagrams
###########################################
def test_single_row_commutes_with_rotation(beta):
    T = transfer_diagram("single_row", 3, beta)
    omega = generator("Omega", 3, beta=beta)
    assert T.shape == (3, 3)
    assert T @ omega == omega @ T


def test_double_row_is_planar(beta):
    T = transfer_diagram("double_row", 2, beta)
    assert T.shape == (2, 2)
    assert all(d.is_planar for d in T.terms)
    with pytest.raises(DiagramError):
        transfer_diagram("triple_row", 2, beta)
