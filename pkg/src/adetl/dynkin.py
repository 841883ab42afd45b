# dynkin.py

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import networkx as nx
from networkx.algorithms import bipartite
import numpy as np
import sympy

from .exceptions import ModelError
from .logger import get_logger
from .scalars import make_field
from .utils import SparseOp, nullspace

logger = get_logger(__name__)

E_EXPONENTS = {
    6: (1, 4, 5, 7, 8, 11),
    7: (1, 5, 7, 9, 11, 13, 17),
    8: (1, 7, 11, 13, 17, 19, 23, 29),
}

# candidate automorphism eigenvalues, in the order they are assigned to degenerate slots
_KAPPA_CANDIDATES = ((3, 0), (3, 1), (3, 2), (2, 1))


def parse_algebra(name: str):
    """'A3' -> ('A', 3). Also accepts 'A_3' and lower case."""
    match = re.fullmatch(r"\s*([ADEade])_?(\d+)\s*", str(name))
    if not match:
        raise ModelError(f"Unknown algebra {name!r}; expected e.g. A3, D5, E6")
    family, n = match.group(1).upper(), int(match.group(2))
    validate_algebra(family, n)
    return family, n


def validate_algebra(family: str, n: int):
    if family == "A" and n >= 1:
        return
    if family == "D" and n >= 4:
        return
    if family == "E" and n in E_EXPONENTS:
        return
    raise ModelError(f"Invalid Dynkin diagram {family}_{n}")


def coxeter_number(family: str, n: int) -> int:
    if family == "A":
        return n + 1
    if family == "D":
        return 2 * n - 2
    return {6: 12, 7: 18, 8: 30}[n]


def exponents_of(family: str, n: int) -> tuple:
    if family == "A":
        return tuple(range(1, n + 1))
    if family == "D":
        return tuple(2 * mu - 1 for mu in range(1, n)) + (n - 1,)
    return E_EXPONENTS[n]


def dynkin_graph(family: str, n: int) -> nx.Graph:
    """Nodes are numbered as in the standard pictures: a chain 1..n for A_n;
    D_n has the chain 1..n-2 with n-1 and n attached to n-2; E_n has the chain
    1..n-1 with node n attached to node 3."""
    graph = nx.Graph()
    graph.add_nodes_from(range(1, n + 1))
    if family == "A":
        graph.add_edges_from((a, a + 1) for a in range(1, n))
    elif family == "D":
        graph.add_edges_from((a, a + 1) for a in range(1, n - 2))
        graph.add_edges_from([(n - 2, n - 1), (n - 2, n)])
    else:
        graph.add_edges_from((a, a + 1) for a in range(1, n - 1))
        graph.add_edge(3, n)
    return graph


@dataclass(eq=False)
class GraphAutomorphism:
    name: str
    perm: tuple
    kappa: list = dc_field(default_factory=list)

    def __call__(self, a: int) -> int:
        return self.perm[a - 1]

    @property
    def is_identity(self) -> bool:
        return all(self.perm[a] == a + 1 for a in range(len(self.perm)))

    @property
    def order(self) -> int:
        current = self.perm
        m = 1
        while any(current[a] != a + 1 for a in range(len(current))):
            current = tuple(self.perm[c - 1] for c in current)
            m += 1
        return m

    def inverse_perm(self) -> tuple:
        inv = [0] * len(self.perm)
        for a, b in enumerate(self.perm, start=1):
            inv[b - 1] = a
        return tuple(inv)

    def fixed_nodes(self) -> list:
        return [a for a in range(1, len(self.perm) + 1) if self(a) == a]


@dataclass(eq=False)
class FixedSubgraph:
    nodes: list
    coxeter: int
    exponents: list = dc_field(default_factory=list)
    eigvecs: dict = dc_field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def is_empty(self) -> bool:
        return not self.nodes

    def S(self, a: int, nu: int):
        """Component of the nu-th eigenvector at the graph node a (zero off the subgraph)."""
        if a not in self.nodes:
            return None
        return self.eigvecs[nu][self.nodes.index(a)]


class DynkinData:
    """Adjacency, Coxeter number, exponents and exact eigenvectors of an ADE graph.

    Eigenvectors are unnormalized: the first nonzero component is 1. Degenerate
    eigenspaces (D_n with n even) are split by P_(n-1,n).
    """

    def __init__(self, family: str, n: int, backend: str = "exact"):
        validate_algebra(family, n)
        self.family = family
        self.rank = n
        self.name = f"{family}{n}"
        self.graph = dynkin_graph(family, n)
        self.adjacency = nx.to_numpy_array(self.graph, nodelist=range(1, n + 1), dtype=np.int64)
        self.coxeter = coxeter_number(family, n)
        self.exponents = list(exponents_of(family, n))
        self.field = make_field(self.coxeter, backend)
        self.backend = backend
        coloring = bipartite.color(self.graph)
        flip = coloring[1]
        self.coloring = {a: (c + flip) % 2 for a, c in coloring.items()}
        self._automorphisms = _named_automorphisms(family, n)
        self.eigvecs = self.eigenvectors(self._default_split())
        logger.debug(f"Built Dynkin data for {self.name} (p'={self.coxeter}, backend={backend})")

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    def neighbors(self, a: int) -> list:
        return sorted(self.graph.neighbors(a))

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.adjacency[a - 1, b - 1])

    def beta(self, mu: int):
        m = self.exponents[mu - 1]
        return self.field.root(2 * self.coxeter, m) + self.field.root(2 * self.coxeter, -m)

    def is_allowed_mu(self, mu: int) -> bool:
        return 1 <= mu <= self.rank and math.gcd(self.exponents[mu - 1], self.coxeter) == 1

    def check_mu(self, mu: int):
        if not 1 <= mu <= self.rank:
            raise ModelError(f"Exponent index mu={mu} out of range for {self.name}")
        if not self.is_allowed_mu(mu):
            raise ModelError(
                f"mu={mu} (m={self.exponents[mu - 1]}) is not allowed for {self.name}: "
                f"gcd(m, p'={self.coxeter}) must be 1")

    def S(self, a: int, mu: int):
        return self.eigvecs[mu][a - 1]

    def _default_split(self):
        if self.family == "D" and self.rank % 2 == 0:
            return self._automorphisms["P"]
        return None

    def eigenvectors(self, K: GraphAutomorphism = None) -> dict:
        """Eigenvectors indexed by mu, adapted to K inside degenerate eigenspaces."""
        one = self.field.one()
        adjacency = self._adjacency_op()
        vectors = {}
        seen = {}
        for mu, m in enumerate(self.exponents, start=1):
            seen.setdefault(m, []).append(mu)
        for m, slots in seen.items():
            shifted = adjacency - SparseOp.identity(self.rank, one) * self.beta(slots[0])
            if len(slots) == 1:
                basis = nullspace([shifted], one, exact=self.field.is_exact)
                vectors[slots[0]] = _normalized(basis[0], self.rank, self.field)
                continue
            if K is None:
                raise ModelError(f"Degenerate eigenspace for m={m} needs an automorphism to split it")
            candidates = []
            for order, k in _KAPPA_CANDIDATES:
                value = self.field.root(order, k)
                space = nullspace([shifted, self._perm_op(K) - SparseOp.identity(self.rank, one) * value],
                                  one, exact=self.field.is_exact)
                candidates.extend(_normalized(v, self.rank, self.field) for v in space)
            for mu, vec in zip(slots, candidates):
                vectors[mu] = vec
        return vectors

    def _adjacency_op(self) -> SparseOp:
        one = self.field.one()
        return SparseOp(self.rank, self.rank,
                        {b - 1: {a - 1: one for a in self.neighbors(b)} for b in self.nodes})

    def _perm_op(self, K: GraphAutomorphism) -> SparseOp:
        """(K S)_a = S_{K(a)} as a matrix."""
        one = self.field.one()
        cols = {}
        for a in self.nodes:
            cols.setdefault(K(a) - 1, {})[a - 1] = one
        return SparseOp(self.rank, self.rank, cols)

    ###################
    # automorphisms
    ###################
    def automorphism(self, name: str) -> GraphAutomorphism:
        key = "P" if (self.name == "D4" and name == "P34") else name
        if key not in self._automorphisms:
            raise ModelError(f"{self.name} has no automorphism named {name!r}; "
                             f"available: {', '.join(sorted(self._automorphisms))}")
        base = self._automorphisms[key]
        return GraphAutomorphism(name, base.perm, self.kappa_list(base))

    def automorphisms(self) -> list:
        names = ["id"]
        if self.family == "A":
            names.append("R")
        elif self.name == "D4":
            names += ["P34", "P134"]
        elif self.family == "D":
            names.append("P")
        elif self.name == "E6":
            names.append("P")
        return [self.automorphism(n) for n in names]

    def kappa_list(self, K: GraphAutomorphism) -> list:
        vectors = self.eigenvectors(K) if self._has_degeneracy() else self.eigvecs
        kappas = []
        for mu in range(1, self.rank + 1):
            vec = vectors[mu]
            a = next(i for i, v in enumerate(vec) if not v.is_zero())
            kappas.append(vec[K(a + 1) - 1] / vec[a])
        return kappas

    def kappa(self, K: GraphAutomorphism, mu: int):
        """Eigenvalue of K on the eigenvector S_mu used by the heights models."""
        vec = self.eigvecs[mu]
        a = next(i for i, v in enumerate(vec) if not v.is_zero())
        ratio = vec[K(a + 1) - 1] / vec[a]
        for b in self.nodes:
            if not (vec[K(b) - 1] - ratio * vec[b - 1]).is_zero():
                raise ModelError(f"S_{mu} is not an eigenvector of {K.name} on {self.name}")
        return ratio

    def _has_degeneracy(self) -> bool:
        return len(set(self.exponents)) < len(self.exponents)

    def compose(self, K: GraphAutomorphism, L: GraphAutomorphism) -> GraphAutomorphism:
        """(K L)(a) = K(L(a))."""
        perm = tuple(K(L(a)) for a in self.nodes)
        for name, aut in self._automorphisms.items():
            if aut.perm == perm:
                return self.automorphism(name)
        raise ModelError(f"Composition {K.name}{L.name} is not a named automorphism")

    def inverse(self, K: GraphAutomorphism) -> GraphAutomorphism:
        perm = K.inverse_perm()
        for name, aut in self._automorphisms.items():
            if aut.perm == perm:
                return self.automorphism(name)
        raise ModelError(f"Inverse of {K.name} is not a named automorphism")

    def commutes(self, K: GraphAutomorphism, L: GraphAutomorphism) -> bool:
        return all(K(L(a)) == L(K(a)) for a in self.nodes)

    def conjugate(self, K: GraphAutomorphism, L: GraphAutomorphism) -> GraphAutomorphism:
        """L K L^{-1}."""
        return self.compose(self.compose(L, K), self.inverse(L))

    ###################
    # derived data
    ###################
    def fixed_subgraph(self, K: GraphAutomorphism) -> FixedSubgraph:
        return fixed_subgraph(self, K)

    def fused_adjacency(self, s: int) -> np.ndarray:
        return fused_adjacency(self, s)

    def normalized_eigvecs(self) -> dict:
        """Float eigenvectors with sum_a |S_{a mu}|^2 = 1, in the exact gauge up to scale."""
        out = {}
        for mu, vec in self.eigvecs.items():
            values = np.array([v.to_complex() for v in vec])
            out[mu] = values / np.linalg.norm(values)
        return out

    def chebyshev_trace(self, s: int) -> Fraction:
        return chebyshev_trace(self, s)

    def to_dict(self) -> dict:
        return {
            "algebra": self.name,
            "rank": self.rank,
            "coxeter": self.coxeter,
            "exponents": self.exponents,
            "adjacency": self.adjacency.tolist(),
            "coloring": {str(a): c for a, c in sorted(self.coloring.items())},
            "allowed_mu": [mu for mu in self.nodes if self.is_allowed_mu(mu)],
        }

    def __repr__(self):
        return f"DynkinData({self.name})"


def _normalized(vec: dict, size: int, field) -> list:
    first = min(vec)
    inv = vec[first].inverse()
    return [vec[i] * inv if i in vec else field.zero() for i in range(size)]


def _named_automorphisms(family: str, n: int) -> dict:
    ident = tuple(range(1, n + 1))
    auts = {"id": GraphAutomorphism("id", ident)}

    def with_map(name, mapping):
        auts[name] = GraphAutomorphism(name, tuple(mapping.get(a, a) for a in ident))

    if family == "A" and n > 1:
        with_map("R", {a: n + 1 - a for a in ident})
    elif family == "D":
        with_map("P", {n - 1: n, n: n - 1})
        if n == 4:
            with_map("P13", {1: 3, 3: 1})
            with_map("P14", {1: 4, 4: 1})
            with_map("P134", {1: 3, 3: 4, 4: 1})
            with_map("P143", {1: 4, 4: 3, 3: 1})
    elif family == "E" and n == 6:
        with_map("P", {1: 5, 5: 1, 2: 4, 4: 2})
    return auts


def build(algebra, n: int = None, backend: str = "exact") -> DynkinData:
    """Build DynkinData from 'E6' or from ('E', 6)."""
    if n is None:
        family, n = parse_algebra(algebra)
    else:
        family = str(algebra).upper().rstrip("_")
    return _build_cached(family, n, backend)


@lru_cache(maxsize=None)
def _build_cached(family: str, n: int, backend: str) -> DynkinData:
    return DynkinData(family, n, backend)


def automorphisms(g: DynkinData) -> list:
    return g.automorphisms()


def fixed_subgraph(g: DynkinData, K: GraphAutomorphism) -> FixedSubgraph:
    nodes = K.fixed_nodes()
    if not nodes:
        return FixedSubgraph([], g.coxeter)
    sub = g.graph.subgraph(nodes)
    if not nx.is_connected(sub) or any(d > 2 for _, d in sub.degree()) or sub.number_of_edges() != len(nodes) - 1:
        raise ModelError(f"Fixed points of {K.name} on {g.name} do not form a chain")
    ends = sorted(a for a, d in sub.degree() if d <= 1)
    order = [ends[0]]
    while len(order) < len(nodes):
        order.append(next(b for b in sub.neighbors(order[-1]) if b not in order))
    rank = len(order)
    exponents = []
    for j in range(1, rank + 1):
        m = Fraction(j * g.coxeter, rank + 1)
        if m.denominator != 1:
            raise ModelError(f"Fixed subgraph of {K.name} on {g.name} has non-integer exponent {m}")
        exponents.append(int(m))
    one = g.field.one()
    chain = SparseOp(rank, rank, {j: {i: one for i in (j - 1, j + 1) if 0 <= i < rank} for j in range(rank)})
    eigvecs = {}
    for nu, m in enumerate(exponents, start=1):
        value = g.field.root(2 * g.coxeter, m) + g.field.root(2 * g.coxeter, -m)
        basis = nullspace([chain - SparseOp.identity(rank, one) * value], one, exact=g.field.is_exact)
        eigvecs[nu] = _normalized(basis[0], rank, g.field)
    return FixedSubgraph(order, g.coxeter, exponents, eigvecs)


def fused_adjacency(g: DynkinData, s: int) -> np.ndarray:
    """J_0 = 0, J_1 = id, J_s = J_{s-1} A - J_{s-2}; J_{-s} = -J_s."""
    if s < 0:
        return -fused_adjacency(g, -s)
    prev = np.zeros((g.rank, g.rank), dtype=np.int64)
    if s == 0:
        return prev
    current = np.eye(g.rank, dtype=np.int64)
    for _ in range(s - 1):
        prev, current = current, current @ g.adjacency - prev
    return current


def chebyshev_trace(g: DynkinData, s: int) -> Fraction:
    """tr T_{2s}(A/2) with T the Chebyshev polynomials of the first kind."""
    half = sympy.Matrix(g.adjacency.tolist()) / 2
    prev, current = sympy.eye(g.rank), half
    if s == 0:
        return Fraction(g.rank)
    for _ in range(2 * s - 1):
        prev, current = current, 2 * half * current - prev
    trace = sympy.Rational(current.trace())
    return Fraction(int(trace.p), int(trace.q))


def exponent_trace(g: DynkinData, s: int):
    """sum_mu cos(2 pi s m_mu / p') as an exact field element."""
    total = g.field.zero()
    for m in g.exponents:
        total = total + (g.field.root(2 * g.coxeter, 2 * s * m) + g.field.root(2 * g.coxeter, -2 * s * m)) * Fraction(1, 2)
    return total
