# heights.py

"""
Height (RSOS) state spaces of the ADE lattice models.

A basis state is a path |a_0, a_1, ..., a_N> on the Dynkin graph. With fixed
boundaries a_0 = a and a_N = b; with periodic boundaries twisted by a graph
automorphism K the closure is a_N = K(a_0). Paths are listed in lexicographic
order. The eigenvector S_mu is used unnormalized (first component 1), which
leaves every generator relation and every form identity unchanged.
"""

import abc
import itertools

import numpy as np

from .diagram import Representation, generator, transfer_diagram
from .dynkin import DynkinData, GraphAutomorphism
from .exceptions import DiagramError, ModelError
from .logger import get_logger
from .scalars import RootOfUnity, sqrt_kappa
from .utils import SparseOp

logger = get_logger(__name__)


class HeightModel:
    """The pair (g, mu): Dynkin data with a chosen eigenvector of the adjacency matrix."""

    def __init__(self, g: DynkinData, mu: int):
        g.check_mu(mu)
        self.g = g
        self.mu = mu
        self.field = g.field
        self.m = g.exponents[mu - 1]
        self.roots = RootOfUnity(g.field, g.coxeter, g.coxeter - self.m)
        self._S = {a: g.S(a, mu) for a in g.nodes}
        if any(s.is_zero() for s in self._S.values()):
            raise ModelError(f"S_{mu} of {g.name} has a vanishing component")
        self._S_inv = {a: s.inverse() for a, s in self._S.items()}

    @property
    def pprime(self) -> int:
        return self.g.coxeter

    @property
    def q(self):
        return self.roots.q

    @property
    def beta(self):
        return self.roots.beta

    def S(self, a: int):
        return self._S[a]

    def S_inv(self, a: int):
        return self._S_inv[a]

    def kappa(self, K: GraphAutomorphism):
        return self.g.kappa(K, self.mu)

    def sqrt_kappa(self, K: GraphAutomorphism):
        return sqrt_kappa(self.kappa(K), self.field)

    def boundary(self, a: int, b: int) -> "BoundaryHeights":
        return BoundaryHeights(self, a, b)

    def periodic(self, K="id") -> "PeriodicHeights":
        if isinstance(K, str):
            K = self.g.automorphism(K)
        return PeriodicHeights(self, K)

    def __repr__(self):
        return f"HeightModel({self.g.name}, mu={self.mu})"


class HeightsModule(Representation, abc.ABC):
    """Common machinery of the fixed and periodic height modules."""

    periodic = False

    def __init__(self, model: HeightModel):
        self.model = model
        self.g = model.g
        self.field = model.field
        self.beta = model.beta
        self._paths = {}
        self._index = {}

    @abc.abstractmethod
    def _starts(self):
        pass

    @abc.abstractmethod
    def _closes(self, path: tuple) -> bool:
        pass

    @property
    @abc.abstractmethod
    def label(self) -> str:
        pass

    def paths(self, N: int) -> list:
        if N < 0:
            return []
        if N not in self._paths:
            found = []
            for a0 in self._starts():
                stack = [(a0,)]
                while stack:
                    path = stack.pop()
                    if len(path) == N + 1:
                        if self._closes(path):
                            found.append(path)
                        continue
                    stack.extend(path + (b,) for b in self.g.neighbors(path[-1]))
            found.sort()
            self._paths[N] = found
            self._index[N] = {path: i for i, path in enumerate(found)}
            logger.debug(f"{self.label}({N}) has {len(found)} height paths")
        return self._paths[N]

    def index(self, N: int) -> dict:
        self.paths(N)
        return self._index[N]

    def dim(self, N: int) -> int:
        return len(self.paths(N))

    def basis_vector(self, path) -> dict:
        path = tuple(path)
        return {self.index(len(path) - 1)[path]: self.one}

    def _check_j(self, name: str, N: int, j: int, low: int):
        if j is None or N < 2 or not low <= j <= N - 1:
            raise DiagramError(f"{name}_{j} is not defined on {self.label}({N})")

    def _bulk_c(self, N: int, j: int) -> SparseOp:
        index = self.index(N - 2)
        cols = {}
        for i, a in enumerate(self.paths(N)):
            if a[j - 1] == a[j + 1]:
                cols[i] = {index[a[:j] + a[j + 2:]]: self.model.S_inv(a[j + 1])}
        return SparseOp(self.dim(N - 2), self.dim(N), cols)

    def _bulk_cdag(self, N: int, j: int) -> SparseOp:
        index = self.index(N)
        cols = {}
        for i, b in enumerate(self.paths(N - 2)):
            col = {}
            for a in self.g.neighbors(b[j - 1]):
                col[index[b[:j] + (a, b[j - 1]) + b[j:]]] = self.model.S(a)
            cols[i] = col
        return SparseOp(self.dim(N), self.dim(N - 2), cols)

    def _generator_op(self, name: str, N: int, j: int = None):
        if name == "id":
            return self.identity(N)
        if name == "e":
            return self.generator_op("cdag", N, j) @ self.generator_op("c", N, j)
        if name == "E":
            if N < 2 or N % 2:
                raise DiagramError(f"E needs an even positive N, got {N}")
            result = self.identity(N)
            for i in range(0, N - 1, 2):
                result = result @ self.generator_op("e", N, i)
            return result
        return self._special_op(name, N, j)

    @abc.abstractmethod
    def _special_op(self, name: str, N: int, j: int):
        pass

    ###################
    # form and gauge
    ###################
    @abc.abstractmethod
    def _weight_sites(self, path: tuple):
        pass

    def weight(self, path: tuple):
        """<u_a, u_a>, the product of 1/S over the weighted sites of the path."""
        result = self.one
        for a in self._weight_sites(path):
            result = result * self.model.S_inv(a)
        return result

    def gauge(self, N: int) -> np.ndarray:
        """Diagonal of the change of basis to the symmetric gauge (mu = 1 only)."""
        if self.model.mu != 1:
            raise ModelError("The symmetric gauge needs mu = 1")
        values = []
        for path in self.paths(N):
            factor = 1.0
            for a in self._weight_sites(path):
                factor *= np.sqrt(self.model.S(a).to_complex().real)
            values.append(factor)
        return np.array(values)

    def symmetric_gauge(self, op: SparseOp, N_out: int, N_in: int) -> np.ndarray:
        """Dense float matrix of op in the basis prod_j sqrt(S_{a_j}) |a>."""
        g_out, g_in = self.gauge(N_out), self.gauge(N_in)
        dense = np.zeros((self.dim(N_out), self.dim(N_in)), dtype=complex)
        for i, j, value in op.entries():
            dense[i, j] = value.to_complex() * g_in[j] / g_out[i]
        return dense

    def transfer_matrix(self, N: int, weights=None) -> SparseOp:
        kind = "single_row" if self.periodic else "double_row"
        return self.operator(transfer_diagram(kind, N, self.beta, weights))

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


###################
# fixed boundaries
###################
class BoundaryHeights(HeightsModule):
    """M_{g,mu,a,b}: a TL_N(beta) module family with N of the parity of the path a -> b."""

    def __init__(self, model: HeightModel, a: int, b: int):
        super().__init__(model)
        for node in (a, b):
            if node not in self.g.nodes:
                raise ModelError(f"Node {node} is not in {self.g.name}")
        self.a = a
        self.b = b

    @property
    def label(self) -> str:
        return f"M_{self.g.name},{self.model.mu},{self.a},{self.b}"

    @property
    def parity(self) -> int:
        return int(self.g.coloring[self.a] != self.g.coloring[self.b])

    def _starts(self):
        return [self.a]

    def _closes(self, path: tuple) -> bool:
        return path[-1] == self.b

    def _weight_sites(self, path: tuple):
        return path

    def _special_op(self, name: str, N: int, j: int):
        if name == "c":
            self._check_j("c", N, j, 1)
            return self._bulk_c(N, j)
        if name == "cdag":
            self._check_j("cdag", N, j, 1)
            return self._bulk_cdag(N, j)
        raise DiagramError(f"{name} does not act on the boundary module {self.label}")

    def form(self, u: dict, v: dict, N: int):
        """<u, v> = sum_a conj(u_a) v_a prod_{j=0}^N 1/S_{a_j}."""
        paths = self.paths(N)
        total = self.zero
        for i, value in v.items():
            if i in u:
                total = total + u[i].conj() * value * self.weight(paths[i])
        return total

    def automorphism_op(self, L: GraphAutomorphism, N: int) -> SparseOp:
        """K_N |a_0..a_N> = kappa^{(N+1)/2} |K(a_0)..K(a_N)>."""
        if L(self.a) != self.a or L(self.b) != self.b:
            raise ModelError(f"{L.name} does not fix the boundary heights ({self.a}, {self.b})")
        coef = self.model.sqrt_kappa(L) ** (N + 1)
        index = self.index(N)
        cols = {i: {index[tuple(L(x) for x in path)]: coef} for i, path in enumerate(self.paths(N))}
        return SparseOp(self.dim(N), self.dim(N), cols)


###################
# periodic boundaries
###################
class PeriodicHeights(HeightsModule):
    """M_{g,mu,K}: an EPTL_N(beta) module family with the twisted closure a_N = K(a_0)."""

    periodic = True

    def __init__(self, model: HeightModel, K: GraphAutomorphism):
        super().__init__(model)
        self.K = K
        self.kappa = model.kappa(K)
        self.half = model.sqrt_kappa(K)
        self._K_inv = K.inverse_perm()

    @property
    def label(self) -> str:
        return f"M_{self.g.name},{self.model.mu},{self.K.name}"

    @property
    def parity(self) -> int:
        a = self.g.nodes[0]
        return int(self.g.coloring[a] != self.g.coloring[self.K(a)])

    def K_inv(self, a: int) -> int:
        return self._K_inv[a - 1]

    def _starts(self):
        return list(self.g.nodes)

    def _closes(self, path: tuple) -> bool:
        return path[-1] == self.K(path[0])

    def _weight_sites(self, path: tuple):
        return path[1:]

    def _c0(self, N: int) -> SparseOp:
        index = self.index(N - 2)
        coef = self.half.inverse()
        cols = {}
        for i, a in enumerate(self.paths(N)):
            if a[N - 1] == self.K(a[1]):
                cols[i] = {index[a[1:N]]: coef * self.model.S_inv(a[1])}
        return SparseOp(self.dim(N - 2), self.dim(N), cols)

    def _c0dag(self, N: int) -> SparseOp:
        index = self.index(N)
        cols = {}
        for i, b in enumerate(self.paths(N - 2)):
            col = {}
            for a in self.g.nodes:
                if self.g.adjacent(b[-1], self.K(a)):
                    col[index[(a,) + b + (self.K(a),)]] = self.half * self.model.S(a)
            cols[i] = col
        return SparseOp(self.dim(N), self.dim(N - 2), cols)

    def _rotation(self, N: int, inverse: bool = False) -> SparseOp:
        if N < 1:
            raise DiagramError("Omega needs at least one point")
        index = self.index(N)
        cols = {}
        for i, a in enumerate(self.paths(N)):
            if inverse:
                target, coef = (self.K_inv(a[N - 1]),) + a[:N], self.half.inverse()
            else:
                target, coef = a[1:] + (self.K(a[1]),), self.half
            cols[i] = {index[target]: coef}
        return SparseOp(self.dim(N), self.dim(N), cols)

    def _f(self) -> SparseOp:
        index = self.index(0)
        cols = {}
        for i, (a,) in enumerate(self.paths(0)):
            cols[i] = {index[(b,)]: self.one for b in self.g.neighbors(a) if self.K(b) == b}
        return SparseOp(self.dim(0), self.dim(0), cols)

    def _special_op(self, name: str, N: int, j: int):
        if name == "c":
            self._check_j("c", N, j, 0)
            return self._c0(N) if j == 0 else self._bulk_c(N, j)
        if name == "cdag":
            self._check_j("cdag", N, j, 0)
            return self._c0dag(N) if j == 0 else self._bulk_cdag(N, j)
        if name in ("Omega", "Omegainv"):
            power = 1 if j is None else j
            if name == "Omegainv":
                power = -power
            base = self._rotation(N, inverse=power < 0)
            return base.power(abs(power), self.one)
        if name == "f":
            if N != 0:
                raise DiagramError("f lives in L(0,0)")
            return self._f().power(1 if j is None else j, self.one)
        raise DiagramError(f"Unknown generator {name!r}")

    def dual(self) -> "PeriodicHeights":
        """M_{g,mu,K^-1}, the left partner of the form."""
        if self.K.is_identity or self.K.order == 2:
            return self
        return PeriodicHeights(self.model, self.g.inverse(self.K))

    def form(self, u: dict, v: dict, N: int, left: "PeriodicHeights" = None):
        """<u, v> pairing u in M_{K^-1}(N) with v in M_K(N): conj(u_a) v_b prod_{j=1}^N delta/S."""
        left = self.dual() if left is None else left
        paths = self.paths(N)
        by_tail = {path[1:] if N else path: i for i, path in enumerate(paths)}
        left_paths = left.paths(N)
        total = self.zero
        for i, value in u.items():
            path = left_paths[i]
            j = by_tail.get(path[1:] if N else path)
            if j is None or j not in v:
                continue
            total = total + value.conj() * v[j] * self.weight(paths[j])
        return total

    def automorphism_op(self, L: GraphAutomorphism, N: int):
        """L_N: M_K(N) -> M_{LKL^-1}(N), |a> -> gamma^{N/2} |L(a)>. Returns (op, target)."""
        target = self if self.g.commutes(self.K, L) else PeriodicHeights(self.model, self.g.conjugate(self.K, L))
        coef = self.model.sqrt_kappa(L) ** N
        index = target.index(N)
        cols = {i: {index[tuple(L(x) for x in path)]: coef} for i, path in enumerate(self.paths(N))}
        return SparseOp(target.dim(N), self.dim(N), cols), target

    def twist_op(self, N: int) -> SparseOp:
        """K_N = Omega^N."""
        op, _ = self.automorphism_op(self.K, N)
        return op

    def _cycle_average(self, step: SparseOp, N: int, limit: int):
        """(1/m) sum_{j<m} step^j for the least m <= limit with step^m = 1, else None."""
        ident = self.identity(N)
        total, current = ident, step
        m = 1
        while not current == ident:
            if m >= limit:
                return None
            total = total + current
            current = current @ step
            m += 1
        return total * (self.one * m).inverse()

    def eigen_projector(self, N: int, value) -> SparseOp:
        """Xi = (1/m) sum_j (value^-1 K_N)^j, the projector onto K_N = value.

        K_N^n = kappa^{nN/2} for n = K.order, so value^-1 K_N has order dividing n.
        """
        projector = self._cycle_average(self.twist_op(N) * value.inverse(), N, self.K.order)
        if projector is None:
            raise ModelError(f"{value} is not an eigenvalue of K_{N} on {self.label}")
        return projector

    def rotation_projector(self, N: int, x) -> SparseOp:
        """(1/m) sum_j (x^-1 Omega)^j, the projector onto Omega = x on M(N); Omega^N = K_N bounds m by N K.order."""
        step = self.generator_op("Omega", N, 1) * x.inverse()
        projector = self._cycle_average(step, N, max(N, 1) * self.K.order)
        if projector is None:
            raise ModelError(f"x^-1 Omega has no finite order on {self.label}({N}) for x = {x}")
        return projector

    def reduced_betas(self) -> list:
        """Distinct eigenvalues entering the minimal polynomial of Omega E."""
        g = self.g
        if self.K.is_identity:
            exponents = sorted(set(g.exponents))
        else:
            fixed = g.fixed_subgraph(self.K)
            if fixed.is_empty():
                return []
            exponents = sorted(set(fixed.exponents))
        return [g.field.root(2 * g.coxeter, m) + g.field.root(2 * g.coxeter, -m) for m in exponents]

    def minimal_polynomial_check(self, N: int) -> bool:
        """E prod_nu (Omega E - beta_nu) = 0 on M(N), N even."""
        if N < 2 or N % 2:
            raise DiagramError(f"The minimal polynomial needs an even positive N, got {N}")
        E = self.generator_op("E", N)
        omega_e = self.generator_op("Omega", N, 1) @ E
        result = E
        for value in self.reduced_betas():
            result = result @ (omega_e - self.identity(N) * value)
        ok = result.is_zero()
        logger.debug(f"Minimal polynomial on {self.label}({N}): {'ok' if ok else 'violated'}")
        return ok


###################
# helpers
###################
def dimension_oracle(module: HeightsModule, N: int) -> int:
    """(A^N)_{ab} or tr(K A^N), read from the integer adjacency matrix."""
    power = np.linalg.matrix_power(module.g.adjacency, N)
    if isinstance(module, BoundaryHeights):
        return int(power[module.a - 1, module.b - 1])
    perm = module.K
    return int(sum(power[a - 1, perm(a) - 1] for a in module.g.nodes))


def random_word(N: int, length: int, periodic: bool, rng) -> list:
    """Tokens of a random word of e_j's (and Omega^{+-1} when periodic) on N points."""
    low = 0 if periodic else 1
    tokens = []
    for _ in range(length):
        if periodic and rng.random() < 0.25:
            tokens.append(("Omega", int(rng.choice([-1, 1])), N))
        else:
            tokens.append(("e", int(rng.integers(low, N)), N))
    return tokens


def word_matrix(module: HeightsModule, tokens, N: int) -> SparseOp:
    """Heights matrix of a product of generator tokens, multiplied generator by generator."""
    result = module.identity(N)
    for name, j, size in tokens:
        result = result @ module.generator_op(name, size, j)
    return result


def word_diagram(tokens, beta, N: int):
    """The same product reduced in the diagram algebra."""
    result = generator("id", N, beta=beta)
    for name, j, size in tokens:
        result = result @ generator(name, size, j, beta)
    return result


def boundary_pairs(g: DynkinData, N: int):
    """Pairs (a, b) with a nonempty M_{g,mu,a,b}(N)."""
    power = np.linalg.matrix_power(g.adjacency, N)
    return [(a, b) for a, b in itertools.product(g.nodes, repeat=2) if power[a - 1, b - 1]]
