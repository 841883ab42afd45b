# localop.py

"""
Lattice operators attached to insertion states.

* ``phi(w)`` maps M_{g,mu,L}(N) to M_{g,mu,KL}(N+2k) for an insertion state w
  of M_{g,mu,K}(2k); with w = w_nu it is Pasquier's diagonal operator O^nu.
* ``psi(w)`` maps M_{g,mu,b,c}(N) to M_{g,mu,a,c}(N+2k) for a boundary
  insertion state w of M_{g,mu,a,b}(2k).

Every operator is materialized as a SparseOp per N; the family relations are
checked as matrix identities on a window of sizes.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .decomp import CheckReport, InsertionState
from .diagram import DiagramVector, factorize, generator
from .exceptions import DiagramError, InsertionStateError, ModelError
from .heights import BoundaryHeights, HeightModel, HeightsModule, PeriodicHeights
from .linkmod import half_integer
from .logger import get_logger
from .projector import lambda_hat, singular_word, tensor_id
from .scalars import q_number
from .utils import SparseOp, prune, solve, vec_is_zero

logger = get_logger(__name__)


###################
# connectivity operators
###################
def _same_model(first: HeightsModule, second: HeightsModule):
    if first.g is not second.g or first.model.mu != second.model.mu:
        raise ModelError(f"{first.label} and {second.label} belong to different height models")


def product_module(K, source: HeightsModule, reuse=()) -> HeightsModule:
    """The module reached by applying K beyond the insertion point: M_{KL} or M_{a,K(b)}."""
    g, model = source.g, source.model
    if isinstance(source, BoundaryHeights):
        return model.boundary(source.a, K(source.b))
    if not g.commutes(K, source.K):
        raise ModelError(f"{K.name} and {source.K.name} do not commute on {g.name}")
    KL = g.compose(K, source.K)
    for candidate in (source, *reuse):
        if candidate.periodic and candidate.K.perm == KL.perm:
            return candidate
    return model.periodic(KL)


@dataclass(eq=False)
class ConnectivityOp:
    """The maps Op_N of phi(w) (``boundary=False``) or of psi(w) (``boundary=True``)."""
    state: InsertionState
    source: HeightsModule
    target: HeightsModule
    boundary: bool = False
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def k(self) -> Fraction:
        return self.state.k

    @property
    def x(self):
        return self.state.x

    @property
    def label(self) -> str:
        name = "psi" if self.boundary else "phi"
        return f"{name}(k={self.k}): {self.source.label} -> {self.target.label}"

    def _tail(self, path: tuple) -> tuple:
        if self.boundary:
            return path[1:]
        K = self.state.module.K
        return tuple(K(a) for a in path[1:])

    def matrix(self, N: int) -> SparseOp:
        if N in self._cache:
            return self._cache[N]
        n = self.state.N
        model = self.source.model
        w_paths = self.state.module.paths(n)
        by_start = {}
        for i, c in self.state.vector.items():
            path = w_paths[i]
            key = None if self.boundary else path[0]
            coef = c if self.boundary else c * model.S_inv(path[0])
            by_start.setdefault(key, []).append((path, coef))
        prefactor = self.source.one if self.boundary else self.state.module.half ** N
        index = self.target.index(N + n)
        cols = {}
        for col, b in enumerate(self.source.paths(N)):
            tail = self._tail(b)
            entries = {}
            for path, coef in by_start.get(None if self.boundary else b[0], ()):
                entries[index[path + tail]] = coef * prefactor
            if entries:
                cols[col] = prune(entries)
        op = SparseOp(self.target.dim(N + n), self.source.dim(N), cols)
        self._cache[N] = op
        return op

    def at(self, N: int, j: int) -> SparseOp:
        """Op_{N,j} = Omega^-j Op_N Omega^j."""
        if self.boundary or not self.source.periodic:
            raise DiagramError("Shifted operators need periodic modules")
        if j == 0:
            return self.matrix(N)
        n = self.state.N
        return (self.target.generator_op("Omegainv", N + n, j) @ self.matrix(N)
                @ self.source.generator_op("Omega", N, j))


def connectivity(state: InsertionState, source: HeightsModule) -> ConnectivityOp:
    """phi(w) from ``source`` (M_L or M_{a,b}) for w in M_K(2k)."""
    if not state.module.periodic:
        raise ModelError("phi(w) needs an insertion state of a periodic module")
    _same_model(state.module, source)
    target = product_module(state.module.K, source, reuse=(state.module,))
    return ConnectivityOp(state, source, target)


def phi(state: InsertionState, source: HeightsModule, N: int) -> SparseOp:
    return connectivity(state, source).matrix(N)


def boundary_operator(state: InsertionState, source: BoundaryHeights) -> ConnectivityOp:
    """psi(w) from M_{b,c} to M_{a,c} for w in M_{a,b}(2k)."""
    module = state.module
    if module.periodic or source.periodic:
        raise ModelError("psi(w) acts between fixed-boundary modules")
    _same_model(module, source)
    if source.a != module.b:
        raise ModelError(f"psi(w) for {module.label} needs a source starting at {module.b}, got {source.label}")
    return ConnectivityOp(state, source, module.model.boundary(module.a, source.b), boundary=True)


def boundary_psi(state: InsertionState, source: BoundaryHeights, N: int) -> SparseOp:
    return boundary_operator(state, source).matrix(N)


###################
# relations
###################
def _window(N_values):
    return [N for N in N_values if N >= 0]


def connectivity_relations(op: ConnectivityOp, N_values) -> CheckReport:
    """The defining relations of a connectivity (or boundary) operator at the given sizes."""
    src, tgt = op.source, op.target
    n = op.state.N
    report = CheckReport(src.g.name, "psi" if op.boundary else "phi")
    report.data["operator"] = op.label
    for N in _window(N_values):
        if src.dim(N) == 0:
            continue
        O = op.matrix(N)
        for j in range(1, n):
            if N + n >= 2:
                report.add("annihilation", (tgt.generator_op("c", N + n, j) @ O).is_zero(), N=N, detail=f"c_{j}")
        if N >= 2:
            for j in range(n + 1, N + n):
                lhs = tgt.generator_op("c", N + n, j) @ O
                rhs = op.matrix(N - 2) @ src.generator_op("c", N, j - n)
                report.add("c-shift", lhs == rhs, N=N, detail=f"c_{j}")
        for j in range(n + 1, N + n + 2):
            lhs = tgt.generator_op("cdag", N + n + 2, j) @ O
            rhs = op.matrix(N + 2) @ src.generator_op("cdag", N + 2, j - n)
            report.add("cdag-shift", lhs == rhs, N=N, detail=f"cdag_{j}")
        if op.boundary or not src.periodic or N < 2:
            continue
        x = op.x
        alpha = x + x.inverse() if n == 0 else x
        lhs = tgt.generator_op("c", N + n, 0) @ O @ src.generator_op("cdag", N, 0)
        report.add("c0-sandwich", lhs == op.matrix(N - 2) * alpha, N=N)
        if n > 0:
            lhs = tgt.generator_op("c", N + n, n) @ O @ src.generator_op("cdag", N, 0)
            rhs = tgt.generator_op("Omega", N + n - 2, 1) @ op.matrix(N - 2) * x.inverse()
            report.add("c2k-sandwich", lhs == rhs, N=N)
    if op.boundary and src.a == src.b:
        report.add("psi-on-vacuum", op.matrix(0).column(0) == prune(dict(op.state.vector)), N=0)
    logger.info(f"{op.label}: {len(report.checks)} relation checks, passed={report.passed}")
    return report


###################
# Pasquier operators and fusion
###################
def pasquier_state(module: PeriodicHeights, nu: int) -> InsertionState:
    """w_nu = sum_a S_{a nu}|a> in M_id(0); for K != id the sum over the K-fixed nodes."""
    g = module.g
    index = module.index(0)
    if module.K.is_identity:
        if not 1 <= nu <= g.rank:
            raise ModelError(f"nu={nu} out of range for {g.name}")
        vector = {index[(a,)]: g.S(a, nu) for a in g.nodes}
        m = g.exponents[nu - 1]
    else:
        fixed = g.fixed_subgraph(module.K)
        if not 1 <= nu <= fixed.rank:
            raise ModelError(f"nu={nu} out of range for the fixed subgraph of {module.K.name}")
        vector = {index[(a,)]: fixed.S(a, nu) for a in fixed.nodes}
        m = fixed.exponents[nu - 1]
    x = g.field.root(2 * g.coxeter, m)
    return InsertionState(Fraction(0), prune(vector), module, x, provenance="pasquier", tag=str(nu))


def _ratio(model: HeightModel, K, a: int, nu: int):
    g = model.g
    if K is None or K.is_identity:
        return g.S(a, nu) * model.S_inv(a)
    return g.fixed_subgraph(K).S(a, nu) * model.S_inv(a)


def pasquier_op(module: HeightsModule, nu: int, N: int, j: int = 0, K=None) -> SparseOp:
    """O^nu_{N,j}|a> = (S_{a_j nu}/S_{a_j mu})|a>; with K != id the twisted operator
    kappa^{(N-j)/2} delta_{K(a_j),a_j} (tS_{a_j nu}/S_{a_j mu}) |a_0..a_j, K(a_{j+1})..K(a_N)>."""
    if not 0 <= j <= N:
        raise DiagramError(f"O_(N={N}, j={j}) needs 0 <= j <= N")
    model = module.model
    if K is None or K.is_identity:
        if not 1 <= nu <= module.g.rank:
            raise ModelError(f"nu={nu} out of range for {module.g.name}")
        cols = {}
        for i, path in enumerate(module.paths(N)):
            value = _ratio(model, None, path[j], nu)
            if not value.is_zero():
                cols[i] = {i: value}
        return SparseOp(module.dim(N), module.dim(N), cols)
    if not module.periodic:
        raise ModelError("Twisted Pasquier operators act on periodic modules")
    fixed = module.g.fixed_subgraph(K)
    if not 1 <= nu <= fixed.rank:
        raise ModelError(f"nu={nu} out of range for the fixed subgraph of {K.name}")
    target = product_module(K, module)
    coef = model.sqrt_kappa(K) ** (N - j)
    index = target.index(N)
    cols = {}
    for i, path in enumerate(module.paths(N)):
        a = path[j]
        if K(a) != a:
            continue
        value = _ratio(model, K, a, nu)
        if value.is_zero():
            continue
        image = path[:j + 1] + tuple(K(b) for b in path[j + 1:])
        cols[i] = {index[image]: coef * value}
    return SparseOp(target.dim(N), module.dim(N), cols)


def fixed_diagonal(module: HeightsModule, K, nu: int, N: int, j: int = 0) -> SparseOp:
    """delta_{K(a_j),a_j} tS_{a_j nu}/S_{a_j mu} as a diagonal operator."""
    cols = {}
    for i, path in enumerate(module.paths(N)):
        a = path[j]
        if K(a) == a:
            value = _ratio(module.model, K, a, nu)
            if not value.is_zero():
                cols[i] = {i: value}
    return SparseOp(module.dim(N), module.dim(N), cols)


@dataclass
class FusionTable:
    """C^{nu''}_{nu,nu'} for the normalized eigenvectors, and the same structure
    constants for the unnormalized ratios in the model field."""
    name: str
    mu: int
    twist: str
    labels: list
    coefficients: np.ndarray
    constants: dict

    def product(self, nu: int, nup: int, tol: float = 1e-9) -> dict:
        row = self.coefficients[self.labels.index(nu), self.labels.index(nup)]
        return {lab: complex(c) for lab, c in zip(self.labels, row) if abs(c) > tol}

    def associativity(self, tol: float = 1e-8) -> bool:
        C = self.coefficients
        left = np.einsum("abl,lcr->abcr", C, C)
        right = np.einsum("bcl,alr->abcr", C, C)
        return bool(np.allclose(left, right, atol=tol))

    def to_dict(self) -> dict:
        out = {}
        for i, nu in enumerate(self.labels):
            for ip, nup in enumerate(self.labels):
                values = {str(lab): round(float(np.real(c)), 12)
                          for lab, c in zip(self.labels, self.coefficients[i, ip]) if abs(c) > 1e-9}
                if values:
                    out[f"{nu},{nup}"] = values
        return {"model": self.name, "mu": self.mu, "twist": self.twist, "coefficients": out}


def _normalized(values) -> np.ndarray:
    vec = np.array([v.to_complex() for v in values])
    return vec / np.linalg.norm(vec)


def fusion_table(model: HeightModel, K=None) -> FusionTable:
    g = model.g
    if K is None or K.is_identity:
        nodes = list(g.nodes)
        labels = list(g.nodes)
        vectors = {nu: [g.S(a, nu) for a in nodes] for nu in labels}
        twist = "id"
    else:
        fixed = g.fixed_subgraph(K)
        if fixed.is_empty():
            raise ModelError(f"{K.name} fixes no node of {g.name}")
        nodes = list(fixed.nodes)
        labels = list(range(1, fixed.rank + 1))
        vectors = {nu: [fixed.S(a, nu) for a in nodes] for nu in labels}
        twist = K.name
    S = np.column_stack([_normalized(vectors[nu]) for nu in labels])
    S_mu = _normalized([g.S(a, model.mu) for a in g.nodes])[[a - 1 for a in nodes]]
    coefficients = np.einsum("an,am,al,a->nml", S, S, S.conj(), 1 / S_mu)

    # structure constants of the unnormalized ratios r_nu(a) = S_{a nu}/S_{a mu}
    ratio = {nu: [vectors[nu][i] * model.S_inv(a) for i, a in enumerate(nodes)] for nu in labels}
    basis = SparseOp(len(nodes), len(labels),
                     {c: prune({i: v for i, v in enumerate(ratio[nu])}) for c, nu in enumerate(labels)})
    constants = {}
    for nu in labels:
        for nup in labels:
            rhs = prune({i: ratio[nu][i] * ratio[nup][i] for i in range(len(nodes))})
            sol = solve(basis, rhs, model.field.one(), exact=model.field.is_exact)
            if sol is None:
                raise ModelError(f"Ratios of {g.name} do not close under products for ({nu}, {nup})")
            constants[(nu, nup)] = {labels[c]: v for c, v in sol.items()}
    logger.debug(f"Fusion table of {g.name} (mu={model.mu}, twist={twist}) over {len(labels)} labels")
    return FusionTable(g.name, model.mu, twist, labels, coefficients, constants)


def fusion_check(module: HeightsModule, N: int, j: int = 0, K=None) -> CheckReport:
    """O^nu O^nu' = sum C O^nu'' (and the twisted product over the fixed subgraph)."""
    table = fusion_table(module.model, K)
    report = CheckReport(module.g.name, "fusion")
    report.add("associativity", table.associativity())
    twisted = K is not None and not K.is_identity
    if twisted and K.order != 2:
        raise ModelError(f"The twisted product needs an involution, {K.name} has order {K.order}")
    scale = module.model.sqrt_kappa(K) ** (2 * (N - j)) if twisted else module.one
    for nu in table.labels:
        first = pasquier_op(module, nu, N, j, K)
        for nup in table.labels:
            if nup < nu:
                continue
            if twisted:
                middle = product_module(K, module)
                lhs = pasquier_op(middle, nup, N, j, K) @ first
                basis_op = lambda lab: fixed_diagonal(module, K, lab, N, j)
            else:
                lhs = pasquier_op(module, nup, N, j) @ first
                basis_op = lambda lab: pasquier_op(module, lab, N, j)
            rhs = SparseOp.zero(module.dim(N), module.dim(N))
            for lab, c in table.constants[(nu, nup)].items():
                rhs = rhs + basis_op(lab) * c
            report.add("product", lhs == rhs * scale, N=N, label=f"{nu}x{nup}")
    report.data["table"] = table.to_dict()
    return report


###################
# difference equations
###################
def pairing(model: HeightModel, alpha) -> list:
    """All (s, eps) with 1 <= s <= p'/2 and eps (q^s + q^-s) = alpha, smallest s first."""
    roots = model.roots
    out = []
    for s in range(1, model.pprime // 2 + 1):
        value = roots.power(s) + roots.power(-s)
        for eps in (1, -1):
            if value * eps == alpha:
                out.append((s, eps))
    return out


def dual_pairing(model: HeightModel, s: int, eps: int) -> tuple:
    """(s', eps') = (p' - s, (-1)^p eps)."""
    return model.pprime - s, eps * (-1) ** model.roots.p


def expand_word(op: ConnectivityOp, tokens, N: int) -> SparseOp:
    """phi_N(g_1 ... g_m w) rewritten with the exchange relations in terms of the
    maps phi_{N'}(w) and the generators of the source and target modules."""
    if not tokens:
        return op.matrix(N)
    (name, j, size), rest = tokens[0], tuple(tokens[1:])
    src, tgt = op.source, op.target
    if name == "f":
        return expand_word(op, (("c", 1, 2), ("cdag", 0, 2)) * j + rest, N)
    if name == "cdag":
        if j:
            return tgt.generator_op("cdag", N + size, j) @ expand_word(op, rest, N)
        inner = expand_word(op, rest, N + 2)
        return tgt.generator_op("Omegainv", N + size, 1) @ inner @ src.generator_op("cdag", N + 2, 0)
    if name == "c":
        if j:
            return tgt.generator_op("c", N + size, j) @ expand_word(op, rest, N)
        inner = expand_word(op, rest, N + 2)
        return (tgt.generator_op("c", N + size, 0) @ tgt.generator_op("c", N + size + 2, size)
                @ inner @ src.generator_op("cdag", N + 2, 0))
    raise DiagramError(f"No exchange relation moves {name} through phi(w)")


def difference_operator(op: ConnectivityOp, word: DiagramVector, s: int, N: int) -> SparseOp:
    """c_{s+1} ... c_{2s} phi_N(word . w), an operator on M(N)."""
    total = SparseOp.zero(op.target.dim(N + 2 * s), op.source.dim(N))
    for d, c in word.terms.items():
        total = total + expand_word(op, factorize(d), N) * c
    for i, j in enumerate(range(2 * s, s, -1)):
        total = op.target.generator_op("c", N + 2 * s - 2 * i, j) @ total
    return total


# eps power, [2] power, [3] power, factors (O_j or e_j, left to right)
LITERAL_EQUATIONS = {
    1: [(0, 0, 0, "O1"), (1, 0, 0, "O0")],
    2: [(0, 0, 0, "O2"), (1, 1, 0, "O1"), (0, 0, 0, "O0"),
        (1, 0, 0, "e1 O1"), (0, 1, 0, "e1 O0"), (0, 0, 0, "O1 e1")],
    3: [(0, 0, 0, "O3"), (1, 0, 1, "O2"), (0, 0, 1, "O1"), (1, 0, 0, "O0"),
        (0, 1, 0, "e1 O3"), (1, 1, 1, "e1 O2"), (0, 1, 0, "e1 O1"), (0, 1, 0, "O1 e1"),
        (1, 1, 0, "e2 O2"), (1, 1, 0, "O2 e2"), (0, 1, 1, "e2 O1"), (1, 1, 0, "e2 O0"),
        (1, 0, 0, "e1 e2 O2"), (0, 0, 1, "e1 e2 O1"), (0, 0, 0, "O1 e1 e2"), (1, 0, 1, "e1 e2 O0"),
        (0, 0, 1, "e2 e1 O3"), (1, 0, 1, "e2 e1 O2"), (1, 0, 0, "O2 e2 e1"), (0, 0, 0, "e2 e1 O1")],
}


def literal_equation(op: ConnectivityOp, s: int, eps: int, N: int) -> SparseOp:
    """The displayed local difference equation for s <= 3 at j = 0, as a matrix on M(N)."""
    if s not in LITERAL_EQUATIONS:
        raise DiagramError(f"No displayed difference equation for s={s}")
    module = op.source
    q = module.model.q
    q2, q3 = q_number(2, q), q_number(3, q)
    total = SparseOp.zero(module.dim(N), module.dim(N))
    for e_pow, n2, n3, factors in LITERAL_EQUATIONS[s]:
        term = module.identity(N)
        for factor in factors.split():
            index = int(factor[1:])
            piece = op.at(N, index) if factor[0] == "O" else module.generator_op("e", N, index)
            term = term @ piece
        coef = module.one * eps ** e_pow * q2 ** n2 * q3 ** n3
        total = total + term * coef
    return total


def verify_difference_equation(module: PeriodicHeights, nu: int = None, N: int = 4, s: int = None,
                               eps: int = None, state: InsertionState = None) -> CheckReport:
    """Singular-vector relations mu_{0,s} w = 0 and the resulting local difference
    equations for phi(w), w = w_nu (or a given insertion state with k = 0)."""
    if not module.K.is_identity:
        raise ModelError("Difference equations are derived on M_{g,mu,id}")
    if state is None:
        state = pasquier_state(module, nu)
    elif state.k != 0:
        raise InsertionStateError(f"Difference equations are derived for k = 0, got k = {state.k}")
    model = module.model
    alpha = state.x + state.x.inverse()
    candidates = pairing(model, alpha)
    if s is not None:
        if (s, eps) not in candidates:
            raise ModelError(f"eps (q^s + q^-s) with (s, eps) = ({s}, {eps}) does not match x + 1/x for {state.tag or state.x}")
    elif not candidates:
        raise ModelError(f"No pairing (s, eps) for x + 1/x = {alpha}")
    else:
        s, eps = candidates[0]
    sp, epsp = dual_pairing(model, s, eps)
    op = ConnectivityOp(state, module, module)
    report = CheckReport(module.g.name, "difference-equation")
    report.data.update({"nu": nu, "s": s, "eps": eps, "s_dual": sp, "eps_dual": epsp, "N": N})
    for sigma, size, sign in ((1, s, eps), (-1, sp, epsp)):
        word = singular_word("mu", model.roots, s=size, eps=sign, sigma=sigma)
        image = module.act(word, state.vector)
        report.add("singular-vector", vec_is_zero(image), N=2 * size, label=f"sigma={sigma}")
        if N >= 1:
            D = difference_operator(op, word, size, N)
            report.add("difference-equation", D.is_zero(), N=N, label=f"sigma={sigma}")
        if size in LITERAL_EQUATIONS and N >= size:
            ok = literal_equation(op, size, sign, N).is_zero()
            if sigma == 1 and size < 3:
                report.add("displayed-equation", ok, N=N, label=f"s={size}")
            else:
                report.data.setdefault("displayed", []).append({"s": size, "eps": sign, "annihilates": ok})
                if not ok:
                    logger.info(f"Displayed equation (s={size}, eps={sign}) does not vanish on {module.label}({N})")
    return report


###################
# boundary difference equations
###################
def boundary_equation(k, roots, size: int) -> DiagramVector:
    """The displayed boundary equations for p' = 3, 4, on ``size`` strands."""
    k = half_integer(k)
    beta = roots.beta
    one = beta ** 0

    def e(j):
        return generator("e", size, j, beta)

    ident = generator("id", size, beta=beta)
    if roots.pprime == 3 and k in (0, Fraction(1, 2)):
        return ident + e(1) * (one * (-1) ** (roots.p + 1))
    q2 = q_number(2, roots.q)
    if roots.pprime == 4 and k in (0, Fraction(1, 2)):
        return ident + e(1) * q2 + e(2) * q2 + e(1) @ e(2) + e(2) @ e(1)
    if roots.pprime == 4 and k == 1:
        return ident + e(2) * q2 + e(1) @ e(2)
    raise DiagramError(f"No displayed boundary equation for p'={roots.pprime}, k={k}")


def verify_boundary_equation(op: ConnectivityOp, N_values) -> CheckReport:
    """(lambda_hat_k x id) psi_N = 0, and the displayed form when p' <= 4."""
    if not op.boundary:
        raise ModelError("The boundary equation applies to psi(w)")
    k = op.k
    roots = op.source.model.roots
    kp = roots.pprime - 1 - k
    report = CheckReport(op.source.g.name, "boundary-equation")
    if k > Fraction(roots.pprime, 2) - 1:
        raise ModelError(f"psi(w) with k={k} has no boundary equation at p'={roots.pprime}")
    word = lambda_hat(k, roots)
    for N in _window(N_values):
        pad = N - int(kp - k)
        if pad < 0 or op.source.dim(N) == 0:
            continue
        size = N + op.state.N
        O = op.matrix(N)
        report.add("lambda-hat", (op.target.operator(tensor_id(word, pad)) @ O).is_zero(), N=N)
        if roots.pprime in (3, 4):
            literal = op.target.operator(boundary_equation(k, roots, size))
            report.add("displayed-equation", (literal @ O).is_zero(), N=N)
    return report
