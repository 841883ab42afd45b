# decomp.py

"""
Insertion states and machine checks of the decompositions

    M_{g,mu,a,b} = sum_k (J_{2k+1})_{ab} Q_k
    M_{g,mu,K}   = sum over the listed labels Q_{k,x}.

A decomposition is verified at a size N by building, for every label, the
insertion space in M(2k), mapping the standard module into M(N) through each
insertion state, and checking that every image has the dimension of the
quotient and that the images together span M(N).
"""

from collections import Counter
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction

import numpy as np

from .dynkin import GraphAutomorphism
from .exceptions import InsertionStateError, ModelError, SingularValueError
from .heights import BoundaryHeights, HeightsModule, PeriodicHeights, dimension_oracle
from .linkmod import (LinkFamily, check_insertion_state, half_integer, insertion_map,
                      quotient_dimension_V, quotient_dimension_W)
from .logger import get_logger
from .projector import apply_uncoiled, jones_wenzl_in, uncoiled_tag
from .utils import Echelon, SparseOp, eigenspace, nullspace, restricted_trace, vec_add, vec_is_zero, vec_scale

logger = get_logger(__name__)


###################
# labels
###################
@dataclass(frozen=True)
class Label:
    """Q_k (boundary, ``s`` is None) or Q_{k, eps q^s} (periodic, s signed).

    ``sector`` = (name, sign) singles out one copy of a degenerate label: the
    eigenvalue sign of the named automorphism on its insertion space.
    """
    k: Fraction
    eps: int = 1
    s: Fraction = None
    sector: tuple = None

    @property
    def periodic(self) -> bool:
        return self.s is not None

    def twist(self, roots):
        return roots.power(self.s) * self.eps

    def reduced_s(self, pprime: int) -> Fraction:
        """s in (0, p'), using eps q^-s = eps (-1)^p q^(p'-s)."""
        return self.s if self.s > 0 else pprime + self.s

    def dimension(self, N: int, pprime: int) -> int:
        if not self.periodic:
            return quotient_dimension_V(N, self.k, pprime)
        return quotient_dimension_W(N, self.k, self.reduced_s(pprime), pprime)

    def __str__(self):
        if not self.periodic:
            return f"Q_{self.k}"
        sign = "" if self.eps == 1 else "-"
        text = f"Q_{self.k},{sign}q^{self.s}"
        if self.sector is not None:
            name, value = self.sector
            text += f"[{name}={value:+d}]"
        return text


def _k_range(pprime: int):
    return [Fraction(t, 2) for t in range(0, pprime - 1)]


def boundary_multiplicities(g, a: int, b: int) -> Counter:
    """{k: (J_{2k+1})_{ab}} for k = 0, 1/2, ..., p'/2 - 1."""
    out = Counter()
    for k in _k_range(g.coxeter):
        mult = int(g.fused_adjacency(int(2 * k + 1))[a - 1, b - 1])
        if mult < 0:
            raise ModelError(f"Negative multiplicity {mult} for Q_{k} in {g.name} ({a},{b})")
        if mult:
            out[k] = mult
    return out


def closed_form_boundary(g, a: int, b: int) -> Counter:
    """The explicit A_n and D_n boundary decompositions."""
    n = g.rank
    out = Counter()
    if g.family == "A":
        low, high = Fraction(abs(a - b), 2), min(Fraction(a + b, 2) - 1, n - Fraction(a + b, 2))
        k = low
        while k <= high:
            out[k] += 1
            k += 1
        return out
    if g.family != "D":
        raise ModelError(f"No closed form for the boundary decomposition of {g.name}")
    fork = (n - 1, n)
    if a not in fork and b not in fork:
        k = Fraction(abs(a - b), 2)
        while k <= Fraction(a + b, 2) - 1:
            out[k] += 1
            out[n - k - 2] += 1
            k += 1
    elif a in fork and b in fork:
        start = 0 if a == b else 1
        out.update({Fraction(k): 1 for k in range(start, n - 1, 2)})
    else:
        c = b if a in fork else a
        k = Fraction(n - c - 1, 2)
        while k <= Fraction(n + c - 3, 2):
            out[k] += 1
            k += 1
    return out


def _labels_k0(model, exponents, pprime: int) -> list:
    return [Label(Fraction(0), (-1) ** (s * model.m), Fraction(s)) for s in exponents]


def _pm(k, s) -> list:
    return [Label(Fraction(k), eps, Fraction(s)) for eps in (1, -1)]


def _pm_sigma(k, s) -> list:
    return [Label(Fraction(k), eps, Fraction(sigma * s)) for sigma in (1, -1) for eps in (1, -1)]


def periodic_labels(model, K: GraphAutomorphism) -> list:
    """Summands of M_{g,mu,K}, one entry per copy."""
    g = model.g
    n, pprime = g.rank, g.coxeter
    name = K.name if not K.is_identity else "id"
    labels = []
    if name == "id":
        if g.family == "A":
            labels = _labels_k0(model, range(1, n + 1), pprime)
        elif g.family == "D":
            labels = _labels_k0(model, [s for s in range(1, 2 * n - 2, 2) if s != n - 1], pprime)
            (fork,) = _labels_k0(model, [n - 1], pprime)
            # n even: exponent n-1 twice, split by the fork exchange
            labels += [replace(fork, sector=("P", 1)), replace(fork, sector=("P", -1))] if n % 2 == 0 else [fork]
            for t in range(1, (n - 2) // 2 + 1):
                labels += _pm(2 * t, n - 1)
        elif g.name == "E6":
            labels = _labels_k0(model, (1, 4, 5, 7, 8, 11), pprime) + _pm(2, 6) + _pm_sigma(3, 4)
        elif g.name == "E7":
            labels = _labels_k0(model, (1, 5, 7, 9, 11, 13, 17), pprime)
            for k in (2, 4, 8):
                labels += _pm(k, 9)
            labels += _pm_sigma(3, 6)
        else:
            labels = _labels_k0(model, (1, 7, 11, 13, 17, 19, 23, 29), pprime)
            for k in (2, 4, 8, 14):
                labels += _pm(k, 15)
            for k in (3, 9):
                labels += _pm_sigma(k, 10)
            for s in (6, 12):
                labels += _pm_sigma(5, s)
        return labels
    half = Fraction(pprime, 2)
    if g.family == "A" and name == "R":
        if n % 2:
            labels = _labels_k0(model, [pprime // 2], pprime)
            for k in range(1, (n - 1) // 2 + 1):
                labels += _pm(k, half)
        else:
            for t in range(1, n, 2):
                labels += _pm(Fraction(t, 2), half)
    elif g.family == "D" and name in ("P", "P34", "P13", "P14"):
        labels = _labels_k0(model, range(2, 2 * n - 3, 2), pprime)
        for t in range(1, (n - 1) // 2 + 1):
            labels += _pm(2 * t - 1, n - 1)
    elif g.name == "D4" and name in ("P134", "P143"):
        labels = _labels_k0(model, [3], pprime) + _pm_sigma(1, 2)
    elif g.name == "E6" and name == "P":
        labels = _labels_k0(model, (4, 8), pprime)
        for k in (1, 2, 5):
            labels += _pm(k, 6)
        labels += _pm_sigma(2, 3)
    else:
        raise ModelError(f"No decomposition is known for {g.name} twisted by {K.name}")
    return labels


def exponent_permutation_check(module: PeriodicHeights) -> bool:
    """The alphas of the k = 0 labels are the spectrum of A (or of the fixed-subgraph A)."""
    roots = module.model.roots
    alphas = [lab.twist(roots) + lab.twist(roots).inverse()
              for lab in periodic_labels(module.model, module.K) if lab.k == 0]
    betas = module.reduced_betas()
    if module.K.is_identity:
        g = module.g
        betas = [g.beta(nu) for nu in range(1, g.rank + 1)]
    remaining = list(betas)
    for alpha in alphas:
        match = next((i for i, b in enumerate(remaining) if b == alpha), None)
        if match is None:
            return False
        remaining.pop(match)
    return not remaining


###################
# insertion states
###################
@dataclass
class InsertionState:
    k: Fraction
    vector: dict
    module: HeightsModule
    x: object = None
    provenance: str = "kernel"
    tag: str = ""
    overlap: object = None

    @property
    def N(self) -> int:
        return int(2 * self.k)

    def family(self) -> LinkFamily:
        kind = "W" if self.module.periodic else "V"
        return LinkFamily(kind, self.k, self.module.field, self.module.beta, self.x)

    def check(self):
        check_insertion_state(self.module, self.vector, self.family())

    def to_dict(self) -> dict:
        paths = self.module.paths(self.N)
        return {
            "k": str(self.k),
            "x": None if self.x is None else str(self.x),
            "provenance": self.provenance,
            "tag": self.tag,
            "components": {",".join(map(str, paths[i])): str(v) for i, v in sorted(self.vector.items())},
        }


def insertion_space(module: HeightsModule, k, x=None) -> list:
    """Basis of the states of M(2k) obeying the insertion conditions for (k) or (k, x)."""
    k = half_integer(k)
    N = int(2 * k)
    one, exact = module.one, module.exact
    if module.dim(N) == 0:
        return []
    if not module.periodic:
        if N < 2:
            return [{i: one} for i in range(module.dim(N))]
        ops = [module.generator_op("c", N, j) for j in range(1, N)]
        return nullspace(ops, one, exact=exact)
    if x is None:
        raise ModelError("Periodic insertion states need a twist x")
    if N == 0:
        return eigenspace(module.generator_op("f", 0, 1), x + x.inverse(), one, exact=exact)
    constraints = [module.generator_op("c", N, 0)] if N >= 2 else []
    return eigenspace(module.generator_op("Omega", N, 1), x, one, exact=exact, constraints=constraints)


def _sector_project(module: PeriodicHeights, label: Label, vec: dict) -> dict:
    """(v + sign L_N v) / 2 with the kappa phase of L_N removed."""
    name, sign = label.sector
    N = int(2 * label.k)
    L = module.g.automorphism(name)
    op, target = module.automorphism_op(L, N)
    if target is not module:
        raise ModelError(f"{name} does not commute with {module.K.name}")
    value = module.model.sqrt_kappa(L) ** N
    return vec_scale(vec_add(vec, op.apply(vec), value.inverse() * sign), module.one * Fraction(1, 2))


def label_insertion_space(module: HeightsModule, label: Label) -> list:
    """Insertion space of one label, cut down to its sector when it has one."""
    if not label.periodic:
        return insertion_space(module, label.k)
    space = insertion_space(module, label.k, label.twist(module.model.roots))
    if label.sector is None:
        return space
    ech = Echelon(exact=module.exact)
    out = []
    for v in space:
        projected = _sector_project(module, label, v)
        if not vec_is_zero(projected) and ech.add(projected):
            out.append(projected)
    return out


def sector_trace_basis(module: PeriodicHeights, label: Label):
    """(basis, positions): the full insertion space of label as a sum of sectors, and where its own sector sits."""
    own = label_insertion_space(module, label)
    if label.sector is None:
        return own, None
    name, sign = label.sector
    rest = label_insertion_space(module, replace(label, sector=(name, -sign)))
    return own + rest, range(len(own))


def _extend(vec: dict, b: int) -> dict:
    return {path + (b,): c for path, c in vec.items()}


def _induce(module: BoundaryHeights, b: int, N: int, cache: dict) -> list:
    """Insertion states of M_{a,b}(N) as path dictionaries, by induction on N."""
    key = (b, N)
    if key in cache:
        return cache[key]
    a, g, one = module.a, module.g, module.one
    if N == 0:
        result = [{(a,): one}] if a == b else []
    elif N == 1:
        result = [{(a, b): one}] if g.adjacent(a, b) else []
    else:
        candidates = [_extend(v, b) for bp in g.neighbors(b) for v in _induce(module, bp, N - 1, cache)]
        result = []
        if candidates:
            target = BoundaryHeights(module.model, a, b)
            index = target.index(N)
            c_last = target.generator_op("c", N, N - 1)
            columns = [c_last.apply({index[p]: c for p, c in cand.items()}) for cand in candidates]
            image = SparseOp.from_columns(target.dim(N - 2), columns)
            for y in nullspace([image], one, exact=module.exact):
                combo = {}
                for pos, coef in y.items():
                    combo = vec_add(combo, candidates[pos], coef)
                result.append(combo)
    cache[key] = result
    return result


def _a_series(module: BoundaryHeights, b: int, twice_k: int, cache: dict) -> dict:
    """w_k(a,b) from the A_n recursion, as a path dictionary (empty outside its range)."""
    key = (b, twice_k)
    if key in cache:
        return cache[key]
    a, n, one = module.a, module.g.rank, module.one
    result = {}
    if 1 <= b <= n and abs(a - b) <= twice_k <= min(a + b - 2, 2 * n - a - b) and (twice_k - a + b) % 2 == 0:
        if twice_k == abs(a - b):
            step = 1 if b >= a else -1
            result = {tuple(range(a, b + step, step)): one}
        else:
            sign = (-1) ** ((twice_k + b - a) // 2)
            result = _extend(_a_series(module, b - 1, twice_k - 1, cache), b)
            result = vec_add(result, _extend(_a_series(module, b + 1, twice_k - 1, cache), b), one * sign)
    cache[key] = result
    return result


def _to_index(module: HeightsModule, vec: dict, N: int) -> dict:
    index = module.index(N)
    return {index[p]: c for p, c in vec.items()}


def boundary_insertion_states(module: BoundaryHeights, k) -> list:
    """Insertion states with 2k defects in M_{g,mu,a,b}(2k).

    A_n uses its explicit recursion. The other models use the induction on the
    last height; for D_n with a, b <= n-2 the space is split by the eigenvalue of
    K_N for the fork exchange.
    """
    k = half_integer(k)
    N = int(2 * k)
    g = module.g
    if g.family == "A":
        vec = _a_series(module, module.b, N, {})
        states = [InsertionState(k, _to_index(module, vec, N), module, provenance="recursion")] if vec else []
    else:
        states = [InsertionState(k, _to_index(module, v, N), module, provenance="induction")
                  for v in _induce(module, module.b, N, {})]
        fork = g.automorphism("P") if g.family == "D" else None
        if fork is not None and fork(module.a) == module.a and fork(module.b) == module.b and states:
            states = _split_by(module, fork, states, N)
    if not states:
        raise InsertionStateError(f"{module.label} has no insertion state with {N} defects")
    for st in states:
        st.check()
    logger.debug(f"{module.label}: {len(states)} insertion state(s) with k={k}")
    return states


def _split_by(module: BoundaryHeights, L: GraphAutomorphism, states: list, N: int) -> list:
    op = module.automorphism_op(L, N)
    value = module.model.sqrt_kappa(L) ** (N + 1)
    half = Fraction(1, 2)
    out = []
    for sign, tag in ((1, "+"), (-1, "-")):
        ech = Echelon(exact=module.exact)
        for st in states:
            projected = vec_scale(vec_add(st.vector, op.apply(st.vector), value.inverse() * sign), module.one * half)
            if not vec_is_zero(projected) and ech.add(projected):
                out.append(InsertionState(st.k, projected, module, provenance=st.provenance, tag=tag))
    return out


def periodic_insertion_state(module: PeriodicHeights, k, x, seed: dict = None) -> InsertionState:
    """w_{k,x} = hat P_{2k,x} Xi seed, with the kernel of the insertion conditions as fallback.

    Xi projects onto the eigenspace K_{2k} = x^{2k}. Without a seed, the basis
    states of M(2k) are tried in order. The overlap <seed, w> is recorded.
    """
    k = half_integer(k)
    N = int(2 * k)
    if N > 0 and uncoiled_tag(N, x) != "even-1":
        q = module.model.q
        try:
            xi = module.eigen_projector(N, x ** N)
            P = jones_wenzl_in(module, N, q)
            seeds = [seed] if seed is not None else ({i: module.one} for i in range(module.dim(N)))
            for candidate in seeds:
                start = xi.apply(candidate)
                if not start:
                    continue
                w = apply_uncoiled(module, N, x, q, start, projector=P)
                if w:
                    state = InsertionState(k, w, module, x, provenance="projector")
                    state.check()
                    state.overlap = module.form(candidate, w, N, left=module)
                    return state
        except (SingularValueError, ModelError) as exc:
            logger.info(f"Projector path failed for ({k}, {x}) on {module.label}: {exc}")
    space = insertion_space(module, k, x)
    if not space:
        raise InsertionStateError(f"{module.label} has no insertion state with parameters ({k}, {x})")
    state = InsertionState(k, space[0], module, x, provenance="kernel")
    state.check()
    return state


###################
# twisted multiplicities
###################
def _chain_fused(rank: int, s: int) -> np.ndarray:
    adjacency = np.zeros((rank, rank), dtype=np.int64)
    for i in range(rank - 1):
        adjacency[i, i + 1] = adjacency[i + 1, i] = 1
    if s < 0:
        return -_chain_fused(rank, -s)
    prev = np.zeros((rank, rank), dtype=np.int64)
    if s == 0:
        return prev
    current = np.eye(rank, dtype=np.int64)
    for _ in range(s - 1):
        prev, current = current, current @ adjacency - prev
    return current


def twisted_multiplicity_formula(module: BoundaryHeights, L: GraphAutomorphism, k):
    """kappa^{(2k+1)/2} (tilde J_{2k+1})_{ab} on the L-fixed subgraph."""
    k = half_integer(k)
    fixed = module.g.fixed_subgraph(L)
    if module.a not in fixed.nodes or module.b not in fixed.nodes:
        raise ModelError(f"{L.name} does not fix the boundary heights of {module.label}")
    fused = _chain_fused(fixed.rank, int(2 * k + 1))
    value = int(fused[fixed.nodes.index(module.a), fixed.nodes.index(module.b)])
    return module.model.sqrt_kappa(L) ** int(2 * k + 1) * value


def twisted_multiplicity(module: BoundaryHeights, L: GraphAutomorphism, k):
    """Trace of K_{2k} on the insertion space with 2k defects."""
    k = half_integer(k)
    N = int(2 * k)
    basis = insertion_space(module, k)
    return restricted_trace(module.automorphism_op(L, N), basis, module.zero, exact=module.exact)


###################
# verification
###################
@dataclass
class Check:
    name: str
    passed: bool
    N: int = None
    label: str = ""
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "N": self.N, "label": self.label, "detail": self.detail}


@dataclass
class CheckReport:
    """A named list of checks, with free-form data carried into the JSON output."""
    model: str
    kind: str
    checks: list = dc_field(default_factory=list)
    data: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **kwargs) -> bool:
        self.checks.append(Check(name, bool(passed), **kwargs))
        if not passed:
            logger.warning(f"{self.model}: check {name} failed ({kwargs})")
        return passed

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "kind": self.kind,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            **self.data,
        }


@dataclass
class DecompositionReport(CheckReport):
    labels: Counter = dc_field(default_factory=Counter)

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["summands"] = {str(lab): m for lab, m in self.labels.items()}
        return out


def decomposition_labels(module: HeightsModule) -> Counter:
    if module.periodic:
        return Counter(periodic_labels(module.model, module.K))
    return Counter({Label(k): m for k, m in boundary_multiplicities(module.g, module.a, module.b).items()})


def _form(module: HeightsModule, u: dict, v: dict, N: int):
    """The weighted form of module with itself; Omega is unitary for it when kappa = 1."""
    if module.periodic:
        return module.form(u, v, N, left=module)
    return module.form(u, v, N)


def _orthonormalize(module: HeightsModule, vectors: list, N: int) -> list:
    """Gram-Schmidt for the form; vectors with vanishing norm are kept as they are."""
    out = []
    for v in vectors:
        for u in out:
            norm = _form(module, u, u, N)
            if norm.is_zero():
                continue
            v = vec_add(v, u, -(_form(module, u, v, N) / norm))
        out.append(v)
    return out


def _images_orthogonal(module: HeightsModule, first: SparseOp, second: SparseOp, N: int) -> bool:
    for u in first.cols.values():
        for v in second.cols.values():
            if not _form(module, u, v, N).is_zero():
                return False
    return True


def form_partners(module: HeightsModule, first: Label, second: Label) -> bool:
    """Whether the form may pair the images of two labels.

    Q_{k,x} pairs with Q_{k,kappa x}, and at k = 0 also with Q_{0,kappa/x}.
    Different sectors of one label are always separated.
    """
    if first.k != second.k or first.sector != second.sector:
        return False
    if not module.periodic:
        return True
    roots = module.model.roots
    x, y = first.twist(roots), second.twist(roots)
    kappa = module.kappa
    return y == kappa * x or (first.k == 0 and y == kappa * x.inverse())


def verify_decomposition(module: HeightsModule, N_max: int, structure_N: int = None,
                         orthogonality: bool = True) -> DecompositionReport:
    """Check the decomposition of module against dimensions and insertion states.

    The dimension identity is checked for every admissible N <= N_max. The
    insertion spaces and generated submodules are built at ``structure_N``
    (default: the largest admissible N <= N_max) for the labels with 2k <= structure_N.
    With ``orthogonality``, the images of labels the form cannot pair are
    checked to be orthogonal; the counts go to ``report.data["orthogonality"]``.
    """
    g, roots = module.g, module.model.roots
    pprime = g.coxeter
    labels = decomposition_labels(module)
    report = DecompositionReport(module.label, "periodic" if module.periodic else "boundary", labels=labels)
    parity = module.parity
    sizes = list(range(parity, N_max + 1, 2))
    for N in sizes:
        expected = dimension_oracle(module, N)
        total = sum(m * lab.dimension(N, pprime) for lab, m in labels.items())
        report.add("dimension", expected == total == module.dim(N), N=N,
                   detail=f"dim M = {module.dim(N)}, oracle = {expected}, sum of quotients = {total}")
    if module.periodic:
        report.add("exponents", exponent_permutation_check(module))
    if not sizes:
        return report
    N = sizes[-1] if structure_N is None else structure_N
    if (N - parity) % 2:
        raise ModelError(f"{module.label} is empty at N={N}")
    span = Echelon(exact=module.exact)
    images = []
    for label, mult in sorted(labels.items(), key=lambda item: (item[0].k, str(item[0]))):
        N_label = int(2 * label.k)
        if N_label > N:
            continue
        vectors = label_insertion_space(module, label)
        report.add("insertion-space", len(vectors) == mult, N=N_label, label=str(label),
                   detail=f"dimension {len(vectors)}, multiplicity {mult}")
        if orthogonality:
            vectors = _orthonormalize(module, vectors, N_label)
        x = label.twist(roots) if label.periodic else None
        family = LinkFamily("W" if label.periodic else "V", label.k, module.field, module.beta, x)
        expected = label.dimension(N, pprime)
        for v in vectors:
            image = insertion_map(module, v, family, N)
            rank = sum(1 for col in image.cols.values() if span.add(col))
            local = Echelon(exact=module.exact)
            image_rank = sum(1 for col in image.cols.values() if local.add(col))
            report.add("image", image_rank == expected, N=N, label=str(label),
                       detail=f"rank {image_rank}, dim Q = {expected}, new directions {rank}")
            images.append((label, image))
    report.add("span", span.rank == module.dim(N), N=N, detail=f"rank {span.rank} of {module.dim(N)}")
    if not orthogonality:
        report.data["orthogonality"] = {"skipped": True}
        return report
    checked = paired = 0
    for i, (lab1, im1) in enumerate(images):
        for lab2, im2 in images[i + 1:]:
            if lab1 != lab2 and form_partners(module, lab1, lab2):
                paired += 1
                continue
            checked += 1
            report.add("orthogonal", _images_orthogonal(module, im1, im2, N), N=N, label=f"{lab1} / {lab2}")
    report.data["orthogonality"] = {"skipped": False, "checked": checked, "paired": paired}
    return report


def sector_insertion_state(module: PeriodicHeights, label: Label) -> InsertionState:
    """The insertion state of a label with a sector: the projector state cut to the sector, else the kernel."""
    name, sign = label.sector
    x = label.twist(module.model.roots)
    state = periodic_insertion_state(module, label.k, x)
    vector, provenance = _sector_project(module, label, state.vector), state.provenance
    if vec_is_zero(vector):
        space = label_insertion_space(module, label)
        if not space:
            raise InsertionStateError(f"{module.label} has no insertion state for {label}")
        vector, provenance = space[0], "kernel"
    out = InsertionState(label.k, vector, module, x, provenance=provenance, tag=f"{name}={sign:+d}")
    out.check()
    return out


def insertion_state_report(module: HeightsModule, label: Label) -> dict:
    """The constructed insertion state(s) of one label, for the CLI."""
    roots = module.model.roots
    if label.sector is not None:
        states = [sector_insertion_state(module, label)]
    elif label.periodic:
        states = [periodic_insertion_state(module, label.k, label.twist(roots))]
    else:
        states = boundary_insertion_states(module, label.k)
    return {"label": str(label), "states": [st.to_dict() for st in states]}
