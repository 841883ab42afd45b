# suites.py

"""
Check families run by ``adetl verify``.

Every suite takes a height model and the largest lattice size to visit, and
returns a list of CheckReports. Sizes are capped per suite so that a suite on
the larger exceptional models stays a desk computation.
"""

from fractions import Fraction

import numpy as np

from .charpart import (D4_PAIRS, cylinder_partition, d4_family_matrices, group_relations, modular_check,
                       partition_combo, theorem_combo, torus_partition, twist_family_matrices)
from .decomp import (CheckReport, boundary_insertion_states, boundary_multiplicities, closed_form_boundary,
                     verify_decomposition)
from .diagram import factorize, from_word, generator, planar_diagrams
from .exceptions import ModelError, SingularValueError
from .heights import (HeightModel, HeightsModule, boundary_pairs, dimension_oracle, random_word, word_diagram,
                      word_matrix)
from .linkmod import LinkFamily, QuotientModule, quotient_dimension_V, standard_dimension
from .localop import (boundary_operator, connectivity, connectivity_relations, fusion_check, pasquier_op,
                      pasquier_state, verify_boundary_equation, verify_difference_equation)
from .logger import get_logger
from .projector import gamma, gamma_closed_form, gamma_sum_identity, jones_wenzl, jones_wenzl_in
from .scalars import ExactField, FloatField

logger = get_logger(__name__)


def _pairs(g, N_max: int) -> list:
    """Boundary pairs a <= b that are nonempty at N_max or N_max - 1."""
    found = set()
    for N in (N_max, max(N_max - 1, 0)):
        found.update((a, b) for a, b in boundary_pairs(g, N) if a <= b)
    return sorted(found)


def _halves(N: int):
    return [Fraction(t, 2) for t in range(N % 2, N + 1, 2)]


###################
# algebra relations
###################
def _diagram_relations(report: CheckReport, beta, N: int):
    def e(j):
        return generator("e", N, j % N, beta)

    for j in range(N if N >= 2 else 0):
        report.add("e^2 = beta e", e(j) @ e(j) == e(j) * beta, N=N, detail=f"e_{j}")
    if N >= 3:
        for j in range(N):
            report.add("braid", e(j) @ e(j + 1) @ e(j) == e(j), N=N, detail=f"e_{j} e_{j + 1} e_{j}")
            report.add("braid", e(j + 1) @ e(j) @ e(j + 1) == e(j + 1), N=N, detail=f"e_{j + 1} e_{j} e_{j + 1}")
    if N >= 4:
        for i in range(N):
            for j in range(i + 2, N):
                if (j - i) % N in (1, N - 1):
                    continue
                report.add("commutation", e(i) @ e(j) == e(j) @ e(i), N=N, detail=f"e_{i}, e_{j}")
    omega = generator("Omega", N, 1, beta)
    omega_inv = generator("Omegainv", N, 1, beta)
    report.add("Omega Omega^-1 = id", omega @ omega_inv == generator("id", N, beta=beta), N=N)
    for j in range(N if N >= 2 else 0):
        report.add("rotation", omega @ e(j) @ omega_inv == e(j - 1), N=N, detail=f"e_{j}")
    for j in range(N + 2):
        c, cdag = generator("c", N + 2, j, beta), generator("cdag", N + 2, j, beta)
        report.add("c cdag = beta", c @ cdag == generator("id", N, beta=beta) * beta, N=N, detail=f"c_{j}")


def _factorization(report: CheckReport, N: int):
    for n_out in range(N % 2, N + 1, 2):
        for d in planar_diagrams(n_out, N):
            report.add("factorization", from_word(factorize(d), N) == d, N=N, detail=d.encode())


def _heights_relations(report: CheckReport, module: HeightsModule, N: int):
    beta = module.beta
    low = 0 if module.periodic else 1
    top = N if module.periodic else N - 1

    def e(j):
        return module.generator_op("e", N, j % N if module.periodic else j)

    for j in range(low, top):
        report.add("e^2 = beta e", e(j) @ e(j) == e(j) * beta, N=N, label=module.label, detail=f"e_{j}")
    stop = top if module.periodic else top - 1
    if N >= 3:
        for j in range(low, stop):
            report.add("braid", e(j) @ e(j + 1) @ e(j) == e(j), N=N, label=module.label, detail=f"e_{j}")
            report.add("braid", e(j + 1) @ e(j) @ e(j + 1) == e(j + 1), N=N, label=module.label,
                       detail=f"e_{j + 1}")
    if module.periodic:
        omega = module.generator_op("Omega", N, 1)
        omega_inv = module.generator_op("Omegainv", N, 1)
        report.add("Omega Omega^-1 = id", omega @ omega_inv == module.identity(N), N=N, label=module.label)
        for j in range(N):
            report.add("rotation", omega @ e(j) @ omega_inv == e(j - 1), N=N, label=module.label, detail=f"e_{j}")
    for j in range(low, N + 2):
        if module.dim(N + 2) == 0:
            break
        c, cdag = module.generator_op("c", N + 2, j), module.generator_op("cdag", N + 2, j)
        report.add("c cdag = beta", c @ cdag == module.identity(N) * beta, N=N, label=module.label,
                   detail=f"c_{j}")


def relations_suite(model: HeightModel, N_max: int) -> list:
    g = model.g
    diagrams = CheckReport(g.name, "diagram-relations")
    for N in range(1, min(N_max, 8) + 1):
        _diagram_relations(diagrams, model.beta, N)
        if N <= 4:
            _factorization(diagrams, N)
    heights = CheckReport(g.name, "heights-relations")
    modules = [model.periodic(K) for K in g.automorphisms()]
    modules += [model.boundary(a, b) for a, b in _pairs(g, N_max)[:3]]
    rng = np.random.default_rng(0)
    for module in modules:
        for N in range(2, min(N_max, 6) + 1):
            if module.dim(N):
                _heights_relations(heights, module, N)
                tokens = random_word(N, 6, module.periodic, rng)
                heights.add("functoriality", word_matrix(module, tokens, N)
                            == module.operator(word_diagram(tokens, module.beta, N)), N=N, label=module.label)
    return [diagrams, heights]


###################
# dimensions
###################
def dimensions_suite(model: HeightModel, N_max: int) -> list:
    g, roots = model.g, model.roots
    pprime = g.coxeter
    link = CheckReport(g.name, "link-dimensions")
    for N in range(0, min(N_max, 8) + 1):
        for k in _halves(N):
            V = LinkFamily("V", k, model.field, model.beta)
            link.add("dim V", V.dim(N) == standard_dimension("V", N, k), N=N, label=f"k={k}")
            W = LinkFamily("W", k, model.field, model.beta, roots.power(1))
            link.add("dim W", W.dim(N) == standard_dimension("W", N, k), N=N, label=f"k={k}")
            if N <= 6 and 2 * k + 2 <= pprime:
                Q = QuotientModule(V, roots)
                link.add("dim Q", Q.dim(N) == quotient_dimension_V(N, k, pprime), N=N, label=f"k={k}")
    heights = CheckReport(g.name, "heights-dimensions")
    modules = [model.periodic(K) for K in g.automorphisms()]
    modules += [model.boundary(a, b) for a in g.nodes for b in g.nodes]
    for module in modules:
        for N in range(0, N_max + 1):
            heights.add("dim M", module.dim(N) == dimension_oracle(module, N), N=N, label=module.label)
    if g.family in ("A", "D"):
        for a in g.nodes:
            for b in g.nodes:
                heights.add("closed form", boundary_multiplicities(g, a, b) == closed_form_boundary(g, a, b),
                            label=f"({a},{b})")
    return [link, heights]


###################
# projectors
###################
def jones_wenzl_suite(model: HeightModel, N_max: int) -> list:
    g, q = model.g, model.q
    report = CheckReport(g.name, "jones-wenzl")
    module = model.periodic("id")
    for n in range(2, min(g.coxeter - 1, N_max, 6) + 1):
        P = jones_wenzl(n, q, model.beta)
        report.add("idempotent", P @ P == P, N=n)
        for j in range(1, n):
            report.add("killed by e_j", (generator("e", n, j, model.beta) @ P).is_zero(), N=n, detail=f"e_{j}")
        report.add("matrix", jones_wenzl_in(module, n, q) == module.operator(P), N=n, label=module.label)
    return [report]


def _generic_field(backend: str):
    """q = exp(2 pi i/60) and its square root: far from any pole for N <= 9."""
    return ExactField(120) if backend == "exact" else FloatField(120)


def gamma_suite(model: HeightModel, N_max: int) -> list:
    field = _generic_field(model.g.backend)
    q, q_half = field.root(60, 1), field.root(120, 1)
    samples = [field.root(120, k) for k in (31, 37, 41, 43, 47)]
    report = CheckReport(model.g.name, "gamma")
    for N in range(2, min(max(N_max, 2), 9) + 1):
        for i, x in enumerate(samples):
            try:
                for s in range((N - 1) // 2 + 1):
                    report.add("closed form", gamma(s, 0, N, x, q) == gamma_closed_form(s, N, x, q),
                               N=N, label=f"x{i}", detail=f"s={s}")
                for sign in (1, -1):
                    lhs, rhs = gamma_sum_identity(N, x, q, q_half, sign)
                    report.add("alternating sum", lhs == rhs, N=N, label=f"x{i}", detail=f"gamma={sign}")
            except SingularValueError as err:
                logger.info(f"Skipping sample x{i} at N={N}: {err}")
    return [report]


###################
# lattice structure
###################
def minimal_polys_suite(model: HeightModel, N_max: int) -> list:
    report = CheckReport(model.g.name, "minimal-polys")
    for K in model.g.automorphisms():
        module = model.periodic(K)
        for N in (2, 4, 6):
            if N <= max(N_max, 2):
                report.add("E prod(Omega E - beta)", module.minimal_polynomial_check(N), N=N, label=module.label)
    return [report]


def decompositions_suite(model: HeightModel, N_max: int) -> list:
    g = model.g
    reports = [verify_decomposition(model.boundary(a, b), N_max) for a, b in _pairs(g, N_max)]
    reports += [verify_decomposition(model.periodic(K), N_max) for K in g.automorphisms()]
    return reports


def _twist_pairs(g) -> list:
    if g.name == "D4":
        return list(D4_PAIRS)
    if g.family == "A":
        return [("id", "id"), ("id", "R"), ("R", "id"), ("R", "R")]
    if g.family == "D" or g.name == "E6":
        return [("id", "id"), ("id", "P"), ("P", "id"), ("P", "P")]
    return [("id", "id")]


def traces_suite(model: HeightModel, N_max: int) -> list:
    g = model.g
    cylinder = CheckReport(g.name, "cylinder-traces")
    for a, b in _pairs(g, N_max)[:4]:
        module = model.boundary(a, b)
        for N in range(module.parity, min(N_max, 6) + 1, 2):
            for M in (0, 2, 4):
                sides = cylinder_partition(module, M, N)
                cylinder.add("cylinder", sides["lattice"] == sides["decomposed"], N=N, label=module.label,
                             detail=f"M={M}")
    torus = CheckReport(g.name, "torus-traces")
    combos = CheckReport(g.name, "torus-combinations")
    for K, Kp in _twist_pairs(g):
        module = model.periodic(K)
        for N in range(module.parity, min(N_max, 4) + 1, 2):
            for M1 in (0, 1, 2):
                for M2 in (0, 1, 2):
                    sides = torus_partition(module, M1, M2, N, Kp)
                    torus.add("torus", sides["lattice"] == sides["decomposed"], N=N, label=f"{K},{Kp}",
                              detail=f"M1={M1}, M2={M2}")
        combos.add("closed form", partition_combo(module, Kp) == theorem_combo(g, model.roots.p, K, Kp),
                   label=f"{K},{Kp}")
    return [cylinder, torus, combos]


def modular_suite(model: HeightModel, N_max: int) -> list:
    roots = model.roots
    report = CheckReport(model.g.name, "modular")
    for name, passed in modular_check(roots.p, roots.pprime).items():
        report.add(name, passed, label=f"M({roots.p},{roots.pprime})")
    for kappa, order in ((1, 2), (-1, 4)):
        for name, passed in group_relations(*twist_family_matrices(kappa), order).items():
            report.add(name, passed, label=f"kappa={kappa}")
    for name, passed in group_relations(*d4_family_matrices(), 6).items():
        report.add(name, passed, label="D4")
    return [report]


###################
# lattice operators
###################
def difference_equations_suite(model: HeightModel, N_max: int) -> list:
    module = model.periodic("id")
    N = min(N_max, 4)
    return [verify_difference_equation(module, nu, N) for nu in model.g.nodes]


def ops_suite(model: HeightModel, N_max: int) -> list:
    g = model.g
    window = range(0, min(N_max, 5) + 1)
    module = model.periodic("id")
    reports = []
    for nu in g.nodes:
        op = connectivity(pasquier_state(module, nu), module)
        report = connectivity_relations(op, window)
        for N in window:
            if module.dim(N):
                report.add("pasquier", op.matrix(N) == pasquier_op(module, nu, N), N=N, label=f"nu={nu}")
                if N >= 1:
                    report.add("pasquier shifted", op.at(N, 1) == pasquier_op(module, nu, N, 1), N=N,
                               label=f"nu={nu}")
        reports.append(report)
    N = min(max(N_max, 1), 4)
    reports.append(fusion_check(module, N))
    for K in g.automorphisms():
        if K.order == 2 and not g.fixed_subgraph(K).is_empty():
            reports.append(fusion_check(module, N, K=K))
    for a, b in _pairs(g, N_max)[:4]:
        state_module = model.boundary(a, b)
        for k in boundary_multiplicities(g, a, b):
            for state in boundary_insertion_states(state_module, k):
                for c in g.nodes:
                    source = model.boundary(b, c)
                    op = boundary_operator(state, source)
                    reports.append(connectivity_relations(op, window))
                    if g.coxeter <= 5 and k <= Fraction(g.coxeter, 2) - 1:
                        reports.append(verify_boundary_equation(op, window))
    return reports


SUITES = {
    "relations": relations_suite,
    "dimensions": dimensions_suite,
    "jones-wenzl": jones_wenzl_suite,
    "gamma": gamma_suite,
    "minimal-polys": minimal_polys_suite,
    "decompositions": decompositions_suite,
    "traces": traces_suite,
    "modular": modular_suite,
    "difference-equations": difference_equations_suite,
    "ops": ops_suite,
}


def run_suite(name: str, model: HeightModel, N_max: int) -> list:
    if name not in SUITES:
        raise ModelError(f"Unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    reports = SUITES[name](model, N_max)
    failed = sum(len(r.failures()) for r in reports)
    total = sum(len(r.checks) for r in reports)
    logger.info(f"Suite {name} on {model.g.name} (mu={model.mu}): {total - failed}/{total} checks passed")
    return reports
