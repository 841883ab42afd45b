# charpart.py

"""
Characters and partition functions.

Lattice side: traces of transfer matrices on heights modules, on standard
modules and on their irreducible quotients. Continuum side: Virasoro
minimal-model characters as q-series, modular data, and partition functions
written as sesquilinear combinations of characters.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decomp import Label, decomposition_labels, sector_trace_basis, twisted_multiplicity
from .diagram import transfer_diagram
from .dynkin import GraphAutomorphism
from .exceptions import AdetlError, ModelError
from .heights import BoundaryHeights, HeightsModule, PeriodicHeights
from .linkmod import LinkFamily, QuotientModule, half_integer
from .logger import get_logger
from .scalars import QSeries, verma_character
from .utils import SparseOp, restricted_trace

logger = get_logger(__name__)


###################
# minimal models
###################
def central_charge(p: int, pprime: int) -> Fraction:
    return 1 - Fraction(6 * (p - pprime) ** 2, p * pprime)


def conformal_weight(r: int, s: int, p: int, pprime: int) -> Fraction:
    """h_{r,s} = ((p' r - p s)^2 - (p - p')^2) / (4 p p'), for any integers r, s."""
    return Fraction((pprime * r - p * s) ** 2 - (p - pprime) ** 2, 4 * p * pprime)


def _verma_sum(terms, c, order: int) -> QSeries:
    """sum of sign * chi_Verma(h) over (sign, h), truncated at order above the lowest weight."""
    base = min(h for _, h in terms)
    total = None
    for sign, h in terms:
        depth = h - base
        if depth > order:
            continue
        series = verma_character(h, c, order - int(depth)) * sign
        total = series if total is None else total + series
    return total


def _bilateral(weight_pair, base: Fraction, order: int) -> list:
    """Terms (+1, h_plus(j)), (-1, h_minus(j)) for all j with weights within order of base."""
    terms = []
    j = 0
    while True:
        found = False
        for jj in {j, -j}:
            for sign, h in zip((1, -1), weight_pair(jj)):
                if h - base <= order:
                    terms.append((sign, h))
                    found = True
        if not found and j > 0:
            return terms
        j += 1


def conformal_character(p: int, pprime: int, r: int, s: int, order: int) -> QSeries:
    """chi_{r,s} = sum_j (chi_V(2jp + r, s) - chi_V(2jp - r, s)), truncated."""
    if not 1 <= r <= p - 1 or not 1 <= s <= pprime - 1:
        raise ModelError(f"(r, s) = ({r}, {s}) is outside the Kac table of M({p}, {pprime})")
    c = central_charge(p, pprime)
    base = conformal_weight(r, s, p, pprime)
    terms = _bilateral(lambda j: (conformal_weight(2 * j * p + r, s, p, pprime),
                                  conformal_weight(2 * j * p - r, s, p, pprime)), base, order)
    return _verma_sum(terms, c, order)


def standard_character(p: int, pprime: int, k, order: int) -> QSeries:
    """Scaling limit of the V_k character: chi_V(1, 2k+1) - chi_V(1, -2k-1)."""
    k = half_integer(k)
    c = central_charge(p, pprime)
    s = int(2 * k + 1)
    return _verma_sum([(1, conformal_weight(1, s, p, pprime)), (-1, conformal_weight(1, -s, p, pprime))],
                      c, order)


def quotient_character_series(p: int, pprime: int, k, order: int) -> QSeries:
    """sum_j (chi_V(1, 2k+1+2p'j) - chi_V(-1, 2k+1+2p'j)); equals chi_{1,2k+1}."""
    k = half_integer(k)
    c = central_charge(p, pprime)
    s = int(2 * k + 1)
    base = conformal_weight(1, s, p, pprime)
    terms = _bilateral(lambda j: (conformal_weight(1, s + 2 * pprime * j, p, pprime),
                                  conformal_weight(-1, s + 2 * pprime * j, p, pprime)), base, order)
    return _verma_sum(terms, c, order)


@dataclass
class MinimalModel:
    p: int
    pprime: int

    def __post_init__(self):
        if not 2 <= self.p < self.pprime or math.gcd(self.p, self.pprime) != 1:
            raise ModelError(f"M({self.p}, {self.pprime}) needs coprime 2 <= p < p'")

    @property
    def c(self) -> Fraction:
        return central_charge(self.p, self.pprime)

    def h(self, r: int, s: int) -> Fraction:
        return conformal_weight(r, s, self.p, self.pprime)

    def kac_table(self) -> list:
        return [(r, s) for r in range(1, self.p) for s in range(1, self.pprime)]

    def canonical(self, r: int, s: int) -> tuple:
        return min((r, s), (self.p - r, self.pprime - s))

    def classes(self) -> list:
        return sorted({self.canonical(r, s) for r, s in self.kac_table()})

    def character(self, r: int, s: int, order: int) -> QSeries:
        return conformal_character(self.p, self.pprime, r, s, order)

    def character_table(self, order: int) -> dict:
        return {(r, s): self.character(r, s, order) for r, s in self.classes()}

    def lambda_sign(self, r: int, s: int) -> int:
        """lambda_{r,s} = p'(r+1) + p(s+1)."""
        return self.pprime * (r + 1) + self.p * (s + 1)

    def s_entry(self, rs: tuple, rs2: tuple) -> float:
        (r, s), (r2, s2) = rs, rs2
        p, pp = self.p, self.pprime
        sign = (-1) ** (1 + s * r2 + r * s2)
        return math.sqrt(8 / (p * pp)) * sign * math.sin(math.pi * pp * r * r2 / p) * math.sin(math.pi * p * s * s2 / pp)

    def s_matrix(self) -> np.ndarray:
        """S restricted to one representative per pair (r,s) ~ (p-r, p'-s)."""
        reps = self.classes()
        return np.array([[self.s_entry(a, b) for b in reps] for a in reps])

    def t_matrix(self) -> np.ndarray:
        reps = self.classes()
        return np.diag([np.exp(2j * np.pi * float(self.h(r, s) - self.c / 24)) for r, s in reps])

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "pprime": self.pprime,
            "c": str(self.c),
            "weights": {f"{r},{s}": str(self.h(r, s)) for r, s in self.classes()},
        }


def modular_check(p: int, pprime: int, tol: float = 1e-9) -> dict:
    """Checks of the minimal-model S and T matrices; values are booleans."""
    model = MinimalModel(p, pprime)
    S, T = model.s_matrix(), model.t_matrix()
    ident = np.eye(len(S))
    ST = S @ T
    checks = {
        "symmetric": bool(np.allclose(S, S.T, atol=tol)),
        "orthogonal": bool(np.allclose(S @ S.T, ident, atol=tol)),
        "S^2 = id": bool(np.allclose(S @ S, ident, atol=tol)),
        "(ST)^3 = S^2": bool(np.allclose(ST @ ST @ ST, S @ S, atol=tol)),
    }
    sign_ok = phase_ok = True
    for r, s in model.kac_table():
        for r2, s2 in model.kac_table():
            flipped = model.s_entry((r, s), (r2, pprime - s2))
            expected = (-1) ** (pprime * r + p * s + 1) * model.s_entry((r, s), (r2, s2))
            sign_ok &= abs(flipped - expected) < tol
        phase = np.exp(2j * np.pi * float(model.h(r, s) - model.h(r, pprime - s)))
        expected = 1j ** (p * pprime) * (-1) ** (model.lambda_sign(r, s) + 1)
        phase_ok &= abs(phase - expected) < tol
    checks["sign identity"] = bool(sign_ok)
    checks["phase identity"] = bool(phase_ok)
    return checks


def twist_family_matrices(kappa: int) -> tuple:
    """S and T on (Z_{id,K}, Z_{K,id}, Z_{K,K})."""
    S = np.array([[0, 1, 0], [1, 0, 0], [0, 0, kappa]])
    T = np.array([[1, 0, 0], [0, 0, kappa], [0, 1, 0]])
    return S, T


D4_PAIRS = (("id", "id"), ("id", "P13"), ("id", "P134"), ("P13", "id"), ("P13", "P13"),
            ("P134", "id"), ("P134", "P134"), ("P134", "P143"))


def d4_family_matrices() -> tuple:
    """S and T on the eight D4 partition functions, in the order of D4_PAIRS."""
    s_perm = (0, 3, 5, 1, 4, 2, 7, 6)
    t_perm = (0, 1, 2, 4, 3, 6, 7, 5)
    S = np.zeros((8, 8), dtype=int)
    T = np.zeros((8, 8), dtype=int)
    for i in range(8):
        S[i, s_perm[i]] = 1
        T[i, t_perm[i]] = 1
    return S, T


def group_relations(S: np.ndarray, T: np.ndarray, t_order: int) -> dict:
    ident = np.eye(len(S), dtype=S.dtype)
    ST = S @ T
    return {
        "S^2 = id": bool(np.array_equal(S @ S, ident)),
        "(ST)^3 = id": bool(np.array_equal(ST @ ST @ ST, ident)),
        f"T^{t_order} = id": bool(np.array_equal(np.linalg.matrix_power(T, t_order), ident)),
    }


###################
# sesquilinear combinations
###################
def _conj(value):
    return value.conj() if hasattr(value, "conj") and not isinstance(value, (int, Fraction)) else value


def _is_zero(value) -> bool:
    return value == 0


class SesquiCombo:
    """sum of c chi_{r,s} conj(chi_{r',s'}), with (r,s) ~ (p-r, p'-s) on each factor."""

    def __init__(self, p: int, pprime: int, terms: dict = None):
        self.model = MinimalModel(p, pprime)
        self.terms = {}
        for (a, b), coef in (terms or {}).items():
            self.add(coef, a, b)

    @property
    def p(self) -> int:
        return self.model.p

    @property
    def pprime(self) -> int:
        return self.model.pprime

    def add(self, coef, rs: tuple, rs2: tuple):
        key = (self.model.canonical(*rs), self.model.canonical(*rs2))
        value = self.terms[key] + coef if key in self.terms else coef
        if _is_zero(value):
            self.terms.pop(key, None)
        else:
            self.terms[key] = value
        return self

    def add_abs_square(self, combo: list, coef=1):
        """coef * |sum_i a_i chi_{r_i, s_i}|^2 with combo = [(a_i, (r_i, s_i))]."""
        for a, rs in combo:
            for b, rs2 in combo:
                self.add(coef * a * _conj(b), rs, rs2)
        return self

    def scaled(self, coef) -> "SesquiCombo":
        out = SesquiCombo(self.p, self.pprime)
        for (a, b), value in self.terms.items():
            out.add(value * coef, a, b)
        return out

    def __add__(self, other):
        if not isinstance(other, SesquiCombo):
            return NotImplemented
        out = SesquiCombo(self.p, self.pprime, self.terms)
        for (a, b), value in other.terms.items():
            out.add(value, a, b)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SesquiCombo):
            return NotImplemented
        return (self.p, self.pprime) == (other.p, other.pprime) and (self - other).is_zero()

    def to_dict(self) -> dict:
        return {f"chi_{a[0]},{a[1]} * conj(chi_{b[0]},{b[1]})": str(v) for (a, b), v in sorted(self.terms.items())}

    def __str__(self):
        return " + ".join(f"({v}) chi_{a} chibar_{b}" for (a, b), v in sorted(self.terms.items())) or "0"


def quotient_combo(p: int, pprime: int, label: Label, eta: int = 0) -> SesquiCombo:
    """Continuum character of Q_k (boundary: chi_{1,2k+1}, holomorphic only) or Q_{k, eps q^s}.

    Q_{k, eps q^s} -> eps^eta sum_r (-1)^(eta r) chi_{r, s+k} conj(chi_{r, s-k}).
    """
    if not label.periodic:
        raise AdetlError("Boundary characters are holomorphic; use quotient_character_series")
    eps, s = label.eps, label.s
    if s < 0:
        s, eps = pprime + s, eps * (-1) ** p
    combo = SesquiCombo(p, pprime)
    for r in range(1, p):
        coef = eps ** eta * (-1) ** (eta * r)
        combo.add(coef, (r, int(s + label.k)), (r, int(s - label.k)))
    return combo


###################
# lattice traces
###################
def _is_periodic(rep) -> bool:
    if isinstance(rep, QuotientModule):
        rep = rep.family
    return getattr(rep, "periodic", False) or getattr(rep, "kind", "") == "W"


def _transfer_op(rep, N: int, weights=None) -> SparseOp:
    kind = "single_row" if _is_periodic(rep) else "double_row"
    return rep.operator(transfer_diagram(kind, N, rep.beta, weights))


def cylinder_trace(rep, N: int, M: int, weights=None, twist: SparseOp = None):
    """tr_{rep(N)} (twist D^{M/2})."""
    if M % 2:
        raise ModelError(f"Cylinder traces need an even M, got {M}")
    if rep.dim(N) == 0:
        return rep.zero
    op = SparseOp.identity(rep.dim(N), rep.one) if N == 0 else _transfer_op(rep, N, weights).power(M // 2, rep.one)
    if twist is not None:
        op = twist @ op
    return op.trace(rep.zero)


def torus_trace(rep, N: int, M1: int, M2: int, weights=None, twist: SparseOp = None):
    """tr_{rep(N)} (twist Omega^M1 T^M2)."""
    if rep.dim(N) == 0:
        return rep.zero
    op = SparseOp.identity(rep.dim(N), rep.one)
    if N > 0:
        if M2:
            op = _transfer_op(rep, N, weights).power(M2, rep.one)
        if M1:
            name = "Omega" if M1 > 0 else "Omegainv"
            op = rep.generator_op(name, N, abs(M1)) @ op
    if twist is not None:
        op = twist @ op
    return op.trace(rep.zero)


def _standard(kind: str, k, rep, x=None) -> LinkFamily:
    return LinkFamily(kind, k, rep.field, rep.beta, x)


def quotient_cylinder_character(rep, k, N: int, M: int, weights=None, explicit: bool = False):
    """chi_{Q_k}(M, N) = sum_j chi_{V_{k+p'j}} - sum_{j>=1} chi_{V_{p'j-k-1}}, or on the quotient itself."""
    k = half_integer(k)
    roots = rep.model.roots
    pprime = roots.pprime
    if explicit:
        return cylinder_trace(QuotientModule(_standard("V", k, rep), roots), N, M, weights)
    total = rep.zero
    j = 0
    while k + pprime * j <= Fraction(N, 2):
        total = total + cylinder_trace(_standard("V", k + pprime * j, rep), N, M, weights)
        j += 1
    j = 1
    while pprime * j - k - 1 <= Fraction(N, 2):
        total = total - cylinder_trace(_standard("V", pprime * j - k - 1, rep), N, M, weights)
        j += 1
    return total


def quotient_torus_character(rep, label: Label, N: int, M1: int, M2: int, weights=None, explicit: bool = False):
    """chi_{Q_{k, eps q^s}}(M1, M2, N) as the alternating sum over the W ladder, or on the quotient."""
    roots = rep.model.roots
    pprime = roots.pprime
    k, eps, s = label.k, label.eps, label.s
    if explicit:
        family = _standard("W", k, rep, label.twist(roots))
        return torus_trace(QuotientModule(family, roots), N, M1, M2, weights)
    if s < 0:
        s, eps = pprime + s, eps * (-1) ** roots.p
    ladder = (
        (1, lambda j: k + pprime * j, lambda j: s + pprime * j),
        (-1, lambda j: s + pprime * j, lambda j: k + pprime * j),
        (-1, lambda j: pprime - s + pprime * j, lambda j: -k + pprime * (j + 1)),
        (1, lambda j: pprime - k + pprime * j, lambda j: -s + pprime * (j + 1)),
    )
    total = rep.zero
    for sign, defects, exponent in ladder:
        j = 0
        while defects(j) <= Fraction(N, 2):
            family = _standard("W", defects(j), rep, roots.power(exponent(j)) * eps)
            value = torus_trace(family, N, M1, M2, weights)
            total = total + value if sign > 0 else total - value
            j += 1
    return total


###################
# partition functions
###################
def _automorphism(g, L) -> GraphAutomorphism:
    if L is None:
        return g.automorphism("id")
    return g.automorphism(L) if isinstance(L, str) else L


def trace_twist(module: PeriodicHeights, Kp: GraphAutomorphism, N: int) -> SparseOp:
    """K' as it enters the torus trace: the map |a> -> |K'^{-1}(a)> on M_K(N).

    Omega^N acts on Q_{k,x} as x^{2k}, the conjugate of the spin phase of
    chi_{r,s+k} conj(chi_{r,s-k}); the inverse keeps Z_{K,K'} in that orientation.
    """
    L = Kp if Kp.order <= 2 else module.g.inverse(Kp)
    op, target = module.automorphism_op(L, N)
    if target is not module:
        raise ModelError(f"{Kp.name} does not commute with {module.K.name}")
    return op


def torus_eta(module: PeriodicHeights, Kp=None) -> int:
    """Parity of M1 + M2 in the scaling limit: 1 for a nontrivial K' when p' is odd (A_n, n even)."""
    Kp = _automorphism(module.g, Kp)
    return int(not Kp.is_identity and module.model.roots.pprime % 2 == 1)


def multiplicity_trace(module: HeightsModule, label: Label, L: GraphAutomorphism):
    """Trace of L_{2k} on the insertion space of label (the multiplicity for L = id)."""
    if L.is_identity:
        return module.one * decomposition_labels(module)[label]
    if not module.periodic:
        return twisted_multiplicity(module, L, label.k)
    op = trace_twist(module, L, int(2 * label.k))
    basis, positions = sector_trace_basis(module, label)
    return restricted_trace(op, basis, module.zero, exact=module.exact, positions=positions)


def cylinder_partition(module: BoundaryHeights, M: int, N: int, L=None, weights=None) -> dict:
    """Both sides of tr(L_N D^{M/2}) = sum_k n_k chi_{Q_k}(M, N)."""
    L = _automorphism(module.g, L)
    twist = None if L.is_identity else module.automorphism_op(L, N)
    lattice = cylinder_trace(module, N, M, weights, twist)
    decomposed = module.zero
    for label in decomposition_labels(module):
        if 2 * label.k > N:
            continue
        decomposed = decomposed + multiplicity_trace(module, label, L) * \
            quotient_cylinder_character(module, label.k, N, M, weights)
    return {"lattice": lattice, "decomposed": decomposed}


def torus_partition(module: PeriodicHeights, M1: int, M2: int, N: int, Kp=None, weights=None) -> dict:
    """Both sides of tr(K'_N Omega^M1 T^M2) = sum kappa'_{k,x} chi_{Q_{k,x}}(M1, M2, N)."""
    Kp = _automorphism(module.g, Kp)
    twist = None if Kp.is_identity else trace_twist(module, Kp, N)
    lattice = torus_trace(module, N, M1, M2, weights, twist)
    decomposed = module.zero
    for label in decomposition_labels(module):
        if 2 * label.k > N:
            continue
        decomposed = decomposed + multiplicity_trace(module, label, Kp) * \
            quotient_torus_character(module, label, N, M1, M2, weights)
    return {"lattice": lattice, "decomposed": decomposed}


def partition_combo(module: PeriodicHeights, Kp=None, eta: int = None) -> SesquiCombo:
    """sum_{k,x} kappa'_{k,x} chi_{Q_{k,x}} over the decomposition of M_{g,mu,K}.

    eta defaults to torus_eta(module, Kp).
    """
    Kp = _automorphism(module.g, Kp)
    if eta is None:
        eta = torus_eta(module, Kp)
    roots = module.model.roots
    total = SesquiCombo(roots.p, roots.pprime)
    for label in decomposition_labels(module):
        coef = multiplicity_trace(module, label, Kp)
        if module.exact and coef.is_rational():
            coef = coef.to_fraction()
        total = total + quotient_combo(roots.p, roots.pprime, label, eta).scaled(coef)
    return total


def _chi(r: int, s: int, coef=1) -> tuple:
    return coef, (r, s)


def theorem_combo(g, p: int, K: str = "id", Kp: str = "id") -> SesquiCombo:
    """The closed-form torus partition functions of the ADE models as character combinations."""
    pp, n = g.coxeter, g.rank
    combo = SesquiCombo(p, pp)
    rs = range(1, p)
    pair = (K, Kp)
    if g.name == "D4" and pair in D4_PAIRS[1:]:
        return _d4_theorem(g, p, pair)
    if pair == ("id", "id"):
        if g.family == "A":
            for r in rs:
                for s in range(1, pp):
                    combo.add_abs_square([_chi(r, s)])
        elif g.family == "D":
            _d_series(combo, p, pp, n, diagonal=range(1, pp, 2), parity=(n + 1) % 2, sign=1)
        elif g.name == "E6":
            for r in rs:
                for group in ((1, 7), (4, 8), (5, 11)):
                    combo.add_abs_square([_chi(r, s) for s in group])
        elif g.name == "E7":
            for r in rs:
                for group, sign in (((1, 17), 1), ((3, 15), -1), ((5, 13), 1), ((7, 11), 1), ((3, 9, 15), 1)):
                    combo.add_abs_square([_chi(r, s) for s in group], sign)
        else:
            for r in rs:
                for group in ((1, 11, 19, 29), (7, 13, 17, 23)):
                    combo.add_abs_square([_chi(r, s) for s in group])
        return combo
    if g.family == "A":
        field = g.field
        for r in rs:
            for s in range(1, pp):
                lam = pp * (r + 1) + p * (s + 1)
                if pair == ("id", "R"):
                    combo.add(field.one() * ((-1) ** (p * pp + lam)), (r, s), (r, s))
                elif pair == ("R", "id"):
                    combo.add(1, (r, s), (r, pp - s))
                elif pair == ("R", "R"):
                    combo.add(field.root(4, p * pp) * ((-1) ** (lam + 1)), (r, s), (r, pp - s))
                else:
                    raise ModelError(f"No closed form for {g.name} with twists {pair}")
        return combo
    if g.family == "D" and Kp in ("id", "P") and K in ("id", "P"):
        sign = -1 if Kp == "P" else 1
        if K == "id":
            _d_series(combo, p, pp, n, diagonal=range(1, pp, 2), parity=(n + 1) % 2, sign=sign)
        else:
            _d_series(combo, p, pp, n, diagonal=range(2, pp - 1, 2), parity=n % 2, sign=sign)
        return combo
    if g.name == "E6":
        groups = ((1, 7), (4, 8), (5, 11))
        big = (1, 5, 7, 11)
        signs = {("id", "P"): ((1, -1, 1), 0), ("P", "id"): ((-1, 1, -1), 1), ("P", "P"): ((1, 1, 1), -1)}
        if pair not in signs:
            raise ModelError(f"No closed form for {g.name} with twists {pair}")
        group_signs, big_sign = signs[pair]
        for r in rs:
            for group, sign in zip(groups, group_signs):
                combo.add_abs_square([_chi(r, s) for s in group], sign)
            if big_sign:
                combo.add_abs_square([_chi(r, s) for s in big], big_sign)
        return combo
    raise ModelError(f"No closed form for {g.name} with twists {pair}")


def _d_series(combo, p, pp, n, diagonal, parity, sign):
    for r in range(1, p):
        for s in diagonal:
            combo.add_abs_square([_chi(r, s)])
        for s in range(1, pp):
            if s % 2 == parity:
                combo.add(sign, (r, s), (r, pp - s))


def _d4_theorem(g, p: int, pair: tuple) -> SesquiCombo:
    combo = SesquiCombo(p, 6)
    omega = g.field.root(3, 1)
    one = g.field.one()
    for r in range(1, p):
        if pair == ("id", "P13"):
            combo.add_abs_square([_chi(r, 1), _chi(r, 5, -1)])
        elif pair == ("id", "P134"):
            combo.add_abs_square([_chi(r, 1), _chi(r, 5)])
            combo.add_abs_square([_chi(r, 3)], -1)
        elif pair == ("P13", "id"):
            combo.add_abs_square([_chi(r, 2), _chi(r, 4)])
        elif pair == ("P13", "P13"):
            combo.add_abs_square([_chi(r, 2), _chi(r, 4, -1)])
        else:
            w = {("P134", "id"): one, ("P134", "P134"): omega, ("P134", "P143"): omega.inverse()}[pair]
            combo.add_abs_square([_chi(r, 1, one), _chi(r, 3, w.inverse())])
            combo.add_abs_square([_chi(r, 3, one), _chi(r, 5, w)])
            for s in (1, 3, 5):
                combo.add_abs_square([_chi(r, s, one)], -1)
    return combo
