# linkmod.py

"""
Standard modules V_k(N) of the Temperley-Lieb algebra and W_{k,x}(N) of the
enlarged periodic algebra, and their quotients Q_k and Q_{k,x}.

A link state with 2k defects is stored as a diagram in L(N, 2k) whose inner
points are all bridges; u_k is the identity of L(2k, 2k), so a diagram d acts
on a state b through the composition d b. In W_{k,x} the first defect is kept
attached to I(1) without crossing the dashed segment: the rotation needed to
get there is traded for a power of x, with the convention Omega u_k = x u_k.
Loops encircling the puncture in W_{0,x} carry the weight alpha = x + 1/x.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .diagram import (AffineDiagram, DiagramVector, Representation, c_diagram, compose_diagrams,
                      from_word, identity_diagram, omega_diagram)
from .exceptions import DiagramError, InsertionStateError
from .logger import get_logger
from .utils import Echelon, SparseOp, eigenspace, nullspace, vec_add, vec_is_zero, vec_scale

logger = get_logger(__name__)

FAMILIES = ("V", "W")


def half_integer(k) -> Fraction:
    k = Fraction(k)
    if (2 * k).denominator != 1:
        raise DiagramError(f"Defect parameter k={k} must be an integer or a half-integer")
    return k


###################
# dimensions
###################
def d_k(N: int, k) -> int:
    """binom(N, N/2 - k), zero when N/2 - k is not an integer in [0, N]."""
    m = Fraction(N, 2) - Fraction(k)
    if m.denominator != 1 or not 0 <= m <= N:
        return 0
    return comb(N, int(m))


def D_k(N: int, k, pprime: int) -> int:
    """sum_{j >= 0} d_{k + p' j}(N)."""
    k = Fraction(k)
    total, j = 0, 0
    while k + pprime * j <= Fraction(N, 2):
        total += d_k(N, k + pprime * j)
        j += 1
    return total


def standard_dimension(kind: str, N: int, k) -> int:
    if kind == "V":
        return d_k(N, k) - d_k(N, Fraction(k) + 1)
    return d_k(N, k)


def quotient_dimension_V(N: int, k, pprime: int) -> int:
    k = half_integer(k)
    if (2 * k + 1) % pprime == 0:
        return standard_dimension("V", N, k)
    r = int(2 * k) // pprime + 1
    kp = r * pprime - 1 - k
    return D_k(N, k, pprime) - D_k(N, k + 1, pprime) - D_k(N, kp, pprime) + D_k(N, kp + 1, pprime)


def quotient_dimension_W(N: int, k, s, pprime: int) -> int:
    return D_k(N, k, pprime) - D_k(N, s, pprime) - D_k(N, pprime - Fraction(s), pprime) \
        + D_k(N, pprime - Fraction(k), pprime)


def normalize_twist(k, x, roots):
    """(eps, s) with x = eps q^s, s - k integer and k < s < p' - k, or None.

    Values eps q^{-s} are found as eps (-1)^p q^{p'-s}, so W_{0,x} and W_{0,1/x}
    share their label.
    """
    k = half_integer(k)
    s = k + 1
    while s < roots.pprime - k:
        power = roots.power(s)
        for eps in (1, -1):
            if x == power * eps:
                return eps, s
        s += 1
    return None


###################
# link states
###################
@dataclass(frozen=True)
class LinkState:
    diagram: AffineDiagram

    @property
    def N(self) -> int:
        return self.diagram.n_out

    @property
    def defects(self) -> tuple:
        d = self.diagram
        return tuple(p + 1 for p in range(d.n_out) if d.links[p][0] >= d.n_out)

    @property
    def arcs(self) -> tuple:
        """(i, j, crossings) for the arcs, with 1-based outer positions i < j."""
        d = self.diagram
        return tuple((p + 1, q + 1, s) for p, (q, s) in enumerate(d.links[:d.n_out])
                     if p < q < d.n_out)

    @property
    def roles(self) -> tuple:
        """0 for a defect, 1 where an arc opens and 2 where it closes, read from 1 to N."""
        d = self.diagram
        out = []
        for p in range(d.n_out):
            q, s = d.links[p]
            if q >= d.n_out:
                out.append(0)
            elif s == 0:
                out.append(1 if p < q else 2)
            else:
                out.append(1 if s > 0 else 2)
        return tuple(out)

    def __str__(self):
        return "".join("|()"[r] for r in self.roles)


###################
# standard families
###################
class LinkFamily(Representation):
    """The family V_k(N) (kind "V") or W_{k,x}(N) (kind "W")."""

    def __init__(self, kind: str, k, field, beta, x=None):
        if kind not in FAMILIES:
            raise DiagramError(f"Unknown module family {kind!r}; expected one of {FAMILIES}")
        k = half_integer(k)
        if kind == "W":
            if x is None:
                raise DiagramError("W modules need a twist x")
            if k < 0:
                k, x = -k, x.inverse()
        elif k < 0:
            raise DiagramError(f"V_k needs k >= 0, got {k}")
        self.kind = kind
        self.k = k
        self.twice_k = int(2 * k)
        self.field = field
        self.beta = beta
        self.x = x
        self.alpha = x + x.inverse() if kind == "W" else None
        self._states = {}
        self._index = {}

    @property
    def label(self) -> str:
        return f"V_{self.k}" if self.kind == "V" else f"W_{self.k},{self.x}"

    @property
    def u_k(self) -> dict:
        return {0: self.one}

    def _c_range(self, N: int):
        return range(N) if self.kind == "W" else range(1, N)

    def canonical(self, d: AffineDiagram):
        """(state, coefficient) with d u_k = coefficient * state, or None when d u_k = 0."""
        if d.bridges < self.twice_k:
            return None
        if self.kind == "V":
            if not d.is_planar:
                raise DiagramError(f"Non-planar diagram {d} acting on {self.label}")
            return LinkState(d), self.one
        if self.twice_k == 0:
            if not d.ncloops:
                return LinkState(d), self.one
            return LinkState(AffineDiagram(d.n_out, 0, d.links, 0)), self.alpha ** d.ncloops
        first = next(p for p in range(d.n_out) if d.links[p][0] >= d.n_out)
        partner, shift = d.links[first]
        t = (partner - d.n_out) + self.twice_k * shift
        if t == 0:
            return LinkState(d), self.one
        rotated, _ = compose_diagrams(d, omega_diagram(self.twice_k, -t))
        return LinkState(rotated), self.x ** t

    def states(self, N: int) -> list:
        if N in self._states:
            return self._states[N]
        k2 = self.twice_k
        if N < k2 or (N - k2) % 2:
            result = []
        elif N == k2:
            result = [LinkState(identity_diagram(k2))]
        else:
            found = {}
            for b in self.states(N - 2):
                for j in self._c_range(N):
                    d, _ = compose_diagrams(c_diagram(j, N).dagger(), b.diagram)
                    state, _ = self.canonical(d)
                    found.setdefault(state.diagram, state)
            result = sorted(found.values(), key=lambda st: st.roles)
        self._states[N] = result
        self._index[N] = {st.diagram: i for i, st in enumerate(result)}
        logger.debug(f"{self.label}({N}) has {len(result)} link states")
        return result

    def index(self, N: int) -> dict:
        self.states(N)
        return self._index[N]

    def dim(self, N: int) -> int:
        return len(self.states(N))

    def state_of_word(self, tokens):
        """Index and coefficient of the state (word) u_k for a loop-free word."""
        d = from_word(tokens, self.twice_k)
        result = self.canonical(d)
        if result is None:
            return None, self.zero
        state, coef = result
        return self.index(state.N)[state.diagram], coef

    def _image(self, d: AffineDiagram, state: LinkState, index: dict) -> dict:
        product, loops = compose_diagrams(d, state.diagram)
        result = self.canonical(product)
        if result is None:
            return {}
        target, coef = result
        if loops:
            coef = coef * self.beta ** loops
        if target.diagram not in index:
            raise DiagramError(f"{target} is not a state of {self.label}({target.N})")
        return {index[target.diagram]: coef}

    def operator(self, dv: DiagramVector, shape=None) -> SparseOp:
        n_out, n_in = dv.shape or shape or (None, None)
        if n_out is None:
            raise DiagramError("The zero diagram vector needs an explicit shape")
        index = self.index(n_out)
        cols = {}
        for i, state in enumerate(self.states(n_in)):
            col = {}
            for d, c in dv.terms.items():
                if d.n_in != n_in:
                    raise DiagramError(f"Diagram {d} does not act on {self.label}({n_in})")
                col = vec_add(col, self._image(d, state, index), c)
            cols[i] = col
        return SparseOp(len(index), len(self.states(n_in)), cols)

    def act(self, dv: DiagramVector, vec: dict) -> dict:
        n_out, n_in = dv.shape
        index = self.index(n_out)
        states = self.states(n_in)
        out = {}
        for i, v in vec.items():
            for d, c in dv.terms.items():
                out = vec_add(out, self._image(d, states[i], index), c * v)
        return out

    def __repr__(self):
        return f"LinkFamily({self.label})"


###################
# quotients
###################
class QuotientModule(Representation):
    """Q_k = V_k / R_k or Q_{k,x} = W_{k,x} / R_{k,x}.

    R is the submodule generated by the singular vectors; R(N) is spanned by the
    c_j^dag images of R(N - 2) and the singular vectors living at size N. The
    quotient basis is the set of non-pivot link states of an echelon form of R(N).
    """

    def __init__(self, family: LinkFamily, roots):
        self.family = family
        self.roots = roots
        self.field = family.field
        self.beta = family.beta
        self.seeds = {}
        self.twist = None
        self._relations = {}
        if family.kind == "V":
            self._seed_boundary()
        else:
            self._seed_periodic()

    @property
    def label(self) -> str:
        return "Q" + self.family.label[1:]

    def _normalize(self, vectors, tokens):
        index, coef = self.family.state_of_word(tokens)
        out = []
        for v in vectors:
            ref = v.get(index) if index is not None else None
            if ref is not None and not ref.is_zero():
                v = vec_scale(v, (ref * coef.inverse()).inverse())
            out.append(v)
        return out

    def _seed_boundary(self):
        k, pprime = self.family.k, self.roots.pprime
        if (2 * k + 1) % pprime == 0:
            logger.debug(f"V_{k} is irreducible at p'={pprime}")
            return
        r = int(2 * k) // pprime + 1
        kp = r * pprime - 1 - k
        size = int(2 * kp)
        ops = [self.family.generator_op("c", size, j) for j in range(1, size)]
        kernel = nullspace(ops, self.one, exact=self.exact)
        if len(kernel) != 1:
            logger.warning(f"Singular space of V_{k}({size}) has dimension {len(kernel)}")
        tokens = []
        m = kp
        while m > k:
            tokens.append(("cdag", int(m + k), int(2 * m)))
            m -= 1
        self.seeds[size] = self._normalize(kernel, tokens)

    def _seed_periodic(self):
        k, pprime = self.family.k, self.roots.pprime
        twist = normalize_twist(k, self.family.x, self.roots)
        if twist is None:
            logger.info(f"{self.family.label} has no singular vectors; the quotient is the module itself")
            return
        self.twist = twist
        eps, s = twist
        qk = self.roots.power(k)
        sign = -1 if self.roots.p % 2 else 1
        self._seed_rotation(int(2 * s), qk * eps)
        self._seed_rotation(int(2 * (pprime - s)), qk.inverse() * (eps * sign))

    def _seed_rotation(self, size: int, value):
        c0 = self.family.generator_op("c", size, 0)
        omega = self.family.generator_op("Omega", size, 1)
        kernel = eigenspace(omega, value, self.one, exact=self.exact, constraints=[c0])
        if len(kernel) != 1:
            logger.warning(f"Singular space of {self.family.label}({size}) with Omega = {value} "
                           f"has dimension {len(kernel)}")
        tokens = [("cdag", 0, n) for n in range(size, self.family.twice_k, -2)]
        self.seeds.setdefault(size, []).extend(self._normalize(kernel, tokens))

    def relations(self, N: int) -> Echelon:
        if N in self._relations:
            return self._relations[N]
        ech = Echelon(exact=self.exact)
        if N - 2 >= self.family.twice_k:
            below = self.relations(N - 2)
            if below.rank:
                for j in self.family._c_range(N):
                    up = self.family.generator_op("cdag", N, j)
                    for row in below.rows.values():
                        ech.add(up.apply(row))
        for seed in self.seeds.get(N, []):
            ech.add(seed)
        self._relations[N] = ech
        logger.debug(f"Relation space of {self.label}({N}) has rank {ech.rank}")
        return ech

    def basis(self, N: int) -> list:
        pivots = self.relations(N).rows
        return [i for i in range(self.family.dim(N)) if i not in pivots]

    def dim(self, N: int) -> int:
        return len(self.basis(N))

    def reduce(self, vec: dict, N: int) -> dict:
        """Coordinates of the class of a W/V vector in the quotient basis."""
        position = {i: pos for pos, i in enumerate(self.basis(N))}
        residual = self.relations(N).reduce(vec)
        return {position[i]: v for i, v in residual.items()}

    def lift(self, vec: dict, N: int) -> dict:
        basis = self.basis(N)
        return {basis[pos]: v for pos, v in vec.items()}

    def contains(self, vec: dict, N: int) -> bool:
        return self.relations(N).contains(vec)

    def operator(self, dv: DiagramVector, shape=None) -> SparseOp:
        n_out, n_in = dv.shape or shape or (None, None)
        if n_out is None:
            raise DiagramError("The zero diagram vector needs an explicit shape")
        full = self.family.operator(dv)
        basis_in = self.basis(n_in)
        cols = {pos: self.reduce(full.column(i), n_out) for pos, i in enumerate(basis_in)}
        return SparseOp(self.dim(n_out), len(basis_in), cols)

    def act(self, dv: DiagramVector, vec: dict) -> dict:
        n_out, n_in = dv.shape
        return self.reduce(self.family.act(dv, self.lift(vec, n_in)), n_out)

    def __repr__(self):
        return f"QuotientModule({self.label})"


###################
# insertion maps
###################
def check_insertion_state(rep, xi: dict, family: LinkFamily):
    """Raise InsertionStateError unless xi in rep(2k) satisfies the conditions of family."""
    k2 = family.twice_k
    if vec_is_zero(xi):
        raise InsertionStateError("The zero vector is not an insertion state")
    if family.kind == "V":
        for j in range(1, k2):
            if not vec_is_zero(rep.generator_op("c", k2, j).apply(xi)):
                raise InsertionStateError(f"c_{j} does not annihilate the state (k={family.k})")
        return
    if k2 == 0:
        image = rep.generator_op("f", 0, 1).apply(xi)
        if not vec_is_zero(vec_add(image, xi, -family.alpha)):
            raise InsertionStateError(f"f does not act as alpha = {family.alpha} on the state")
        return
    if k2 >= 2 and not vec_is_zero(rep.generator_op("c", k2, 0).apply(xi)):
        raise InsertionStateError(f"c_0 does not annihilate the state (k={family.k})")
    image = rep.generator_op("Omega", k2, 1).apply(xi)
    if not vec_is_zero(vec_add(image, xi, -family.x)):
        raise InsertionStateError(f"Omega does not act as x = {family.x} on the state")


def insertion_map(rep, xi: dict, family: LinkFamily, N: int, check: bool = True) -> SparseOp:
    """The homomorphism family(N) -> rep(N) sending state * u_k to state * xi."""
    if check:
        check_insertion_state(rep, xi, family)
    cols = {}
    for i, state in enumerate(family.states(N)):
        cols[i] = rep.act(DiagramVector.single(state.diagram, rep.beta), xi)
    return SparseOp(rep.dim(N), family.dim(N), cols)
