# diagram.py

"""
Annular (affine) Temperley-Lieb diagrams.

A diagram in L(N_out, N_in) is a perfect matching of the N_out outer points
O(1..N_out) and the N_in inner points I(1..N_in) of an annulus. Points are
indexed O(i) -> i-1 and I(i) -> N_out+i-1. Every link also carries the signed
number of times it crosses the dashed segment that runs radially between the
points N and 1 of both boundaries (positive when moving from N towards 1).
``links[p] = (q, s)`` then implies ``links[q] = (p, -s)``. Crossing counts add
along paths, so the matching with its counts is an isotopy invariant and serves
as the canonical key. Closed loops found during composition are either removed
with the weight beta (zero net crossing) or kept as non-contractible loops.
"""

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .exceptions import DiagramError
from .logger import get_logger
from .utils import SparseOp, vec_add

logger = get_logger(__name__)


@dataclass(frozen=True)
class AffineDiagram:
    n_out: int
    n_in: int
    links: tuple
    ncloops: int = 0

    @property
    def size(self) -> int:
        return self.n_out + self.n_in

    @property
    def bridges(self) -> int:
        return sum(1 for p in range(self.n_out) if self.links[p][0] >= self.n_out)

    @property
    def is_planar(self) -> bool:
        return self.ncloops == 0 and all(s == 0 for _, s in self.links)

    def point_label(self, p: int) -> str:
        return f"O{p + 1}" if p < self.n_out else f"I{p - self.n_out + 1}"

    def dagger(self) -> "AffineDiagram":
        """Reflection exchanging the two boundaries; crossing directions are kept."""
        def swap(p):
            return p + self.n_in if p < self.n_out else p - self.n_out
        links = [None] * self.size
        for p, (q, s) in enumerate(self.links):
            links[swap(p)] = (swap(q), s)
        return AffineDiagram(self.n_in, self.n_out, tuple(links), self.ncloops)

    def encode(self) -> str:
        pairs = []
        for p, (q, s) in enumerate(self.links):
            if p < q:
                tail = f":{s}" if s else ""
                pairs.append(f"{self.point_label(p)}-{self.point_label(q)}{tail}")
        return f"{self.n_out};{self.n_in};{','.join(pairs)};{self.ncloops}"

    def __str__(self):
        return self.encode()


def _parse_label(label: str, n_out: int) -> int:
    match = re.fullmatch(r"([OI])(\d+)", label)
    if not match:
        raise DiagramError(f"Malformed point label {label!r}")
    index = int(match.group(2)) - 1
    return index if match.group(1) == "O" else n_out + index


def decode(text: str) -> AffineDiagram:
    """Inverse of :meth:`AffineDiagram.encode`: ``"N_out;N_in;O1-I1,O2-O3:1;ncloops"``."""
    parts = text.strip().split(";")
    if len(parts) != 4:
        raise DiagramError(f"Malformed diagram text {text!r}")
    n_out, n_in, body, ncloops = int(parts[0]), int(parts[1]), parts[2], int(parts[3])
    links = [None] * (n_out + n_in)
    for pair in filter(None, body.split(",")):
        ends, _, shift = pair.partition(":")
        left, right = ends.split("-")
        p, q = _parse_label(left, n_out), _parse_label(right, n_out)
        s = int(shift) if shift else 0
        links[p], links[q] = (q, s), (p, -s)
    if any(link is None for link in links):
        raise DiagramError(f"Diagram text {text!r} leaves points unmatched")
    return AffineDiagram(n_out, n_in, tuple(links), ncloops)


###################
# composition
###################
@lru_cache(maxsize=1 << 16)
def compose_diagrams(a: AffineDiagram, b: AffineDiagram):
    """Stack b inside a. Returns (diagram, number of removed contractible loops)."""
    if a.n_in != b.n_out:
        raise DiagramError(f"Cannot compose L({a.n_out},{a.n_in}) with L({b.n_out},{b.n_in})")
    N, M, P = a.n_out, a.n_in, b.n_in
    links = [None] * (N + P)
    visited = [False] * M
    for start in range(N + P):
        if links[start] is not None:
            continue
        on_a, idx = (True, start) if start < N else (False, M + start - N)
        total = 0
        while True:
            if on_a:
                partner, s = a.links[idx]
                total += s
                if partner < N:
                    end = partner
                    break
                mid = partner - N
                visited[mid] = True
                on_a, idx = False, mid
            else:
                partner, s = b.links[idx]
                total += s
                if partner >= M:
                    end = N + partner - M
                    break
                visited[partner] = True
                on_a, idx = True, N + partner
        links[start] = (end, total)
        links[end] = (start, -total)
    contractible = 0
    ncloops = a.ncloops + b.ncloops
    for m in range(M):
        if visited[m]:
            continue
        total = 0
        current = m
        while True:
            visited[current] = True
            partner, s = b.links[current]
            total += s
            visited[partner] = True
            back, s2 = a.links[N + partner]
            total += s2
            current = back - N
            if current == m:
                break
        if total == 0:
            contractible += 1
        else:
            ncloops += 1
    return AffineDiagram(N, P, tuple(links), ncloops), contractible


class DiagramVector:
    """Finite linear combination of diagrams with a fixed loop weight beta."""

    __slots__ = ("terms", "beta")
    __hash__ = None

    def __init__(self, terms: dict, beta):
        self.terms = {d: c for d, c in terms.items() if not c.is_zero()}
        self.beta = beta

    @classmethod
    def single(cls, diagram: AffineDiagram, beta, coefficient=None) -> "DiagramVector":
        return cls({diagram: beta ** 0 if coefficient is None else coefficient}, beta)

    @property
    def shape(self):
        d = next(iter(self.terms), None)
        return (d.n_out, d.n_in) if d is not None else None

    def coefficient(self, diagram: AffineDiagram):
        return self.terms.get(diagram, self.beta * 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, DiagramVector):
            return NotImplemented
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return DiagramVector(terms, self.beta)

    def __neg__(self):
        return DiagramVector({d: -c for d, c in self.terms.items()}, self.beta)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return DiagramVector({d: c * scalar for d, c in self.terms.items()}, self.beta)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return compose(self, other, self.beta)

    def dagger(self) -> "DiagramVector":
        return DiagramVector({d.dagger(): c for d, c in self.terms.items()}, self.beta)

    def __eq__(self, other):
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return (self - other).is_zero()

    def __str__(self):
        return " + ".join(f"({c})*[{d}]" for d, c in sorted(self.terms.items(), key=lambda t: t[0].encode())) or "0"

    def __repr__(self):
        return f"DiagramVector({len(self.terms)} terms)"


def compose(a: DiagramVector, b: DiagramVector, beta) -> DiagramVector:
    terms = {}
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            d, loops = compose_diagrams(da, db)
            coef = ca * cb
            if loops:
                coef = coef * beta ** loops
            terms[d] = terms[d] + coef if d in terms else coef
    return DiagramVector(terms, beta)


###################
# generators
###################
def _build(n_out: int, n_in: int, pairs, ncloops: int = 0) -> AffineDiagram:
    """pairs: ((kind, i), (kind, j), shift) with kind in 'O', 'I' and 1-based i."""
    links = [None] * (n_out + n_in)

    def index(point):
        kind, i = point
        return i - 1 if kind == "O" else n_out + i - 1

    for p, q, s in pairs:
        p, q = index(p), index(q)
        links[p], links[q] = (q, s), (p, -s)
    return AffineDiagram(n_out, n_in, tuple(links), ncloops)


@lru_cache(maxsize=None)
def identity_diagram(N: int) -> AffineDiagram:
    return _build(N, N, [(("O", i), ("I", i), 0) for i in range(1, N + 1)])


@lru_cache(maxsize=None)
def c_diagram(j: int, N: int) -> AffineDiagram:
    """c_j in L(N-2, N): joins the inner points j, j+1 (j = 0 joins N and 1 across the dashed line)."""
    if N < 2 or not 0 <= j <= N - 1:
        raise DiagramError(f"c_{j} is not defined for N={N}")
    if j == 0:
        pairs = [(("I", N), ("I", 1), 1)]
        pairs += [(("I", i), ("O", i - 1), 0) for i in range(2, N)]
        return _build(N - 2, N, pairs)
    pairs = [(("I", j), ("I", j + 1), 0)]
    pairs += [(("I", i), ("O", i), 0) for i in range(1, j)]
    pairs += [(("I", i), ("O", i - 2), 0) for i in range(j + 2, N + 1)]
    return _build(N - 2, N, pairs)


@lru_cache(maxsize=None)
def omega_diagram(N: int, power: int = 1) -> AffineDiagram:
    """Omega^power in L(N, N): O(i) joins I(i + power), crossing the dashed line as needed."""
    if N < 1:
        raise DiagramError("Omega needs at least one point")
    pairs = []
    for i in range(1, N + 1):
        target = i + power
        shift, rem = divmod(target - 1, N)
        pairs.append((("O", i), ("I", rem + 1), shift))
    return _build(N, N, pairs)


@lru_cache(maxsize=None)
def f_diagram(power: int = 1) -> AffineDiagram:
    return AffineDiagram(0, 0, (), power)


GENERATOR_NAMES = ("id", "e", "c", "cdag", "Omega", "Omegainv", "f", "E")


def generator(name: str, N: int, j: int = None, beta=None) -> DiagramVector:
    """Generator as a diagram vector. For c and cdag, N is the larger size."""
    if beta is None:
        raise DiagramError("A loop weight is required to build diagram vectors")
    one = beta ** 0
    if name == "id":
        return DiagramVector.single(identity_diagram(N), beta)
    if name == "c":
        return DiagramVector.single(c_diagram(j, N), beta)
    if name == "cdag":
        return DiagramVector.single(c_diagram(j, N).dagger(), beta)
    if name == "e":
        if N < 2 or not 0 <= j <= N - 1:
            raise DiagramError(f"e_{j} is not defined for N={N}")
        c = c_diagram(j, N)
        d, loops = compose_diagrams(c.dagger(), c)
        return DiagramVector({d: one * beta ** loops}, beta)
    if name == "Omega":
        return DiagramVector.single(omega_diagram(N, 1 if j is None else j), beta)
    if name == "Omegainv":
        return DiagramVector.single(omega_diagram(N, -1 if j is None else -j), beta)
    if name == "f":
        if N != 0:
            raise DiagramError("f lives in L(0,0)")
        return DiagramVector.single(f_diagram(1 if j is None else j), beta)
    if name == "E":
        if N < 2 or N % 2:
            raise DiagramError(f"E needs an even positive N, got {N}")
        result = generator("id", N, beta=beta)
        for i in range(0, N - 1, 2):
            result = result @ generator("e", N, i, beta)
        return result
    raise DiagramError(f"Unknown generator {name!r}; expected one of {GENERATOR_NAMES}")


def word(tokens, beta, size: int = None) -> DiagramVector:
    """Product g_1 g_2 ... g_m of generator tokens (name, j, N)."""
    result = None
    for name, j, N in tokens:
        g = generator(name, N, j, beta)
        result = g if result is None else result @ g
    if result is None:
        return generator("id", size, beta=beta)
    return result


###################
# factorization
###################
def _inner_arch(d: AffineDiagram):
    """An inner arch joining adjacent inner points: returns the c-index or None."""
    N, M = d.n_out, d.n_in
    for u in range(1, M):
        q, s = d.links[N + u - 1]
        if q == N + u and s == 0:
            return u
    if M >= 2:
        q, s = d.links[N + M - 1]
        if q == N and s == 1:
            return 0
    return None


def _outer_arch(d: AffineDiagram):
    N = d.n_out
    for u in range(1, N):
        q, s = d.links[u - 1]
        if q == u and s == 0:
            return u
    if N >= 2:
        q, s = d.links[N - 1]
        if q == 0 and s == 1:
            return 0
    return None


def _remove_inner(d: AffineDiagram, j: int) -> AffineDiagram:
    """The diagram d' with d = d' c_j."""
    N, M = d.n_out, d.n_in
    if j == 0:
        removed = {N + M - 1, N}
        relabel = {N + i - 1: N + i - 2 for i in range(2, M)}
    else:
        removed = {N + j - 1, N + j}
        relabel = {N + i - 1: N + i - 1 for i in range(1, j)}
        relabel.update({N + i - 1: N + i - 3 for i in range(j + 2, M + 1)})
    relabel.update({p: p for p in range(N)})
    links = [None] * (N + M - 2)
    for p, (q, s) in enumerate(d.links):
        if p in removed:
            continue
        links[relabel[p]] = (relabel[q], s)
    return AffineDiagram(N, M - 2, tuple(links), d.ncloops)


@lru_cache(maxsize=1 << 14)
def factorize(d: AffineDiagram) -> tuple:
    """Generator word U R D equal to d: c_j's peel inner arches, cdag_j's peel outer
    arches, and the all-bridge middle is a power of Omega (or of f without bridges)."""
    inner = []
    current = d
    while True:
        j = _inner_arch(current)
        if j is None:
            break
        inner.append(("c", j, current.n_in))
        current = _remove_inner(current, j)
    outer = []
    while True:
        j = _outer_arch(current)
        if j is None:
            break
        outer.append(("cdag", j, current.n_out))
        current = _remove_inner(current.dagger(), j).dagger()
    if current.n_out != current.n_in:
        raise DiagramError(f"Factorization of {d} left a non-square core {current}")
    k2 = current.n_out
    if k2 == 0:
        middle = [("f", current.ncloops, 0)] if current.ncloops else []
    else:
        partner, shift = current.links[0]
        t = (partner - k2) + shift * k2
        middle = [("Omega", t, k2)] if t else []
    return tuple(outer) + tuple(middle) + tuple(reversed(inner))


def from_word(tokens, size_in: int) -> AffineDiagram:
    """Compose a loop-free word back into a single diagram (no beta weights arise)."""
    result = identity_diagram(size_in) if not tokens else None
    for name, j, N in tokens:
        if name == "c":
            g = c_diagram(j, N)
        elif name == "cdag":
            g = c_diagram(j, N).dagger()
        elif name == "Omega":
            g = omega_diagram(N, j)
        elif name == "f":
            g = f_diagram(j)
        else:
            raise DiagramError(f"Unexpected token {name!r} in a factorized word")
        result = g if result is None else compose_diagrams(result, g)[0]
    return result


###################
# enumeration
###################
def crossingless_matchings(n: int):
    """All non-crossing perfect matchings of n points on a line, as involutions."""
    if n % 2:
        return
    seq = [-1] * n

    def place(i: int, size: int):
        if size == 0:
            yield
            return
        for left in range(size):
            l, r = i, i + 1 + 2 * left
            seq[l], seq[r] = r, l
            for _ in place(l + 1, left):
                for _ in place(r + 1, size - left - 1):
                    yield

    for _ in place(0, n // 2):
        yield tuple(seq)


def planar_diagrams(n_out: int, n_in: int) -> list:
    """Basis of L0(n_out, n_in): outer points left to right, then inner points right to left."""
    total = n_out + n_in
    out = []
    for seq in crossingless_matchings(total):
        def index(p):
            return p if p < n_out else n_out + (total - 1 - p)
        links = [None] * total
        for p, q in enumerate(seq):
            links[index(p)] = (index(q), 0)
        out.append(AffineDiagram(n_out, n_in, tuple(links)))
    return out


###################
# transfer tiles
###################
def _reduce_network(n_out: int, n_in: int, edges):
    """Reduce a network of edges (p, q, shift) between external points ('O', i)/('I', i)
    and degree-two internal points into one diagram and a contractible loop count."""
    adjacency = {}
    for idx, (p, q, s) in enumerate(edges):
        adjacency.setdefault(p, []).append((idx, q, s))
        adjacency.setdefault(q, []).append((idx, p, -s))
    used = [False] * len(edges)

    def external(point):
        return point[0] in ("O", "I")

    def index(point):
        kind, i = point
        return i - 1 if kind == "O" else n_out + i - 1

    links = [None] * (n_out + n_in)
    for kind, count in (("O", n_out), ("I", n_in)):
        for i in range(1, count + 1):
            start = (kind, i)
            if links[index(start)] is not None:
                continue
            point, total = start, 0
            while True:
                step = next((e for e in adjacency[point] if not used[e[0]]), None)
                if step is None:
                    raise DiagramError(f"Dangling point {point} in transfer network")
                idx, nxt, s = step
                used[idx] = True
                total += s
                point = nxt
                if external(point):
                    break
            links[index(start)] = (index(point), total)
            links[index(point)] = (index(start), -total)
    contractible, ncloops = 0, 0
    for idx, (p, q, s) in enumerate(edges):
        if used[idx]:
            continue
        used[idx] = True
        total, point = s, q
        while point != p:
            step = next(e for e in adjacency[point] if not used[e[0]])
            used[step[0]] = True
            total += step[2]
            point = step[1]
        if total == 0:
            contractible += 1
        else:
            ncloops += 1
    return AffineDiagram(n_out, n_in, tuple(links), ncloops), contractible


def _row_edges(N: int, choice, top: str, bottom: str, vertical: str, periodic: bool):
    edges = []
    for j, tile in enumerate(choice):
        if tile == "A":
            pairs = [((top, j + 1), (vertical, j)), ((bottom, j + 1), (vertical, j + 1))]
        else:
            pairs = [((top, j + 1), (vertical, j + 1)), ((bottom, j + 1), (vertical, j))]
        for p, q in pairs:
            shift = 0
            if periodic and q == (vertical, N):
                q, shift = (vertical, 0), 1
            edges.append((p, q, shift))
    return edges


def transfer_diagram(kind: str, N: int, beta, weights=None) -> DiagramVector:
    """Sum over tilings of one row (periodic, in L(N,N)) or two rows (strip, in L0(N,N)).

    ``weights`` gives the two tile amplitudes (A, B); both default to one.
    """
    if N < 1:
        raise DiagramError(f"Transfer diagrams need N >= 1, got {N}")
    one = beta ** 0
    w_a, w_b = weights if weights is not None else (one, one)
    terms = {}
    if kind == "single_row":
        choices = itertools.product("AB", repeat=N)
    elif kind == "double_row":
        choices = itertools.product("AB", repeat=2 * N)
    else:
        raise DiagramError(f"Unknown transfer kind {kind!r}")
    for choice in choices:
        if kind == "single_row":
            edges = _row_edges(N, choice, "O", "I", "V", periodic=True)
        else:
            edges = _row_edges(N, choice[:N], "O", "M", "V1", periodic=False)
            edges += _row_edges(N, choice[N:], "I", "M", "V2", periodic=False)
            edges += [(("V1", 0), ("V2", 0), 0), (("V1", N), ("V2", N), 0)]
        diagram, loops = _reduce_network(N, N, edges)
        coef = one
        for tile in choice:
            coef = coef * (w_a if tile == "A" else w_b)
        if loops:
            coef = coef * beta ** loops
        terms[diagram] = terms[diagram] + coef if diagram in terms else coef
    logger.debug(f"Expanded {kind} transfer diagram at N={N} into {len(terms)} diagrams")
    return DiagramVector(terms, beta)


###################
# representations
###################
class Representation:
    """A family of modules M(N), N >= 0, carrying an action of the diagram spaces.

    Subclasses define ``field``, ``beta`` and ``dim(N)``, and either override
    ``operator`` (direct diagram action) or ``_generator_op`` (generator matrices,
    extended to arbitrary diagrams through :func:`factorize`).
    """

    field = None
    beta = None

    @property
    def one(self):
        return self.field.one()

    @property
    def zero(self):
        return self.field.zero()

    @property
    def exact(self) -> bool:
        return self.field.is_exact

    def dim(self, N: int) -> int:
        raise NotImplementedError

    def identity(self, N: int):
        return SparseOp.identity(self.dim(N), self.one)

    def generator_op(self, name: str, N: int, j: int = None):
        cache = self.__dict__.setdefault("_generator_cache", {})
        key = (name, N, j)
        if key not in cache:
            cache[key] = self._generator_op(name, N, j)
        return cache[key]

    def _generator_op(self, name: str, N: int, j: int = None):
        return self.operator(generator(name, N, j, self.beta))

    def token_op(self, token):
        name, j, N = token
        if name in ("c", "cdag"):
            return self.generator_op(name, N, j)
        if name == "Omega":
            return self.generator_op("Omega", N, j)
        if name == "f":
            return self.generator_op("f", 0, j)
        raise DiagramError(f"Unexpected token {token!r}")

    def word_op(self, tokens, size_in: int):
        """Matrix of the product g_1 g_2 ... g_m of generator tokens."""
        result = None
        for token in reversed(tuple(tokens)):
            op = self.token_op(token)
            result = op if result is None else op @ result
        return self.identity(size_in) if result is None else result

    def operator(self, dv: DiagramVector, shape=None):
        n_out, n_in = dv.shape or shape or (None, None)
        if n_out is None:
            raise DiagramError("The zero diagram vector needs an explicit shape")
        total = SparseOp.zero(self.dim(n_out), self.dim(n_in))
        for d, c in dv.terms.items():
            total = total + self.word_op(factorize(d), d.n_in) * c
        return total

    def act(self, dv: DiagramVector, vec: dict) -> dict:
        """Apply dv to a vector one generator at a time, without building its matrix."""
        out = {}
        for d, c in dv.terms.items():
            image = vec
            for token in reversed(factorize(d)):
                image = self.token_op(token).apply(image)
                if not image:
                    break
            out = vec_add(out, image, c)
        return out
