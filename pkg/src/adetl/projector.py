# projector.py

"""
Jones-Wenzl projectors P_n, the uncoiled projectors hat P_{N,x} and the
diagram words of the singular vectors.

hat P_{N,x} is never expanded in the diagram algebra: it is only a projector
in modules where Omega^N acts as x^N (and E Omega E as alpha E for x = +-1), so
it is evaluated directly in a representation as

    hat P_{N,x} = sum_{s, l} Gamma_{s,l} P_N (c_0^dag)^s Omega^l (c_0)^s P_N.
"""

from fractions import Fraction
from functools import lru_cache

from .diagram import AffineDiagram, DiagramVector, generator
from .exceptions import DiagramError, SingularValueError
from .linkmod import LinkFamily, QuotientModule, half_integer
from .logger import get_logger
from .scalars import q_binomial, q_factorial, q_number
from .utils import SparseOp, vec_add, vec_equal, vec_scale

logger = get_logger(__name__)

UNCOILED_TAGS = ("odd", "even-1", "even-2")


###################
# Jones-Wenzl
###################
def pad_right(d: AffineDiagram, m: int) -> AffineDiagram:
    """d tensored with m through-lines added to the right."""
    if not d.is_planar:
        raise DiagramError(f"Only planar diagrams can be padded, got {d}")
    n_out, n_in = d.n_out + m, d.n_in + m

    def move(p):
        return p if p < d.n_out else n_out + (p - d.n_out)

    links = [None] * (n_out + n_in)
    for p, (q, s) in enumerate(d.links):
        links[move(p)] = (move(q), s)
    for t in range(m):
        outer, inner = d.n_out + t, n_out + d.n_in + t
        links[outer], links[inner] = (inner, 0), (outer, 0)
    return AffineDiagram(n_out, n_in, tuple(links), d.ncloops)


def tensor_id(dv: DiagramVector, m: int) -> DiagramVector:
    return DiagramVector({pad_right(d, m): c for d, c in dv.terms.items()}, dv.beta)


def _jw_ratio(m: int, q):
    """[m]/[m+1], the coefficient of the recursion step from P_m to P_{m+1}."""
    den = q_number(m + 1, q)
    if den.is_zero():
        raise SingularValueError(f"P_{m + 1} does not exist: [{m + 1}] vanishes at q = {q}")
    return q_number(m, q) / den


class _Keyed:
    """Hashable handle on a scalar, compared by its printed value."""

    __slots__ = ("value", "key")

    def __init__(self, value):
        self.value, self.key = value, str(value)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, _Keyed) and self.key == other.key


def jones_wenzl(n: int, q, beta=None) -> DiagramVector:
    """P_n in TL_n(beta), from P_{m+1} = P_m + [m]/[m+1] P_m e_m P_m."""
    beta = -q - q.inverse() if beta is None else beta
    return _jones_wenzl(n, _Keyed(q), _Keyed(beta))


@lru_cache(maxsize=256)
def _jones_wenzl(n: int, q: _Keyed, beta: _Keyed) -> DiagramVector:
    if n <= 1:
        return generator("id", n, beta=beta.value)
    prev = tensor_id(_jones_wenzl(n - 1, q, beta), 1)
    e = generator("e", n, n - 1, beta.value)
    result = prev + (prev @ e @ prev) * _jw_ratio(n - 1, q.value)
    logger.debug(f"P_{n} has {len(result.terms)} terms")
    return result


def jones_wenzl_in(rep, n: int, q) -> SparseOp:
    """P_n evaluated directly as a matrix on rep(n)."""
    P = rep.identity(n)
    for m in range(1, n):
        e = rep.generator_op("e", n, m)
        P = P + (P @ e @ P) * _jw_ratio(m, q)
    return P


###################
# Gamma constants
###################
def _check_range(s: int, ell: int, N: int):
    if not (0 <= s <= (N - 1) // 2 and 0 <= ell <= N - 2 * s - 1):
        raise SingularValueError(f"Gamma_({s},{ell}) is not defined for N={N}")


def _pole_factor(x, q, sigma: int, kappa: int, N: int):
    den = x * x * q ** (sigma * (N - 2 * kappa)) - 1
    if den.is_zero():
        raise SingularValueError(f"Gamma has a pole at x={x}: x^2 q^(sigma (N - 2 kappa)) = 1 "
                                 f"for (sigma, kappa) = ({sigma}, {kappa})")
    return den.inverse()


def gamma(s: int, ell: int, N: int, x, q):
    """The constant Gamma_{s,l} of the uncoiled projector hat P_{N,x}."""
    _check_range(s, ell, N)
    if s == 0:
        return x ** (-ell) * Fraction(1, N)
    one = q ** 0
    prefactor = x ** (-ell) / ((q - q.inverse()) ** (2 * s - 1)
                               * q_factorial(s, q) * q_factorial(s - 1, q) * N)
    total = one * 0
    for sigma in (1, -1):
        for kappa in range(1, s + 1):
            pole = _pole_factor(x, q, sigma, kappa, N)
            den = q_binomial(N - kappa - 1, N - s - 1, q)
            if den.is_zero():
                raise SingularValueError(f"q-binomial [{N - kappa - 1} choose {N - s - 1}] vanishes at q = {q}")
            outer = pole * q_binomial(s - 1, kappa - 1, q) / den
            for tau in range(0, s - kappa + 1):
                if ell == 0:
                    last = one if tau == 0 else one * 0
                else:
                    last = q_binomial(ell + tau - 1, tau, q)
                term = q_binomial(N - s - ell - kappa - tau - 1, s - kappa - tau, q) * last
                if term.is_zero():
                    continue
                sign = (-1) ** (s + kappa) * sigma
                total = total + outer * term * q ** (sigma * (ell * kappa + N * tau)) * sign
    return prefactor * total


def gamma_closed_form(s: int, N: int, x, q):
    """Gamma_{s,0} written as a single product."""
    _check_range(s, 0, N)
    result = x ** (2 * s) * q_binomial(N - s - 1, s, q) * Fraction((-1) ** s, N)
    for sigma in (1, -1):
        for kappa in range(1, s + 1):
            result = result * _pole_factor(x, q, sigma, kappa, N)
    return result


def gamma_half(N: int, x, q, alpha):
    """The extra constant Gamma_{N/2,0} of the even-1 uncoiled algebra."""
    if N % 2:
        raise SingularValueError(f"Gamma_(N/2,0) needs an even N, got {N}")
    one = q ** 0
    if x == one:
        sign = -1
    elif x == -one:
        sign = 1
    else:
        return one * 0
    half = N // 2
    shift = q ** half + q ** (-half)
    den = alpha + shift * sign
    if den.is_zero():
        raise SingularValueError(f"Gamma_({half},0) has a pole at alpha = {alpha}")
    base = (q - q.inverse()) ** (N - 2) * q_factorial(half - 1, q) ** 2
    return (base * den).inverse() * Fraction(sign, 2)


def gamma_sum_identity(N: int, x, q, q_half, gamma_sign: int):
    """Both sides of the alternating identity for sum_s (-1)^s Gamma_{s,0} / (q^{N/2-s} + gamma q^{s-N/2})."""
    one = q ** 0

    def half_power(e):
        return q_half ** e

    lhs = one * 0
    for s in range((N - 1) // 2 + 1):
        den = half_power(N - 2 * s) + half_power(2 * s - N) * gamma_sign
        lhs = lhs + gamma_closed_form(s, N, x, q) * (-1) ** s / den
    front = (half_power(N) + half_power(-N) * gamma_sign) * N
    if N % 2 == 0:
        ratio = (1 - x ** N) * (1 + x ** N * gamma_sign) / ((1 - x ** 2) * (1 + x ** 2 * gamma_sign))
        top = N // 2 - 1
    else:
        ratio = (1 + x ** (2 * N) * gamma_sign) / (1 + x ** 2 * gamma_sign)
        top = (N - 1) // 2
    rhs = ratio / front
    for sigma in (1, -1):
        for kappa in range(1, top + 1):
            rhs = rhs * _pole_factor(x, q, sigma, kappa, N)
    return lhs, rhs


###################
# uncoiled projectors
###################
def _lower(rep, vec: dict, N: int, times: int) -> dict:
    for step in range(times):
        vec = rep.generator_op("c", N - 2 * step, 0).apply(vec)
    return vec


def _raise(rep, vec: dict, N: int, times: int) -> dict:
    for step in range(times):
        vec = rep.generator_op("cdag", N + 2 * (step + 1), 0).apply(vec)
    return vec


def uncoiled_tag(N: int, x) -> str:
    if N % 2:
        return "odd"
    one = x ** 0
    return "even-1" if x == one or x == -one else "even-2"


def apply_uncoiled(rep, N: int, x, q, vec: dict, alpha=None, projector: SparseOp = None) -> dict:
    """hat P_{N,x} applied to a vector of rep(N).

    ``alpha`` enables the extra Z_{N/2,0} term of the even-1 algebra; it must be
    given when x = +-1 and N is even.
    """
    P = jones_wenzl_in(rep, N, q) if projector is None else projector
    u = P.apply(vec)
    out = {}
    for s in range((N - 1) // 2 + 1):
        down = _lower(rep, u, N, s)
        if not down:
            continue
        for ell in range(N - 2 * s):
            coef = gamma(s, ell, N, x, q)
            if coef.is_zero():
                continue
            turned = rep.generator_op("Omega", N - 2 * s, ell).apply(down) if ell else down
            out = vec_add(out, _raise(rep, turned, N - 2 * s, s), coef)
    if N % 2 == 0 and uncoiled_tag(N, x) == "even-1":
        if alpha is None:
            raise SingularValueError(f"hat P_({N},{x}) needs alpha for x = +-1")
        coef = gamma_half(N, x, q, alpha)
        if not coef.is_zero():
            bottom = _lower(rep, u, N, N // 2)
            out = vec_add(out, _raise(rep, bottom, 0, N // 2), coef)
    return P.apply(out)


###################
# singular words
###################
def _seed_words(quotient: QuotientModule, size: int, rotation=None):
    """Singular vectors at size as diagram vectors; with rotation, only those with Omega v = rotation v."""
    family = quotient.family
    states = family.states(size)
    seeds = quotient.seeds.get(size, [])
    if rotation is not None:
        omega = family.generator_op("Omega", size, 1)
        seeds = [vec for vec in seeds if vec_equal(omega.apply(vec), vec_scale(vec, rotation))]
    out = []
    for vec in seeds:
        out.append(DiagramVector({states[i].diagram: c for i, c in vec.items()}, family.beta))
    return out


def _single(words, name: str):
    if not words:
        raise DiagramError(f"No singular vector found for {name}")
    if len(words) > 1:
        logger.warning(f"{name} is not unique; returning the first of {len(words)} vectors")
    return words[0]


def mu_word(s: int, eps: int, roots, sigma: int = 1) -> DiagramVector:
    """mu_{0,s} in L(2s, 0): v_{0,s} = mu_{0,s} u_0 in W_{0, eps q^(sigma s)}(2s)."""
    if not 0 < s < roots.pprime:
        raise DiagramError(f"mu_(0,{s}) needs 0 < s < p'={roots.pprime}")
    x = roots.power(sigma * s) * eps
    quotient = QuotientModule(LinkFamily("W", 0, roots.field, roots.beta, x), roots)
    return _single(_seed_words(quotient, 2 * s, quotient.one * eps), f"mu_(0,{s})")


def lambda_word(k, roots) -> DiagramVector:
    """lambda_k in L0(2k', 2k) with v_k = lambda_k u_k the singular vector of V_k."""
    k = half_integer(k)
    quotient = QuotientModule(LinkFamily("V", k, roots.field, roots.beta), roots)
    if not quotient.seeds:
        raise DiagramError(f"V_{k} has no singular vector at p'={roots.pprime}")
    size = next(iter(quotient.seeds))
    return _single(_seed_words(quotient, size), f"lambda_{k}")


def twisted_word(k, s, eps: int, sigma: int, roots) -> DiagramVector:
    """v^(sigma,eps)_{k,s}: the singular vector of W_{k, eps q^s} at size 2s (sigma = 1)
    or at size 2(p'-s) (sigma = -1), as a diagram vector in L(size, 2k)."""
    k, s = half_integer(k), half_integer(s)
    if not k < s < roots.pprime - k:
        raise DiagramError(f"v_({k},{s}) needs k < s < p' - k")
    x = roots.power(s) * eps
    quotient = QuotientModule(LinkFamily("W", k, roots.field, roots.beta, x), roots)
    if sigma == 1:
        size, rotation = int(2 * s), roots.power(k) * eps
    else:
        size, rotation = int(2 * (roots.pprime - s)), roots.power(-k) * (eps * (-1) ** roots.p)
    return _single(_seed_words(quotient, size, rotation), f"v^({sigma},{eps})_({k},{s})")


def lambda_hat(k, roots) -> DiagramVector:
    """c_{k+k'+1} ... c_{2k'} (lambda_k x id_{k'-k}) in TL_{p'-1}."""
    k = half_integer(k)
    if not 0 <= k <= Fraction(roots.pprime, 2) - 1:
        raise DiagramError(f"lambda_hat_{k} needs 0 <= k <= p'/2 - 1")
    lam = lambda_word(k, roots)
    kp = roots.pprime - 1 - k
    pad = int(kp - k)
    result = tensor_id(lam, pad)
    size = result.shape[0]
    for j in range(int(2 * kp), int(k + kp), -1):
        result = generator("c", size, j, roots.beta) @ result
        size -= 2
    return result


SINGULAR_WORDS = {
    "mu": mu_word,
    "lambda": lambda_word,
    "v": twisted_word,
    "lambda_hat": lambda_hat,
}


def singular_word(kind: str, roots, **params) -> DiagramVector:
    if kind not in SINGULAR_WORDS:
        raise DiagramError(f"Unknown singular word {kind!r}; expected one of {sorted(SINGULAR_WORDS)}")
    return SINGULAR_WORDS[kind](roots=roots, **params)
