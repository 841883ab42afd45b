# scalars.py

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import sympy

from .exceptions import ScalarError, SingularValueError
from .logger import get_logger

logger = get_logger(__name__)

DEFAULT_TOLERANCE = 1e-9

_Z = sympy.Symbol("z")


@lru_cache(maxsize=None)
def _cyclotomic(conductor: int) -> tuple:
    """Coefficients of the conductor-th cyclotomic polynomial, lowest degree first."""
    poly = sympy.Poly(sympy.cyclotomic_poly(conductor, _Z), _Z)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _power_table(conductor: int) -> tuple:
    """Reduction of z^e modulo the cyclotomic polynomial, for e = 0..conductor-1."""
    cyc = _cyclotomic(conductor)
    degree = len(cyc) - 1
    row = [0] * degree
    row[0] = 1
    rows = [tuple(row)]
    for _ in range(1, conductor):
        top = row[-1]
        row = [0] + row[:-1]
        if top:
            row = [r - top * c for r, c in zip(row, cyc)]
        rows.append(tuple(row))
    logger.debug(f"Built power table for conductor {conductor} (degree {degree})")
    return tuple(rows)


def euler_phi(conductor: int) -> int:
    return len(_cyclotomic(conductor)) - 1


def _normalize(nums, den):
    if den < 0:
        nums = [-n for n in nums]
        den = -den
    g = den
    for n in nums:
        if n:
            g = math.gcd(g, n)
            if g == 1:
                break
    if not any(nums):
        return tuple(0 for _ in nums), 1
    if g > 1:
        nums = [n // g for n in nums]
        den //= g
    return tuple(nums), den


class Scalar:
    """Exact element of the cyclotomic field Q(z), z = exp(2 pi i / conductor).

    The value is ``sum(nums[i] z^i) / den`` with ``len(nums) == euler_phi(conductor)``,
    reduced modulo the cyclotomic polynomial and with ``gcd(nums, den) == 1``.
    Scalars of different conductors are promoted to the least common multiple.
    """

    __slots__ = ("conductor", "nums", "den")
    __hash__ = None
    is_exact = True

    def __init__(self, conductor: int, nums, den: int = 1):
        if conductor < 1:
            raise ScalarError(f"Conductor must be positive, got {conductor}")
        degree = euler_phi(conductor)
        nums = list(nums)
        if len(nums) != degree:
            raise ScalarError(f"Expected {degree} coefficients for conductor {conductor}, got {len(nums)}")
        if den == 0:
            raise ScalarError("Zero denominator")
        self.conductor = conductor
        self.nums, self.den = _normalize(nums, den)

    ###################
    # construction
    ###################
    @classmethod
    def _raw(cls, conductor, nums, den):
        obj = cls.__new__(cls)
        obj.conductor = conductor
        obj.nums, obj.den = _normalize(nums, den)
        return obj

    @classmethod
    def from_rational(cls, value, conductor: int = 1) -> "Scalar":
        value = Fraction(value)
        nums = [0] * euler_phi(conductor)
        nums[0] = value.numerator
        return cls._raw(conductor, nums, value.denominator)

    @classmethod
    def from_exponents(cls, conductor: int, terms: dict) -> "Scalar":
        """Build sum(c * z^e) from a mapping exponent -> rational coefficient."""
        table = _power_table(conductor)
        acc = [Fraction(0)] * euler_phi(conductor)
        for e, c in terms.items():
            c = Fraction(c)
            if c:
                for i, t in enumerate(table[e % conductor]):
                    if t:
                        acc[i] += c * t
        return cls._from_fractions(conductor, acc)

    @classmethod
    def _from_fractions(cls, conductor, fracs):
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return cls._raw(conductor, [int(f * den) for f in fracs], den)

    ###################
    # inspection
    ###################
    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_one(self) -> bool:
        return self.den == 1 and self.nums[0] == 1 and not any(self.nums[1:])

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ScalarError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def to_complex(self) -> complex:
        total = 0j
        for i, n in enumerate(self.nums):
            if n:
                total += n * cmath.exp(2j * math.pi * i / self.conductor)
        return total / self.den

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def __bool__(self):
        return not self.is_zero()

    ###################
    # field towers
    ###################
    def embed(self, conductor: int) -> "Scalar":
        """Rewrite the value in Q(z_M) for a multiple M of the current conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ScalarError(f"Cannot embed conductor {self.conductor} into {conductor}")
        step = conductor // self.conductor
        table = _power_table(conductor)
        acc = [0] * euler_phi(conductor)
        for i, n in enumerate(self.nums):
            if n:
                for j, t in enumerate(table[(i * step) % conductor]):
                    if t:
                        acc[j] += n * t
        return Scalar._raw(conductor, acc, self.den)

    def restrict(self, conductor: int) -> "Scalar":
        """Inverse of :meth:`embed`; raises ScalarError when the value is not in Q(z_M)."""
        if conductor == self.conductor:
            return self
        if self.conductor % conductor:
            raise ScalarError(f"Conductor {conductor} does not divide {self.conductor}")
        sub_degree = euler_phi(conductor)
        columns = []
        for i in range(sub_degree):
            basis = Scalar.from_exponents(conductor, {i: 1}).embed(self.conductor)
            columns.append([sympy.Rational(n, basis.den) for n in basis.nums])
        system = sympy.Matrix(columns).T
        target = sympy.Matrix([sympy.Rational(n, self.den) for n in self.nums])
        try:
            solution, params = system.gauss_jordan_solve(target)
        except ValueError:
            raise ScalarError(f"{self} does not lie in the field of conductor {conductor}")
        fracs = [Fraction(int(v.p), int(v.q)) for v in solution]
        return Scalar._from_fractions(conductor, fracs)

    def _promote(self, other):
        if isinstance(other, Scalar):
            if other.conductor == self.conductor:
                return self, other
            if other.conductor == 1:
                return self, other.embed(self.conductor)
            if self.conductor == 1:
                return self.embed(other.conductor), other
            target = math.lcm(self.conductor, other.conductor)
            return self.embed(target), other.embed(target)
        if isinstance(other, (int, Rational)):
            return self, Scalar.from_rational(other, self.conductor)
        return None, None

    ###################
    # arithmetic
    ###################
    def __add__(self, other):
        a, b = self._promote(other)
        if a is None:
            return NotImplemented
        den = a.den * b.den // math.gcd(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return Scalar._raw(a.conductor, [x * fa + y * fb for x, y in zip(a.nums, b.nums)], den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.conductor, [-n for n in self.nums], self.den)

    def __sub__(self, other):
        a, b = self._promote(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            value = Fraction(other)
            return Scalar._raw(self.conductor, [n * value.numerator for n in self.nums],
                               self.den * value.denominator)
        a, b = self._promote(other)
        if a is None:
            return NotImplemented
        if b.is_rational():
            return Scalar._raw(a.conductor, [n * b.nums[0] for n in a.nums], a.den * b.den)
        if a.is_rational():
            return Scalar._raw(a.conductor, [n * a.nums[0] for n in b.nums], a.den * b.den)
        conductor = a.conductor
        degree = len(a.nums)
        product = [0] * (2 * degree - 1)
        for i, x in enumerate(a.nums):
            if x:
                for j, y in enumerate(b.nums):
                    if y:
                        product[i + j] += x * y
        acc = product[:degree]
        table = _power_table(conductor)
        for e in range(degree, len(product)):
            c = product[e]
            if c:
                for j, t in enumerate(table[e % conductor]):
                    if t:
                        acc[j] += c * t
        return Scalar._raw(conductor, acc, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise SingularValueError("Division by zero scalar")
        nonzero = [i for i, n in enumerate(self.nums) if n]
        if nonzero == [0]:
            return Scalar.from_rational(Fraction(self.den, self.nums[0]), self.conductor)
        if len(nonzero) == 1:
            e = nonzero[0]
            return Scalar.from_exponents(self.conductor, {-e: Fraction(self.den, self.nums[e])})
        cyc = sympy.Poly(list(reversed(_cyclotomic(self.conductor))), _Z, domain="QQ")
        poly = sympy.Poly(list(reversed(self.nums)), _Z, domain="QQ")
        inv = poly.invert(cyc)
        coeffs = list(reversed(inv.all_coeffs()))
        coeffs += [0] * (len(self.nums) - len(coeffs))
        fracs = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) * self.den for c in coeffs]
        return Scalar._from_fractions(self.conductor, fracs)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise SingularValueError("Division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar.from_rational(1, self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def conj(self) -> "Scalar":
        terms = {-i: Fraction(n, self.den) for i, n in enumerate(self.nums) if n}
        return Scalar.from_exponents(self.conductor, terms)

    def __eq__(self, other):
        if isinstance(other, FloatScalar):
            return other == self
        a, b = self._promote(other)
        if a is None:
            return NotImplemented
        return a.nums == b.nums and a.den == b.den

    ###################
    # text form
    ###################
    def __str__(self):
        terms = []
        for i, n in enumerate(self.nums):
            if not n:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            mag = abs(n)
            body = str(mag) if i == 0 else (mono if mag == 1 else f"{mag}{mono}")
            if not terms:
                terms.append(f"-{body}" if n < 0 else body)
            else:
                terms.append(f" - {body}" if n < 0 else f" + {body}")
        poly = "".join(terms) if terms else "0"
        tail = f"/{self.den}" if self.den != 1 else ""
        return f"[{self.conductor}] ({poly}){tail}"

    def __repr__(self):
        return f"Scalar('{self}')"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse the text form ``[L] (c0 + c1 z + c2 z^2 - ...)/den``."""
        match = re.fullmatch(r"\s*\[(\d+)\]\s*\((.*)\)\s*(?:/\s*(\d+))?\s*", text)
        if not match:
            raise ScalarError(f"Malformed scalar text: {text!r}")
        conductor = int(match.group(1))
        den = int(match.group(3)) if match.group(3) else 1
        body = match.group(2).replace(" ", "")
        terms = {}
        for token in re.split(r"(?=[+-])", body):
            if not token:
                continue
            tm = re.fullmatch(r"([+-]?)(\d*)(?:(z)(?:\^(\d+))?)?", token)
            if not tm or (not tm.group(2) and not tm.group(3)):
                raise ScalarError(f"Malformed scalar term {token!r} in {text!r}")
            coef = int(tm.group(2)) if tm.group(2) else 1
            if tm.group(1) == "-":
                coef = -coef
            exp = int(tm.group(4)) if tm.group(4) else (1 if tm.group(3) else 0)
            terms[exp] = terms.get(exp, 0) + Fraction(coef, den)
        return cls.from_exponents(conductor, terms)


class FloatScalar:
    """Complex double with a tolerance: a value is zero iff ``abs(value) < tol``."""

    __slots__ = ("value", "tol")
    __hash__ = None
    is_exact = False

    def __init__(self, value, tol: float = DEFAULT_TOLERANCE):
        self.value = complex(value)
        self.tol = tol

    @staticmethod
    def _value(other):
        if isinstance(other, FloatScalar):
            return other.value
        if isinstance(other, Scalar):
            return other.to_complex()
        if isinstance(other, (int, float, complex, Rational)):
            return complex(other)
        return None

    def _wrap(self, value):
        return FloatScalar(value, self.tol)

    def __add__(self, other):
        v = self._value(other)
        return NotImplemented if v is None else self._wrap(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._value(other)
        return NotImplemented if v is None else self._wrap(self.value - v)

    def __rsub__(self, other):
        v = self._value(other)
        return NotImplemented if v is None else self._wrap(v - self.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __mul__(self, other):
        v = self._value(other)
        return NotImplemented if v is None else self._wrap(self.value * v)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise SingularValueError(f"Division by numerically zero scalar {self.value}")
        return self._wrap(1 / self.value)

    def __truediv__(self, other):
        v = self._value(other)
        if v is None:
            return NotImplemented
        if abs(v) < self.tol:
            raise SingularValueError(f"Division by numerically zero scalar {v}")
        return self._wrap(self.value / v)

    def __rtruediv__(self, other):
        v = self._value(other)
        return NotImplemented if v is None else self._wrap(v) / self

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._wrap(self.value ** exponent)

    def conj(self):
        return self._wrap(self.value.conjugate())

    def is_zero(self) -> bool:
        return abs(self.value) < self.tol

    def is_one(self) -> bool:
        return abs(self.value - 1) < self.tol

    def is_rational(self) -> bool:
        return abs(self.value.imag) < self.tol

    def to_complex(self) -> complex:
        return self.value

    def __abs__(self):
        return abs(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        v = self._value(other)
        if v is None:
            return NotImplemented
        return abs(self.value - v) < self.tol

    def __str__(self):
        return f"({self.value.real:.15g}{self.value.imag:+.15g}j)"

    def __repr__(self):
        return f"FloatScalar{self}"

    @classmethod
    def parse(cls, text: str, tol: float = DEFAULT_TOLERANCE) -> "FloatScalar":
        try:
            return cls(complex(text.strip()), tol)
        except ValueError:
            raise ScalarError(f"Malformed float scalar text: {text!r}")


###################
# fields
###################
class ExactField:
    """Q(z_L) with the helpers every other module builds its amplitudes from."""

    is_exact = True

    def __init__(self, conductor: int):
        self.conductor = conductor

    def zeta(self, k: int) -> Scalar:
        return root_of_unity(self.conductor, k)

    def root(self, order: int, k: int) -> Scalar:
        """exp(2 pi i k / order); order must divide the conductor."""
        if self.conductor % order:
            raise ScalarError(f"Root of order {order} is not in the field of conductor {self.conductor}")
        return self.zeta(k * (self.conductor // order))

    def one(self) -> Scalar:
        return Scalar.from_rational(1, self.conductor)

    def zero(self) -> Scalar:
        return Scalar.from_rational(0, self.conductor)

    def from_rational(self, value) -> Scalar:
        return Scalar.from_rational(value, self.conductor)

    def coerce(self, value):
        if isinstance(value, Scalar):
            return value.embed(self.conductor) if value.conductor != self.conductor else value
        return self.from_rational(value)

    def __repr__(self):
        return f"ExactField({self.conductor})"


class FloatField:

    is_exact = False

    def __init__(self, conductor: int, tol: float = DEFAULT_TOLERANCE):
        self.conductor = conductor
        self.tol = tol

    def zeta(self, k: int) -> FloatScalar:
        return FloatScalar(cmath.exp(2j * math.pi * (k % self.conductor) / self.conductor), self.tol)

    def root(self, order: int, k: int) -> FloatScalar:
        return FloatScalar(cmath.exp(2j * math.pi * (k % order) / order), self.tol)

    def one(self) -> FloatScalar:
        return FloatScalar(1, self.tol)

    def zero(self) -> FloatScalar:
        return FloatScalar(0, self.tol)

    def from_rational(self, value) -> FloatScalar:
        return FloatScalar(float(Fraction(value)), self.tol)

    def from_complex(self, value) -> FloatScalar:
        return FloatScalar(value, self.tol)

    def coerce(self, value):
        if isinstance(value, FloatScalar):
            return value
        if isinstance(value, Scalar):
            return FloatScalar(value.to_complex(), self.tol)
        return FloatScalar(complex(value), self.tol)

    def __repr__(self):
        return f"FloatField({self.conductor}, tol={self.tol})"


def model_conductor(pprime: int) -> int:
    return math.lcm(4 * pprime, 12)


def make_field(pprime: int, backend: str = "exact"):
    conductor = model_conductor(pprime)
    if backend == "exact":
        return ExactField(conductor)
    if backend == "float":
        return FloatField(conductor)
    raise ScalarError(f"Unknown backend {backend!r}; expected 'exact' or 'float'")


###################
# q-numbers
###################
def root_of_unity(L: int, k: int) -> Scalar:
    if L < 1:
        raise ScalarError(f"Root of unity order must be positive, got {L}")
    nums = _power_table(L)[k % L]
    return Scalar._raw(L, list(nums), 1)


def model_q(field, pprime: int, p: int):
    """q = exp(-i pi p / p')."""
    return field.root(2 * pprime, -p)


def loop_weight(q):
    return -q - q.inverse()


def q_power(field, pprime: int, p: int, s):
    """q^s for integer or half-integer s, using q^(1/2) = exp(-i pi p / (2p'))."""
    twice = Fraction(s) * 2
    if twice.denominator != 1:
        raise ScalarError(f"q^{s} needs an integer or half-integer exponent")
    return field.root(4 * pprime, -p * int(twice))


@dataclass(frozen=True)
class RootOfUnity:
    """The root of unity q = exp(-i pi p/p') inside a model field."""

    field: object
    pprime: int
    p: int

    def __post_init__(self):
        if self.pprime < 2 or not 0 < self.p or math.gcd(self.p, self.pprime) != 1:
            raise ScalarError(f"(p, p') = ({self.p}, {self.pprime}) must be coprime positive integers")

    @property
    def q(self):
        return model_q(self.field, self.pprime, self.p)

    @property
    def beta(self):
        return loop_weight(self.q)

    def power(self, s):
        return q_power(self.field, self.pprime, self.p, s)

    def number(self, n: int):
        return q_number(n, self.q)


def sqrt_kappa(kappa, field):
    """kappa^(1/2) with 1 -> 1, -1 -> i, w -> w^2 and w^2 -> w, for w = exp(2 pi i/3)."""
    one = field.one()
    if kappa == one:
        return one
    if kappa == -one:
        return field.root(4, 1)
    omega = field.root(3, 1)
    if kappa == omega:
        return omega * omega
    if kappa == omega * omega:
        return omega
    raise ScalarError(f"No square-root convention for kappa = {kappa}")


def q_number(n: int, q):
    """[n] = (q^n - q^-n)/(q - q^-1), evaluated as the Laurent sum q^(n-1) + ... + q^(1-n)."""
    if (q - q.inverse()).is_zero():
        raise SingularValueError(f"q-number [{n}] is undefined at q = {q}")
    if n < 0:
        return -q_number(-n, q)
    if n == 0:
        return q * 0
    total = q ** (n - 1)
    step = q.inverse() ** 2
    term = total
    for _ in range(n - 1):
        term = term * step
        total = total + term
    return total


def q_factorial(n: int, q):
    result = q ** 0
    for j in range(2, n + 1):
        result = result * q_number(j, q)
    return result


def q_binomial(n: int, m: int, q):
    if m < 0 or m > n:
        return q * 0
    num = q ** 0
    den = q ** 0
    for j in range(1, m + 1):
        num = num * q_number(n - m + j, q)
        den = den * q_number(j, q)
    if den.is_zero():
        raise SingularValueError(f"q-binomial [{n} choose {m}] has a vanishing q-factorial at q = {q}")
    return num / den


###################
# q-series
###################
class QSeries:
    """Truncated series q^offset * (c_0 + c_1 q + ... + c_order q^order)."""

    __slots__ = ("offset", "coeffs", "order")
    __hash__ = None

    def __init__(self, offset, coeffs, order: int = None):
        self.offset = Fraction(offset)
        coeffs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        coeffs = coeffs[:order + 1] + [Fraction(0)] * max(0, order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.order = order

    @classmethod
    def zero(cls, offset=0, order: int = 0) -> "QSeries":
        return cls(offset, [], order)

    @property
    def horizon(self) -> Fraction:
        """Largest absolute exponent known exactly."""
        return self.offset + self.order

    def coefficient(self, exponent) -> Fraction:
        shift = Fraction(exponent) - self.offset
        if shift.denominator != 1 or shift < 0:
            return Fraction(0)
        if shift > self.order:
            raise ScalarError(f"Exponent {exponent} beyond truncation {self.horizon}")
        return self.coeffs[int(shift)]

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.offset, self.coeffs, min(order, self.order))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Rational)) and other == 0:
            return self
        if not isinstance(other, QSeries):
            return NotImplemented
        gap = other.offset - self.offset
        if gap.denominator != 1:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ScalarError(f"Cannot add series with offsets {self.offset} and {other.offset}")
        offset = min(self.offset, other.offset)
        horizon = min(self.horizon, other.horizon)
        order = int(horizon - offset)
        coeffs = [Fraction(0)] * (order + 1)
        for series in (self, other):
            start = int(series.offset - offset)
            for i, c in enumerate(series.coeffs):
                if start + i > order:
                    break
                coeffs[start + i] += c
        return QSeries(offset, coeffs, order)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.offset, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Rational)) and other == 0:
            return self
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return QSeries(self.offset, [c * other for c in self.coeffs], self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        coeffs = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self.coeffs[:order + 1]):
            if a:
                for j, b in enumerate(other.coeffs[:order + 1 - i]):
                    coeffs[i + j] += a * b
        return QSeries(self.offset + other.offset, coeffs, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if (other.offset - self.offset).denominator != 1:
            return self.is_zero() and other.is_zero()
        return (self - other).is_zero()

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
                mag = abs(c)
                body = str(mag) if not mono else (mono if mag == 1 else f"{mag} {mono}")
                sign = "-" if c < 0 else "+"
                terms.append((sign, body))
        if terms:
            first_sign, first = terms[0]
            poly = ("-" if first_sign == "-" else "") + first
            poly += "".join(f" {s} {b}" for s, b in terms[1:])
        else:
            poly = "0"
        return f"q^({self.offset}) * ({poly}) + O(q^{self.order + 1})"

    def __repr__(self):
        return f"QSeries('{self}')"

    @classmethod
    def parse(cls, text: str) -> "QSeries":
        match = re.fullmatch(r"\s*q\^\(([-\d/]+)\)\s*\*\s*\((.*)\)\s*\+\s*O\(q\^(\d+)\)\s*", text)
        if not match:
            raise ScalarError(f"Malformed series text: {text!r}")
        offset = Fraction(match.group(1))
        order = int(match.group(3)) - 1
        coeffs = [Fraction(0)] * (order + 1)
        body = match.group(2).replace(" ", "")
        for token in re.split(r"(?=[+-])", body):
            if not token or token == "0":
                continue
            tm = re.fullmatch(r"([+-]?)([\d/]*)(?:(q)(?:\^(\d+))?)?", token)
            if not tm or (not tm.group(2) and not tm.group(3)):
                raise ScalarError(f"Malformed series term {token!r}")
            coef = Fraction(tm.group(2)) if tm.group(2) else Fraction(1)
            if tm.group(1) == "-":
                coef = -coef
            exp = int(tm.group(4)) if tm.group(4) else (1 if tm.group(3) else 0)
            coeffs[exp] += coef
        return cls(offset, coeffs, order)


def euler_product(order: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) truncated at the given order."""
    series = QSeries(0, [1], order)
    for n in range(1, order + 1):
        factor = [Fraction(0)] * (order + 1)
        factor[0] = Fraction(1)
        factor[n] = Fraction(-1)
        series = series * QSeries(0, factor, order)
    return series


def verma_character(h, c, order: int) -> QSeries:
    """q^(h - c/24) / prod_{n>=1} (1 - q^n), coefficients are partition numbers."""
    if order < 0:
        raise ScalarError(f"Series order must be non-negative, got {order}")
    offset = Fraction(h) - Fraction(c) / 24
    return QSeries(offset, [int(sympy.partition(n)) for n in range(order + 1)], order)
