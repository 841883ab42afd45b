# utils.py

import bz2
import gzip
import os
from io import BytesIO, StringIO

from .exceptions import AdetlError
from .logger import get_logger

logger = get_logger(__name__)


def auto_open(fn, *args, **kwargs):
    """function to open regular or compressed report files for read / write.

    Compression is chosen from the file name suffix (``.gz`` or ``.bz2``); an
    existing file is sniffed by its magic bytes instead.

    :param fn: either a string of an existing or new file path, or
        a BytesIO / StringIO handle
    :param **kwargs: additional arguments that are understood by the
        underlying open handler
    :returns: a file handler
    """
    if isinstance(fn, (BytesIO, StringIO)):
        return fn

    fmagic = {b'\x1f\x8b\x08': gzip.open,
              b'\x42\x5a\x68': bz2.BZ2File}
    mode = args[0] if args else kwargs.get("mode", "r")
    if "r" in mode and os.path.isfile(fn) and os.stat(fn).st_size > 0:
        with open(fn, 'rb') as fp:
            fs = fp.read(max([len(x) for x in fmagic]))
        for (magic, _open) in fmagic.items():
            if fs.startswith(magic):
                return _open(fn, *args, **kwargs)
    elif fn.endswith('gz'):
        return gzip.open(fn, *args, **kwargs)
    elif fn.endswith('bz2'):
        return bz2.open(fn, *args, **kwargs)

    return open(fn, *args, **kwargs)


###################
# sparse vectors
###################
def prune(vec: dict) -> dict:
    return {k: v for k, v in vec.items() if not v.is_zero()}


def vec_add(u: dict, v: dict, scale=None) -> dict:
    """u + scale * v, with zero entries dropped."""
    out = dict(u)
    for k, val in v.items():
        term = val if scale is None else val * scale
        if k in out:
            total = out[k] + term
            if total.is_zero():
                del out[k]
            else:
                out[k] = total
        elif not term.is_zero():
            out[k] = term
    return out


def vec_scale(v: dict, scale) -> dict:
    if scale.is_zero():
        return {}
    return {k: val * scale for k, val in v.items()}


def vec_is_zero(v: dict) -> bool:
    return all(val.is_zero() for val in v.values())


def vec_sub(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, val in v.items():
        out[k] = out[k] - val if k in out else -val
    return prune(out)


def vec_equal(u: dict, v: dict) -> bool:
    return not vec_sub(u, v)


def proportional(u: dict, v: dict):
    """Return c with u == c * v, or None when the vectors are not proportional."""
    if vec_is_zero(v):
        return None if not vec_is_zero(u) else 0
    key = next(k for k, val in v.items() if not val.is_zero())
    ratio = u.get(key, v[key] * 0) / v[key]
    return ratio if vec_is_zero(vec_add(u, v, -ratio)) else None


###################
# sparse operators
###################
class SparseOp:
    """Sparse linear map stored column-wise: ``cols[j]`` is the image of basis vector j."""

    __slots__ = ("n_rows", "n_cols", "cols")
    __hash__ = None

    def __init__(self, n_rows: int, n_cols: int, cols: dict = None):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.cols = {j: c for j, c in (cols or {}).items() if c}

    @classmethod
    def identity(cls, n: int, one) -> "SparseOp":
        return cls(n, n, {j: {j: one} for j in range(n)})

    @classmethod
    def zero(cls, n_rows: int, n_cols: int) -> "SparseOp":
        return cls(n_rows, n_cols)

    @classmethod
    def from_columns(cls, n_rows: int, columns) -> "SparseOp":
        columns = list(columns)
        return cls(n_rows, len(columns), {j: prune(c) for j, c in enumerate(columns)})

    @property
    def shape(self):
        return self.n_rows, self.n_cols

    def column(self, j: int) -> dict:
        return self.cols.get(j, {})

    def apply(self, vec: dict) -> dict:
        out = {}
        for j, x in vec.items():
            col = self.cols.get(j)
            if col:
                for i, a in col.items():
                    out[i] = out[i] + a * x if i in out else a * x
        return prune(out)

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        if not isinstance(other, SparseOp):
            return NotImplemented
        if self.n_cols != other.n_rows:
            raise AdetlError(f"Shape mismatch {self.shape} @ {other.shape}")
        return SparseOp(self.n_rows, other.n_cols,
                        {j: self.apply(col) for j, col in other.cols.items()})

    def _combine(self, other, subtract):
        if self.shape != other.shape:
            raise AdetlError(f"Shape mismatch {self.shape} vs {other.shape}")
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            old = cols.get(j, {})
            cols[j] = vec_sub(old, col) if subtract else vec_add(old, col)
        return SparseOp(self.n_rows, self.n_cols, cols)

    def __add__(self, other):
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self._combine(other, False)

    def __sub__(self, other):
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self._combine(other, True)

    def __neg__(self):
        return SparseOp(self.n_rows, self.n_cols,
                        {j: {i: -a for i, a in c.items()} for j, c in self.cols.items()})

    def __mul__(self, scale):
        return SparseOp(self.n_rows, self.n_cols,
                        {j: vec_scale(c, scale) for j, c in self.cols.items()})

    __rmul__ = __mul__

    def transpose(self) -> "SparseOp":
        cols = {}
        for j, col in self.cols.items():
            for i, a in col.items():
                cols.setdefault(i, {})[j] = a
        return SparseOp(self.n_cols, self.n_rows, cols)

    def rows(self) -> dict:
        return self.transpose().cols

    def trace(self, zero):
        total = zero
        for j, col in self.cols.items():
            if j in col:
                total = total + col[j]
        return total

    def power(self, exponent: int, one) -> "SparseOp":
        result = SparseOp.identity(self.n_cols, one)
        base = self
        while exponent:
            if exponent & 1:
                result = base @ result
            exponent >>= 1
            if exponent:
                base = base @ base
        return result

    def is_zero(self) -> bool:
        return all(vec_is_zero(c) for c in self.cols.values())

    def __eq__(self, other):
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def entries(self):
        """Row-major coordinate triplets (row, col, value)."""
        return sorted(((i, j, a) for j, c in self.cols.items() for i, a in c.items()),
                      key=lambda t: (t[0], t[1]))

    def __repr__(self):
        return f"SparseOp({self.n_rows}x{self.n_cols}, nnz={sum(len(c) for c in self.cols.values())})"


###################
# exact elimination
###################
class Echelon:
    """Incrementally reduced row echelon form of a set of sparse vectors.

    Stored rows are fully reduced: each has coefficient 1 at its pivot and 0 at
    every other pivot. With ``track=True`` each row also remembers the combination
    of added vectors it equals, so coordinates in a spanning set can be read off.
    """

    def __init__(self, exact: bool = True, track: bool = False, limit: int = None):
        self.exact = exact
        self.track = track
        self.limit = limit
        self.rows = {}
        self.combos = {}
        self._count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _choose_pivot(self, vec):
        keys = [k for k in vec if self.limit is None or k < self.limit]
        if not keys:
            return None
        if self.exact:
            return min(keys)
        return max(keys, key=lambda k: (abs(vec[k]), -k))

    def reduce(self, vec: dict, combo: dict = None):
        vec = prune(vec)
        used = {} if combo is None else dict(combo)
        for pivot in [k for k in vec if k in self.rows]:
            coef = vec.get(pivot)
            if coef is None or coef.is_zero():
                continue
            vec = vec_add(vec, self.rows[pivot], -coef)
            vec.pop(pivot, None)
            if self.track:
                used = vec_add(used, self.combos[pivot], -coef)
        return (vec, used) if self.track else vec

    def add(self, vec: dict) -> bool:
        tag = self._count
        self._count += 1
        if self.track:
            residual, combo = self.reduce(vec, {tag: next(iter(vec.values())) ** 0} if vec else {})
        else:
            residual, combo = self.reduce(vec), None
        pivot = self._choose_pivot(residual)
        if pivot is None:
            return False
        inv = residual[pivot].inverse()
        residual = vec_scale(residual, inv)
        residual[pivot] = inv * 0 + 1
        if self.track:
            combo = vec_scale(combo, inv)
        for p, row in self.rows.items():
            coef = row.get(pivot)
            if coef is not None and not coef.is_zero():
                self.rows[p] = vec_add(row, residual, -coef)
                self.rows[p].pop(pivot, None)
                if self.track:
                    self.combos[p] = vec_add(self.combos[p], combo, -coef)
        self.rows[pivot] = residual
        if self.track:
            self.combos[pivot] = combo
        return True

    def contains(self, vec: dict) -> bool:
        residual = self.reduce(vec)
        if self.track:
            residual = residual[0]
        return vec_is_zero(residual)

    def coordinates(self, vec: dict) -> dict:
        """Coefficients c_i with vec = sum c_i v_i over the added vectors (track mode)."""
        if not self.track:
            raise AdetlError("Coordinates require a tracking echelon")
        residual, used = self.reduce(vec, {})
        if not vec_is_zero(residual):
            raise AdetlError("Vector is not in the span")
        return {k: -v for k, v in used.items()}


def rank(vectors, exact: bool = True) -> int:
    ech = Echelon(exact=exact)
    for v in vectors:
        ech.add(v)
    return ech.rank


def nullspace(ops, one, exact: bool = True) -> list:
    """Basis of the common kernel of the given operators (same domain)."""
    ops = list(ops)
    n = ops[0].n_cols
    ech = Echelon(exact=exact)
    for op in ops:
        if op.n_cols != n:
            raise AdetlError("Operators in a kernel computation must share their domain")
        for row in op.rows().values():
            ech.add(row)
    basis = []
    for free in range(n):
        if free in ech.rows:
            continue
        vec = {free: one}
        for pivot, row in ech.rows.items():
            coef = row.get(free)
            if coef is not None and not coef.is_zero():
                vec[pivot] = -coef
        basis.append(vec)
    return basis


def eigenspace(op: SparseOp, value, one, exact: bool = True, constraints=()) -> list:
    """Kernel of (op - value) intersected with the kernels of the constraint operators."""
    shifted = op - SparseOp.identity(op.n_cols, one) * value
    return nullspace([shifted, *constraints], one, exact=exact)


def span_coordinates(basis: list, exact: bool = True) -> Echelon:
    ech = Echelon(exact=exact, track=True)
    for v in basis:
        if not ech.add(v):
            raise AdetlError("Basis vectors are linearly dependent")
    return ech


def restricted_trace(op: SparseOp, basis: list, zero, exact: bool = True, positions=None):
    """Trace of op on the invariant subspace spanned by the (independent) basis.

    With ``positions``, only those diagonal coordinates are summed: the trace of
    the block of op on the corresponding basis vectors.
    """
    if not basis:
        return zero
    ech = span_coordinates(basis, exact=exact)
    total = zero
    for i in (range(len(basis)) if positions is None else positions):
        coords = ech.coordinates(op.apply(basis[i]))
        if i in coords:
            total = total + coords[i]
    return total


def solve(op: SparseOp, rhs: dict, one, exact: bool = True):
    """A vector x with op x = rhs, or None when the system is inconsistent."""
    n = op.n_cols
    ech = Echelon(exact=exact, limit=n)
    rows = op.rows()
    for i in range(op.n_rows):
        row = dict(rows.get(i, {}))
        if i in rhs:
            row[n] = rhs[i]
        if not row:
            continue
        residual = ech.reduce(row)
        if residual and all(k >= n for k in residual):
            return None
        ech.add(row)
    return prune({pivot: row[n] for pivot, row in ech.rows.items() if n in row})
