"""Exact dense rational matrices.

A :class:`RationalMatrix` is stored as integer numerators over one common
positive denominator, kept in lowest terms, so equality is structural and
products run on Python ints. Entries are exposed as :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence, Union

from . import _intlin
from .errors import DimensionMismatch, NotSquare

Scalar = Union[int, Fraction, str]

__all__ = [
    "RationalMatrix",
    "Polynomial",
    "as_rational",
    "mat_arith",
    "char_poly",
    "is_nilpotent",
    "in_spectrum",
    "kernel_basis",
    "rank",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions, "p/q" strings and (exactly) floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational entry")
    return Fraction(x)


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    g = gcd(den, *nums)
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return tuple(nums), den


class RationalMatrix:
    """Immutable dense matrix over Q.

    >>> RationalMatrix([[1, "1/2"], [0, 1]]).entries[1]
    Fraction(1, 2)
    """

    __slots__ = ("rows", "cols", "_nums", "_den", "_hash")

    def __init__(self, data: Sequence[Sequence[Scalar]]):
        rows = [list(r) for r in data]
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix needs at least one row and one column")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        fr = [as_rational(x) for r in rows for x in r]
        den = lcm(*(f.denominator for f in fr))
        nums = [f.numerator * (den // f.denominator) for f in fr]
        self._set(len(rows), cols, tuple(nums), den)

    def _set(self, rows: int, cols: int, nums: tuple[int, ...], den: int) -> None:
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_nums", nums)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    def __reduce__(self):
        return (RationalMatrix._raw, (self.rows, self.cols, self._nums, self._den))

    @classmethod
    def _raw(cls, rows: int, cols: int, nums: Sequence[int], den: int = 1) -> "RationalMatrix":
        """Build from integer numerators over a shared denominator (no validation)."""
        self = object.__new__(cls)
        n, d = _normalize(list(nums), den) if den != 1 else (tuple(nums), 1)
        if d < 0:
            n, d = tuple(-x for x in n), -d
        self._set(rows, cols, n, d)
        return self

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._raw(n, n, _intlin.identity(n))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, [0] * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[Scalar]) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "RationalMatrix":
        """Matrix unit E_ij."""
        nums = [0] * (n * n)
        nums[i * n + j] = 1
        return cls._raw(n, n, nums)

    # -- access ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[Fraction, ...]:
        """Row-major entries as Fractions."""
        d = self._den
        return tuple(Fraction(x, d) for x in self._nums)

    def scaled_ints(self) -> tuple[tuple[int, ...], int]:
        """(numerators, denominator) with self == numerators / denominator."""
        return self._nums, self._den

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return Fraction(self._nums[i * self.cols + j], self._den)

    def tolist(self) -> list[list[Fraction]]:
        e = self.entries
        return [list(e[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return tuple(self.tolist()[i])

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self[i, j] for i in range(self.rows))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self._nums)

    def nonzero_positions(self) -> list[tuple[int, int]]:
        c = self.cols
        return [divmod(k, c) for k, x in enumerate(self._nums) if x]

    # -- arithmetic -----------------------------------------------------

    def _check_same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def _combine(self, other: "RationalMatrix", sign: int) -> "RationalMatrix":
        self._check_same_shape(other)
        d = lcm(self._den, other._den)
        fa, fb = d // self._den, sign * (d // other._den)
        nums = [fa * x + fb * y for x, y in zip(self._nums, other._nums)]
        return RationalMatrix._raw(self.rows, self.cols, nums, d)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(self.rows, self.cols, [-x for x in self._nums], self._den)

    def scale(self, c: Scalar) -> "RationalMatrix":
        c = as_rational(c)
        nums = [c.numerator * x for x in self._nums]
        return RationalMatrix._raw(self.rows, self.cols, nums, self._den * c.denominator)

    def __mul__(self, c):
        if isinstance(c, RationalMatrix):
            return NotImplemented
        if isinstance(c, (int, Rational, str)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if self.is_square and other.is_square:
            nums = _intlin.matmul(self._nums, other._nums, self.rows)
        else:
            m, k, n = self.rows, self.cols, other.cols
            a, b = self._nums, other._nums
            nums = [sum(a[i * k + t] * b[t * n + j] for t in range(k)) for i in range(m) for j in range(n)]
        return RationalMatrix._raw(self.rows, other.cols, nums, self._den * other._den)

    def __pow__(self, e: int) -> "RationalMatrix":
        if not self.is_square:
            raise NotSquare(self.shape)
        if e < 0:
            raise ValueError("negative powers are not supported")
        n, k = self.rows, e
        result, base = _intlin.identity(n), list(self._nums)
        while k:
            if k & 1:
                result = _intlin.matmul(result, base, n)
            k >>= 1
            if k:
                base = _intlin.matmul(base, base, n)
        return RationalMatrix._raw(n, n, result, self._den ** e)

    def commutator(self, other: "RationalMatrix") -> "RationalMatrix":
        return self @ other - other @ self

    def apply(self, v: Sequence[Scalar]) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape}")
        vf = [as_rational(x) for x in v]
        rows = self.tolist()
        return tuple(sum((a * x for a, x in zip(r, vf)), Fraction(0)) for r in rows)

    @property
    def T(self) -> "RationalMatrix":
        r, c = self.rows, self.cols
        nums = [self._nums[i * c + j] for j in range(c) for i in range(r)]
        return RationalMatrix._raw(c, r, nums, self._den)

    def trace(self) -> Fraction:
        if not self.is_square:
            raise NotSquare(self.shape)
        return Fraction(_intlin.trace(self._nums, self.rows), self._den)

    def permuted(self, perm: Sequence[int]) -> "RationalMatrix":
        """P M P^T where new index p carries old index perm[p]."""
        if not self.is_square or len(perm) != self.rows:
            raise DimensionMismatch("permutation length must match a square matrix")
        n = self.rows
        nums = [self._nums[perm[p] * n + perm[q]] for p in range(n) for q in range(n)]
        return RationalMatrix._raw(n, n, nums, self._den)

    # -- identity -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._den, self._nums) == (other.rows, other.cols, other._den, other._nums)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.rows, self.cols, self._den, self._nums)))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.tolist())
        return f"RationalMatrix([{body}])"

    def pretty(self) -> str:
        cells = [[str(x) for x in r] for r in self.tolist()]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(w) for c in r) + " ]" for r in cells)

    # -- JSON -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in r] for r in self.tolist()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RationalMatrix":
        m = cls(obj["entries"])
        if m.shape != (obj.get("rows", m.rows), obj.get("cols", m.cols)):
            raise DimensionMismatch("declared shape disagrees with entries")
        return m


class Polynomial:
    """Polynomial over Q with ascending coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Scalar]):
        c = [as_rational(x) for x in coefficients]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c) if c else (Fraction(0),))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, n: int) -> "Polynomial":
        return cls([0] * n + [1])

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.coefficients == (Fraction(0),)

    def __call__(self, x: Scalar) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coefficients]})"

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            var = "" if k == 0 else ("λ" if k == 1 else f"λ^{k}")
            coef = str(mag) if (mag != 1 or k == 0) else ""
            terms.append(("-" if c < 0 else "+", coef + var))
        if not terms:
            return "0"
        sign, t = terms[0]
        out = ("-" if sign == "-" else "") + t
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def mat_arith(a: RationalMatrix, b, op: str) -> RationalMatrix:
    """Dispatch add / sub / mul / scalar-mul; for scalar-mul ``b`` is the scalar."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a @ b
    if op == "scalar-mul":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def _require_square(m: RationalMatrix) -> None:
    if not m.is_square:
        raise NotSquare(m.shape)


def char_poly(m: RationalMatrix) -> Polynomial:
    """det(λI - m) by Faddeev-LeVerrier on the integer-scaled matrix.

    For an integer matrix every division in the recurrence is exact, so the
    whole run stays in Z; rescaling by the common denominator afterwards
    gives the coefficients of m itself.
    """
    _require_square(m)
    n = m.rows
    nums, den = m.scaled_ints()
    a = list(nums)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [0] * (n * n)
    for k in range(1, n + 1):
        mk = _intlin.matmul(a, mk, n)
        c_prev = coeffs[n - k + 1]
        for i in range(n):
            mk[i * (n + 1)] += c_prev
        t = _intlin.trace(_intlin.matmul(a, mk, n), n)
        q, r = divmod(-t, k)
        assert r == 0, "Faddeev-LeVerrier division must be exact over Z"
        coeffs[n - k] = q
    return Polynomial(Fraction(c, den ** (n - i)) for i, c in enumerate(coeffs))


def is_nilpotent(m: RationalMatrix) -> bool:
    """m^e == 0 for some e >= n, reached by repeated squaring."""
    _require_square(m)
    n = m.rows
    p = list(m.scaled_ints()[0])
    e = 1
    while any(p) and e < n:
        p = _intlin.matmul(p, p, n)
        e *= 2
    return not any(p)


def in_spectrum(m: RationalMatrix, lam: Scalar) -> bool:
    return char_poly(m)(lam) == 0


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Primitive integer basis of the right nullspace, returned as Fractions."""
    nums, _ = m.scaled_ints()
    c = m.cols
    rows = [nums[i * c:(i + 1) * c] for i in range(m.rows)]
    return [tuple(Fraction(x) for x in v) for v in _intlin.nullspace(rows, c)]


def rank(m: RationalMatrix) -> int:
    nums, _ = m.scaled_ints()
    c = m.cols
    return _intlin.rank([nums[i * c:(i + 1) * c] for i in range(m.rows)], c)


def span_rank(vectors: Sequence[Sequence[Scalar]]) -> int:
    """Rank of a family of rational vectors."""
    if not vectors:
        return 0
    fr = [[as_rational(x) for x in v] for v in vectors]
    rows = []
    for v in fr:
        d = lcm(*(x.denominator for x in v))
        rows.append([x.numerator * (d // x.denominator) for x in v])
    return _intlin.rank(rows, len(rows[0]))
