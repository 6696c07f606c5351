"""Arithmetic in GF(q), q = p**k.

Elements are stored as integer codes: the polynomial c_0 + c_1 x + ... + c_{k-1} x^{k-1}
over GF(p) has code sum(c_i * p**i).  Code 0 is zero, code 1 is one, and the integer
order on codes is the canonical total order used for every enumeration downstream.

All arithmetic goes through precomputed ``q x q`` tables, which are also exposed as
numpy arrays so that the geometry code can work on whole batches at once.

    >>> F = field_new(2, 2)
    >>> x = F(2)
    >>> (x * x).code
    3
    >>> F.modulus
    (1, 1, 1)
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Sequence

import numpy as np

from .config import DEFAULT
from .errors import BudgetExceeded, DegreeZero, DivisionByZero, FieldMismatch, NotPrime


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- polynomials over GF(p), coefficient lists low degree first ----------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _poly_trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Brute-force test: no monic factor of degree 1 .. deg/2 divides ``poly``."""
    poly = list(poly)
    deg = len(poly) - 1
    if deg < 1 or poly[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low degree first)."""
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=k):
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


# -- the field -----------------------------------------------------------------------


class Field:
    """GF(p**k) with table-driven arithmetic on integer codes.

    Instances are immutable and cached per ``(p, k)``; use :func:`field_new`.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        q = self.q

        coeffs = [self._decode(c) for c in range(q)]
        self._coeffs = tuple(coeffs)

        codes = np.arange(q)
        digits = np.array([list(c) for c in coeffs], dtype=np.int64).reshape(q, k)
        powers = p ** np.arange(k)
        add_digits = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (add_digits @ powers).astype(np.int64)
        self.neg_table = (((-digits) % p) @ powers).astype(np.int64)
        self.sub_table = self.add_table[:, self.neg_table]

        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                if k == 1:
                    c = a * b % p
                else:
                    r = poly_mod(poly_mul(coeffs[a], coeffs[b], p), modulus, p)
                    c = self._encode(r)
                mul[a, b] = mul[b, a] = c
        self.mul_table = mul

        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            (b,) = np.flatnonzero(mul[a] == 1)
            inv[a] = b
        self.inv_table = inv
        self.div_table = mul[:, inv]
        self.div_table[:, 0] = -1
        self.elements_array = codes
        for t in (self.add_table, self.neg_table, self.sub_table, self.mul_table, self.inv_table):
            t.setflags(write=False)

    def _decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def coeffs(self, code: int) -> tuple[int, ...]:
        return self._coeffs[code]

    def code(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"{coeffs!r} is not a coefficient vector of GF({self.q})")
        return self._encode(coeffs)

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            if not 0 <= value < self.q:
                raise ValueError(f"code {value} out of range for GF({self.q})")
            return FieldElement(self, int(value))
        return FieldElement(self, self.code(value))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.q)]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    # scalar code arithmetic, used by the small GF linear algebra below
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def to_dict(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> "Field":
        f = field_new(int(data["p"]), int(data["k"]))
        if "modulus" in data and tuple(data["modulus"]) != f.modulus:
            raise FieldMismatch(
                f"modulus {data['modulus']} differs from canonical {list(f.modulus)}"
            )
        return f

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, k: int) -> Field:
    return Field(p, k, smallest_irreducible(p, k))


def field_new(p: int, k: int = 1, max_order: int | None = None) -> Field:
    if k < 1:
        raise DegreeZero(f"extension degree must be >= 1, got {k}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    limit = DEFAULT.max_field_order if max_order is None else max_order
    if p**k > limit:
        raise BudgetExceeded(f"GF({p}^{k}) exceeds field budget {limit}")
    return _cached_field(p, k)


def field_of_order(q: int, max_order: int | None = None) -> Field:
    """Field with q elements, q a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    else:
        raise NotPrime(f"{q} is not a prime power")
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1 or not is_prime(p):
        raise NotPrime(f"{q} is not a prime power")
    return field_new(p, k, max_order=max_order)


class FieldElement:
    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, other: object) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.code
        if isinstance(other, int):
            # integers embed through the prime subfield
            return other % self.field.p
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.code))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.code]))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self._other(other)
        return NotImplemented

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < self._other(other)

    def __hash__(self) -> int:
        return hash((self.field, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return f"{self.field!r}({self.code})"


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Binary operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# -- small dense linear algebra over GF(q), on integer codes ----------------------------


def row_reduce(field: Field, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(int, r)) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = field.inv(m[r][c])
        m[r] = [field.mul(s, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field: Field, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(field, rows)[1]) if rows else 0


def nullspace(field: Field, rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of {x : rows . x = 0} over GF(q)."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = row_reduce(field, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(red, pivots):
            x[pc] = int(field.neg_table[row[f]])
        basis.append(x)
    return basis


def det(field: Field, rows: Sequence[Sequence[int]]) -> int:
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    out = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = int(field.neg_table[out])
        out = field.mul(out, m[c][c])
        s = field.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = field.mul(m[i][c], s)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return out


def normalize(field: Field, vec: Sequence[int]) -> tuple[int, ...]:
    """Scale so that the first nonzero entry is 1 (projective normal form)."""
    for x in vec:
        if x:
            s = field.inv(int(x))
            return tuple(field.mul(s, int(y)) for y in vec)
    raise ValueError("zero vector has no projective normal form")
