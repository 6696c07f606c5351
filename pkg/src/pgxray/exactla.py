"""Exact linear algebra over the integers and rationals.

Matrices are accepted as anything ``numpy.asarray`` understands (nested lists, int64
arrays, object arrays of Python ints) and are converted to object arrays of Python
``int`` before any arithmetic, so results never depend on machine word size.

Rank, determinant and kernels all come out of one fraction-free (Bareiss) elimination.
Bareiss keeps every intermediate entry equal to a minor of the input, so each division
by the previous pivot is exact and no rational arithmetic is needed until the kernel
back-substitution.
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterable, Sequence
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import InconsistentData, NotSquare, VerificationError


def as_int_matrix(m) -> np.ndarray:
    """Copy of ``m`` as a 2-D object array of Python ints."""
    a = np.asarray(m)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(a.reshape(-1)):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError("non-integral entry; use a rational routine")
            x = x.numerator
        flat[i] = int(x)
    return out


_to_mpz = np.vectorize(gmpy2.mpz, otypes=[object])
_to_int = np.vectorize(int, otypes=[object])


def _bareiss(a: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """Fraction-free row echelon form of a copy of ``a``.

    Pivot rule: first nonzero entry of the current column, scanning rows top down.
    Returns the matrix (entries as gmpy2 ``mpz``), the pivot columns and the row-swap
    parity (+1/-1).
    """
    a = _to_mpz(a)
    n, m = a.shape
    r = 0
    prev = 1
    sign = 1
    pivots: list[int] = []
    for c in range(m):
        if r == n:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col != 0)
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            sign = -sign
        piv = a[r, c]
        if r + 1 < n and c + 1 < m:
            below = a[r + 1 :, c]
            rows = np.flatnonzero(below != 0)
            block = a[r + 1 :, c + 1 :]
            block *= piv
            if len(rows):
                block[rows] -= np.multiply.outer(below[rows], a[r, c + 1 :])
            if prev != 1:
                block //= prev
        a[r + 1 :, c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots, sign


def echelon(m) -> tuple[np.ndarray, list[int]]:
    """Fraction-free row echelon form (object array) and pivot columns."""
    a, pivots, _ = _bareiss(as_int_matrix(m))
    return _to_int(a), pivots


def rank_exact(m, cross_check: bool = False, primes: int = 3, seed: int = 0) -> int:
    """Rank over the rationals.

    With ``cross_check`` the result is compared with the rank modulo a few random
    primes above 2**60; those can only be smaller, so any disagreement is a bug.
    """
    a = as_int_matrix(m)
    if a.size == 0:
        return 0
    # zero rows cost elimination time and never contribute
    a = a[[i for i in range(a.shape[0]) if any(a[i])]]
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    r = len(_bareiss(a)[1]) if a.size else 0
    if cross_check:
        for p in random_primes(primes, seed=seed):
            rp = rank_mod_p(m, p)
            if rp != r:
                raise VerificationError(f"rank {r} over Q but {rp} modulo {p}")
    return r


def det_exact(m) -> int:
    a = as_int_matrix(m)
    n, k = a.shape
    if n != k:
        raise NotSquare(f"determinant of a {n}x{k} matrix")
    if n == 0:
        return 1
    a, pivots, sign = _bareiss(a)
    if len(pivots) < n:
        return 0
    return sign * int(a[n - 1, n - 1])


def kernel_basis(m) -> list[list[Fraction]]:
    """Basis of the right null space over Q, one vector per free column.

    Each vector has a 1 in its free column and 0 in the other free columns, and is
    checked against ``m`` before being returned.
    """
    orig = as_int_matrix(m)
    n, ncols = orig.shape
    if n == 0:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    a, pivots, _ = _bareiss(orig.copy())
    rows = [[int(x) for x in a[i]] for i in range(len(pivots))]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            row = rows[i]
            acc = sum((row[j] * x[j] for j in range(pc + 1, ncols) if row[j] and x[j]), Fraction(0))
            x[pc] = -acc / row[pc]
        basis.append(x)
    for x in basis:
        if any(v != 0 for v in mat_vec(orig, x)):
            raise VerificationError("kernel vector fails m.v = 0")
    return basis


def left_kernel_basis(m) -> list[list[Fraction]]:
    return kernel_basis(as_int_matrix(m).T)


def eigen_multiplicity(m, lam: int) -> int:
    """Geometric multiplicity of the integer ``lam`` as an eigenvalue of ``m``."""
    a = as_int_matrix(m)
    n, k = a.shape
    if n != k:
        raise NotSquare(f"eigenvalue of a {n}x{k} matrix")
    for i in range(n):
        a[i, i] -= lam
    return n - rank_exact(a)


def mat_vec(m, x: Sequence) -> list:
    a = np.asarray(m, dtype=object)
    return [sum((a[i, j] * x[j] for j in range(a.shape[1]) if x[j]), 0) for i in range(a.shape[0])]


def mat_mul(a, b) -> np.ndarray:
    """Exact product.  Uses int64 when every partial sum provably fits, else Python ints."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.dtype != object and b.dtype != object and a.size and b.size:
        bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.shape[1]
        if bound < 2**62:
            return a.astype(np.int64) @ b.astype(np.int64)
    return as_int_matrix(a).dot(as_int_matrix(b))


def solve_exact(m, rhs: Sequence) -> list[Fraction]:
    """The unique x with m x = rhs over Q.

    ``m`` must have full column rank; extra rows are allowed and must be consistent.
    Raises :class:`InconsistentData` if rhs is not in the column space and ValueError
    if the solution is not unique.
    """
    a = as_int_matrix(m)
    n, k = a.shape
    if len(rhs) != n:
        raise ValueError(f"rhs has length {len(rhs)}, expected {n}")
    fr = [Fraction(x) for x in rhs]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    aug = np.empty((n, k + 1), dtype=object)
    aug[:, :k] = a
    aug[:, k] = [int(x * den) for x in fr]
    e, pivots, _ = _bareiss(aug)
    e = _to_int(e)
    if k in pivots:
        raise InconsistentData("right-hand side is outside the image")
    if len(pivots) < k:
        raise ValueError(f"matrix has rank {len(pivots)} < {k} columns; solution not unique")
    x = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        acc = sum((e[i, j] * x[j] for j in range(i + 1, k) if e[i, j]), Fraction(0))
        x[i] = (Fraction(e[i, k]) - acc) / e[i, i]
    return [v / den for v in x]


# -- modular cross-check ---------------------------------------------------------------


def random_primes(count: int, bits: int = 61, seed: int = 0) -> list[int]:
    rnd = random.Random(seed)
    out: list[int] = []
    while len(out) < count:
        p = int(gmpy2.next_prime(rnd.getrandbits(bits) | (1 << (bits - 1))))
        if p not in out:
            out.append(p)
    return out


def rank_mod_p(m, p: int) -> int:
    a = as_int_matrix(m) % p
    n, k = a.shape
    r = 0
    for c in range(k):
        if r == n:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        below = np.flatnonzero(a[r + 1 :, c] != 0) + r + 1
        if len(below):
            a[below] = (a[below] - np.multiply.outer(a[below, c], a[r])) % p
        r += 1
    return r


# -- incremental row space ---------------------------------------------------------------


class RowSpace:
    """Growing subspace of Q^n spanned by integer vectors, kept in echelon form.

    ``add`` answers the matroid rank-oracle question "does this vector increase the
    rank?" and keeps it only if so.  Stored rows are primitive integer vectors with a
    positive leading entry, each with zeros before its pivot.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, np.ndarray] = {}
        self._order: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v) -> np.ndarray:
        """Residual of v after elimination against the stored rows (scaled, integral)."""
        x = np.array([int(t) for t in v], dtype=object)
        if len(x) != self.ncols:
            raise ValueError(f"vector of length {len(x)} in a space of dimension {self.ncols}")
        for c in sorted(self._rows):
            if x[c]:
                row = self._rows[c]
                x = x * row[c] - x[c] * row
                g = math.gcd(*x)
                if g > 1:
                    x //= g
        return x

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def add(self, v) -> bool:
        x = self.reduce(v)
        nz = np.flatnonzero(x != 0)
        if len(nz) == 0:
            return False
        c = int(nz[0])
        g = math.gcd(*x)
        x //= g
        if x[c] < 0:
            x = -x
        self._rows[c] = x
        self._order.append(c)
        return True

    def extend(self, vectors: Iterable) -> int:
        return sum(self.add(v) for v in vectors)
