"""The Cavalieri matrix B = A A^t of signed DRQ incidence vectors.

``A`` has one row per line and one column per DRQ (entries +1 on ruling m, -1 on
ruling n).  B depends only on how two lines sit relative to each other, so it has a
closed form; building it both ways and comparing is the executable form of that
claim.  Everything else here checks that B / v is an orthogonal projection of rank
q^4 + q^2 and that the DRQ vectors span the kernel of the dual transform.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable
from fractions import Fraction

import numpy as np

from . import exactla
from .drq import DRQ, DRQSet, drq_count, drq_vector
from .errors import IncompleteEnumeration, NotIdempotent, RankMismatch
from .pg3 import Geometry


@dataclasses.dataclass(frozen=True)
class CavalieriEntries:
    b_equal: int
    b_meet: int
    b_skew: int
    v: int

    @classmethod
    def for_q(cls, q: int) -> "CavalieriEntries":
        return cls(
            b_equal=q**4 * (q * q - 1),
            b_meet=-(q**3) * (q - 1),
            b_skew=q * (q * q - 1),
            v=projection_scale(q),
        )


def projection_scale(q: int) -> int:
    return q * q * (q - 1) * (q + 1) * (q * q + q + 1)


def c_values(q: int) -> tuple[int, int, int]:
    """Entries of B^2 for (equal, meeting, skew) line pairs, as polynomials in q."""
    c_equal = q**6 * (q * q + q + 1) * (q + 1) ** 2 * (q - 1) ** 2
    c_meet = -(q**10) + q**8 + q**7 - q**5
    c_skew = q**9 + q**8 - q**7 - 2 * q**6 - q**5 + q**4 + q**3
    return c_equal, c_meet, c_skew


def cavalieri_from_formula(g: Geometry) -> np.ndarray:
    e = CavalieriEntries.for_q(g.q)
    table = np.array([e.b_skew, e.b_meet, e.b_equal], dtype=np.int64)
    return table[g.relations.astype(np.int64)]


def _as_chunks(drqs, q: int) -> Iterable[np.ndarray]:
    if isinstance(drqs, DRQSet):
        yield drqs.rows
        return
    if isinstance(drqs, np.ndarray):
        yield drqs
        return
    batch: list[tuple[int, ...]] = []
    for item in drqs:
        if isinstance(item, DRQ):
            batch.append(item.lines)
        else:
            if batch:
                yield np.array(batch)
                batch = []
            yield np.asarray(item)
    if batch:
        yield np.array(batch)


def cavalieri_from_drqs(g: Geometry, drqs) -> np.ndarray:
    """Accumulate A A^t one DRQ at a time.

    ``drqs`` may be a :class:`DRQSet`, an array of canonical rows, an iterable of
    :class:`DRQ`, or a stream of row chunks from :func:`drq.iter_drq_chunks`.
    """
    q, L = g.q, g.n_lines
    w = q + 1
    same = np.zeros(L * L, dtype=np.int64)
    cross = np.zeros(L * L, dtype=np.int64)
    total = 0
    for rows in _as_chunks(drqs, q):
        rows = rows.astype(np.int64)
        total += len(rows)
        m, n = rows[:, :w], rows[:, w:]
        for a, b, acc in ((m, m, same), (n, n, same), (m, n, cross), (n, m, cross)):
            idx = (a[:, :, None] * L + b[:, None, :]).reshape(-1)
            acc += np.bincount(idx, minlength=L * L)
    if total != drq_count(q):
        raise IncompleteEnumeration(f"{total} DRQs supplied, expected {drq_count(q)}")
    return (same - cross).reshape(L, L)


def drq_matrix(g: Geometry, drqs: DRQSet) -> np.ndarray:
    """The lines x DRQs matrix A (dense; only sensible for small q)."""
    a = np.zeros((g.n_lines, len(drqs)), dtype=np.int64)
    cols = np.arange(len(drqs))[:, None]
    a[drqs.m, cols] = 1
    a[drqs.n, cols] = -1
    return a


@dataclasses.dataclass(frozen=True)
class ScaledProjection:
    v: int
    c_equal: int
    c_meet: int
    c_skew: int


def verify_scaled_projection(b, q: int) -> ScaledProjection:
    """Check B^2 = v B with v from the closed form and return the entries of B^2.

    Line pairs are classified from B itself: the diagonal is "equal", negative
    off-diagonal entries are "meet", positive ones "skew".
    """
    b = np.asarray(b)
    v = projection_scale(q)
    c = exactla.mat_mul(b, b)
    bad = np.argwhere(c != v * b.astype(object if c.dtype == object else np.int64))
    if len(bad):
        i, j = map(int, bad[0])
        raise NotIdempotent(f"(B^2)[{i},{j}] = {c[i, j]} != v*B = {v * int(b[i, j])}", (i, j))
    n = len(b)
    off = ~np.eye(n, dtype=bool)
    values = []
    for mask in (np.eye(n, dtype=bool), off & (b < 0), off & (b > 0)):
        vals = {int(x) for x in np.asarray(c)[mask]}
        if len(vals) != 1:
            raise NotIdempotent(f"B^2 is not constant on a relation class: {sorted(vals)[:5]}")
        values.append(vals.pop())
    return ScaledProjection(v, *values)


@dataclasses.dataclass(frozen=True)
class RankReport:
    trace_rank: Fraction
    exact_rank: int | None
    expected: int


def cavalieri_rank(b, q: int, exact: bool = True) -> RankReport:
    """Rank of B two ways: trace(B)/v (valid because B/v is a projection) and elimination."""
    b = np.asarray(b)
    expected = q**4 + q**2
    trace_rank = Fraction(int(np.trace(b.astype(object))), projection_scale(q))
    exact_rank = exactla.rank_exact(b) if exact else None
    if trace_rank != expected or (exact_rank is not None and exact_rank != expected):
        raise RankMismatch(f"trace/v = {trace_rank}, elimination = {exact_rank}, expected {expected}")
    return RankReport(trace_rank, exact_rank, expected)


# -- span of the DRQs versus the kernel of the dual transform ----------------------------


def dual_annihilates(g: Geometry, drqs: DRQSet) -> np.ndarray:
    """Boolean per DRQ: is its signed vector killed by the dual transform?

    The dual image at a point is (#m-lines through it) - (#n-lines through it), so it
    vanishes everywhere iff the two rulings cover the same multiset of points.
    """
    pm = np.sort(g.line_points[drqs.m].reshape(len(drqs), -1), axis=1)
    pn = np.sort(g.line_points[drqs.n].reshape(len(drqs), -1), axis=1)
    return (pm == pn).all(axis=1)


def drq_span_basis(g: Geometry, drqs: DRQSet, stop_at: int | None = None) -> tuple[list[int], exactla.RowSpace]:
    """Greedily pick DRQs whose vectors are linearly independent over Q.

    Scans in canonical order and stops early once ``stop_at`` vectors are found.
    """
    space = exactla.RowSpace(g.n_lines)
    chosen = []
    for i, d in enumerate(drqs):
        if space.add(drq_vector(d, g.n_lines)):
            chosen.append(i)
            if stop_at is not None and space.rank >= stop_at:
                break
    return chosen, space


@dataclasses.dataclass(frozen=True)
class SpanReport:
    span_rank: int
    dual_kernel_dim: int
    annihilated: int
    total: int
    basis: tuple[int, ...]

    @property
    def equal(self) -> bool:
        return self.annihilated == self.total and self.span_rank == self.dual_kernel_dim


def drq_span_equals_dual_kernel(g: Geometry, drqs: DRQSet) -> SpanReport:
    """Compare span(DRQ vectors) with ker(dual transform).

    Containment is checked for every DRQ, so the span dimension is at most the kernel
    dimension; the greedy basis gives the matching lower bound, with the scan stopped
    once the bound is reached.
    """
    dual = g.incidence.T.astype(np.int64)
    kernel_dim = g.n_lines - exactla.rank_exact(dual)
    ok = dual_annihilates(g, drqs)
    stop = kernel_dim if ok.all() else None
    basis, space = drq_span_basis(g, drqs, stop_at=stop)
    return SpanReport(space.rank, kernel_dim, int(ok.sum()), len(drqs), tuple(basis))


# -- remarks ----------------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class PointCount:
    per_point: np.ndarray
    count: int | None
    v: int
    ratio: Fraction | None

    @property
    def uniform(self) -> bool:
        return self.count is not None


def drqs_through_point(g: Geometry, drqs: DRQSet, p: int | None = None) -> PointCount:
    """Number of DRQs whose point set contains each point, and its ratio to v."""
    pts = g.line_points[drqs.m].reshape(len(drqs), -1)
    per_point = np.bincount(pts.reshape(-1), minlength=g.n_points)
    values = np.unique(per_point)
    v = projection_scale(g.q)
    if p is not None:
        count = int(per_point[p])
    else:
        count = int(values[0]) if len(values) == 1 else None
    ratio = Fraction(count, v) if count is not None else None
    return PointCount(per_point, count, v, ratio)


def incidence_gram(g: Geometry) -> np.ndarray:
    """Lines x lines matrix of intersection sizes: q+1, 1 or 0."""
    inc = g.incidence.astype(np.int64)
    return inc @ inc.T


@dataclasses.dataclass(frozen=True)
class GramSpectrum:
    multiplicities: tuple[tuple[int, int], ...]
    constants_eigenvalue: int | None
    rank: int

    @property
    def accounted(self) -> int:
        return sum(m for _, m in self.multiplicities)


def incidence_gram_spectrum(g: Geometry) -> GramSpectrum:
    """Geometric multiplicities of (q+1)(q^2+q+1), (q+1)q and 0 for the line Gram matrix."""
    q = g.q
    m = incidence_gram(g)
    sums = np.unique(m.sum(axis=1))
    top = (q + 1) * (q * q + q + 1)
    constants = int(sums[0]) if len(sums) == 1 else None
    mults = tuple((lam, exactla.eigen_multiplicity(m, lam)) for lam in (top, (q + 1) * q, 0))
    return GramSpectrum(mults, constants, g.n_lines - mults[2][1])
