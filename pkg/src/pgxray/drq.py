"""Triads, transversals and doubly ruled quadrics (DRQs).

A DRQ is stored as two sorted tuples of line indices, ``m`` and ``n``: the two rulings
of a hyperbolic quadric.  As a formal combination of lines it is ``sum(m) - sum(n)``.
The sign is fixed by taking ``m`` to be the lexicographically smaller ruling, which for
disjoint rulings is simply the one containing the smallest line index.

Two routes produce DRQs.  :func:`transversals` and :func:`extend_triad` work on one
triad with plane/line intersections over GF(q).  :func:`iter_drq_chunks` enumerates
all of them with batched table lookups (join of two points, relation of two lines);
the test suite checks the two routes against each other.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Iterable, Iterator, Sequence
from typing import NamedTuple

import numpy as np

from . import gf
from .config import DEFAULT
from .errors import BudgetExceeded, InvalidTriad, NoQuadric, NotSkew
from .pg3 import Geometry, Relation, on_plane, plane_through

MONOMIALS = tuple((i, j) for i in range(4) for j in range(i, 4))


def drq_count(q: int) -> int:
    return (q**2 + 1) * (q**2 + q + 1) * q**4 * (q - 1) // 2


def triad_extension_count(q: int) -> int:
    return q * (q + 1) * (q - 1) ** 2


class Triad(NamedTuple):
    l1: int
    l2: int
    l3: int


def make_triad(g: Geometry, l1: int, l2: int, l3: int) -> Triad:
    t = Triad(int(l1), int(l2), int(l3))
    for a, b in itertools.combinations(t, 2):
        if g.relation(a, b) != Relation.SKEW:
            raise InvalidTriad(f"lines {a} and {b} are not skew")
    return t


@dataclasses.dataclass(frozen=True, order=True)
class DRQ:
    m: tuple[int, ...]
    n: tuple[int, ...]

    @classmethod
    def from_rulings(cls, a: Iterable[int], b: Iterable[int]) -> "DRQ":
        a, b = tuple(sorted(map(int, a))), tuple(sorted(map(int, b)))
        return cls(*sorted((a, b)))

    @property
    def lines(self) -> tuple[int, ...]:
        return self.m + self.n

    def to_dict(self) -> dict:
        return {"m": list(self.m), "n": list(self.n)}

    @classmethod
    def from_dict(cls, data: dict) -> "DRQ":
        return cls.from_rulings(data["m"], data["n"])


class DRQSet:
    """All DRQs of a geometry as an (N, 2(q+1)) array: ruling m then ruling n.

    Rows are in ascending lexicographic order, i.e. sorted by canonical key.
    """

    def __init__(self, rows: np.ndarray, q: int):
        self.rows = rows
        self.q = q
        rows.setflags(write=False)

    @property
    def m(self) -> np.ndarray:
        return self.rows[:, : self.q + 1]

    @property
    def n(self) -> np.ndarray:
        return self.rows[:, self.q + 1 :]

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> DRQ:
        r = self.rows[i]
        return DRQ(tuple(map(int, r[: self.q + 1])), tuple(map(int, r[self.q + 1 :])))

    def __iter__(self) -> Iterator[DRQ]:
        return (self[i] for i in range(len(self)))

    def index(self, d: DRQ) -> int:
        key = np.array(d.lines)
        hits = np.flatnonzero((self.rows == key).all(axis=1))
        if len(hits) == 0:
            raise KeyError(d)
        return int(hits[0])


# -- single-triad geometric construction ----------------------------------------------


def count_triad_extensions(g: Geometry, l1: int, l2: int) -> int:
    """Number of lines skew to both of two skew lines."""
    if g.relation(l1, l2) != Relation.SKEW:
        raise NotSkew(f"lines {l1} and {l2} are not skew")
    return len(g.skew_to(l1, l2))


def triad_extension_counts(g: Geometry) -> np.ndarray:
    """count_triad_extensions for every ordered skew pair at once."""
    s = (g.relations == Relation.SKEW).astype(np.float32)
    # counts are at most q^4, exact in float32 for the supported q
    both = np.rint(s @ s).astype(np.int64)
    return both[s.astype(bool)]


def transversals(g: Geometry, t: Sequence[int]) -> list[int]:
    """The q+1 lines meeting all three lines of a triad, one per point of the first line.

    For each point p of L1, the plane spanned by p and L2 cuts L3 in one point s; the
    transversal is the line ps.
    """
    l1, l2, l3 = make_triad(g, *t)
    F = g.field
    pts = g.points
    a, b = g.line_points[l2][:2]
    out = []
    for p in g.line_points[l1]:
        plane = plane_through(F, pts[p], pts[a], pts[b])
        hits = [s for s in g.line_points[l3] if on_plane(F, plane, pts[s])]
        if len(hits) != 1:
            raise InvalidTriad(f"plane through point {p} and line {l2} meets line {l3} in {len(hits)} points")
        out.append(g.line_through(int(p), int(hits[0])))
    return out


def extend_triad(g: Geometry, t: Sequence[int], pick: Sequence[int] = (0, 1, 2)) -> DRQ:
    """The unique DRQ with the triad in one ruling.

    ``pick`` selects which three transversals seed the second step; the result does not
    depend on it.
    """
    t = make_triad(g, *t)
    other = transversals(g, t)
    same = transversals(g, [other[i] for i in pick])
    if not set(t) <= set(same):
        raise InvalidTriad(f"triad {tuple(t)} not recovered from its transversals")
    return DRQ.from_rulings(same, other)


# -- batched enumeration ------------------------------------------------------------------


def _transversal_batch(g: Geometry, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Row i: the q+1 lines meeting a[i], b[i] and c[i], ordered by their point on a[i]."""
    pa = g.line_points[a]
    pc = g.line_points[c]
    cand = g.join[pa[:, :, None], pc[:, None, :]]
    meets = g.relations[cand, b[:, None, None]] == Relation.MEET
    if not (meets.sum(axis=2) == 1).all():
        raise InvalidTriad("batch contains a non-triad")
    idx = meets.argmax(axis=2)
    return np.take_along_axis(cand, idx[:, :, None], axis=2)[:, :, 0]


def _chunk_for_line(g: Geometry, l1: int) -> np.ndarray:
    """DRQs whose smallest line is l1, as canonical rows."""
    rel = g.relations
    skew = np.flatnonzero(rel[l1, l1 + 1 :] == Relation.SKEW) + l1 + 1
    width = 2 * (g.q + 1)
    if len(skew) < 2:
        return np.empty((0, width), dtype=np.int32)
    j, k = np.nonzero(np.triu(rel[np.ix_(skew, skew)] == Relation.SKEW, 1))
    b, c = skew[j], skew[k]
    a = np.full(len(b), l1)
    other = np.sort(_transversal_batch(g, a, b, c), axis=1)
    keep = other[:, 0] > l1
    a, b, c, other = a[keep], b[keep], c[keep], other[keep]
    same = np.sort(_transversal_batch(g, other[:, 0], other[:, 1], other[:, 2]), axis=1)
    keep = same[:, 0] == l1
    rows = np.concatenate([same[keep], other[keep]], axis=1).astype(np.int32)
    return np.unique(rows, axis=0)


def iter_drq_chunks(g: Geometry, max_q: int | None = None) -> Iterator[np.ndarray]:
    """Stream every DRQ exactly once, grouped by smallest line.

    Triads (l1 < l2 < l3) are extended in batches; a DRQ is emitted only from the
    batch of its globally smallest line, which makes deduplication local to a batch.
    """
    limit = DEFAULT.max_drq_q if max_q is None else max_q
    if g.q > limit:
        raise BudgetExceeded(f"DRQ enumeration for q={g.q} exceeds budget q <= {limit}")
    for l1 in range(g.n_lines):
        chunk = _chunk_for_line(g, l1)
        if len(chunk):
            yield chunk


def enumerate_drqs(g: Geometry, max_q: int | None = None) -> DRQSet:
    chunks = list(iter_drq_chunks(g, max_q=max_q))
    rows = np.concatenate(chunks) if chunks else np.empty((0, 2 * (g.q + 1)), dtype=np.int32)
    return DRQSet(rows, g.q)


def drq_vector(d: DRQ, total_lines: int) -> np.ndarray:
    v = np.zeros(total_lines, dtype=np.int64)
    v[list(d.m)] = 1
    v[list(d.n)] = -1
    return v


def drq_points(g: Geometry, d: DRQ) -> np.ndarray:
    return np.unique(g.line_points[list(d.m)])


def check_drq(g: Geometry, d: DRQ) -> None:
    """Raise InvalidTriad unless d has the full DRQ intersection pattern."""
    q = g.q
    if len(d.m) != q + 1 or len(d.n) != q + 1:
        raise InvalidTriad("each ruling needs q+1 lines")
    rel = g.relations
    for ruling in (d.m, d.n):
        sub = rel[np.ix_(ruling, ruling)]
        if not (sub[~np.eye(q + 1, dtype=bool)] == Relation.SKEW).all():
            raise InvalidTriad("lines within a ruling must be pairwise skew")
    if not (rel[np.ix_(d.m, d.n)] == Relation.MEET).all():
        raise InvalidTriad("every line of one ruling must meet every line of the other")
    pm = np.unique(g.line_points[list(d.m)])
    pn = np.unique(g.line_points[list(d.n)])
    if not np.array_equal(pm, pn) or len(pm) != (q + 1) ** 2:
        raise InvalidTriad("rulings do not cover the same (q+1)^2 points")


# -- the quadric carrying a DRQ ------------------------------------------------------------


def quadric_value(field: gf.Field, form: Sequence[int], x: Sequence[int]) -> int:
    acc = 0
    for coef, (i, j) in zip(form, MONOMIALS):
        if coef:
            acc = field.add(acc, field.mul(coef, field.mul(x[i], x[j])))
    return acc


def polar_matrix(field: gf.Field, form: Sequence[int]) -> list[list[int]]:
    """Matrix of Q(x+y) - Q(x) - Q(y); nondegenerate iff the quadric is nonsingular."""
    m = [[0] * 4 for _ in range(4)]
    for coef, (i, j) in zip(form, MONOMIALS):
        if i == j:
            m[i][i] = field.add(coef, coef)
        else:
            m[i][j] = m[j][i] = coef
    return m


def quadric_fit(g: Geometry, d: DRQ) -> tuple[int, ...]:
    """The quadratic form (up to scale) vanishing on the points of a DRQ.

    Coefficients follow ``MONOMIALS`` (x0^2, x0x1, x0x2, x0x3, x1^2, ...), normalized
    with first nonzero coefficient 1.  Raises NoQuadric unless the solution is unique,
    nonsingular, and vanishes on exactly the (q+1)^2 points of the DRQ.
    """
    F = g.field
    pts = drq_points(g, d)
    rows = [[F.mul(int(g.points[x][i]), int(g.points[x][j])) for i, j in MONOMIALS] for x in pts]
    basis = gf.nullspace(F, rows, len(MONOMIALS))
    if len(basis) != 1:
        raise NoQuadric(f"{len(basis)}-dimensional space of quadrics through the DRQ points")
    form = gf.normalize(F, basis[0])
    if gf.det(F, polar_matrix(F, form)) == 0:
        raise NoQuadric("fitted quadric is singular")
    zeros = [x for x in range(g.n_points) if quadric_value(F, form, g.points[x]) == 0]
    if zeros != pts.tolist():
        raise NoQuadric(f"quadric vanishes on {len(zeros)} points, expected {len(pts)}")
    return form
