"""The projective space PG(3, q): points, lines and their incidences.

Points are normalized homogeneous 4-vectors (first nonzero coordinate 1) and lines are
normalized Plücker 6-vectors ``(p01, p02, p03, p12, p13, p23)``.  Both are enumerated in
lexicographic order of their coordinate codes, so an index into ``Geometry.points`` or
``Geometry.lines`` means the same object on every run and platform.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import itertools
from collections.abc import Sequence

import numpy as np

from . import gf
from .config import DEFAULT
from .errors import BudgetExceeded, GeometryMismatch, UniformityViolation
from .gf import Field

PLUECKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class Relation(enum.IntEnum):
    """How two lines sit: the value is also the row index used by census tables."""

    SKEW = 0
    MEET = 1
    EQUAL = 2

    @property
    def symbol(self) -> str:
        return {0: "||", 1: "x", 2: "="}[self.value]


@dataclasses.dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[int, ...]
    index: int
    field: Field = dataclasses.field(repr=False, compare=False)


@dataclasses.dataclass(frozen=True)
class ProjectiveLine:
    pluecker: tuple[int, ...]
    index: int
    field: Field = dataclasses.field(repr=False, compare=False)


def pluecker_relation(field: Field, p: Sequence[int]) -> int:
    """Value of p01 p23 - p02 p13 + p03 p12 (zero exactly for lines)."""
    m, a, s = field.mul, field.add, field.sub
    return a(s(m(p[0], p[5]), m(p[1], p[4])), m(p[2], p[3]))


def pluecker_of(field: Field, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    """Normalized Plücker coordinates of the line through two distinct points."""
    raw = [field.sub(field.mul(x[i], y[j]), field.mul(x[j], y[i])) for i, j in PLUECKER_PAIRS]
    return gf.normalize(field, raw)


def pluecker_contains(field: Field, p: Sequence[int], x: Sequence[int]) -> bool:
    """Point-on-line test from the line's Plücker vector alone."""
    pij = dict(zip(PLUECKER_PAIRS, p))
    for i, j, k in itertools.combinations(range(4), 3):
        # x_i p_jk - x_j p_ik + x_k p_ij
        t = field.mul(x[i], pij[j, k])
        t = field.sub(t, field.mul(x[j], pij[i, k]))
        t = field.add(t, field.mul(x[k], pij[i, j]))
        if t:
            return False
    return True


def pluecker_meet_form(field: Field, p: Sequence[int], r: Sequence[int]) -> int:
    """Polar form of the Plücker relation; zero iff the two lines meet or coincide."""
    m, a, s = field.mul, field.add, field.sub
    t = s(m(p[0], r[5]), m(p[1], r[4]))
    t = a(t, m(p[2], r[3]))
    t = a(t, m(p[3], r[2]))
    t = s(t, m(p[4], r[1]))
    return a(t, m(p[5], r[0]))


def _lex_key(rows: np.ndarray, base: int) -> np.ndarray:
    width = rows.shape[1]
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return rows.astype(np.int64) @ weights


class Geometry:
    """PG(3, q) with complete incidence tables.

    Attributes are numpy arrays and must be treated as read-only:

    ``points``       (P, 4) coordinate codes
    ``lines``        (L, 6) Plücker codes
    ``line_points``  (L, q+1) point indices on each line, ascending
    ``point_lines``  (P, q^2+q+1) line indices through each point, ascending
    ``incidence``    (L, P) boolean, ``incidence[l, x]`` iff x lies on l
    ``join``         (P, P) index of the line through two distinct points, -1 on the diagonal
    """

    def __init__(self, field: Field):
        self.field = field
        q = self.q = field.q
        F = field

        pts = np.array(
            [c for c in itertools.product(range(q), repeat=4) if any(c) and c[next(i for i in range(4) if c[i])] == 1],
            dtype=np.int64,
        )
        self.points = pts
        P = len(pts)

        I, J = np.triu_indices(P, 1)
        X, Y = pts[I], pts[J]
        pl = np.stack(
            [F.sub_table[F.mul_table[X[:, i], Y[:, j]], F.mul_table[X[:, j], Y[:, i]]] for i, j in PLUECKER_PAIRS],
            axis=1,
        )
        lead = pl[np.arange(len(pl)), np.argmax(pl != 0, axis=1)]
        pl = F.mul_table[F.inv_table[lead][:, None], pl]
        keys, first, which = np.unique(_lex_key(pl, q), return_index=True, return_inverse=True)
        self.lines = pl[first]
        L = len(self.lines)

        incidence = np.zeros((L, P), dtype=bool)
        incidence[which, I] = True
        incidence[which, J] = True
        self.incidence = incidence
        self.line_points = np.nonzero(incidence)[1].reshape(L, q + 1)
        self.point_lines = np.nonzero(incidence.T)[1].reshape(P, q * q + q + 1)

        join = np.full((P, P), -1, dtype=np.int32)
        join[I, J] = which
        join[J, I] = which
        self.join = join

        self._point_index = {tuple(map(int, c)): i for i, c in enumerate(pts)}
        self._line_index = {tuple(map(int, c)): i for i, c in enumerate(self.lines)}
        for arr in (self.points, self.lines, self.incidence, self.line_points, self.point_lines, self.join):
            arr.setflags(write=False)

    # -- sizes ----------------------------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    # -- lookup ------------------------------------------------------------------------

    def point(self, i: int) -> ProjectivePoint:
        return ProjectivePoint(tuple(map(int, self.points[i])), int(i), self.field)

    def line(self, i: int) -> ProjectiveLine:
        return ProjectiveLine(tuple(map(int, self.lines[i])), int(i), self.field)

    def point_index(self, coords: Sequence[int]) -> int:
        return self._point_index[gf.normalize(self.field, coords)]

    def line_index(self, pluecker: Sequence[int]) -> int:
        """Index of a line given any nonzero multiple of its Plücker vector."""
        return self._line_index[gf.normalize(self.field, pluecker)]

    def line_through(self, x: int, y: int) -> int:
        if x == y:
            raise ValueError("two distinct points are needed to span a line")
        return int(self.join[x, y])

    def _index(self, obj: int | ProjectiveLine | ProjectivePoint) -> int:
        if isinstance(obj, (ProjectiveLine, ProjectivePoint)):
            if obj.field != self.field:
                raise GeometryMismatch(f"object over {obj.field} used with geometry over {self.field}")
            return obj.index
        return int(obj)

    # -- relations -----------------------------------------------------------------------

    @functools.cached_property
    def relations(self) -> np.ndarray:
        """(L, L) int8 table of :class:`Relation` values."""
        inc = self.incidence.astype(np.float32)
        # intersection sizes are 0, 1 or q+1, exact in float32
        common = np.rint(inc @ inc.T).astype(np.int64)
        rel = np.where(common == 0, Relation.SKEW, Relation.MEET).astype(np.int8)
        np.fill_diagonal(rel, Relation.EQUAL)
        rel.setflags(write=False)
        return rel

    def relation(self, l1: int | ProjectiveLine, l2: int | ProjectiveLine) -> Relation:
        return Relation(int(self.relations[self._index(l1), self._index(l2)]))

    def skew_to(self, *lines: int) -> np.ndarray:
        """Indices of the lines skew to every one of ``lines``."""
        mask = np.ones(self.n_lines, dtype=bool)
        for l in lines:
            mask &= self.relations[l] == Relation.SKEW
        return np.flatnonzero(mask)

    def contains(self, line: int | ProjectiveLine, point: int | ProjectivePoint) -> bool:
        return bool(self.incidence[self._index(line), self._index(point)])

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "q": self.q,
            "points": self.points.tolist(),
            "lines": self.lines.tolist(),
        }

    def __repr__(self) -> str:
        return f"PG(3,{self.q}) [{self.n_points} points, {self.n_lines} lines]"


@functools.lru_cache(maxsize=8)
def _cached_geometry(field: Field) -> Geometry:
    return Geometry(field)


def build_geometry(field: Field, max_q: int | None = None) -> Geometry:
    limit = DEFAULT.max_geometry_q if max_q is None else max_q
    if field.q > limit:
        raise BudgetExceeded(f"PG(3,{field.q}) exceeds the geometry budget q <= {limit}")
    return _cached_geometry(field)


def relation(g: Geometry, l1: int | ProjectiveLine, l2: int | ProjectiveLine) -> Relation:
    return g.relation(l1, l2)


def point_count(q: int) -> int:
    return q**3 + q**2 + q + 1


def line_count(q: int) -> int:
    return (q**2 + 1) * (q**2 + q + 1)


def incidence_counts(g: Geometry) -> tuple[int, int, int]:
    """(lines per point, points per line, lines skew to a line), asserted uniform."""
    per_point = g.incidence.sum(axis=0)
    per_line = g.incidence.sum(axis=1)
    skew = (g.relations == Relation.SKEW).sum(axis=1)
    out = []
    for name, arr in (("lines per point", per_point), ("points per line", per_line), ("skew lines per line", skew)):
        values = np.unique(arr)
        if len(values) != 1:
            raise UniformityViolation(f"{name} not uniform: {values.tolist()}")
        out.append(int(values[0]))
    return tuple(out)


# -- third-line census ---------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RelationCensus:
    """Counts of lines l3 (other than l1, l2) by (relation to l1, relation to l2)."""

    base: Relation
    counts: np.ndarray  # 3x3, indexed by Relation values

    def __getitem__(self, key: tuple[Relation, Relation]) -> int:
        return int(self.counts[key[0], key[1]])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict:
        return {
            "base": self.base.symbol,
            "counts": {
                f"{Relation(a).symbol},{Relation(b).symbol}": int(self.counts[a, b])
                for a in Relation
                for b in Relation
            },
        }


def third_line_census(g: Geometry, l1: int | ProjectiveLine, l2: int | ProjectiveLine) -> RelationCensus:
    a, b = g._index(l1), g._index(l2)
    mask = np.ones(g.n_lines, dtype=bool)
    mask[[a, b]] = False
    r1 = g.relations[a, mask].astype(np.int64)
    r2 = g.relations[b, mask].astype(np.int64)
    counts = np.bincount(3 * r1 + r2, minlength=9).reshape(3, 3)
    return RelationCensus(Relation(int(g.relations[a, b])), counts)


def census_closed_form(q: int, base: Relation) -> dict[tuple[Relation, Relation], int]:
    """Closed-form third-line counts; mixed pairs are listed in both orders."""
    X, S = Relation.MEET, Relation.SKEW
    if base == Relation.EQUAL:
        return {(X, X): (q + 1) * (q * q + q), (S, S): q**4, (X, S): 0, (S, X): 0}
    if base == Relation.MEET:
        xs = q**3
        return {(X, X): (q * q + q - 1) + q * q, (X, S): xs, (S, X): xs, (S, S): q**4 - q**3}
    xs = (q - 1) * (q + 1) ** 2
    return {(X, X): (q + 1) ** 2, (X, S): xs, (S, X): xs, (S, S): q**4 - q**3 - q**2 + q}


# -- planes, for the transversal construction ------------------------------------------


def plane_through(field: Field, *points: Sequence[int]) -> tuple[int, ...]:
    """Dual coordinates of the unique plane containing the given points.

    Raises ValueError if the points do not span a plane.
    """
    basis = gf.nullspace(field, [list(p) for p in points], 4)
    if len(basis) != 1:
        raise ValueError("points do not span a plane")
    return gf.normalize(field, basis[0])


def on_plane(field: Field, plane: Sequence[int], x: Sequence[int]) -> bool:
    acc = 0
    for a, b in zip(plane, x):
        acc = field.add(acc, field.mul(a, b))
    return acc == 0
