"""Line complexes and their admissibility.

A line complex is a set of exactly as many lines as there are points.  It is
admissible when the X-ray transform restricted to its lines is injective, i.e. the
square 0/1 matrix (lines of L) x (points) has full rank over Q.

Two independent deciders are provided:

* :func:`is_admissible` ranks the restricted transform and, on failure, returns a
  certificate: a nonzero line function on L killed by the dual transform.
* :func:`supports_drq_combination` intersects the span of all DRQ vectors with the
  coordinate subspace of vectors supported on L.

Admissibility and "no DRQ combination is supported on L" are equivalent; the test
suite checks that the two deciders agree, including the dimension of the failure.
"""

from __future__ import annotations

import dataclasses
import json
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import exactla
from .cavalieri import drq_span_basis
from .config import rng
from .drq import DRQ, DRQSet, drq_vector
from .errors import NotAdmissible, VerificationError, WrongSize
from .gf import Field
from .pg3 import Geometry
from .transform import from_json_values, to_json_values, xray_matrix


@dataclasses.dataclass(frozen=True)
class LineComplex:
    lines: tuple[int, ...]

    def __post_init__(self):
        lines = tuple(sorted(int(l) for l in self.lines))
        if len(set(lines)) != len(lines):
            raise ValueError("a line complex cannot repeat a line")
        object.__setattr__(self, "lines", lines)

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)


def as_complex(g: Geometry, lines: Sequence[int] | LineComplex) -> LineComplex:
    c = lines if isinstance(lines, LineComplex) else LineComplex(tuple(lines))
    if len(c) != g.n_points:
        raise WrongSize(f"a line complex in PG(3,{g.q}) has {g.n_points} lines, got {len(c)}")
    if c.lines and not 0 <= c.lines[0] <= c.lines[-1] < g.n_lines:
        raise ValueError("line index out of range")
    return c


def _primitive(vec: Sequence[Fraction]) -> list[Fraction]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    den = math.lcm(*(Fraction(x).denominator for x in vec))
    ints = [int(Fraction(x) * den) for x in vec]
    g = math.gcd(*ints)
    lead = next(x for x in ints if x)
    s = g if lead > 0 else -g
    return [Fraction(x // s) for x in ints]


@dataclasses.dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    rank: int
    lines: tuple[int, ...]
    certificate: list[Fraction] | None = None

    def certificate_on_all_lines(self, n_lines: int) -> list[Fraction] | None:
        if self.certificate is None:
            return None
        full = [Fraction(0)] * n_lines
        for l, x in zip(self.lines, self.certificate):
            full[l] = x
        return full

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "rank": self.rank,
            "lines": list(self.lines),
            "certificate": None if self.certificate is None else to_json_values(self.certificate),
        }


def is_admissible(g: Geometry, lines: Sequence[int] | LineComplex) -> AdmissibilityVerdict:
    c = as_complex(g, lines)
    t = xray_matrix(g, c.lines)
    r = exactla.rank_exact(t)
    if r == g.n_points:
        return AdmissibilityVerdict(True, r, c.lines)
    ker = exactla.left_kernel_basis(t)
    cert = _primitive(ker[0])
    # certificate must sum to zero on the lines of L through every point
    back = exactla.mat_vec(t.T, cert)
    if any(back) or not any(cert):
        raise VerificationError("admissibility certificate is not in the dual kernel")
    return AdmissibilityVerdict(False, r, c.lines, cert)


# -- the DRQ-support decider -------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class DrqSpan:
    """A basis of span(DRQ vectors) as a (k, L) integer matrix, k = L - P."""

    basis: np.ndarray
    drq_indices: tuple[int, ...]


def drq_span(g: Geometry, drqs: DRQSet) -> DrqSpan:
    target = g.n_lines - g.n_points
    chosen, space = drq_span_basis(g, drqs, stop_at=target)
    if space.rank != target:
        raise VerificationError(f"DRQ vectors span {space.rank} dimensions, expected {target}")
    basis = np.array([drq_vector(drqs[i], g.n_lines) for i in chosen], dtype=np.int64)
    return DrqSpan(basis, tuple(chosen))


def drq_support(g: Geometry, span: DrqSpan, lines: Sequence[int] | LineComplex) -> tuple[int, list[Fraction] | None]:
    """Dimension of span(DRQs) ∩ {vectors supported on L}, and one nonzero element.

    A combination sum(c_i b_i) of basis vectors is supported on L iff it vanishes on
    every line outside L, i.e. c lies in the left kernel of the basis restricted to
    the complement columns.
    """
    c = as_complex(g, lines)
    inside = np.zeros(g.n_lines, dtype=bool)
    inside[list(c.lines)] = True
    outside = span.basis[:, ~inside]
    coeffs = exactla.left_kernel_basis(outside)
    if not coeffs:
        return 0, None
    vec = [Fraction(0)] * g.n_lines
    for ci, row in zip(coeffs[0], span.basis):
        if ci:
            for l in np.flatnonzero(row):
                vec[l] += ci * int(row[l])
    vec = _primitive(vec)
    if any(vec[l] for l in np.flatnonzero(~inside)):
        raise VerificationError("DRQ combination leaks outside the complex")
    return len(coeffs), vec


def supports_drq_combination(
    g: Geometry, drqs: DRQSet | DrqSpan, lines: Sequence[int] | LineComplex
) -> list[Fraction] | None:
    """A nonzero combination of DRQs supported on L (as a full line function), or None."""
    span = drqs if isinstance(drqs, DrqSpan) else drq_span(g, drqs)
    return drq_support(g, span, lines)[1]


# -- inversion and construction ---------------------------------------------------------------


def invert_restricted(g: Geometry, lines: Sequence[int] | LineComplex, rf: Sequence) -> list[Fraction]:
    """Recover f from its line sums over ``lines``.

    ``lines`` is normally a complex (|L| = P); a longer, over-determined line list is
    also accepted, in which case data outside the image raise InconsistentData.
    """
    ls = lines.lines if isinstance(lines, LineComplex) else tuple(lines)
    if len(ls) < g.n_points:
        raise WrongSize(f"need at least {g.n_points} lines, got {len(ls)}")
    t = xray_matrix(g, ls)
    if len(rf) != len(ls):
        raise ValueError(f"data has length {len(rf)}, expected {len(ls)}")
    r = exactla.rank_exact(t)
    if r < g.n_points:
        raise NotAdmissible(f"restricted transform has rank {r} < {g.n_points}")
    return exactla.solve_exact(t, [Fraction(x) for x in rf])


def search_admissible(g: Geometry, seed: int) -> LineComplex:
    """Greedy basis of the transform's row matroid, scanning lines in seeded order."""
    order = rng(seed).permutation(g.n_lines)
    space = exactla.RowSpace(g.n_points)
    kept = []
    for l in order:
        if space.add(g.incidence[l].astype(np.int64)):
            kept.append(int(l))
            if space.rank == g.n_points:
                break
    return LineComplex(tuple(kept))


def random_complex(g: Geometry, seed: int) -> LineComplex:
    picks = rng(seed).choice(g.n_lines, size=g.n_points, replace=False)
    return LineComplex(tuple(int(x) for x in picks))


def embed_drq_complex(g: Geometry, d: DRQ, seed: int) -> LineComplex:
    """A complex containing all lines of d, padded with seed-chosen other lines."""
    used = set(d.lines)
    others = np.array([l for l in range(g.n_lines) if l not in used])
    pad = rng(seed).choice(others, size=g.n_points - len(used), replace=False)
    return LineComplex(tuple(used) + tuple(int(x) for x in pad))


# -- sampling ------------------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class SampleRecord:
    seed: int
    rank: int
    drq_nullity: int | None
    n_points: int

    @property
    def admissible(self) -> bool:
        return self.rank == self.n_points

    @property
    def agree(self) -> bool | None:
        if self.drq_nullity is None:
            return None
        return self.n_points - self.rank == self.drq_nullity


def sample_admissibility(
    g: Geometry, samples: int, seed: int = 0, span: DrqSpan | None = None, threads: int = 1
) -> list[SampleRecord]:
    """Rank random complexes with seeds seed, seed+1, ...; optionally run the DRQ decider too."""

    def one(s: int) -> SampleRecord:
        c = random_complex(g, s)
        r = exactla.rank_exact(xray_matrix(g, c.lines))
        nullity = drq_support(g, span, c)[0] if span is not None else None
        return SampleRecord(s, r, nullity, g.n_points)

    seeds = range(seed, seed + samples)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, seeds))
    return [one(s) for s in seeds]


# -- files ----------------------------------------------------------------------------------------


def complex_to_dict(g: Geometry, c: LineComplex) -> dict:
    f = g.field
    return {"q": f.q, "p": f.p, "k": f.k, "modulus": list(f.modulus), "lines": list(c.lines)}


def complex_from_dict(data: dict, geometry_for=None) -> tuple[Geometry, LineComplex]:
    """Load a complex; ``pluecker`` 6-tuples are re-canonicalized to line indices.

    ``geometry_for`` maps a Field to a Geometry (defaults to :func:`pg3.build_geometry`).
    """
    from .pg3 import build_geometry

    field = Field.from_dict(data)
    if "q" in data and int(data["q"]) != field.q:
        raise ValueError(f"q={data['q']} does not match p^k={field.q}")
    g = (geometry_for or build_geometry)(field)
    if "lines" in data:
        lines = [int(x) for x in data["lines"]]
    elif "pluecker" in data:
        lines = [g.line_index(p) for p in data["pluecker"]]
    else:
        raise ValueError("complex file needs 'lines' or 'pluecker'")
    return g, as_complex(g, lines)


def load_complex(path: str | Path) -> tuple[Geometry, LineComplex]:
    return complex_from_dict(json.loads(Path(path).read_text()))


def save_complex(path: str | Path, g: Geometry, c: LineComplex) -> None:
    Path(path).write_text(json.dumps(complex_to_dict(g, c)) + "\n")


def line_function_from_json(items: Sequence) -> list[Fraction]:
    return from_json_values(items)
