"""The X-ray (line) transform on PG(3, q), its dual, and inversion on the full line set.

Functions on points and on lines are plain lists of ``Fraction`` indexed by the
canonical enumeration.  Values are characteristic-0 rationals, never field elements.

Inversion uses the normal operator of the transform.  With alpha lines through each
point and beta lines through each pair of distinct points,

    dual(xray(f)) = (alpha - beta) f + beta (sum f) 1

and since every line has q+1 points, sum(xray(f)) = alpha * sum(f).  Hence

    f = (dual(rf) - beta * sum(rf) / alpha) / (alpha - beta).
"""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from .errors import LengthMismatch, UniformityViolation
from .pg3 import Geometry

Number = int | Fraction


def _check_length(values: Sequence, n: int, what: str) -> None:
    if len(values) != n:
        raise LengthMismatch(f"{what} has length {len(values)}, expected {n}")


def xray(g: Geometry, f: Sequence[Number], domain: Sequence[int] | None = None) -> list[Fraction]:
    """Sum of ``f`` over the points of each line of ``domain`` (default: all lines)."""
    _check_length(f, g.n_points, "point function")
    lines = range(g.n_lines) if domain is None else domain
    fv = [Fraction(x) for x in f]
    return [sum((fv[x] for x in g.line_points[l]), Fraction(0)) for l in lines]


def dual_xray(g: Geometry, values: Sequence[Number]) -> list[Fraction]:
    """Sum of a line function over the lines through each point."""
    _check_length(values, g.n_lines, "line function")
    gv = [Fraction(x) for x in values]
    return [sum((gv[l] for l in g.point_lines[x]), Fraction(0)) for x in range(g.n_points)]


def xray_matrix(g: Geometry, domain: Sequence[int] | None = None) -> np.ndarray:
    """0/1 matrix of the transform: rows are lines of ``domain``, columns are points."""
    inc = g.incidence if domain is None else g.incidence[np.asarray(domain, dtype=np.int64)]
    return inc.astype(np.int64)


def normal_matrix(g: Geometry) -> np.ndarray:
    """Points x points matrix of dual . xray: entry = number of lines through both points."""
    inc = g.incidence.astype(np.int64)
    return inc.T @ inc


@dataclasses.dataclass(frozen=True)
class BolkerConstants:
    alpha: int
    beta: int


def bolker_check(g: Geometry) -> BolkerConstants:
    """Verify both uniformity conditions exhaustively and return (alpha, beta)."""
    n = normal_matrix(g)
    diag = np.unique(np.diag(n))
    off = np.unique(n[~np.eye(len(n), dtype=bool)])
    if len(diag) != 1:
        raise UniformityViolation(f"lines per point not uniform: {diag.tolist()}")
    if len(off) != 1:
        raise UniformityViolation(f"lines per point pair not uniform: {off.tolist()}")
    alpha, beta = int(diag[0]), int(off[0])
    if alpha == 0 or alpha == beta:
        raise UniformityViolation(f"degenerate constants alpha={alpha}, beta={beta}")
    return BolkerConstants(alpha, beta)


def bolker_invert(g: Geometry, rf: Sequence[Number], constants: BolkerConstants | None = None) -> list[Fraction]:
    """Preimage of ``rf`` under the full transform.

    No range check is made: a line function outside the image still gets a value.
    """
    _check_length(rf, g.n_lines, "line function")
    q = g.q
    c = constants or BolkerConstants(q * q + q + 1, 1)
    total = sum((Fraction(x) for x in rf), Fraction(0)) / c.alpha
    back = dual_xray(g, rf)
    return [(b - c.beta * total) / (c.alpha - c.beta) for b in back]


# -- serialization ---------------------------------------------------------------------


def to_json_values(values: Sequence[Number]) -> list[str]:
    out = []
    for v in values:
        v = Fraction(v)
        out.append(f"{v.numerator}/{v.denominator}")
    return out


def from_json_values(items: Sequence) -> list[Fraction]:
    return [Fraction(x) if not isinstance(x, str) else Fraction(x.strip()) for x in items]
