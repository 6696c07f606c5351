import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import geometry
from pgxray.drq import (
    DRQ,
    MONOMIALS,
    check_drq,
    count_triad_extensions,
    drq_count,
    drq_points,
    drq_vector,
    enumerate_drqs,
    extend_triad,
    iter_drq_chunks,
    quadric_fit,
    quadric_value,
    transversals,
    triad_extension_count,
    triad_extension_counts,
)
from pgxray.errors import BudgetExceeded, InvalidTriad, NotSkew
from pgxray.pg3 import Relation
from pgxray.transform import xray


def lines_meeting_all(g, ls):
    """Exhaustive scan for lines meeting each of ``ls`` in exactly one point."""
    return [m for m in range(g.n_lines) if all(g.relation(m, l) == Relation.MEET for l in ls)]


def random_triads(g, count, seed):
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        l1 = rnd.randrange(g.n_lines)
        l2 = rnd.choice(g.skew_to(l1).tolist())
        l3 = rnd.choice(g.skew_to(l1, l2).tolist())
        out.append((l1, l2, l3))
    return out


@pytest.mark.parametrize("q, expected", [(2, 6), (3, 48), (4, 180)])
def test_count_triad_extensions(q, expected):
    g = geometry(q)
    skew = int(g.skew_to(0)[0])
    assert count_triad_extensions(g, 0, skew) == expected == triad_extension_count(q)
    assert set(triad_extension_counts(g).tolist()) == {expected}


def test_count_triad_extensions_needs_skew(g2):
    meet = int(np.flatnonzero(g2.relations[0] == Relation.MEET)[0])
    with pytest.raises(NotSkew):
        count_triad_extensions(g2, 0, meet)


def test_transversal_example(g2, standard_triad):
    ts = transversals(g2, standard_triad)
    assert sorted(ts) == lines_meeting_all(g2, standard_triad)
    P = g2.point_index
    e0e2 = g2.line_through(P((1, 0, 0, 0)), P((0, 0, 1, 0)))
    through_e0 = [t for t in ts if g2.contains(t, P((1, 0, 0, 0)))]
    assert through_e0 == [e0e2]


@pytest.mark.parametrize("q", [2, 3])
def test_transversals_are_the_skew_common_transversals(q):
    g = geometry(q)
    for t in random_triads(g, 15, q):
        ts = transversals(g, t)
        assert len(ts) == q + 1
        assert sorted(ts) == lines_meeting_all(g, t)
        for a, b in itertools.combinations(ts, 2):
            assert g.relation(a, b) == Relation.SKEW


def test_transversals_reject_non_triads(g2, standard_triad):
    l1, l2, _ = standard_triad
    meet = int(np.flatnonzero(g2.relations[l1] == Relation.MEET)[0])
    with pytest.raises(InvalidTriad):
        transversals(g2, (l1, l2, meet))


def test_extend_standard_triad(g2, standard_triad):
    d = extend_triad(g2, standard_triad)
    F = g2.field
    form = quadric_fit(g2, d)
    assert form == (0, 0, 0, 1, 0, F.neg_table[1], 0, 0, 0, 0)  # x0x3 - x1x2
    for l in d.lines:
        for x in g2.line_points[l]:
            p = g2.points[x]
            assert F.sub(F.mul(p[0], p[3]), F.mul(p[1], p[2])) == 0
    # ruling through the triad: {(a : b : la : lb)}, other ruling: {(a : la : b : lb)}
    check_drq(g2, d)
    assert set(standard_triad) <= set(d.m) or set(standard_triad) <= set(d.n)


def test_extension_is_unique_q2(g2, drqs2):
    for d in drqs2:
        for ruling in (d.m, d.n):
            for t in itertools.combinations(ruling, 3):
                assert extend_triad(g2, t) == d
    for pick in itertools.permutations(range(3), 3):
        assert extend_triad(g2, drqs2[0].m, pick) == drqs2[0]


def test_extension_q3_sizes(g3):
    for t in random_triads(g3, 10, 0):
        d = extend_triad(g3, t)
        assert len(d.m) == len(d.n) == 4
        assert extend_triad(g3, t, pick=(1, 2, 3)) == d


@pytest.mark.parametrize("q, expected", [(2, 280), (3, 10530)])
def test_enumeration_count(q, expected):
    drqs = enumerate_drqs(geometry(q))
    assert len(drqs) == expected == drq_count(q)
    keys = [d.lines for d in drqs]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_enumeration_count_q4(drqs4):
    assert len(drqs4) == 137088


def test_enumeration_matches_triad_route_q3(g3, drqs3):
    for t in random_triads(g3, 40, 1):
        d = extend_triad(g3, t)
        assert drqs3[drqs3.index(d)] == d


def test_every_enumerated_drq_is_valid_q2(g2, drqs2):
    for d in drqs2:
        check_drq(g2, d)
        assert d.m < d.n


def test_enumerated_drqs_valid_sampled_q3(g3, drqs3):
    for i in range(0, len(drqs3), 97):
        check_drq(g3, drqs3[i])


def test_triad_bookkeeping():
    for q in (2, 3):
        g = geometry(q)
        ordered = int(triad_extension_counts(g).sum())
        assert ordered == g.n_lines * q**4 * triad_extension_count(q)
        assert drq_count(q) * 2 * (q + 1) * q * (q - 1) == ordered


def test_pairs_inside_a_drq(g3, drqs3):
    q = 3
    for i in range(0, len(drqs3), 500):
        d = drqs3[i]
        rel = g3.relations[np.ix_(d.lines, d.lines)]
        assert (rel == Relation.MEET).sum() == 2 * (q + 1) ** 2
        assert (rel == Relation.SKEW).sum() == 2 * (q + 1) * q


@pytest.mark.parametrize("fixture, q", [("drqs2", 2), ("drqs3", 3)])
def test_drqs_per_line(request, fixture, q):
    drqs = request.getfixturevalue(fixture)
    per_line = np.bincount(drqs.rows.reshape(-1), minlength=geometry(q).n_lines)
    assert set(per_line.tolist()) == {q**4 * (q * q - 1)}


def test_drq_vector(g2, drqs2):
    for d in drqs2:
        v = drq_vector(d, g2.n_lines)
        assert v.sum() == 0
        assert np.count_nonzero(v) == 6


@pytest.mark.parametrize("fixture, q", [("drqs2", 2), ("drqs3", 3)])
def test_drq_vectors_annihilate_the_range(request, fixture, q):
    g = geometry(q)
    drqs = request.getfixturevalue(fixture)
    rnd = random.Random(q)
    for _ in range(3):
        f = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 4)) for _ in range(g.n_points)]
        rf = xray(g, f)
        for i in range(0, len(drqs), 1 if q == 2 else 211):
            d = drqs[i]
            assert sum(rf[l] for l in d.m) == sum(rf[l] for l in d.n)


def test_quadric_fit_q2_all(g2, drqs2):
    for d in drqs2:
        form = quadric_fit(g2, d)
        zeros = [x for x in range(g2.n_points) if quadric_value(g2.field, form, g2.points[x]) == 0]
        assert len(zeros) == 9
        assert zeros == drq_points(g2, d).tolist()


def test_quadric_fit_q3_and_q4(g3, drqs3, g4, drqs4):
    for g, drqs in ((g3, drqs3), (g4, drqs4)):
        for i in (0, len(drqs) // 2, len(drqs) - 1):
            form = quadric_fit(g, drqs[i])
            zeros = sum(quadric_value(g.field, form, x) == 0 for x in g.points)
            assert zeros == (g.q + 1) ** 2
    assert len(MONOMIALS) == 10


def test_serialization():
    d = DRQ.from_rulings([9, 1, 4], [2, 8, 3])
    assert d.to_dict() == {"m": [1, 4, 9], "n": [2, 3, 8]}
    assert DRQ.from_dict({"m": [2, 3, 8], "n": [1, 4, 9]}) == d


def test_budget(g4):
    with pytest.raises(BudgetExceeded):
        next(iter_drq_chunks(g4, max_q=3))
