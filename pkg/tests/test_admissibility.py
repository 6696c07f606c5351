import json
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import geometry
from pgxray import exactla
from pgxray.admissibility import (
    LineComplex,
    complex_from_dict,
    complex_to_dict,
    drq_span,
    drq_support,
    embed_drq_complex,
    invert_restricted,
    is_admissible,
    load_complex,
    random_complex,
    sample_admissibility,
    save_complex,
    search_admissible,
    supports_drq_combination,
)
from pgxray.drq import drq_vector
from pgxray.errors import InconsistentData, NotAdmissible, WrongSize
from pgxray.transform import xray, xray_matrix


@pytest.fixture(scope="module")
def span2(g2, drqs2):
    return drq_span(g2, drqs2)


@pytest.fixture(scope="module")
def span3(g3, drqs3):
    return drq_span(g3, drqs3)


def random_f(n, seed):
    rnd = random.Random(seed)
    return [Fraction(rnd.randint(-20, 20), rnd.randint(1, 7)) for _ in range(n)]


def test_span_basis_shape(span2, span3):
    assert span2.basis.shape == (20, 35)
    assert span3.basis.shape == (90, 130)


def test_embedded_drq_is_inadmissible(g2, drqs2, span2):
    d = drqs2[0]
    c = embed_drq_complex(g2, d, seed=0)
    assert len(c) == 15 and set(d.lines) <= set(c.lines)
    v = is_admissible(g2, c)
    assert not v.admissible and v.rank < 15
    cert = v.certificate_on_all_lines(g2.n_lines)
    assert set(np.flatnonzero(cert)) <= set(c.lines)
    # the certificate lies in ker of the dual transform, hence in the DRQ span
    assert exactla.mat_vec(xray_matrix(g2).T, cert) == [0] * 15
    space = exactla.RowSpace(g2.n_lines)
    space.extend(span2.basis)
    assert space.contains(cert)
    nullity, vec = drq_support(g2, span2, c)
    assert nullity == 15 - v.rank and vec is not None


def test_certificate_is_the_drq_when_nothing_else_fits(g2, drqs2):
    seen = 0
    for d in drqs2:
        c = embed_drq_complex(g2, d, seed=0)
        v = is_admissible(g2, c)
        if v.rank == 14:
            seen += 1
            cert = v.certificate_on_all_lines(g2.n_lines)
            dv = drq_vector(d, g2.n_lines)
            assert cert == [Fraction(int(x)) for x in dv] or cert == [Fraction(-int(x)) for x in dv]
    assert seen > 0


def test_embedded_drq_q3(g3, drqs3):
    for i in (0, 1234, 10529):
        c = embed_drq_complex(g3, drqs3[i], seed=i)
        assert len(c) == 40
        assert not is_admissible(g3, c).admissible


@pytest.mark.parametrize("q", [2, 3])
def test_search_is_admissible(q):
    g = geometry(q)
    for seed in range(3):
        c = search_admissible(g, seed)
        v = is_admissible(g, c)
        assert v.admissible and v.rank == g.n_points and v.certificate is None
    assert search_admissible(g, 5) == search_admissible(g, 5)


def test_search_q2_seed0(g2, span2):
    c = search_admissible(g2, 0)
    assert len(c) == 15 and is_admissible(g2, c).rank == 15
    assert supports_drq_combination(g2, span2, c) is None


def test_random_complex(g3):
    for seed in range(20):
        c = random_complex(g3, seed)
        assert len(c) == 40 and len(set(c.lines)) == 40
    assert random_complex(g3, 7) == random_complex(g3, 7)
    assert random_complex(g3, 7) != random_complex(g3, 8)


def test_invert_examples(g2):
    c = search_admissible(g2, 0)
    p = 3
    ind = [int(x == p) for x in range(15)]
    assert invert_restricted(g2, c, xray(g2, ind, c.lines)) == ind
    assert invert_restricted(g2, c, [3] * 15) == [1] * 15


@pytest.mark.parametrize("q", [2, 3])
def test_invert_round_trip(q):
    g = geometry(q)
    c = search_admissible(g, q)
    for seed in range(3):
        f = random_f(g.n_points, seed)
        assert invert_restricted(g, c, xray(g, f, c.lines)) == f


def test_invert_errors(g2, drqs2):
    bad = embed_drq_complex(g2, drqs2[5], 1)
    with pytest.raises(NotAdmissible):
        invert_restricted(g2, bad, [0] * 15)
    with pytest.raises(WrongSize):
        invert_restricted(g2, list(range(10)), [0] * 10)
    with pytest.raises(WrongSize):
        is_admissible(g2, list(range(16)))
    # over-determined variant: data outside the image is rejected
    lines = list(range(35))
    rf = xray(g2, random_f(15, 0))
    assert xray(g2, invert_restricted(g2, lines, rf)) == rf
    rf[0] += 1
    with pytest.raises(InconsistentData):
        invert_restricted(g2, lines, rf)


def test_line_complex_rejects_repeats():
    with pytest.raises(ValueError):
        LineComplex((1, 1, 2))


def test_deciders_agree_q2(g2, span2):
    records = sample_admissibility(g2, 200, seed=0, span=span2)
    assert all(r.agree for r in records)
    assert any(r.admissible for r in records) and not all(r.admissible for r in records)


def test_deciders_agree_q3(g3, span3):
    records = sample_admissibility(g3, 20, seed=0, span=span3, threads=2)
    assert all(r.agree for r in records)
    assert [r.seed for r in records] == list(range(20))


def test_sampling_independent_of_threads(g2):
    a = sample_admissibility(g2, 30, seed=5, threads=1)
    b = sample_admissibility(g2, 30, seed=5, threads=4)
    assert a == b


def test_swaps_keep_the_equivalence(g2, span2):
    """Swapping one line of a searched complex: rank verdict and DRQ verdict still agree."""
    c = search_admissible(g2, 0)
    outside = [l for l in range(35) if l not in c.lines]
    kept = 0
    for out_line in c.lines:
        for in_line in outside[::4]:
            swapped = LineComplex(tuple(l for l in c.lines if l != out_line) + (in_line,))
            v = is_admissible(g2, swapped)
            nullity, _ = drq_support(g2, span2, swapped)
            assert nullity == 15 - v.rank
            kept += v.admissible
            if v.admissible:
                f = random_f(15, in_line)
                assert invert_restricted(g2, swapped, xray(g2, f, swapped.lines)) == f
    assert kept > 0


def test_file_round_trip(tmp_path, g2):
    c = search_admissible(g2, 1)
    path = tmp_path / "c.json"
    save_complex(path, g2, c)
    g, c2 = load_complex(path)
    assert g is g2 and c2 == c
    data = json.loads(path.read_text())
    assert data == {"q": 2, "p": 2, "k": 1, "modulus": [0, 1], "lines": list(c.lines)}


def test_pluecker_form(g4):
    c = search_admissible(g4, 0)
    data = complex_to_dict(g4, c)
    del data["lines"]
    data["pluecker"] = [[int(x) for x in g4.lines[l]] for l in reversed(c.lines)]
    g, c2 = complex_from_dict(data)
    assert g is g4 and c2 == c


def test_verdict_json(g2, drqs2):
    v = is_admissible(g2, embed_drq_complex(g2, drqs2[0], 0))
    d = json.loads(json.dumps(v.to_dict()))
    assert d["admissible"] is False and all("/" in x for x in d["certificate"])
