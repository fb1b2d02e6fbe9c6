import random
from fractions import Fraction

import pytest

from bblab import simplex
from bblab.polytope import EQ, LE

from _oracles import brute_lp


def frac(rng, den=6, lo=-4, hi=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_leq_instance(rng, nvars, nrows):
    rows = [[frac(rng) for _ in range(nvars)] for _ in range(nrows)]
    rhs = [frac(rng) for _ in range(nrows)]
    # explicit upper bounds keep the region bounded so the brute oracle applies
    for j in range(nvars):
        rows.append([Fraction(int(t == j)) for t in range(nvars)])
        rhs.append(Fraction(rng.randint(1, 3)))
    return rows, rhs


def test_known_fixed_cases():
    r = simplex.solve(2, [[1, 1], [1, 0]], [LE, LE], [1, Fraction(1, 2)],
                      objective=[1, 1], maximize=True)
    assert r.status == "optimal" and r.value == 1

    r = simplex.solve(1, [[1], [-1]], [LE, LE], [0, -1], want_farkas=True)
    assert r.status == "infeasible"
    assert r.farkas == (Fraction(1), Fraction(1))

    r = simplex.solve(2, [[1, 1]], [EQ], [1], objective=[0, 1], maximize=True)
    assert r.status == "optimal" and r.value == 1

    r = simplex.solve(1, [], [], [], objective=[1], maximize=True)
    assert r.status == "unbounded"


@pytest.mark.parametrize("nvars,nrows,trials", [(1, 2, 60), (2, 3, 60), (3, 4, 40)])
def test_random_lps_match_vertex_enumeration(nvars, nrows, trials):
    rng = random.Random(1000 * nvars + nrows)
    for _ in range(trials):
        rows, rhs = random_leq_instance(rng, nvars, nrows)
        c = [frac(rng) for _ in range(nvars)]
        got = simplex.solve(nvars, rows, [LE] * len(rows), rhs,
                            objective=c, maximize=True, want_farkas=True)
        want_status, want_value = brute_lp(nvars, rows, rhs, objective=c)
        assert got.status == want_status
        if want_status == "optimal":
            assert got.value == want_value
            for row, b in zip(rows, rhs):
                assert sum(a * v for a, v in zip(row, got.x)) <= b
            assert all(v >= 0 for v in got.x)


@pytest.mark.parametrize("seed", range(5))
def test_farkas_certificates_are_exact(seed):
    rng = random.Random(9000 + seed)
    found = 0
    while found < 8:
        rows, rhs = random_leq_instance(rng, 2, 4)
        got = simplex.solve(2, rows, [LE] * len(rows), rhs, want_farkas=True)
        if got.status != "infeasible":
            continue
        found += 1
        u = got.farkas
        assert all(ui >= 0 for ui in u)
        for j in range(2):
            assert sum(u[i] * rows[i][j] for i in range(len(rows))) >= 0
        assert sum(u[i] * rhs[i] for i in range(len(rows))) < 0


def test_equality_rows_and_degenerate_pivots():
    rng = random.Random(7)
    for _ in range(40):
        # x + y + z = 1 simplex slice with random extra cuts and objective
        rows = [[1, 1, 1]]
        rels = [EQ]
        rhs = [Fraction(1)]
        for _ in range(2):
            rows.append([frac(rng) for _ in range(3)])
            rels.append(LE)
            rhs.append(frac(rng, lo=0))
        c = [frac(rng) for _ in range(3)]
        got = simplex.solve(3, rows, rels, rhs, objective=c, maximize=True)
        if got.status == "optimal":
            assert sum(got.x) == 1

    # redundant equalities exercise the drive-out/drop-row path
    r = simplex.solve(2, [[1, 1], [2, 2]], [EQ, EQ], [1, 2],
                      objective=[1, 0], maximize=True)
    assert r.status == "optimal" and r.value == 1
