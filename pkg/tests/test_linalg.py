from __future__ import annotations

from fractions import Fraction

import pytest

from ttlab import linalg
from ttlab.rng import CounterRandom


def test_rank_hand_cases():
    assert linalg.rank([[1, 0], [0, 1]]) == 2
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.rank([[0, 0], [0, 0]]) == 0
    assert linalg.rank([[Fraction(1, 2), Fraction(1, 3)]]) == 1


def test_nullspace_annihilates():
    rng = CounterRandom(7, "nullspace")
    for _ in range(25):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
        basis = linalg.nullspace(m)
        assert len(basis) == cols - linalg.rank(m)
        for vec in basis:
            for row in m:
                assert sum(a * b for a, b in zip(row, vec)) == 0


def test_solve_square_round_trip():
    rng = CounterRandom(8, "solve")
    solved = 0
    while solved < 10:
        n = rng.randint(1, 5)
        m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        if linalg.rank(m) < n:
            continue
        cols = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(2)]
        xs = linalg.solve_square(m, cols)
        for col, x in zip(cols, xs):
            prod = [sum(m[i][j] * x[j] for j in range(n)) for i in range(n)]
            assert prod == [Fraction(v) for v in col]
        solved += 1


def test_solve_square_rejects_singular():
    with pytest.raises(ValueError):
        linalg.solve_square([[1, 2], [2, 4]], [[1, 0]])


def test_span_dimension_mod():
    v = [[1, 0, 0], [0, 1, 0]]
    rel = [[1, 1, 0]]
    assert linalg.span_dimension_mod(v, rel) == 1
    assert linalg.span_dimension_mod(v, []) == 2
    assert linalg.span_dimension_mod([], v) == 0


def test_rank_gf2_matches_rational_rank_on_01_matrices():
    # over GF(2) rank can drop below the rational rank, never exceed it
    rng = CounterRandom(9, "gf2")
    for _ in range(50):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]
        assert linalg.rank_gf2(m) <= linalg.rank(m)
    assert linalg.rank_gf2([[1, 1], [1, 1]]) == 1
    assert linalg.rank_gf2([[1, 0], [1, 1]]) == 2
    assert linalg.rank_gf2([[2, 4], [6, 8]]) == 0
