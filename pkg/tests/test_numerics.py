import math

import numpy as np
import pytest

from stealthattack.errors import InvalidBracketError
from stealthattack.numerics import Bracket, bisect, grid_sign_scan, max_bisect_iterations


def f_sqrt2(x):
    return x * x - 2.0


def test_bisect_sqrt2():
    root = bisect(f_sqrt2, Bracket.of(f_sqrt2, 1.0, 2.0), tol=1e-12)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_bisect_identity_on_symmetric_bracket():
    assert bisect(lambda x: x, Bracket(-1.0, 1.0, -1.0, 1.0)) == 0.0


def test_bisect_u_minus_log_u():
    g = lambda u: u - math.log(u) - 2.0
    root = bisect(g, Bracket.of(g, 1.0, 10.0), tol=1e-12)
    assert root == pytest.approx(3.14619322062, abs=1e-10)
    assert abs(g(root)) < 1e-11


def test_bisect_rejects_bad_brackets():
    with pytest.raises(InvalidBracketError):
        Bracket(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(InvalidBracketError):
        bisect(f_sqrt2, Bracket.of(f_sqrt2, 2.0, 3.0))
    with pytest.raises(InvalidBracketError):
        bisect(f_sqrt2, Bracket.of(f_sqrt2, 1.0, 2.0), tol=0.0)


def test_bisect_iteration_budget():
    calls = []

    def f(x):
        calls.append(x)
        return x - 0.3

    bisect(f, Bracket(0.0, 1.0, -0.3, 0.7), tol=1e-9)
    assert len(calls) <= max_bisect_iterations(1.0, 1e-9) == 30


def test_bisect_is_deterministic():
    br = Bracket.of(np.cos, 0.0, 3.0)
    assert bisect(np.cos, br) == bisect(np.cos, br)


def test_scan_counts_sign_changes():
    # roots at 1, 2, 3 inside (0.5, 3.7)
    f = lambda x: (x - 1) * (x - 2) * (x - 3)
    brackets = grid_sign_scan(f, 0.5, 3.7, 101)
    assert len(brackets) == 3
    assert [b.lo for b in brackets] == sorted(b.lo for b in brackets)
    for b, r in zip(brackets, (1, 2, 3)):
        assert b.lo <= r <= b.hi


@pytest.mark.parametrize("f, expected", [(lambda x: x - 0.25, 1), (lambda x: x + 5, 0)])
def test_scan_monotone(f, expected):
    assert len(grid_sign_scan(f, 0.0, 1.0, 64)) == expected


def test_scan_grid_zero_reported_once():
    # grid 0, 0.5, 1.0 hits the root exactly
    assert len(grid_sign_scan(lambda x: x - 0.5, 0.0, 1.0, 3)) == 1


def test_scan_refinement_keeps_roots():
    f = lambda x: math.sin(7 * x)
    coarse = grid_sign_scan(f, 0.1, 3.0, 50)
    fine = grid_sign_scan(f, 0.1, 3.0, 100)
    roots_c = [bisect(f, b) for b in coarse]
    roots_f = [bisect(f, b) for b in fine]
    for r in roots_c:
        assert min(abs(r - x) for x in roots_f) < 1e-9


def test_scan_rejects_bad_args():
    with pytest.raises(InvalidBracketError):
        grid_sign_scan(lambda x: x, 1.0, 0.0)
    with pytest.raises(InvalidBracketError):
        grid_sign_scan(lambda x: x, 0.0, 1.0, 1)
