from fractions import Fraction

from src.linalg.simplex import solve_lp


def test_simple_maximization():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6
    result = solve_lp([-1, -1], a_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert result.status == "optimal"
    assert result.x == [Fraction(8, 5), Fraction(6, 5)]
    assert result.objective == Fraction(-14, 5)


def test_equality_with_negative_rhs():
    # min x  s.t.  -x - y = -3,  y <= 1
    result = solve_lp([1, 0], a_eq=[[-1, -1]], b_eq=[-3], a_ub=[[0, 1]], b_ub=[1])
    assert result.status == "optimal"
    assert result.x == [2, 1]


def test_infeasible():
    result = solve_lp([1], a_eq=[[1]], b_eq=[2], a_ub=[[1]], b_ub=[1])
    assert result.status == "infeasible"
    assert result.x is None


def test_unbounded():
    result = solve_lp([-1, 0], a_eq=[[1, -1]], b_eq=[0])
    assert result.status == "unbounded"


def test_redundant_equalities():
    result = solve_lp([1, 1], a_eq=[[1, 1], [2, 2]], b_eq=[2, 4])
    assert result.status == "optimal"
    assert result.objective == 2


def test_degenerate_problem_terminates():
    # classic cycling example under the largest-coefficient rule
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    a_ub = [
        [Fraction(1, 4), -60, Fraction(-1, 25), 9],
        [Fraction(1, 2), -90, Fraction(-1, 50), 3],
        [0, 0, 1, 0],
    ]
    result = solve_lp(c, a_ub=a_ub, b_ub=[0, 0, 1])
    assert result.status == "optimal"
    assert result.objective == Fraction(-1, 20)
