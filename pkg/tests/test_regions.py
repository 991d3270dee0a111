from fractions import Fraction

import numpy as np
import pytest

from cusp_collision.regions import (CONVECTIVE, DIFFUSIVE, TIE, ParameterPoint, admissible_full,
                                    admissible_heat, admissible_noconv, auxiliary_thresholds,
                                    convective_bound, diffusive_bound, direct_winner, equivalent_window,
                                    full_window, noconv_bound, ordering_chain, starovoitov_blocked, sweep,
                                    winner_rule)


def frac_convective(p, g):
    p, g = Fraction(p), Fraction(g)
    return 3 * (4 * p * g - 3 * p - 6 * g) / (p * g + 3 * p + 6 * g)


def test_full_example():
    v = admissible_full(ParameterPoint(2.5, 3.0, 0.1))
    assert v.admissible and v.binding == DIFFUSIVE
    assert v.alpha_bound == pytest.approx(0.125, abs=1e-15)
    assert v.constraints["convective"] == pytest.approx(float(frac_convective(Fraction(5, 2), 3)), abs=1e-15)


def test_full_outside_window():
    v = admissible_full(ParameterPoint(2.0, 3.0, 0.01))
    assert not v.admissible and not v.window and v.boundary


def test_full_large_gamma():
    v = admissible_full(ParameterPoint(2.0, 1e6, 0.3))
    assert v.admissible
    assert v.alpha_bound == pytest.approx(1 / 3, abs=1e-12)


def test_alpha_on_bound_is_inadmissible():
    v = admissible_full(ParameterPoint(2.5, 3.0, 0.125))
    assert not v.admissible and v.boundary


def test_noconv_examples():
    v = admissible_noconv(ParameterPoint(1.8, 3.0, 0.2))
    assert v.admissible and v.binding == CONVECTIVE
    assert v.alpha_bound == pytest.approx(3 / 14, abs=1e-12)
    assert not admissible_noconv(ParameterPoint(1.8, 2.0, 0.01)).admissible


def test_heat_example():
    v = admissible_heat(4.0, 3.0, 0.1)
    assert v.admissible and v.binding == DIFFUSIVE
    assert v.alpha_bound == pytest.approx(3 / 29, abs=1e-15)
    assert not admissible_heat(3.0, 3.0, 0.01).admissible


def test_heat_monotone_in_beta():
    b = [admissible_heat(10.0, beta, 0.01).alpha_bound for beta in np.linspace(2.1, 50, 100)]
    assert np.all(np.diff(b) >= 0)


def test_auxiliary_thresholds():
    aux = {a["term"]: a for a in auxiliary_thresholds(ParameterPoint(2.5, 3.0, 0.1))}
    assert aux["I4"]["alpha_below"] == pytest.approx(0.125)
    assert aux["I2f"]["alpha_below"] == pytest.approx(1.5)
    assert aux["I5"]["alpha_below"] == pytest.approx(2.0)
    assert all(a["holds"] for a in aux.values())


@pytest.mark.parametrize("p, g, expected", [(2.5, 3.0, DIFFUSIVE), (2.5, 2.0, CONVECTIVE),
                                            (1.7, 100.0, CONVECTIVE), (2.5, 7.5 / 3.5, TIE)])
def test_winner_examples(p, g, expected):
    assert winner_rule(ParameterPoint(p, g, 0.1)) == expected
    assert direct_winner(ParameterPoint(p, g, 0.1)) == expected


def test_noconv_tie():
    p = 2.5
    g = 3 * p / (4 * p - 6)
    assert winner_rule(ParameterPoint(p, g, 0.1), "noconv") == TIE
    assert direct_winner(ParameterPoint(p, g, 0.1), "noconv") == TIE


def test_winner_rule_agrees_on_grid():
    for mode in ("full", "noconv"):
        for p in np.linspace(1.05, 2.99, 60):
            for g in np.linspace(1.51, 20, 60):
                pt = ParameterPoint(p, g, 0.1)
                assert winner_rule(pt, mode) == direct_winner(pt, mode)


def test_equivalent_window_examples():
    assert equivalent_window(2.5, 2.5) == (True, True)
    assert equivalent_window(2.1, 2.0) == (False, False)
    assert equivalent_window(2.5, 3.5) == (False, False)


def test_ordering_chain_exact_points():
    # Exact rational arithmetic at a few points inside the no-convection window
    for p, g in [(Fraction(2), Fraction(3)), (Fraction(5, 2), Fraction(2)), (Fraction(29, 10), Fraction(9))]:
        c = frac_convective(p, g)
        n = 9 * (p * g - p - g) / (2 * p * g + 3 * p + 3 * g)
        assert c <= n <= min(3 * (g - 1) / (g + 1), 3 - 3 / g)
    c, n, m = ordering_chain([2.0, 2.5], [3.0, 2.0])
    assert np.all(c <= n) and np.all(n <= m)


def test_large_gamma_limits():
    assert convective_bound(2.0, 1e12) == pytest.approx(0.75, rel=1e-9)
    assert noconv_bound(2.0, 1e12) == pytest.approx(9 * (2 - 1) / (2 * 2 + 3), rel=1e-9)
    assert diffusive_bound(2.0) == pytest.approx(1 / 3)


def test_starovoitov():
    assert starovoitov_blocked(1.0, 4.0)
    assert not starovoitov_blocked(1.0, 3.9)
    assert starovoitov_blocked(0.5, 7.0)
    with pytest.raises(ValueError):
        starovoitov_blocked(0.0, 2.0)


def test_full_window_branches():
    assert full_window(2.5, 5.0)
    assert not full_window(1.9, 5.0)
    assert not full_window(3.0, 5.0)


def test_point_validation():
    for args in [(2.0, 1.5, 0.1), (1.0, 3.0, 0.1), (2.0, 3.0, 0.0), (2.0, 3.0, 1.1)]:
        with pytest.raises(ValueError):
            ParameterPoint(*args)


def test_sweep_sorted_and_shapes():
    t = sweep("full", (1.8, 2.9), (2.0, 6.0), (4, 3), alpha=0.1)
    assert len(t.rows) == 12 and t.columns[-1] == "admissible"
    keys = [(r[0], r[1]) for r in t.rows]
    assert keys == sorted(keys)


def test_sweep_empty_and_single():
    assert sweep("heat", (3.5, 5), (2.5, 4), 0).rows == []
    t = sweep("heat", (4.0, 5.0), (3.0, 4.0), 1)
    assert t.rows[0][:2] == [4.0, 3.0]
    assert t.rows[0][2] == pytest.approx(3 / 29)


def test_sweep_skips_invalid_points():
    t = sweep("full", (0.5, 2.5), (3.0, 3.0), (5, 1))
    assert all(r[0] > 1 for r in t.rows)
    with pytest.raises(ValueError):
        sweep("bogus", (1, 2), (1, 2), 2)


def test_winner_low_gamma_high_p():
    pt = ParameterPoint(2.9, 1.9, 0.01)
    assert full_window(2.9, 1.9)
    assert winner_rule(pt) == direct_winner(pt)
