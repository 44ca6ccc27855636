import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hopfweil import group_forms as gf
from hopfweil import simplicial_cw as sc


def iterated_integral(a, b):
    """int_0^1 int_0^{1-t1} t1^a t2^b dt2 dt1 by expanding (1 - t1)^(b+1)."""
    total = Fraction(0)
    for k in range(b + 2):
        total += Fraction(comb(b + 1, k) * (-1) ** k, a + k + 1)
    return total / (b + 1)


def test_volume_and_moments():
    S = sc.simplex_algebra(2)
    vol = sc.integrate_simplex(S, S.dt(1) * S.dt(2))
    assert vol.terms == {(): Fraction(1, 2)}
    m = sc.integrate_simplex(S, S.t(1) * S.t(2) * S.dt(1) * S.dt(2))
    assert m.terms == {(): Fraction(1, 24)}


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (2, 3), (4, 1), (3, 3)])
def test_factorial_formula_matches_iterated_integration(a, b):
    S = sc.simplex_algebra(2)
    w = S.t(1) ** a * S.t(2) ** b * S.dt(1) * S.dt(2)
    assert sc.integrate_simplex(S, w).terms.get((), 0) == iterated_integral(a, b)


def test_integrate_one_simplex_with_base():
    S = sc.simplex_algebra(1, 1)
    th0 = S.embed(S.base.theta(1)[0][0])
    th1 = S.embed(S.base.theta(2)[0][0])
    out = sc.integrate_simplex(S, S.dt(1) * (th1 - th0))
    assert out == S.base.theta(2)[0][0] - S.base.theta(1)[0][0]


def test_integration_ignores_wrong_dt_degree():
    S = sc.simplex_algebra(3)
    w = S.t(1) * S.dt(1) * S.dt(2) + S.t(2) ** 2 + S.dt(3)
    assert sc.integrate_simplex(S, w).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(-4, 4), st.integers(-4, 4))
def test_integration_is_linear(a, b, x, y):
    S = sc.simplex_algebra(2)
    u = S.t(1) ** a * S.dt(1) * S.dt(2)
    v = S.t(2) ** b * S.dt(1) * S.dt(2)
    lhs = sc.integrate_simplex(S, x * u + y * v)
    rhs = x * sc.integrate_simplex(S, u) + y * sc.integrate_simplex(S, v)
    assert lhs == rhs


@pytest.mark.parametrize("p", [1, 2, 3])
def test_stokes_on_twenty_random_forms(p):
    S = sc.simplex_algebra(p)
    rng = random.Random(100 + p)
    for _ in range(20):
        w = sc.random_stokes_form(S, rng)
        assert sc.stokes_defect(S, w).is_zero()


def test_face_restriction_of_vertex_coordinates():
    S = sc.simplex_algebra(2)
    L, phi = sc.face_restriction(S, 0)
    assert phi(S.t(0)).is_zero()
    L, phi = sc.face_restriction(S, 2)
    assert phi(S.t(2)).is_zero() and phi(S.t(1)) == L.t(1)


@pytest.mark.parametrize("n,p", [(1, 1), (2, 1), (2, 2)])
def test_bianchi(n, p):
    S = sc.simplex_algebra(p, n)
    th = sc.simplicial_connection(S)
    Om = sc.curvature(S, th)
    assert all(x.is_zero() for row in sc.bianchi_defect(S, th, Om) for x in row)


@pytest.mark.parametrize("powers", [(1,), (2,), (1, 1)])
def test_chern_weil_forms_are_closed(powers):
    S, w = sc.chern_weil_form(sc.InvariantPolynomial(powers), 1, 2)
    assert S.d(w).is_zero()


def test_invariant_polynomial_rejects_bad_powers():
    with pytest.raises(sc.SimplexError):
        sc.InvariantPolynomial((0,))


def test_newton_table_on_diagonal_matrices():
    for eig in ([2, 3], [1, -1, 4], [5, 0, 2]):
        tr = lambda k: sum(Fraction(e) ** k for e in eig)
        elem = {1: sum(eig), 2: sum(eig[i] * eig[j] for i in range(len(eig)) for j in range(i + 1, len(eig))),
                3: eig[0] * eig[1] * eig[2] if len(eig) == 3 else 0}
        for k, name in ((1, "c1"), (2, "c2"), (3, "c3")):
            val = sum(c * _prod(tr(p) for p in pat) for pat, c in sc.NEWTON_TABLE[name].items())
            assert val == elem[k]


def _prod(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def test_chern_cocycle_n1_k1():
    rep = sc.chern_cocycle(1, 1)
    assert rep["pass"]
    c1 = rep["components"][1]
    F1 = c1.module.forms(1)
    # gamma = g_0 g_1^-1, so theta_1 - theta_0 = -gamma^-1 d gamma
    assert c1 == c1.module.element(1, -F1.theta()[0][0])
    assert rep["components"][0].is_zero() and rep["components"][2].is_zero()


def test_chern_cocycle_n1_k2_is_truncated_away():
    rep = sc.chern_cocycle(1, 2)
    assert rep["pass"]
    assert all(c.is_zero() for c in rep["components"].values())


def test_chern_cocycle_n2_k1():
    assert sc.chern_cocycle(2, 1)["pass"]


def test_left_quotient_coordinates_do_not_descend():
    # with gamma_i = g_{i-1}^-1 g_i the trace form of the curvature is not basic at n = 2
    S, w = sc.chern_weil_form(sc.InvariantPolynomial((2,)), 1, 2)
    I = sc.integrate_simplex(S, w)
    F1 = gf.build_forms(2, 1, "algebraic", with_log=False)
    F2 = gf.build_forms(2, 2, "algebraic", with_log=False)
    sec = gf.NerveMap(1, [(), ((1, 1),)])
    proj = gf.NerveMap(2, (((1, -1), (2, 1)),))
    assert gf.pullback(proj, gf.pullback(sec, I, F1), F2) != I
    sec_r, proj_r = sc.section_map(1), sc.projection_map(1)
    assert gf.pullback(proj_r, gf.pullback(sec_r, I, F1), F2) == I
