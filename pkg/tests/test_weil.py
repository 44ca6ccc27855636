import pytest

from hopfweil.weil import (basic_subcomplex, build_weil, build_wo, complex_cohomology, om, th)


@pytest.mark.parametrize("n,m", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)])
def test_d_squared_on_every_basis_monomial(n, m):
    W = build_weil(n, m)
    for deg, monos in W.basis_by_degree().items():
        for mono in monos:
            x = W.sig.one()
            for i, e in mono:
                x = x * W.sig.gen(i) ** e
            assert W.d(W.d(x)).is_zero()


def test_weil_gl1_low_truncations():
    W = build_weil(1, 1)
    t, o = W.sig.gen(th(1, 1)), W.sig.gen(om(1, 1))
    assert W.d(t) == o and W.d(o).is_zero()
    assert sum(len(v) for v in W.basis_by_degree().values()) == 4
    W0 = build_weil(1, 0)
    assert W0.d(W0.sig.gen(th(1, 1))).is_zero()


def test_degree_one_slice_at_n2():
    assert len(build_weil(2, 2).basis_by_degree()[1]) == 4


def test_wo_generators_and_truncation():
    wo = build_wo(2)
    assert wo.sig.names == ["u1", "c1", "c2"]
    c1, c2 = wo.sig.gen("c1"), wo.sig.gen("c2")
    assert (c1 * c2).is_zero()  # weight 3 > 2
    assert (c1 * c1).terms
    assert build_wo(2, odd_top=3).sig.names == ["u1", "u3", "c1", "c2"]


def test_wo_derivation_examples():
    wo = build_wo(1)
    u1, c1 = wo.sig.gen("u1"), wo.sig.gen("c1")
    assert wo.d(u1) == c1
    assert wo.d(wo.sig.one()).is_zero()
    assert wo.d(u1 * c1).is_zero()
    assert (u1 * u1).is_zero()
    assert c1 * u1 == u1 * c1


def test_wo1_cohomology():
    rep = complex_cohomology(build_wo(1))
    assert rep.dims == [1, 0, 0, 1]
    assert [r.render() for r in rep.representatives[3]] == ["u1*c1"]
    assert rep.checks["euler_characteristic"]


def test_weil_gl1_agrees_with_wo1():
    assert complex_cohomology(build_weil(1, 1)).dims == complex_cohomology(build_wo(1)).dims


def test_basic_gl1():
    rep = complex_cohomology(basic_subcomplex(build_weil(1, 1), "GL"))
    assert rep.dims[:3] == [1, 0, 1] and not any(rep.dims[3:])
    assert rep.representatives[2][0].render() == "Om11"
    assert rep.checks["closed_under_d"]


def test_basic_o1_is_everything():
    B = basic_subcomplex(build_weil(1, 1), "O")
    assert sum(B.complex.dim(k) for k in B.complex.degrees()) == 4


def _trim(d):
    d = list(d)
    while d and d[-1] == 0:
        d.pop()
    return d


def test_relative_o2_matches_wo2():
    a = complex_cohomology(basic_subcomplex(build_weil(2, 2), "O")).dims
    b = complex_cohomology(build_wo(2)).dims
    assert _trim(a) == _trim(b)


def test_euler_characteristic_both_ways():
    for C in (build_weil(2, 1), build_wo(2), basic_subcomplex(build_weil(2, 2), "SO")):
        rep = complex_cohomology(C)
        assert rep.euler_chain == rep.euler_cohomology
