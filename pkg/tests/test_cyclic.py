from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfweil import cyclic
from hopfweil.cyclic import (QuotientCoalgebraClass, TensorChain, adjoint_weight, build_dg_cyclic,
                             build_hopf_cyclic, build_relative_cyclic, coboundary_search, codegeneracy,
                             coface, connes_B, cyclic_operator, de_rham, form_samples, hochschild_b,
                             hopf_samples, relative_samples, total_differential, total_is_zero,
                             verify_cyclic_identities)
from hopfweil.hopf_hn import builtin_presentation

H1 = builtin_presentation(1, 6)
HM = build_hopf_cyclic(H1)


def chain(*names):
    return HM.element_chain(*[H1.by_name(n) if n != "1" else H1.one() for n in names])


def test_hopf_coface_and_tau_examples():
    d1 = chain("d1")
    assert coface(d1, 0) == chain("1", "d1")
    assert cyclic_operator(d1) == -d1
    assert cyclic_operator(d1, 2) == d1
    # sigma_i applies the counit to slot i + 1
    assert codegeneracy(chain("1", "Y"), 0) == chain("Y")
    assert codegeneracy(chain("Y", "1"), 1) == chain("Y")
    assert codegeneracy(chain("Y", "1"), 0).is_zero()


def test_hopf_b_and_B_examples():
    assert hochschild_b(chain("d1")).is_zero()
    assert hochschild_b(TensorChain(HM, 0, {(): Fraction(1)})).is_zero()
    assert connes_B(chain("d1")).is_zero()
    assert connes_B(chain("1", "1")).is_zero()
    B = connes_B(chain("Y"))
    assert connes_B(B).is_zero()


def test_total_of_zero_and_unit():
    assert total_is_zero(total_differential(HM.zero(2)))
    assert total_is_zero(total_differential(TensorChain(HM, 0, {(): Fraction(1)})))


def test_hopf_identities_small():
    rep = verify_cyclic_identities(HM, 2, hopf_samples(HM, 2, 2, per_q=15))
    assert rep["pass"], [c for c in rep["checks"] if not c["pass"]]


def _literal_B(c):
    """The Connes boundary without the extra cyclic factor in front of the last codegeneracy."""
    M, q = c.module, c.q
    x = dict(c.terms)
    cyclic._acc(x, M.tau(q, c.terms), -((-1) ** q))
    cur = M.codegeneracy(q - 1, q - 1, x)
    out = {}
    for i in range(q):
        cyclic._acc(out, cur, (-1) ** ((q - 1) * i))
        cur = M.tau(q - 1, cur)
    return TensorChain(M, q - 1, out)


def test_extra_tau_is_needed_in_B():
    M = build_dg_cyclic(1, 1)
    F1 = M.forms(1)
    samples = [M.tensor(a, b) for a in (F1.ell(), F1.g()[0][0], F1.inv_det())
               for b in (F1.ell(), F1.g()[0][0], F1.theta()[0][0])]
    literal_fails = False
    for c in samples:
        assert (connes_B(hochschild_b(c)) + hochschild_b(connes_B(c))).is_zero()
        s = _literal_B(hochschild_b(c)) + hochschild_b(_literal_B(c))
        literal_fails = literal_fails or not s.is_zero()
    assert literal_fails


def test_relative_invariants_and_quotient():
    R = build_relative_cyclic(H1)
    assert R.invariant_basis(3) == [()]
    X, Y = H1.by_name("X"), H1.by_name("Y")
    assert QuotientCoalgebraClass(H1, (X * Y).terms).render() == "0"
    assert QuotientCoalgebraClass(H1, X.terms).render() == "[X]"
    d1 = next(iter(H1.by_name("d1").terms))
    x = next(iter(X.terms))
    assert adjoint_weight(H1, d1) == {1: 1}
    assert adjoint_weight(H1, x) == {1: 1}


def test_relative_identities_pass_on_invariant_samples():
    R = build_relative_cyclic(H1)
    rep = verify_cyclic_identities(R, 3, relative_samples(R, 3, 2))
    assert rep["pass"]


def test_relative_tau_depends_on_representative():
    # delta(Y) = 1, so S_delta(h Y) does not vanish modulo H U+(gl_1): the
    # literal cyclic operator is not defined on classes.  Recorded, not hidden.
    R = build_relative_cyclic(H1)
    samples = relative_samples(R, 1, 2)
    entry = R.representative_check(samples[1], [()])
    assert not entry["pass"]
    assert "depends on the representative" in entry["witness"]


@pytest.mark.parametrize("variant,J", [("algebraic", None), ("germ", 1), ("germ", 2), ("germ", 4)])
def test_form_module_identities_n1(variant, J):
    M = build_dg_cyclic(1, 1, variant, J)
    rep = verify_cyclic_identities(M, 3, form_samples(M, 3))
    assert rep["pass"], [c for c in rep["checks"] if not c["pass"]]


def test_form_module_examples():
    M = build_dg_cyclic(1, 1)
    F1, F2 = M.forms(1), M.forms(2)
    ell, th = F1.ell(), F1.theta()[0][0]
    assert coface(M.tensor(ell), 1) == M.element(2, F2.ell(1) + F2.ell(2))
    assert hochschild_b(M.tensor(ell, th)).is_zero()
    # d(l (x) theta) = dl (x) theta + l (x) d theta; here dl = theta and d theta = 0
    assert de_rham(M.tensor(ell, th)).is_zero()
    big = build_dg_cyclic(1, None)
    assert de_rham(big.tensor(ell, th)) == big.tensor(th, th)
    assert M.tensor(th, th).is_zero()  # form degree 2 > m = 1


def test_coboundary_search():
    M = build_dg_cyclic(1, 1)
    F1 = M.forms(1)
    ansatz = [M.tensor(F1.ell()), M.tensor(F1.g()[0][0]), M.tensor(F1.ell() * F1.ell()),
              M.element(0, M.forms(0).one())]
    target = total_differential(ansatz[2])
    sol = coboundary_search(target, ansatz)
    assert sol is not None
    recon = {}
    for x, a in zip(sol, ansatz):
        for qq, part in total_differential(a).items():
            recon[qq] = recon[qq] + part * x if qq in recon else part * x
    assert all((recon[q] - target[q]).is_zero() for q in target)
    zero = coboundary_search(M.zero(2), ansatz)
    assert zero is not None
    F2 = M.forms(2)
    gv = M.element(2, F2.ell(1) * F2.theta(2)[0][0])
    assert coboundary_search(gv, ansatz) is None


def test_total_preserves_truncation():
    M = build_dg_cyclic(2, 1)
    for q, chains in form_samples(M, 2).items():
        for c in chains:
            for part in total_differential(c).values():
                if part.is_zero():
                    continue
                fd = part.formdeg()
                assert fd is None or (c.formdeg() is not None and c.formdeg() <= fd <= 1)


N1 = build_dg_cyclic(1, 1)
ATOMS = [N1.forms(1).ell(), N1.forms(1).g()[0][0], N1.forms(1).inv_det(), N1.forms(1).theta()[0][0],
         N1.forms(1).one()]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3).flatmap(lambda q: st.lists(
    st.tuples(st.lists(st.sampled_from(range(len(ATOMS))), min_size=q, max_size=q), st.integers(-2, 2)),
    min_size=1, max_size=3)))
def test_total_squares_to_zero_on_random_chains(terms):
    acc = None
    for idx, c in terms:
        ch = N1.tensor(*[ATOMS[i] for i in idx]) * c
        acc = ch if acc is None else acc + ch
    again = {}
    for part in total_differential(acc).values():
        for qq, p2 in total_differential(part).items():
            again[qq] = again[qq] + p2 if qq in again else p2
    assert all(v.is_zero() for v in again.values())
    assert hochschild_b(hochschild_b(acc)).is_zero()
    assert cyclic_operator(acc, acc.q + 1) == acc
