"""
Forms on Delta^p x G^{p+1}, the simplicial connection and Dupont integration.

Barycentric coordinates t_0..t_p are stored through t_1..t_p (t_0 = 1 - sum).
Generators are ordered t's, dt's, then the base form algebra, so a monomial
reads  t^a dt_I beta  with the simplex part first.  Integration keeps that
convention:

    int_{Delta^p} t^a dt_1..dt_p beta = prod(a_i!) / (p + sum a_i)! * beta

which fixes the volume of the standard simplex to 1/p!.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import group_forms as gf
from .gca import AlgebraMap, Derivation, GCAElement, GCASignature


class SimplexError(ValueError):
    pass


POINT = GCASignature([], name="pt")


class SimplexAlgebra:
    """Polynomial forms on Delta^p tensored with a base form algebra (optional)."""

    def __init__(self, p: int, base: gf.FormAlgebra | None = None):
        if p < 0:
            raise SimplexError("p must be >= 0")
        self.p = p
        self.base = base
        gens = [("t%d" % i, 0) for i in range(1, p + 1)] + [("dt%d" % i, 1) for i in range(1, p + 1)]
        off = len(gens)
        self.offset = off
        base_gens = []
        if base is not None:
            base_gens = list(zip(base.sig.names, base.sig.degrees))
        weights = [0] * off + (list(base.sig.weights) if base is not None else [])
        self.sig = GCASignature(gens + base_gens, weights=weights,
                                bound=base.sig.bound if base is not None else None,
                                name="Delta^%d x %s" % (p, base.sig.name if base else "pt"))
        if base is not None:
            for lead, repl in base.sig.relations:
                self.sig.add_relation(_shift(lead, off),
                                      {_shift(m, off): c for m, c in repl.items()})
        table = {"t%d" % i: self.sig.gen("dt%d" % i) for i in range(1, p + 1)}
        if base is not None:
            for i, nm in enumerate(base.sig.names):
                img = base.d.table.get(i)
                if img is not None:
                    table[nm] = self.embed(img)
        self.d = Derivation(self.sig, table, 1)

    def embed(self, x: GCAElement) -> GCAElement:
        """A base form viewed on Delta^p x base."""
        if self.base is None:
            raise SimplexError("no base algebra")
        return GCAElement(self.sig, {_shift(m, self.offset): c for m, c in x.terms.items()})

    def t(self, i: int) -> GCAElement:
        if i == 0:
            acc = self.sig.one()
            for j in range(1, self.p + 1):
                acc = acc - self.sig.gen("t%d" % j)
            return acc
        return self.sig.gen("t%d" % i)

    def dt(self, i: int) -> GCAElement:
        if i == 0:
            acc = self.sig.zero()
            for j in range(1, self.p + 1):
                acc = acc - self.sig.gen("dt%d" % j)
            return acc
        return self.sig.gen("dt%d" % i)

    def dt_degree(self, m) -> int:
        return sum(1 for i, _ in m if self.p <= i < 2 * self.p)


def _shift(m, off):
    return tuple((i + off, e) for i, e in m)


@lru_cache(maxsize=None)
def simplex_algebra(p: int, n: int | None = None) -> SimplexAlgebra:
    """Delta^p x G^{p+1} (algebraic forms, no log), or the bare simplex when n is None."""
    base = None if n is None else gf.build_forms(n, p + 1, "algebraic", with_log=False)
    return SimplexAlgebra(p, base)


def integrate_simplex(S: SimplexAlgebra, omega: GCAElement) -> GCAElement:
    """Fibre integral over Delta^p; the result lives in the base (or is a scalar form on a point)."""
    p = S.p
    off = S.offset
    target = S.base.sig if S.base is not None else POINT
    full = tuple(range(p, 2 * p))
    out: dict = {}
    for m, c in omega.terms.items():
        a = [0] * p
        dts = []
        rest = []
        for i, e in m:
            if i < p:
                a[i] = e
            elif i < 2 * p:
                dts.append(i)
            else:
                rest.append((i - off, e))
        if tuple(dts) != full:
            continue
        num = 1
        for x in a:
            num *= factorial(x)
        val = Fraction(num, factorial(p + sum(a)))
        key = tuple(rest)
        v = out.get(key, 0) + c * val
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return GCAElement(target, out)


def face_restriction(S: SimplexAlgebra, i: int):
    """(Delta^{p-1} algebra, pullback along the face omitting vertex i); the base is untouched."""
    p = S.p
    if not 0 <= i <= p or p == 0:
        raise SimplexError("face %d of Delta^%d" % (i, p))
    L = SimplexAlgebra(p - 1, S.base)
    images = {}
    for j in range(1, p + 1):
        if i == 0:
            img = L.t(j - 1)
        elif j < i:
            img = L.t(j)
        elif j == i:
            img = L.sig.zero()
        else:
            img = L.t(j - 1)
        images["t%d" % j] = img
        images["dt%d" % j] = L.d(img)
    if S.base is not None:
        for nm in S.base.sig.names:
            images[nm] = L.sig.gen(nm)
    return L, AlgebraMap(S.sig, L.sig, images)


def stokes_defect(S: SimplexAlgebra, omega: GCAElement) -> GCAElement:
    """int d(omega) - sum_i (-1)^i int face_i(omega); zero for omega of dt-degree p-1."""
    lhs = integrate_simplex(S, S.d(omega))
    acc = lhs
    for i in range(S.p + 1):
        L, phi = face_restriction(S, i)
        acc = acc - (-1) ** i * integrate_simplex(L, phi(omega))
    return acc


def random_stokes_form(S: SimplexAlgebra, rng: random.Random, max_deg: int = 3, terms: int = 3) -> GCAElement:
    """A random polynomial form of dt-degree p-1 on the bare simplex."""
    p = S.p
    out = S.sig.zero()
    for _ in range(terms):
        skip = rng.randrange(1, p + 1)
        f = S.sig.scalar(rng.randint(-5, 5))
        for j in range(1, p + 1):
            f = f * S.t(j) ** rng.randint(0, max_deg)
        w = f
        for j in range(1, p + 1):
            if j != skip:
                w = w * S.dt(j)
        out = out + w
    return out


# -- connection, curvature, invariant polynomials ----------------------------------------

def simplicial_connection(S: SimplexAlgebra):
    """theta = sum_i t_i g_i^-1 dg_i on Delta^p x G^{p+1} (slot i+1 carries g_i)."""
    if S.base is None:
        raise SimplexError("needs a group base")
    n = S.base.n
    out = [[S.sig.zero() for _ in range(n)] for _ in range(n)]
    for i in range(S.p + 1):
        th = S.base.theta(i + 1)
        ti = S.t(i)
        for a in range(n):
            for b in range(n):
                out[a][b] = out[a][b] + ti * S.embed(th[a][b])
    return out


def curvature(S: SimplexAlgebra, theta):
    """Omega = d theta + theta theta."""
    sq = gf.matmul(theta, theta)
    n = len(theta)
    return [[S.d(theta[a][b]) + sq[a][b] for b in range(n)] for a in range(n)]


def bianchi_defect(S: SimplexAlgebra, theta, Om):
    """d Omega - (Omega theta - theta Omega), entrywise."""
    left = gf.matmul(Om, theta)
    right = gf.matmul(theta, Om)
    n = len(theta)
    return [[S.d(Om[a][b]) - left[a][b] + right[a][b] for b in range(n)] for a in range(n)]


class InvariantPolynomial:
    """prod_j Tr(M^{k_j}) for a tuple of positive powers."""

    def __init__(self, powers):
        self.powers = tuple(int(k) for k in powers)
        if not self.powers or any(k < 1 for k in self.powers):
            raise SimplexError("powers must be positive")

    @property
    def degree(self) -> int:
        return sum(self.powers)

    def __call__(self, M):
        out = None
        for k in self.powers:
            P = M
            for _ in range(k - 1):
                P = gf.matmul(P, M)
            t = gf.trace(P)
            out = t if out is None else out * t
        return out

    def __repr__(self):
        return "".join("Tr(M^%d)" % k if k > 1 else "Tr(M)" for k in self.powers)


# Newton: chern classes in trace powers of the normalised curvature, up to c_3
NEWTON_TABLE = {
    "c1": {(1,): Fraction(1)},
    "c2": {(1, 1): Fraction(1, 2), (2,): Fraction(-1, 2)},
    "c3": {(1, 1, 1): Fraction(1, 6), (1, 2): Fraction(-1, 2), (3,): Fraction(1, 3)},
}


def chern_weil_form(P: InvariantPolynomial, p: int, n: int):
    S = simplex_algebra(p, n)
    th = simplicial_connection(S)
    return S, P(curvature(S, th))


# -- Chern cocycles on the nerve -----------------------------------------------------------

def section_map(p: int) -> gf.NerveMap:
    """N_pG -> G^{p+1}: (gamma_1..gamma_p) -> (g_0..g_p) with g_p = 1, g_{i-1} = gamma_i g_i."""
    words = []
    for i in range(p + 1):
        words.append(tuple((s, 1) for s in range(i + 1, p + 1)))
    return gf.NerveMap(p, words)


def projection_map(p: int) -> gf.NerveMap:
    """G^{p+1} -> N_pG: gamma_i = g_{i-1} g_i^-1."""
    return gf.NerveMap(p + 1, tuple(((i, 1), (i + 1, -1)) for i in range(1, p + 1)))


def chern_cocycle(n: int, k: int, p_range=None, m: int | None = None) -> dict:
    """Integrate Tr(Omega^k) over simplices and check the (delta, d) cocycle condition.

    Returns {"components": {p: form on G^p}, "checks": [...], "pass": bool}.
    Components are read in coordinates gamma_i = g_{i-1} g_i^-1, in which
    the theta_i are connection forms for the right diagonal action.
    """
    from .cyclic import build_dg_cyclic, hochschild_b, de_rham

    if m is None:
        m = n
    if p_range is None:
        p_range = range(0, 2 * k + 1)
    P = InvariantPolynomial((k,))
    M = build_dg_cyclic(n, m, "algebraic", with_log=False)
    comps = {}
    checks = []
    for p in p_range:
        S, w = chern_weil_form(P, p, n)
        I = integrate_simplex(S, w)
        Fp = M.forms(p)
        Fp1 = gf.build_forms(n, p + 1, "algebraic", with_log=False)
        down = gf.pullback(section_map(p), I, Fp)
        back = gf.pullback(projection_map(p), down, Fp1)
        basic = back == I
        checks.append({"name": "basic", "p": p, "pass": basic})
        if not basic:
            raise SimplexError("integrand over Delta^%d does not descend to N_%dG" % (p, p))
        comps[p] = M.element(p, down)
    # total condition: delta c_{p-1} + (-1)^p d c_p = 0 for every p
    ps = sorted(comps)
    ok_all = True
    for p in range(ps[0], ps[-1] + 2):
        acc = None
        if p - 1 in comps:
            acc = hochschild_b(comps[p - 1])
        if p in comps:
            t = de_rham(comps[p]) * ((-1) ** p)
            acc = t if acc is None else acc + t
        ok = acc is None or acc.is_zero()
        ok_all = ok_all and ok
        checks.append({"name": "total_cocycle", "p": p, "pass": ok})
    return {"module": M, "components": comps, "checks": checks, "pass": ok_all}
