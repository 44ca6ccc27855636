"""
Jet-prolongation model of H_n used to derive its relation table.

Functions on the frame bundle built from a generic diffeomorphism phi are
modelled by the commutative polynomial ring in

    y{mu}{k}   frame coordinates,      Dy = 1/det(y)
    P{a}{b}    first derivatives of phi, DP = 1/det(P)
    f{a}_{I}   higher derivatives d_I phi^a  (I sorted, 2 <= |I| <= R + 1)

Y_i^j = sum_mu y^mu_i d/dy^mu_j and X_k = sum_nu y^nu_k d/dx^nu act as
derivations; delta^i_{jk;L} acts as multiplication by

    gamma^i_{jk} = (y^-1 P^-1 d_mu P y)^i_j y^mu_k ,  gamma_{;L} = X_{l_r}..X_{l_1} gamma .

Commutators are computed exactly in this ring and written back in the span
of the generator actions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .gca import Derivation, GCAElement, GCASignature
from .hopf_hn import (HnPresentation, JetOrderError, _add, _sorted_tuples, all_generators,
                      delta_order, install_hopf_tables)
from .linalg import LinearSolver, SparseMatrix, solve


class NotInSpan(RuntimeError):
    pass


def _perm_sign(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def det_terms(sig: GCASignature, names) -> dict:
    """det of a matrix of generator names, as a term dict."""
    n = len(names)
    out: dict = {}
    for p in permutations(range(n)):
        mono = {}
        for r in range(n):
            i = sig.index[names[r][p[r]]]
            mono[i] = mono.get(i, 0) + 1
        m = tuple(sorted(mono.items()))
        out[m] = out.get(m, 0) + _perm_sign(p)
    return {m: Fraction(c) for m, c in out.items() if c}


def install_det_relation(sig: GCASignature, names, inv_name):
    """det(M) * inv = 1, rewritten as  diag(M) * inv -> 1 - (det - diag) * inv."""
    n = len(names)
    det = det_terms(sig, names)
    diag = tuple(sorted((sig.index[names[r][r]], 1) for r in range(n)))
    inv = sig.index[inv_name]
    lead = tuple(sorted(diag + ((inv, 1),)))
    repl = {(): Fraction(1)}
    for m, c in det.items():
        if m == diag:
            continue
        mm = tuple(sorted(m + ((inv, 1),)))
        repl[mm] = repl.get(mm, 0) - c
    sig.add_relation(lead, repl)


def adjugate(sig: GCASignature, names):
    """Adjugate matrix as GCA elements (so that M^-1 = inv * adj)."""
    n = len(names)
    if n == 1:
        return [[sig.one()]]
    adj = [[None] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            minor = [[names[i][j] for j in range(n) if j != r] for i in range(n) if i != c]
            adj[r][c] = ((-1) ** (r + c)) * GCAElement(sig, det_terms(sig, minor))
    return adj


class JetRepresentation:
    def __init__(self, n: int, R: int):
        self.n = n
        self.R = R
        rng = range(1, n + 1)
        self.ynames = [["y%d%d" % (mu, k) for k in rng] for mu in rng]
        self.pnames = [["P%d%d" % (a, b) for b in rng] for a in rng]
        gens = [(nm, 0) for row in self.ynames for nm in row] + [("Dy", 0)]
        gens += [(nm, 0) for row in self.pnames for nm in row] + [("DP", 0)]
        self.max_jet = R + 2
        for r in range(2, self.max_jet + 1):
            for I in _sorted_tuples(n, r):
                for a in rng:
                    gens.append((self.fname(a, I), 0))
        self.sig = sig = GCASignature(gens, name="jets(n=%d,R=%d)" % (n, R))
        install_det_relation(sig, self.ynames, "Dy")
        install_det_relation(sig, self.pnames, "DP")
        self.y = [[sig.gen(nm) for nm in row] for row in self.ynames]
        self.yinv = [[sig.gen("Dy") * e for e in row] for row in adjugate(sig, self.ynames)]
        self.Pinv = [[sig.gen("DP") * e for e in row] for row in adjugate(sig, self.pnames)]
        self._det_y = GCAElement(sig, det_terms(sig, self.ynames))
        self._det_P = GCAElement(sig, det_terms(sig, self.pnames))
        self.partials = [self._partial(nu) for nu in rng]
        self.X = [self._horizontal(k) for k in rng]
        self.Y = {(i, j): self._vertical(i, j) for i in rng for j in rng}
        self._gamma: dict = {}

    def fname(self, a, I):
        return "f%d_%s" % (a, "".join(str(x) for x in I))

    def jet(self, a, I):
        I = tuple(sorted(I))
        if len(I) == 1:
            # d_b phi^a is the matrix entry P^a_b
            return self.sig.gen(self.pnames[a - 1][I[0] - 1])
        if len(I) > self.max_jet:
            raise NotInSpan("jet of order %d exceeds the model (R too small)" % len(I))
        return self.sig.gen(self.fname(a, I))

    def _partial(self, nu) -> Derivation:
        sig = self.sig
        n = self.n
        table = {}
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                table[self.pnames[a - 1][b - 1]] = self.jet(a, (b, nu))
        for r in range(2, self.max_jet):
            for I in _sorted_tuples(n, r):
                for a in range(1, n + 1):
                    table[self.fname(a, I)] = self.jet(a, I + (nu,))
        # d(DP) = -DP^2 d(det P)
        first = Derivation(sig, table, 0, check=False)
        DP = sig.gen("DP")
        table["DP"] = -(DP * DP) * first(self._det_P)
        return Derivation(sig, table, 0, check=False)

    def _horizontal(self, k) -> Derivation:
        sig = self.sig
        table = {}
        for nu in range(1, self.n + 1):
            ynu = self.y[nu - 1][k - 1]
            for i, img in self.partials[nu - 1].table.items():
                table[i] = table.get(i, sig.zero()) + ynu * img
        return Derivation(sig, table, 0, check=False)

    def _vertical(self, i, j) -> Derivation:
        sig = self.sig
        n = self.n
        table = {}
        # Y_i^j y^mu_k = delta_jk y^mu_i
        for mu in range(1, n + 1):
            table[self.ynames[mu - 1][j - 1]] = self.y[mu - 1][i - 1]
        first = Derivation(sig, table, 0, check=False)
        Dy = sig.gen("Dy")
        table["Dy"] = -(Dy * Dy) * first(self._det_y)
        return Derivation(sig, table, 0, check=False)

    def gamma(self, i, j, k, L=()) -> GCAElement:
        key = (i, j, k, tuple(L))
        hit = self._gamma.get(key)
        if hit is not None:
            return hit
        if not L:
            n = self.n
            sig = self.sig
            out = sig.zero()
            for mu in range(1, n + 1):
                ymu = self.y[mu - 1][k - 1]
                for c in range(1, n + 1):
                    ycj = self.y[c - 1][j - 1]
                    for beta in range(1, n + 1):
                        dP = self.jet(beta, (c, mu))
                        for alpha in range(1, n + 1):
                            coef = self.yinv[i - 1][alpha - 1] * self.Pinv[alpha - 1][beta - 1]
                            out = out + coef * dP * ycj * ymu
            res = out
        else:
            res = self.X[L[-1] - 1](self.gamma(i, j, k, L[:-1]))
        self._gamma[key] = res
        return res


def _express(target: GCAElement, basis: list[GCAElement]):
    """Constant coefficients c with target = sum c_s basis_s, or None."""
    monos = {}
    cols = []
    for b in basis:
        col = {}
        for m, c in b.terms.items():
            r = monos.setdefault(m, len(monos))
            col[r] = c
        cols.append(col)
    rhs_idx = {}
    for m, c in target.terms.items():
        r = monos.setdefault(m, len(monos))
        rhs_idx[r] = c
    M = SparseMatrix.from_columns(len(monos), cols)
    rhs = [rhs_idx.get(r, Fraction(0)) for r in range(len(monos))]
    return solve(M, rhs)


class VectorField:
    """sum_mu a^mu d/dx^mu + sum b^mu_k d/dy^mu_k with components polynomial in y."""

    def __init__(self, comps: dict):
        self.comps = {k: v for k, v in comps.items() if v}

    def bracket(self, other, J: JetRepresentation):
        keys = set(self.comps) | set(other.comps)
        out = {}
        for key in keys:
            val = J.sig.zero()
            for src, dst in ((self, other), (other, self)):
                sign = 1 if src is self else -1
                comp = dst.comps.get(key)
                if comp is None:
                    continue
                for (kind, mu, k), coef in src.comps.items():
                    if kind != "y":
                        continue
                    dd = Derivation(J.sig, {J.ynames[mu - 1][k - 1]: J.sig.one()}, 0, check=False)
                    val = val + sign * coef * dd(comp)
            out[key] = val
        return VectorField(out)


def derive_relations(n: int, R: int) -> HnPresentation:
    """Relation table of H_n up to delta order R, computed on the jet model."""
    if n < 1 or R < 1:
        raise ValueError("need n >= 1 and R >= 1")
    J = JetRepresentation(n, R)
    sig = J.sig
    rng = range(1, n + 1)
    # symmetry of gamma^i_{jk} in (j, k) is what licenses the j <= k convention
    for i in rng:
        for j in rng:
            for k in rng:
                if J.gamma(i, j, k) != J.gamma(i, k, j):
                    raise NotInSpan("gamma^%d_%d%d is not symmetric in its lower indices" % (i, j, k))
    P = HnPresentation(n, R, all_generators(n, R))
    idx = P.index
    deltas = [g for g in P.gens if g[0] == "d"]

    def gam(g):
        return J.gamma(g[1], g[2], g[3], g[4])

    # vector fields
    vf = {}
    for k in rng:
        vf["X", k] = VectorField({("x", mu, 0): J.y[mu - 1][k - 1] for mu in rng})
    for i in rng:
        for j in rng:
            vf["Y", i, j] = VectorField({("y", mu, j): J.y[mu - 1][i - 1] for mu in rng})
    vkeys = sorted(vf, key=lambda t: (t[0], t[1:]))
    comp_keys = sorted({c for v in vf.values() for c in v.comps})

    def express_vf(V):
        basis = []
        for key in vkeys:
            basis.append(_stack(vf[key], comp_keys, sig))
        sol = _express(_stack(V, comp_keys, sig), basis)
        if sol is None:
            raise NotInSpan("vector field bracket outside the generator span")
        return {(idx[key],): c for key, c in zip(vkeys, sol) if c}

    for a_i, a in enumerate(vkeys):
        for b in vkeys[a_i + 1:]:
            P.set_bracket(idx[a], idx[b], express_vf(vf[a].bracket(vf[b], J)))

    # [Y, delta] and [X, delta] are multiplication operators by Y(gamma),
    # X(gamma); these are polynomials in the gammas of matching weight
    def weight_basis(w):
        out = []

        def rec(start, cur, left):
            if left == 0:
                out.append(tuple(cur))
                return
            for t in range(start, len(deltas)):
                o = delta_order(deltas[t])
                if o <= left:
                    cur.append(t)
                    rec(t, cur, left - o)
                    cur.pop()
        rec(0, [], w)
        return out

    mono_cache: dict = {}

    def gam_mono(ts):
        hit = mono_cache.get(ts)
        if hit is None:
            hit = sig.one()
            for t in ts:
                hit = hit * gam(deltas[t])
            mono_cache[ts] = hit
        return hit

    solvers: dict = {}

    def express_delta(target, w, what):
        if w not in solvers:
            ms = weight_basis(w)
            monos: dict = {}
            cols = []
            for m in ms:
                col = {}
                for mono, c in gam_mono(m).terms.items():
                    col[monos.setdefault(mono, len(monos))] = c
                cols.append(col)
            solvers[w] = (ms, monos, LinearSolver(SparseMatrix.from_columns(len(monos), cols)))
        ms, monos, solver = solvers[w]
        rhs = [Fraction(0)] * len(monos)
        for mono, c in target.terms.items():
            r = monos.get(mono)
            if r is None:
                raise NotInSpan(what)
            rhs[r] = c
        sol = solver.solve(rhs)
        if sol is None:
            raise NotInSpan(what)
        return {tuple(sorted(idx[deltas[t]] for t in m)): c for m, c in zip(ms, sol) if c}

    for g in deltas:
        order = delta_order(g)
        for i in rng:
            for j in rng:
                P.set_bracket(idx["Y", i, j], idx[g],
                              express_delta(J.Y[i, j](gam(g)), order,
                                            "[Y_%d^%d, %s] not in the delta span" % (i, j, P.gen_name(g))))
        for ell in rng:
            if order >= R:
                P.set_bracket(idx["X", ell], idx[g], None)
                continue
            P.set_bracket(idx["X", ell], idx[g],
                          express_delta(J.X[ell - 1](gam(g)), order + 1,
                                        "[X_%d, %s] not in the delta span; raise R" % (ell, P.gen_name(g))))
    # deltas commute: no entries needed
    return install_hopf_tables(P)


def _stack(V: VectorField, keys, sig):
    """Flatten a vector field into one coefficient vector keyed by (component, monomial)."""
    out = {}
    for c, key in enumerate(keys):
        comp = V.comps.get(key)
        if comp is None:
            continue
        for m, v in comp.terms.items():
            out[(c, m)] = v
    return _Blocked(sig, out)


class _Blocked:
    """Minimal stand-in for GCAElement: terms keyed by (block, monomial)."""

    def __init__(self, sig, terms):
        self.sig = sig
        self.terms = terms


def jacobi_check(P: HnPresentation) -> dict:
    """Jacobi identity on all generator triples whose brackets are within jet order."""
    ngen = len(P.gens)
    failures = []
    checked = 0

    def br_elem(a: dict, b: dict) -> dict:
        out = P.mul_terms(a, b)
        for m, c in P.mul_terms(b, a).items():
            _add(out, m, -c)
        return out

    for a in range(ngen):
        for b in range(a + 1, ngen):
            for c in range(b + 1, ngen):
                A, B, C = ({(a,): Fraction(1)}, {(b,): Fraction(1)}, {(c,): Fraction(1)})
                try:
                    total: dict = {}
                    for x, y, z in ((A, B, C), (B, C, A), (C, A, B)):
                        for m, v in br_elem(x, br_elem(y, z)).items():
                            _add(total, m, v)
                except JetOrderError:
                    continue
                checked += 1
                if total:
                    failures.append([P.gen_name(a), P.gen_name(b), P.gen_name(c)])
    return {"checked": checked, "failures": failures, "pass": not failures}
