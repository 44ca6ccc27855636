"""
DG Hopf algebras of forms on powers of GL(n).

Two coefficient models are offered:

* ``algebraic``: polynomials in the entries g_ab of each slot and an inverse
  determinant D, reduced by det(g) * D = 1.  With ``with_log`` a formal
  degree-0 generator l (log|det|) is adjoined with dl = Tr(g^-1 dg).
* ``germ``: g = 1 + h with polynomial coefficients in h truncated above
  total h-degree J; D and l are the truncated power series of det(1+h)^-1
  and log det(1+h).

All structure maps (coproduct, counit, antipode, the nerve faces and the
cyclic operator) are pullbacks along maps G^p -> G^p' whose coordinates are
words in the source slots and their inverses; see ``NerveMap``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .gca import AlgebraMap, Derivation, GCAElement, GCASignature
from .jets import adjugate, det_terms, install_det_relation

VARIANTS = ("algebraic", "germ")


class FormError(ValueError):
    pass


def _suffix(p: int, s: int) -> str:
    return "" if p == 1 else "_%d" % s


class FormAlgebra:
    """Forms on G^p, G = GL(n), in the algebraic or germ model."""

    def __init__(self, n: int, p: int, variant: str = "algebraic", J: int | None = None,
                 with_log: bool = True):
        if n < 1 or p < 0:
            raise FormError("need n >= 1 and p >= 0")
        if variant not in VARIANTS:
            raise FormError("unknown variant %r" % variant)
        if variant == "germ" and (J is None or J < 1):
            raise FormError("the germ variant needs J >= 1")
        self.n, self.p, self.variant = n, p, variant
        self.J = J if variant == "germ" else None
        self.with_log = with_log if variant == "algebraic" else True
        rng = range(1, n + 1)
        gens, weights = [], []
        self._names: dict = {}
        for s in range(1, p + 1):
            sf = _suffix(p, s)
            if variant == "algebraic":
                gens.append(("D" + sf, 0))
                weights.append(0)
                self._names["D", s] = "D" + sf
                for a in rng:
                    for b in rng:
                        nm = "g%d%d%s" % (a, b, sf)
                        gens.append((nm, 0))
                        weights.append(0)
                        self._names["g", s, a, b] = nm
                if with_log:
                    gens.append(("l" + sf, 0))
                    weights.append(0)
                    self._names["l", s] = "l" + sf
            else:
                for a in rng:
                    for b in rng:
                        nm = "h%d%d%s" % (a, b, sf)
                        gens.append((nm, 0))
                        weights.append(1)
                        self._names["g", s, a, b] = nm
        for s in range(1, p + 1):
            sf = _suffix(p, s)
            pre = "dg" if variant == "algebraic" else "dh"
            for a in rng:
                for b in rng:
                    nm = "%s%d%d%s" % (pre, a, b, sf)
                    gens.append((nm, 1))
                    weights.append(0)
                    self._names["dg", s, a, b] = nm
        self.sig = GCASignature(gens, weights=weights, bound=self.J,
                                name="Omega(GL%d^%d)%s" % (n, p, "" if self.J is None else "_J%d" % self.J))
        if variant == "algebraic":
            for s in range(1, p + 1):
                install_det_relation(self.sig, self._entry_names(s), self._names["D", s])
        self._slot_cache: dict = {}
        self.d = self._build_d()

    # -- naming --------------------------------------------------------------
    def _entry_names(self, s):
        rng = range(1, self.n + 1)
        return [[self._names["g", s, a, b] for b in rng] for a in rng]

    def gen(self, name: str) -> GCAElement:
        return self.sig.gen(name)

    def one(self) -> GCAElement:
        return self.sig.one()

    def zero(self) -> GCAElement:
        return self.sig.zero()

    def __repr__(self):
        extra = "" if self.J is None else ", J=%d" % self.J
        return "FormAlgebra(n=%d, p=%d, %s%s)" % (self.n, self.p, self.variant, extra)

    # -- slot data -------------------------------------------------------------
    def _slot(self, s: int) -> dict:
        hit = self._slot_cache.get(s)
        if hit is not None:
            return hit
        if not 1 <= s <= self.p:
            raise FormError("slot %d outside 1..%d" % (s, self.p))
        n, sig = self.n, self.sig
        rng = range(n)
        one = sig.one()
        dg = [[sig.gen(self._names["dg", s, a + 1, b + 1]) for b in rng] for a in rng]
        if self.variant == "algebraic":
            g = [[sig.gen(self._names["g", s, a + 1, b + 1]) for b in rng] for a in rng]
            D = sig.gen(self._names["D", s])
            adj = adjugate(sig, self._entry_names(s))
            ginv = [[D * adj[a][b] for b in rng] for a in rng]
            det = GCAElement(sig, det_terms(sig, self._entry_names(s)))
            ell = sig.gen(self._names["l", s]) if self.with_log else None
        else:
            h = [[sig.gen(self._names["g", s, a + 1, b + 1]) for b in rng] for a in rng]
            g = [[h[a][b] + one if a == b else h[a][b] for b in rng] for a in rng]
            det = _det(g, sig)
            e = det - one
            # (1 + h)^-1 = sum (-h)^k and det^-1 = sum (-e)^k, truncated by the signature
            ginv = _identity(n, sig)
            power = _identity(n, sig)
            mh = [[-h[a][b] for b in rng] for a in rng]
            for _ in range(self.J):
                power = matmul(power, mh)
                ginv = matadd(ginv, power)
            D = one
            term = one
            for _ in range(self.J):
                term = term * (-e)
                D = D + term
            ell = sig.zero()
            term = one
            for k in range(1, self.J + 1):
                term = term * e
                ell = ell + Fraction((-1) ** (k + 1), k) * term
        data = {"g": g, "dg": dg, "ginv": ginv, "D": D, "det": det, "l": ell}
        self._slot_cache[s] = data
        return data

    def g(self, s: int = 1):
        return self._slot(s)["g"]

    def dg(self, s: int = 1):
        return self._slot(s)["dg"]

    def ginv(self, s: int = 1):
        return self._slot(s)["ginv"]

    def inv_det(self, s: int = 1) -> GCAElement:
        return self._slot(s)["D"]

    def det(self, s: int = 1) -> GCAElement:
        return self._slot(s)["det"]

    def ell(self, s: int = 1) -> GCAElement:
        val = self._slot(s)["l"]
        if val is None:
            raise FormError("algebra built without log-determinant")
        return val

    def theta(self, s: int = 1):
        """Maurer-Cartan matrix g^-1 dg of slot s."""
        return matmul(self.ginv(s), self.dg(s))

    # -- differential -----------------------------------------------------------
    def _build_d(self) -> Derivation:
        sig = self.sig
        table = {}
        for s in range(1, self.p + 1):
            for a in range(1, self.n + 1):
                for b in range(1, self.n + 1):
                    table[self._names["g", s, a, b]] = sig.gen(self._names["dg", s, a, b])
        if self.variant == "algebraic":
            for s in range(1, self.p + 1):
                tr = trace(matmul(self.ginv(s), self.dg(s)))
                D = sig.gen(self._names["D", s])
                table[self._names["D", s]] = -(D * tr)
                if self.with_log:
                    table[self._names["l", s]] = tr
        return Derivation(sig, table, 1)

    def check_d_squared(self) -> list[str]:
        """Generators whose image under d o d is nonzero (empty when d^2 = 0)."""
        bad = []
        for i, nm in enumerate(self.sig.names):
            x = self.sig.gen(i)
            if self.d(self.d(x)):
                bad.append(nm)
        return bad


def _identity(n, sig):
    return [[sig.one() if a == b else sig.zero() for b in range(n)] for a in range(n)]


def _det(M, sig):
    from itertools import permutations
    from .jets import _perm_sign
    n = len(M)
    out = sig.zero()
    for perm in permutations(range(n)):
        t = sig.scalar(_perm_sign(perm))
        for r in range(n):
            t = t * M[r][perm[r]]
        out = out + t
    return out


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for a in range(n):
        row = []
        for b in range(m):
            acc = None
            for c in range(k):
                t = A[a][c] * B[c][b]
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def matadd(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def trace(A):
    acc = A[0][0]
    for i in range(1, len(A)):
        acc = acc + A[i][i]
    return acc


def build_forms(n: int, p: int, variant: str = "algebraic", J: int | None = None,
                with_log: bool = True) -> FormAlgebra:
    """Cached constructor; d^2 = 0 is verified on generators."""
    if variant == "germ":
        with_log = True
    else:
        J = None
    return _build_forms(int(n), int(p), variant, J, bool(with_log))


@lru_cache(maxsize=None)
def _build_forms(n, p, variant, J, with_log) -> FormAlgebra:
    F = FormAlgebra(n, p, variant, J, with_log)
    bad = F.check_d_squared()
    if bad:
        raise FormError("d^2 != 0 on %s" % ", ".join(bad))
    return F


def maurer_cartan(F: FormAlgebra, s: int = 1):
    return F.theta(s)


def maurer_cartan_defect(F: FormAlgebra, s: int = 1):
    """Entries of d(theta) + theta*theta (all zero when the structure equation holds)."""
    th = F.theta(s)
    sq = matmul(th, th)
    return [[F.d(th[a][b]) + sq[a][b] for b in range(F.n)] for a in range(F.n)]


# -- nerve maps --------------------------------------------------------------------

class NerveMap:
    """A map G^p -> G^p' whose t-th coordinate is a word in the source slots.

    ``words[t]`` is a tuple of (slot, +1 | -1) factors read left to right;
    the empty word is the identity element.  ``pullback`` is the induced
    DG algebra map Omega(G^p') -> Omega(G^p).
    """

    def __init__(self, p: int, words):
        self.p = p
        self.words = tuple(tuple((int(s), int(e)) for s, e in w) for w in words)
        for w in self.words:
            for s, e in w:
                if not 1 <= s <= p or e not in (1, -1):
                    raise FormError("bad factor (%d, %d) for p=%d" % (s, e, p))

    @property
    def target_p(self) -> int:
        return len(self.words)

    def __repr__(self):
        return "NerveMap(p=%d, %r)" % (self.p, self.words)


@lru_cache(maxsize=None)
def _pullback_map(src: FormAlgebra, tgt: FormAlgebra, words) -> AlgebraMap:
    """AlgebraMap Omega(G^{len(words)}) = tgt.sig -> src.sig (tgt is the target space)."""
    n = src.n
    # in the germ model d lowers the h-degree, so images of dg are computed
    # one order higher and truncated afterwards
    work = src if src.variant == "algebraic" else build_forms(n, src.p, "germ", src.J + 1)
    images = {}
    for t, w in enumerate(words, start=1):
        M = _identity(n, work.sig)
        for s, e in w:
            M = matmul(M, work.g(s) if e == 1 else work.ginv(s))
        dM = [[_transfer(work.d(x), src) for x in row] for row in M]
        M = [[_transfer(x, src) for x in row] for row in M]
        for a in range(n):
            for b in range(n):
                val = M[a][b]
                if tgt.variant == "germ" and a == b:
                    val = val - src.one()
                images[tgt._names["g", t, a + 1, b + 1]] = val
                images[tgt._names["dg", t, a + 1, b + 1]] = dM[a][b]
        if tgt.variant == "algebraic":
            D = src.one()
            ell = src.zero()
            for s, e in w:
                D = D * (src.inv_det(s) if e == 1 else src.det(s))
                if tgt.with_log:
                    ell = ell + e * src.ell(s)
            images[tgt._names["D", t]] = D
            if tgt.with_log:
                images[tgt._names["l", t]] = ell
    return AlgebraMap(tgt.sig, src.sig, images)


def _transfer(x: GCAElement, F: FormAlgebra) -> GCAElement:
    """Move an element between algebras with the same generators (re-truncating)."""
    if x.sig is F.sig:
        return x
    return GCAElement(F.sig, F.sig.normalize(x.terms))


def same_family(F: FormAlgebra, p: int) -> FormAlgebra:
    return build_forms(F.n, p, F.variant, F.J, F.with_log)


def pullback(phi: NerveMap, omega: GCAElement, source: FormAlgebra) -> GCAElement:
    """phi^* omega, where omega lives on G^{phi.target_p} and source is the form algebra on G^{phi.p}."""
    if source.p != phi.p:
        raise FormError("source algebra has p=%d, map expects %d" % (source.p, phi.p))
    tgt = same_family(source, phi.target_p)
    if omega.sig is not tgt.sig:
        raise FormError("form does not live on G^%d of the same family" % phi.target_p)
    return _pullback_map(source, tgt, phi.words)(omega)


def coface_map(q: int, i: int) -> NerveMap:
    """Nerve map G^q -> G^(q-1) realising the i-th coface (0 <= i <= q)."""
    if not 0 <= i <= q:
        raise FormError("coface index %d outside 0..%d" % (i, q))
    words = []
    for t in range(1, q):
        if i == 0:
            words.append(((t + 1, 1),))
        elif t < i or i == q:
            words.append(((t, 1),))
        elif t == i:
            words.append(((t, 1), (t + 1, 1)))
        else:
            words.append(((t + 1, 1),))
    return NerveMap(q, words)


def codegeneracy_map(q: int, i: int) -> NerveMap:
    """Nerve map G^q -> G^(q+1) inserting the identity in slot i+1 (0 <= i <= q)."""
    if not 0 <= i <= q:
        raise FormError("codegeneracy index %d outside 0..%d" % (i, q))
    words = []
    for t in range(1, q + 2):
        if t <= i:
            words.append(((t, 1),))
        elif t == i + 1:
            words.append(())
        else:
            words.append(((t - 1, 1),))
    return NerveMap(q, words)


def cyclic_map(q: int) -> NerveMap:
    """(x_1..x_q) -> ((x_1...x_q)^-1, x_1, ..., x_{q-1})."""
    if q == 0:
        return NerveMap(0, ())
    first = tuple((s, -1) for s in range(q, 0, -1))
    return NerveMap(q, (first,) + tuple(((t, 1),) for t in range(1, q)))


def face_pullback(F: FormAlgebra, i: int, omega: GCAElement) -> GCAElement:
    """Pull a form on G^(p-1) back to F (on G^p) along the i-th nerve coface."""
    return pullback(coface_map(F.p, i), omega, F)


def coproduct_form(omega: GCAElement, F1: FormAlgebra) -> GCAElement:
    """Delta(omega)(x, y) = omega(xy) for omega on G."""
    return face_pullback(same_family(F1, 2), 1, omega)


def antipode_form(F: FormAlgebra, omega: GCAElement) -> GCAElement:
    if F.p != 1:
        raise FormError("antipode is defined on a single slot")
    return pullback(NerveMap(1, (((1, -1),),)), omega, F)


def counit_form(F: FormAlgebra, omega: GCAElement) -> Fraction:
    """Evaluation at the identity (forms of positive degree go to 0)."""
    F0 = same_family(F, 0)
    val = pullback(NerveMap(0, ((),) * F.p), omega, F0)
    return val.terms.get((), Fraction(0))


def germ_project(omega: GCAElement, F_alg: FormAlgebra, J: int) -> GCAElement:
    """Substitute g = 1 + h and expand D, l as series truncated at h-degree J."""
    if F_alg.variant != "algebraic":
        raise FormError("germ_project expects an algebraic form")
    G = build_forms(F_alg.n, F_alg.p, "germ", J)
    images = {}
    for s in range(1, F_alg.p + 1):
        for a in range(1, F_alg.n + 1):
            for b in range(1, F_alg.n + 1):
                images[F_alg._names["g", s, a, b]] = G.g(s)[a - 1][b - 1]
                images[F_alg._names["dg", s, a, b]] = G.dg(s)[a - 1][b - 1]
        images[F_alg._names["D", s]] = G.inv_det(s)
        if F_alg.with_log:
            images[F_alg._names["l", s]] = G.ell(s)
    return AlgebraMap(F_alg.sig, G.sig, images)(omega)


def render_form(omega: GCAElement) -> str:
    """Deterministic rendering: coefficient monomial, then wedge of one-forms."""
    sig = omega.sig
    if not omega.terms:
        return "0"
    parts = []
    for m, c in sorted(omega.terms.items(), key=lambda t: (sig.mono_degree(t[0]), t[0])):
        even = [(i, e) for i, e in m if not sig.odd[i]]
        odd = [(i, e) for i, e in m if sig.odd[i]]
        body = []
        if even:
            body.append(sig.render_mono(tuple(even), "*"))
        if odd:
            body.append(sig.render_mono(tuple(odd), "^"))
        mono = "*".join(body) if body else "1"
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append("%s*%s" % (c, mono))
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# -- Hopf axioms on generators -----------------------------------------------------

def hopf_axiom_report(n: int, variant: str = "algebraic", J: int | None = None) -> dict:
    """Coassociativity, counit and antipode identities on the generators of G."""
    F1 = build_forms(n, 1, variant, J)
    F2 = same_family(F1, 2)
    F3 = same_family(F1, 3)
    gens = [F1.sig.gen(i) for i in range(len(F1.sig.names))]
    if variant == "algebraic":
        gens.append(F1.inv_det(1))
    checks = {}

    def record(name, fails, size):
        checks[name] = {"sample_size": size, "pass": not fails, "witness": fails[:3]}

    # (xy)z = x(yz)
    left = NerveMap(3, (((1, 1), (2, 1), (3, 1)),))
    fails = []
    for x in gens:
        a = face_pullback(F3, 1, face_pullback(F2, 1, x))
        b = face_pullback(F3, 2, face_pullback(F2, 1, x))
        c = pullback(left, x, F3)
        if a != b or a != c:
            fails.append(render_form(x))
    record("coassociativity", fails, len(gens))

    # (eps x id) Delta = id = (id x eps) Delta
    fails = []
    for x in gens:
        delta = face_pullback(F2, 1, x)
        for slot in (1, 2):
            words = (((1, 1),), ()) if slot == 2 else ((), ((1, 1),))
            if pullback(NerveMap(1, words), delta, F1) != x:
                fails.append(render_form(x))
    record("counit", fails, len(gens))

    # m(S x id) Delta = eta eps = m(id x S) Delta
    fails = []
    F0 = same_family(F1, 0)
    for x in gens:
        delta = face_pullback(F2, 1, x)
        eps = pullback(NerveMap(0, ((),)), x, F0)
        unit_eps = F1.sig.scalar(eps.terms.get((), 0))
        for words in ((((1, -1),), ((1, 1),)), (((1, 1),), ((1, -1),))):
            if pullback(NerveMap(1, words), delta, F1) != unit_eps:
                fails.append(render_form(x))
    record("antipode", fails, len(gens))

    # the log generator is primitive and dl = Tr theta
    fails = []
    ell = F1.ell(1)
    if face_pullback(F2, 1, ell) != F2.ell(1) + F2.ell(2):
        fails.append("coproduct(l)")
    if antipode_form(F1, ell) != -ell:
        fails.append("S(l)")
    dl = F1.d(ell)
    tr = trace(F1.theta(1))
    if variant == "algebraic" and dl != tr:
        fails.append("dl != Tr theta")
    if variant == "germ" and _drop_top(dl - tr, J):
        fails.append("dl != Tr theta below degree J")
    record("log_determinant", fails, 4)
    return checks


def _drop_top(x: GCAElement, J: int) -> GCAElement:
    """Remove terms of coefficient weight >= J (the part where d loses information)."""
    sig = x.sig
    return GCAElement(sig, {m: c for m, c in x.terms.items() if sig.mono_weight(m) < J})
