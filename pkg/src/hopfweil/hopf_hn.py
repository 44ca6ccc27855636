"""
The Hopf algebra H_n of transverse frames in PBW normal form.

Generators are keyed tuples

    ("d", i, j, k, L)   delta^i_{jk;L} with (j, k) + L sorted      (order |L|+1)
    ("X", k)            horizontal X_k
    ("Y", i, j)         vertical Y_i^j

ordered delta < X < Y.  Brackets use [g, h] = gh - hg.  The jet order R
bounds the order of delta generators; any rewrite that needs a delta of
order > R raises ``JetOrderError``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product as iproduct

from .linalg import fstr


class JetOrderError(RuntimeError):
    pass


def _gen_sort_key(g):
    if g[0] == "d":
        _, i, j, k, L = g
        return (0, len(L), i, j, k, L)
    if g[0] == "X":
        return (1, g[1])
    return (2, g[1], g[2])


def delta_order(g) -> int:
    return len(g[4]) + 1 if g[0] == "d" else 0


def _add(out: dict, key, val):
    v = out.get(key, 0) + val
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class HnPresentation:
    """Generators plus bracket, coproduct and antipode tables.

    ``brackets[(h, g)]`` for generator indices h > g holds [h, g] as a dict
    monomial -> Fraction; pairs listed in ``beyond`` exceed the jet order.
    """

    def __init__(self, n: int, R: int, gens: list):
        self.n = n
        self.R = R
        self.gens = sorted(gens, key=_gen_sort_key)
        self.index = {g: i for i, g in enumerate(self.gens)}
        self.brackets: dict[tuple[int, int], dict] = {}
        self.beyond: set[tuple[int, int]] = set()
        self.coproducts: dict[int, dict] = {}
        self.antipodes: dict[int, dict] = {}
        self._mg_cache: dict = {}
        self._mm_cache: dict = {}
        self._cop_cache: dict = {}
        self._S_cache: dict = {}

    # -- naming ----------------------------------------------------------
    def gen_name(self, g) -> str:
        if isinstance(g, int):
            g = self.gens[g]
        if self.n == 1:
            if g[0] == "d":
                return "d%d" % (len(g[4]) + 1)
            return g[0]
        if g[0] == "d":
            _, i, j, k, L = g
            s = "d^%d_%d%d" % (i, j, k)
            if L:
                s += ";" + "".join(str(x) for x in L)
            return s
        if g[0] == "X":
            return "X%d" % g[1]
        return "Y_%d^%d" % (g[1], g[2])

    def render_mono(self, m) -> str:
        if not m:
            return "1"
        out = []
        i = 0
        while i < len(m):
            j = i
            while j < len(m) and m[j] == m[i]:
                j += 1
            nm = self.gen_name(m[i])
            out.append(nm if j - i == 1 else "%s^%d" % (nm, j - i))
            i = j
        return "*".join(out)

    def g(self, *key) -> "HnElement":
        if len(key) == 1 and isinstance(key[0], str):
            return self.by_name(key[0])
        return HnElement(self, {(self.index[tuple(key)],): Fraction(1)})

    def by_name(self, name: str) -> "HnElement":
        for i, g in enumerate(self.gens):
            if self.gen_name(g) == name:
                return HnElement(self, {(i,): Fraction(1)})
        raise KeyError(name)

    def one(self) -> "HnElement":
        return HnElement(self, {(): Fraction(1)})

    def zero(self) -> "HnElement":
        return HnElement(self, {})

    # -- brackets ------------------------------------------------------------
    def set_bracket(self, a: int, b: int, value: dict | None):
        """Record [a, b] (value None means 'beyond jet order')."""
        if a == b:
            return
        if a > b:
            key, sign = (a, b), 1
        else:
            key, sign = (b, a), -1
        if value is None:
            self.beyond.add(key)
            self.brackets.pop(key, None)
        else:
            self.brackets[key] = {m: sign * c for m, c in value.items() if c}
            self.beyond.discard(key)
        self._mg_cache.clear()
        self._mm_cache.clear()

    def bracket_gens(self, a: int, b: int) -> dict:
        if a == b:
            return {}
        key, sign = ((a, b), 1) if a > b else ((b, a), -1)
        if key in self.beyond:
            raise JetOrderError("[%s, %s] needs a delta of order > R=%d"
                                % (self.gen_name(a), self.gen_name(b), self.R))
        val = self.brackets.get(key, {})
        return {m: sign * c for m, c in val.items()}

    # -- multiplication --------------------------------------------------------
    def mul_mono_gen(self, m: tuple, g: int) -> dict:
        key = (m, g)
        hit = self._mg_cache.get(key)
        if hit is not None:
            return hit
        if not m or m[-1] <= g:
            res = {m + (g,): Fraction(1)}
        else:
            h = m[-1]
            head = m[:-1]
            res = {}
            # head h g = head g h + head [h, g]
            for mm, c in self.mul_mono_gen(head, g).items():
                for m2, c2 in self.mul_mono_gen(mm, h).items():
                    _add(res, m2, c * c2)
            br = self.bracket_gens(h, g)
            if br:
                for bm, c in br.items():
                    for m2, c2 in self.mul_mono(head, bm).items():
                        _add(res, m2, c * c2)
        self._mg_cache[key] = res
        return res

    def mul_mono(self, a: tuple, b: tuple) -> dict:
        key = (a, b)
        hit = self._mm_cache.get(key)
        if hit is not None:
            return hit
        res = {a: Fraction(1)}
        for g in b:
            nxt: dict = {}
            for m, c in res.items():
                for m2, c2 in self.mul_mono_gen(m, g).items():
                    _add(nxt, m2, c * c2)
            res = nxt
        self._mm_cache[key] = res
        return res

    def mul_terms(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for a, ca in A.items():
            for b, cb in B.items():
                for m, c in self.mul_mono(a, b).items():
                    _add(out, m, ca * cb * c)
        return out

    def normal_form(self, word) -> "HnElement":
        """PBW normal form of a word of generators (names, keys or indices)."""
        idx = []
        for w in word:
            if isinstance(w, int):
                idx.append(w)
            elif isinstance(w, str):
                idx.append(next(iter(self.by_name(w).terms))[0])
            else:
                idx.append(self.index[tuple(w)])
        res = {(): Fraction(1)}
        for g in idx:
            nxt: dict = {}
            for m, c in res.items():
                for m2, c2 in self.mul_mono_gen(m, g).items():
                    _add(nxt, m2, c * c2)
            res = nxt
        return HnElement(self, res)

    # -- Hopf structure on monomials --------------------------------------
    def coproduct_mono(self, m: tuple) -> dict:
        hit = self._cop_cache.get(m)
        if hit is not None:
            return hit
        if not m:
            res = {((), ()): Fraction(1)}
        else:
            head = self.coproduct_mono(m[:-1])
            g = m[-1]
            if g not in self.coproducts:
                raise JetOrderError("no coproduct for %s" % self.gen_name(g))
            res = tensor_mul(self, head, self.coproducts[g])
        self._cop_cache[m] = res
        return res

    def antipode_mono(self, m: tuple) -> dict:
        hit = self._S_cache.get(m)
        if hit is not None:
            return hit
        res = {(): Fraction(1)}
        for g in reversed(m):
            res = self.mul_terms(res, self.antipodes[g])
        self._S_cache[m] = res
        return res

    def counit_mono(self, m: tuple) -> Fraction:
        return Fraction(1) if not m else Fraction(0)

    def character_gen(self, g: int) -> Fraction:
        key = self.gens[g]
        if key[0] == "Y" and key[1] == key[2]:
            return Fraction(1)
        return Fraction(0)

    def character_mono(self, m: tuple) -> Fraction:
        v = Fraction(1)
        for g in m:
            v *= self.character_gen(g)
            if not v:
                break
        return v

    # -- serialisation ------------------------------------------------------
    def _key_json(self, g):
        return list(g[:4]) + [list(g[4])] if g[0] == "d" else list(g)

    def _terms_json(self, terms: dict):
        return [[[self.gen_name(i) for i in m], fstr(c)] for m, c in sorted(terms.items())]

    def _tensor_json(self, terms: dict):
        return [[[[self.gen_name(i) for i in m] for m in ms], fstr(c)] for ms, c in sorted(terms.items())]

    def to_json(self) -> dict:
        brackets = []
        for (a, b) in sorted(set(self.brackets) | self.beyond):
            entry = {"lhs": [self.gen_name(a), self.gen_name(b)]}
            if (a, b) in self.beyond:
                entry["rhs"] = None
            else:
                entry["rhs"] = self._terms_json(self.brackets[a, b])
            brackets.append(entry)
        return {
            "n": self.n,
            "R": self.R,
            "pbw_order": [self.gen_name(g) for g in self.gens],
            "generators": [self._key_json(g) for g in self.gens],
            "bracket_convention": "[g,h] = gh - hg",
            "brackets": brackets,
            "coproducts": [{"generator": self.gen_name(g), "value": self._tensor_json(self.coproducts[g])}
                           for g in sorted(self.coproducts)],
            "antipodes": [{"generator": self.gen_name(g), "value": self._terms_json(self.antipodes[g])}
                          for g in sorted(self.antipodes)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HnPresentation":
        gens = []
        for g in data["generators"]:
            if g[0] == "d":
                gens.append(("d", g[1], g[2], g[3], tuple(g[4])))
            else:
                gens.append(tuple(g))
        P = cls(data["n"], data["R"], gens)
        name_idx = {P.gen_name(i): i for i in range(len(P.gens))}

        def mono(names):
            return tuple(sorted(name_idx[x] for x in names))

        for b in data["brackets"]:
            a, c = (name_idx[x] for x in b["lhs"])
            if b["rhs"] is None:
                P.set_bracket(a, c, None)
            else:
                P.set_bracket(a, c, {mono(m): Fraction(v) for m, v in b["rhs"]})
        for e in data["coproducts"]:
            P.coproducts[name_idx[e["generator"]]] = {tuple(mono(m) for m in ms): Fraction(v) for ms, v in e["value"]}
        for e in data["antipodes"]:
            P.antipodes[name_idx[e["generator"]]] = {mono(m): Fraction(v) for m, v in e["value"]}
        return P

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def tensor_mul(P: HnPresentation, A: dict, B: dict) -> dict:
    """Slotwise product of tensors (dicts keyed by tuples of monomials)."""
    out: dict = {}
    for ka, ca in A.items():
        for kb, cb in B.items():
            partial = {(): ca * cb}
            for ma, mb in zip(ka, kb):
                prod = P.mul_mono(ma, mb)
                nxt = {}
                for pre, c in partial.items():
                    for m, c2 in prod.items():
                        _add(nxt, pre + (m,), c * c2)
                partial = nxt
            for k, c in partial.items():
                _add(out, k, c)
    return out


def tensor_commutator(P, A, B):
    out = tensor_mul(P, A, B)
    for k, c in tensor_mul(P, B, A).items():
        _add(out, k, -c)
    return out


class HnElement:
    __slots__ = ("pres", "terms")

    def __init__(self, pres: HnPresentation, terms: dict | None = None):
        self.pres = pres
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    def _coerce(self, other):
        if isinstance(other, HnElement):
            if other.pres is not self.pres:
                raise ValueError("elements of different presentations")
            return other
        return HnElement(self.pres, {(): Fraction(other)})

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            _add(t, m, c)
        return HnElement(self.pres, t)

    __radd__ = __add__

    def __neg__(self):
        return HnElement(self.pres, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, HnElement):
            c = Fraction(other)
            return HnElement(self.pres, {m: c * v for m, v in self.terms.items()})
        other = self._coerce(other)
        return HnElement(self.pres, self.pres.mul_terms(self.terms, other.terms))

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k):
        out = self.pres.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, HnElement):
            other = self._coerce(other)
        return self.pres is other.pres and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            ms = self.pres.render_mono(m)
            if ms == "1":
                parts.append(fstr(c))
            elif c == 1:
                parts.append(ms)
            elif c == -1:
                parts.append("-" + ms)
            else:
                parts.append("%s*%s" % (fstr(c), ms))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return self.render()


class HnTensor:
    """Element of H^(tensor k), keyed by tuples of PBW monomials."""

    __slots__ = ("pres", "k", "terms")

    def __init__(self, pres, k, terms=None):
        self.pres = pres
        self.k = k
        self.terms = {t: Fraction(c) for t, c in (terms or {}).items() if c}

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            _add(t, m, c)
        return HnTensor(self.pres, self.k, t)

    def __sub__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            _add(t, m, -c)
        return HnTensor(self.pres, self.k, t)

    def __mul__(self, other):
        if isinstance(other, HnTensor):
            return HnTensor(self.pres, self.k, tensor_mul(self.pres, self.terms, other.terms))
        c = Fraction(other)
        return HnTensor(self.pres, self.k, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, HnTensor) and self.k == other.k and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @classmethod
    def of(cls, *elements: HnElement) -> "HnTensor":
        P = elements[0].pres
        terms: dict = {(): Fraction(1)}
        for e in elements:
            nxt = {}
            for pre, c in terms.items():
                for m, c2 in e.terms.items():
                    _add(nxt, pre + (m,), c * c2)
            terms = nxt
        return cls(P, len(elements), terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ms, c in sorted(self.terms.items()):
            body = "(x)".join(self.pres.render_mono(m) for m in ms)
            parts.append(body if c == 1 else "%s*%s" % (fstr(c), body))
        return " + ".join(parts)

    __repr__ = render


# -- Hopf operations on elements ------------------------------------------------

def coproduct(h: HnElement) -> HnTensor:
    out: dict = {}
    for m, c in h.terms.items():
        for k, v in h.pres.coproduct_mono(m).items():
            _add(out, k, c * v)
    return HnTensor(h.pres, 2, out)


def counit(h: HnElement) -> Fraction:
    return h.terms.get((), Fraction(0))


def antipode(h: HnElement) -> HnElement:
    out: dict = {}
    for m, c in h.terms.items():
        for k, v in h.pres.antipode_mono(m).items():
            _add(out, k, c * v)
    return HnElement(h.pres, out)


def modular_character(h: HnElement) -> Fraction:
    return sum((c * h.pres.character_mono(m) for m, c in h.terms.items()), Fraction(0))


def twisted_antipode_mono(P: HnPresentation, m: tuple) -> dict:
    out: dict = {}
    for (m1, m2), c in P.coproduct_mono(m).items():
        ch = P.character_mono(m1)
        if ch:
            for k, v in P.antipode_mono(m2).items():
                _add(out, k, c * ch * v)
    return out


def twisted_antipode(h: HnElement) -> HnElement:
    out: dict = {}
    for m, c in h.terms.items():
        for k, v in twisted_antipode_mono(h.pres, m).items():
            _add(out, k, c * v)
    return HnElement(h.pres, out)


# -- presentations ----------------------------------------------------------------

def delta_generators(n: int, R: int) -> list:
    """delta^i_J with J a sorted multiset of lower indices, order |J|-1 <= R.

    Stored as ("d", i, J[0], J[1], J[2:]); the other orderings of J differ
    from this one by products of lower-order deltas.
    """
    out = []
    for r in range(0, R):
        for J in _sorted_tuples(n, r + 2):
            for i in range(1, n + 1):
                out.append(("d", i, J[0], J[1], J[2:]))
    return out


def _sorted_tuples(n, r):
    if r == 0:
        return [()]
    out = []
    def rec(start, cur):
        if len(cur) == r:
            out.append(tuple(cur))
            return
        for x in range(start, n + 1):
            cur.append(x)
            rec(x, cur)
            cur.pop()
    rec(1, [])
    return out


def all_generators(n: int, R: int) -> list:
    gens = delta_generators(n, R)
    gens += [("X", k) for k in range(1, n + 1)]
    gens += [("Y", i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return gens


def canonical_delta(i, j, k, L):
    if j > k:
        j, k = k, j
    return ("d", i, j, k, tuple(sorted(L)))


def install_hopf_tables(P: HnPresentation):
    """Coproduct and antipode on generators; higher deltas via commutators with X."""
    n = P.n
    idx = P.index
    one = ()

    def mono(*gs):
        return tuple(sorted(idx[g] for g in gs))

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            y = idx["Y", i, j]
            P.coproducts[y] = {((y,), one): Fraction(1), (one, (y,)): Fraction(1)}
            P.antipodes[y] = {(y,): Fraction(-1)}
    for k in range(1, n + 1):
        x = idx["X", k]
        cop = {((x,), one): Fraction(1), (one, (x,)): Fraction(1)}
        ant = {(x,): Fraction(-1)}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                d = idx[canonical_delta(i, j, k, ())]
                y = idx["Y", i, j]
                _add(cop, ((d,), (y,)), Fraction(1))
                for m, c in P.mul_mono((d,), (y,)).items():
                    _add(ant, m, c)
        P.coproducts[x] = cop
        P.antipodes[x] = ant
    deltas = sorted((g for g in P.gens if g[0] == "d"), key=_gen_sort_key)
    for g in deltas:
        gi = idx[g]
        _, i, j, k, L = g
        if not L:
            P.coproducts[gi] = {((gi,), one): Fraction(1), (one, (gi,)): Fraction(1)}
            P.antipodes[gi] = {(gi,): Fraction(-1)}
            continue
        ell = L[-1]
        lower = idx[("d", i, j, k, L[:-1])]
        x = idx["X", ell]
        # Delta[X, d] = [Delta X, Delta d];  S[X, d] = [S d, S X]
        P.coproducts[gi] = tensor_commutator(P, P.coproducts[x], P.coproducts[lower])
        Sd, Sx = P.antipodes[lower], P.antipodes[x]
        ant = P.mul_terms(Sd, Sx)
        for m, c in P.mul_terms(Sx, Sd).items():
            _add(ant, m, -c)
        P.antipodes[gi] = ant
    P._cop_cache.clear()
    P._S_cache.clear()
    return P


def builtin_presentation(n: int = 1, R: int = 6) -> HnPresentation:
    """The classical table of H_1: [Y,X]=X, [Y,d_k]=k d_k, [X,d_k]=d_{k+1}."""
    if n != 1:
        raise ValueError("only n = 1 has a built-in table; use derive_relations")
    if R < 1:
        raise ValueError("R must be >= 1")
    P = HnPresentation(1, R, all_generators(1, R))
    X = P.index["X", 1]
    Y = P.index["Y", 1, 1]
    dk = [P.index["d", 1, 1, 1, (1,) * (k - 1)] for k in range(1, R + 1)]
    P.set_bracket(Y, X, {(X,): Fraction(1)})
    for k, d in enumerate(dk, start=1):
        P.set_bracket(Y, d, {(d,): Fraction(k)})
        if k < R:
            P.set_bracket(X, d, {(dk[k],): Fraction(1)})
        else:
            P.set_bracket(X, d, None)
    return install_hopf_tables(P)


def hopf_weight(P: HnPresentation, m: tuple) -> int:
    """Grading with X of weight 1, Y of weight 1, delta of its order (sample size measure)."""
    w = 0
    for g in m:
        key = P.gens[g]
        w += delta_order(key) if key[0] == "d" else 1
    return w


def pbw_monomials(P: HnPresentation, max_len: int) -> list[tuple]:
    """All PBW monomials with hopf_weight <= max_len (delta_k counts k)."""
    weights = [hopf_weight(P, (g,)) for g in range(len(P.gens))]
    out = []

    def rec(start, cur, w):
        out.append(tuple(cur))
        for g in range(start, len(P.gens)):
            if w + weights[g] <= max_len:
                cur.append(g)
                rec(g, cur, w + weights[g])
                cur.pop()
    rec(0, [], 0)
    return sorted(out, key=lambda m: (len(m), m))


def _tensor_apply(P, T: dict, slot: int, fn) -> dict:
    """Apply a linear map (monomial -> tensor dict of some arity) to one slot."""
    out: dict = {}
    for key, c in T.items():
        for sub, c2 in fn(key[slot]).items():
            _add(out, key[:slot] + sub + key[slot + 1:], c * c2)
    return out


def verify_hopf_axioms(P: HnPresentation, max_len: int) -> dict:
    """Coassociativity, antipode axiom, S_delta^2 = Id and multiplicativity of Delta.

    Runs over every PBW monomial of weight <= max_len (pairs of total weight
    <= max_len for multiplicativity).
    """
    monos = pbw_monomials(P, max_len)
    results = {}

    def cop_slot(m):
        return P.coproduct_mono(m)

    fails = []
    for m in monos:
        D = P.coproduct_mono(m)
        left = _tensor_apply(P, D, 0, cop_slot)
        right = _tensor_apply(P, D, 1, cop_slot)
        if left != right:
            fails.append(P.render_mono(m))
    results["coassociativity"] = {"sample_size": len(monos), "pass": not fails, "witness": fails[:3]}

    fails = []
    for m in monos:
        D = P.coproduct_mono(m)
        eps = {(): Fraction(1)} if not m else {}
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), c in D.items():
            for k, v in P.mul_terms(P.antipode_mono(a), {b: Fraction(1)}).items():
                _add(lhs, k, c * v)
            for k, v in P.mul_terms({a: Fraction(1)}, P.antipode_mono(b)).items():
                _add(rhs, k, c * v)
        if lhs != eps or rhs != eps:
            fails.append(P.render_mono(m))
    results["antipode"] = {"sample_size": len(monos), "pass": not fails, "witness": fails[:3]}

    fails = []
    for m in monos:
        once = twisted_antipode_mono(P, m)
        twice: dict = {}
        for k, v in once.items():
            for k2, v2 in twisted_antipode_mono(P, k).items():
                _add(twice, k2, v * v2)
        if twice != {m: Fraction(1)}:
            fails.append(P.render_mono(m))
    results["twisted_antipode_involution"] = {"sample_size": len(monos), "pass": not fails, "witness": fails[:3]}

    fails = []
    nonunit = [m for m in monos if m]
    wt = {m: hopf_weight(P, m) for m in nonunit}
    count = 0
    for a in nonunit:
        for b in nonunit:
            if wt[a] + wt[b] > max_len:
                continue
            count += 1
            lhs: dict = {}
            for m, c in P.mul_mono(a, b).items():
                for k, v in P.coproduct_mono(m).items():
                    _add(lhs, k, c * v)
            if lhs != tensor_mul(P, P.coproduct_mono(a), P.coproduct_mono(b)):
                fails.append([P.render_mono(a), P.render_mono(b)])
    results["coproduct_multiplicative"] = {"sample_size": count, "pass": not fails, "witness": fails[:3]}
    return results
