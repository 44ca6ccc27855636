"""
Graded-commutative algebras with Koszul signs.

A monomial is a tuple of ``(generator_index, exponent)`` pairs sorted by
index.  Odd generators carry exponent 1 at most.  Optional extras on a
signature:

* a weight per generator and a bound; monomials of larger weight vanish
  (this is how truncated Weil algebras are modelled);
* polynomial relations ``lead -> replacement`` on even generators, applied
  as rewriting rules (used for ``det(g) * D = 1``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .linalg import fstr


class SignatureMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


Monomial = tuple  # tuple[tuple[int, int], ...]


class GCASignature:
    def __init__(self, generators: Iterable[tuple[str, int]], weights=None, bound=None,
                 name: str = ""):
        gens = list(generators)
        self.names = [g[0] for g in gens]
        self.degrees = [int(g[1]) for g in gens]
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.odd = [d % 2 == 1 for d in self.degrees]
        self.weights = list(weights) if weights is not None else [0] * len(gens)
        self.bound = bound
        self.name = name
        # relations: list of (lead monomial, dict monomial -> Fraction)
        self.relations: list[tuple[Monomial, dict]] = []
        self._mul_cache: dict = {}
        self._nf_cache: dict = {}

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return "GCASignature(%s, %d generators)" % (self.name or "?", len(self.names))

    # -- relations -------------------------------------------------------
    def add_relation(self, lead: Monomial, replacement: dict):
        for i, _ in lead:
            if self.odd[i]:
                raise ValueError("relations must have even leading monomials")
        self.relations.append((lead, dict(replacement)))
        self._mul_cache.clear()
        self._nf_cache.clear()

    # -- elements ----------------------------------------------------------
    def gen(self, name) -> "GCAElement":
        i = self.index[name] if isinstance(name, str) else name
        return GCAElement(self, {((i, 1),): Fraction(1)})

    def one(self) -> "GCAElement":
        return GCAElement(self, {(): Fraction(1)})

    def zero(self) -> "GCAElement":
        return GCAElement(self, {})

    def scalar(self, c) -> "GCAElement":
        return GCAElement(self, {(): Fraction(c)} if c else {})

    def mono_degree(self, m: Monomial) -> int:
        return sum(self.degrees[i] * e for i, e in m)

    def mono_weight(self, m: Monomial) -> int:
        return sum(self.weights[i] * e for i, e in m)

    def render_mono(self, m: Monomial, sep="*") -> str:
        if not m:
            return "1"
        parts = []
        for i, e in m:
            parts.append(self.names[i] if e == 1 else "%s^%d" % (self.names[i], e))
        return sep.join(parts)

    # -- core multiplication ------------------------------------------------
    def mono_mul(self, a: Monomial, b: Monomial):
        """Raw product of two monomials: (sign, monomial) or None if zero.

        No truncation or relations applied.
        """
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None or key in self._mul_cache:
            return hit
        odd = self.odd
        # Koszul sign: every odd factor of b moves left past the odd factors
        # of a with a larger index.
        sign = 1
        out = []
        ia = ib = 0
        na, nb = len(a), len(b)
        odd_a_remaining = sum(1 for i, _ in a if odd[i])
        res = None
        ok = True
        while ia < na or ib < nb:
            if ib >= nb or (ia < na and a[ia][0] < b[ib][0]):
                i, e = a[ia]
                if odd[i]:
                    odd_a_remaining -= 1
                out.append((i, e))
                ia += 1
            elif ia >= na or b[ib][0] < a[ia][0]:
                i, e = b[ib]
                if odd[i] and odd_a_remaining % 2:
                    sign = -sign
                out.append((i, e))
                ib += 1
            else:
                i, e = a[ia]
                if odd[i]:
                    ok = False
                    break
                out.append((i, e + b[ib][1]))
                ia += 1
                ib += 1
        if ok:
            res = (sign, tuple(out))
        self._mul_cache[key] = res
        return res

    def normal_form_mono(self, m: Monomial) -> dict:
        """Reduce a monomial by truncation and relations; returns a term dict."""
        hit = self._nf_cache.get(m)
        if hit is not None:
            return hit
        if self.bound is not None and self.mono_weight(m) > self.bound:
            res = {}
        else:
            res = None
            for lead, repl in self.relations:
                rest = _divide(m, lead)
                if rest is None:
                    continue
                res = {}
                for rm, c in repl.items():
                    prod = self.mono_mul(rm, rest)
                    if prod is None:
                        continue
                    s, pm = prod
                    for nm, c2 in self.normal_form_mono(pm).items():
                        v = res.get(nm, 0) + s * c * c2
                        if v:
                            res[nm] = v
                        else:
                            res.pop(nm, None)
                break
            if res is None:
                res = {m: Fraction(1)}
        self._nf_cache[m] = res
        return res

    def mul_terms(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for ma, ca in A.items():
            for mb, cb in B.items():
                prod = self.mono_mul(ma, mb)
                if prod is None:
                    continue
                s, m = prod
                for nm, c in self.normal_form_mono(m).items():
                    v = out.get(nm, 0) + s * ca * cb * c
                    if v:
                        out[nm] = v
                    else:
                        out.pop(nm, None)
        return out

    def normalize(self, terms: dict) -> dict:
        out: dict = {}
        for m, c in terms.items():
            if not c:
                continue
            for nm, c2 in self.normal_form_mono(m).items():
                v = out.get(nm, 0) + c * c2
                if v:
                    out[nm] = v
                else:
                    out.pop(nm, None)
        return out

    # -- finite bases --------------------------------------------------------
    def basis_by_degree(self, max_degree: int | None = None) -> dict[int, list[Monomial]]:
        """All normal-form monomials, grouped by degree.

        Requires a finite algebra: every even generator of positive degree
        must have positive weight under a bound, and even generators of
        degree 0 are not allowed.
        """
        n = len(self.names)
        for i in range(n):
            if not self.odd[i] and (self.bound is None or self.weights[i] <= 0):
                if max_degree is None or self.degrees[i] == 0:
                    raise ValueError("algebra is not finite-dimensional in generator %s" % self.names[i])
        out: dict[int, list[Monomial]] = {}
        # enumerate exponents generator by generator
        def rec(i, cur, deg, wt):
            if i == n:
                m = tuple(cur)
                if self.normal_form_mono(m) == {m: Fraction(1)}:
                    out.setdefault(deg, []).append(m)
                return
            rec(i + 1, cur, deg, wt)
            e = 1
            while True:
                d2 = deg + e * self.degrees[i]
                w2 = wt + e * self.weights[i]
                if self.bound is not None and w2 > self.bound:
                    break
                if max_degree is not None and d2 > max_degree:
                    break
                cur.append((i, e))
                rec(i + 1, cur, d2, w2)
                cur.pop()
                if self.odd[i]:
                    break
                e += 1
        rec(0, [], 0, 0)
        return {d: sorted(v) for d, v in sorted(out.items())}


def _divide(m: Monomial, lead: Monomial):
    """m / lead if lead divides m (even generators only), else None."""
    md = dict(m)
    for i, e in lead:
        if md.get(i, 0) < e:
            return None
    for i, e in lead:
        md[i] -= e
        if md[i] == 0:
            del md[i]
    return tuple(sorted(md.items()))


class GCAElement:
    __slots__ = ("sig", "terms")

    def __init__(self, sig: GCASignature, terms: dict | None = None):
        self.sig = sig
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    def _check(self, other):
        if isinstance(other, GCAElement):
            if other.sig is not self.sig:
                raise SignatureMismatch("elements live in different algebras")
            return other
        return self.sig.scalar(other)

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return GCAElement(self.sig, t)

    __radd__ = __add__

    def __neg__(self):
        return GCAElement(self.sig, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, GCAElement):
            c = Fraction(other)
            return GCAElement(self.sig, {m: c * v for m, v in self.terms.items()})
        other = self._check(other)
        return GCAElement(self.sig, self.sig.mul_terms(self.terms, other.terms))

    def __rmul__(self, other):
        c = Fraction(other)
        return GCAElement(self.sig, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, k: int):
        out = self.sig.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GCAElement):
            return self.sig is other.sig and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == self.sig.scalar(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Common degree of all terms, or None when inhomogeneous (0 for zero)."""
        degs = {self.sig.mono_degree(m) for m in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            return None
        return degs.pop()

    def homogeneous_parts(self) -> dict[int, "GCAElement"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.sig.mono_degree(m), {})[m] = c
        return {d: GCAElement(self.sig, t) for d, t in sorted(parts.items())}

    def render(self, sep="*") -> str:
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms):
            c = self.terms[m]
            ms = self.sig.render_mono(m, sep)
            if ms == "1":
                s = fstr(c)
            elif c == 1:
                s = ms
            elif c == -1:
                s = "-" + ms
            else:
                s = "%s*%s" % (fstr(c), ms)
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self):
        return self.render()


def gca_multiply(a: GCAElement, b: GCAElement) -> GCAElement:
    if a.sig is not b.sig:
        raise SignatureMismatch("elements live in different algebras")
    return a * b


class Derivation:
    """Graded derivation of degree ``shift`` given by its values on generators.

    D(xy) = D(x) y + (-1)^(shift * deg x) x D(y).  Generators missing from the
    table are sent to zero.
    """

    def __init__(self, sig: GCASignature, table: dict, shift: int = 1, check: bool = True):
        self.sig = sig
        self.shift = shift
        self.table: dict[int, GCAElement] = {}
        for k, v in table.items():
            i = sig.index[k] if isinstance(k, str) else k
            if v.sig is not sig:
                raise SignatureMismatch("derivation value in another algebra")
            if check and v.terms:
                d = v.degree()
                if d is None or d != sig.degrees[i] + shift:
                    raise DegreeMismatch("D(%s) has degree %r, expected %d"
                                         % (sig.names[i], d, sig.degrees[i] + shift))
            self.table[i] = v
        self._cache: dict = {}

    def on_mono(self, m: Monomial) -> dict:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        sig = self.sig
        out: dict = {}
        prefix_deg = 0
        for pos, (i, e) in enumerate(m):
            img = self.table.get(i)
            if img is not None and img.terms:
                before = m[:pos]
                after = m[pos + 1:]
                if e > 1:
                    mid = ((i, e - 1),)
                    coeff = e
                else:
                    mid = ()
                    coeff = 1
                sign = -1 if (self.shift % 2 and prefix_deg % 2) else 1
                # prefix * x^(e-1) * D(x) * suffix ; x^(e-1) is even here when e > 1
                left = {_merge(before, mid): Fraction(sign * coeff)}
                t = sig.mul_terms(sig.mul_terms(left, img.terms), {after: Fraction(1)})
                for k, v in t.items():
                    s = out.get(k, 0) + v
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            prefix_deg += sig.degrees[i] * e
        self._cache[m] = out
        return out

    def __call__(self, a: GCAElement) -> GCAElement:
        if a.sig is not self.sig:
            raise SignatureMismatch("derivation applied outside its algebra")
        out: dict = {}
        for m, c in a.terms.items():
            for k, v in self.on_mono(m).items():
                s = out.get(k, 0) + c * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return GCAElement(self.sig, out)


def _merge(a: Monomial, b: Monomial) -> Monomial:
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


def apply_derivation(table: dict, a: GCAElement, shift: int = 1) -> GCAElement:
    return Derivation(a.sig, table, shift)(a)


class AlgebraMap:
    """Algebra homomorphism defined by images of generators (degree preserving).

    Unlisted generators map to themselves when source and target coincide,
    otherwise they must be listed.
    """

    def __init__(self, source: GCASignature, target: GCASignature, images: dict):
        self.source = source
        self.target = target
        self.images: dict[int, GCAElement] = {}
        for k, v in images.items():
            i = source.index[k] if isinstance(k, str) else k
            if v.sig is not target:
                raise SignatureMismatch("image in wrong algebra")
            self.images[i] = v
        self._cache: dict = {}

    def image_of(self, i: int) -> GCAElement:
        img = self.images.get(i)
        if img is None:
            if self.source is self.target:
                return self.target.gen(i)
            raise KeyError("no image for generator %s" % self.source.names[i])
        return img

    def on_mono(self, m: Monomial) -> dict:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        if not m:
            res = {(): Fraction(1)}
        else:
            *rest, (i, e) = m
            head = self.on_mono(tuple(rest))
            res = head
            img = self.image_of(i).terms
            for _ in range(e):
                res = self.target.mul_terms(res, img)
        self._cache[m] = res
        return res

    def __call__(self, a: GCAElement) -> GCAElement:
        if a.sig is not self.source:
            raise SignatureMismatch("map applied outside its source")
        out: dict = {}
        for m, c in a.terms.items():
            for k, v in self.on_mono(m).items():
                s = out.get(k, 0) + c * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return GCAElement(self.target, out)


def element_from_vector(basis: list[Monomial], sig: GCASignature, vec) -> GCAElement:
    return GCAElement(sig, {m: c for m, c in zip(basis, vec) if c})


def vector_from_element(a: GCAElement, index: dict) -> dict[int, Fraction]:
    out = {}
    for m, c in a.terms.items():
        if m not in index:
            raise KeyError("monomial %s outside the basis" % a.sig.render_mono(m))
        out[index[m]] = c
    return out
