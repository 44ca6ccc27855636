"""
Truncated Weil algebras of gl_n, their basic subcomplexes, and the WO_n complex.

Conventions: generators ``th{a}{b}`` (degree 1) and ``Om{a}{b}`` (degree 2),
indices 1-based, with

    d th = Om - th.th ,   d Om = Om.th - th.Om     (matrix products)

and truncation weight 0 on th, 1 on Om.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .gca import (AlgebraMap, Derivation, GCAElement, GCASignature,
                  element_from_vector, vector_from_element)
from .linalg import (InconsistentComplex, SparseMatrix, cohomology_at_degree,
                     kernel_basis, rref)


class WeilConstructionError(RuntimeError):
    pass


def th(a, b):
    return "th%d%d" % (a, b)


def om(a, b):
    return "Om%d%d" % (a, b)


@dataclass
class FiniteComplex:
    """A finite cochain complex with an explicit basis of GCA elements per degree."""
    name: str
    sig: GCASignature
    basis: dict[int, list[GCAElement]]
    diff: dict[int, SparseMatrix]          # diff[k]: C^k -> C^{k+1}
    checks: dict[str, bool] = field(default_factory=dict)

    def dim(self, k):
        return len(self.basis.get(k, []))

    def degrees(self):
        if not self.basis:
            return []
        return list(range(0, max(self.basis) + 1))

    def euler_characteristic(self):
        return sum((-1) ** k * self.dim(k) for k in self.degrees())


def _complex_from_monomials(name, sig, d: Derivation, basis_monos: dict[int, list]):
    basis = {}
    diff = {}
    index = {}
    for k, ms in basis_monos.items():
        index[k] = {m: i for i, m in enumerate(ms)}
        basis[k] = [GCAElement(sig, {m: Fraction(1)}) for m in ms]
    top = max(basis_monos) if basis_monos else 0
    for k in range(0, top + 1):
        src = basis_monos.get(k, [])
        tgt_index = index.get(k + 1, {})
        cols = []
        for m in src:
            img = d(GCAElement(sig, {m: Fraction(1)}))
            cols.append(vector_from_element(img, tgt_index))
        diff[k] = SparseMatrix.from_columns(len(tgt_index), cols)
        basis.setdefault(k, [])
    return FiniteComplex(name, sig, basis, diff)


def _check_d_squared(C: FiniteComplex) -> bool:
    for k in C.degrees():
        if k + 1 in C.diff:
            if not (C.diff[k + 1] @ C.diff[k]).is_zero():
                return False
    return True


class WeilAlgebra:
    def __init__(self, n: int, m: int | None):
        if n < 1:
            raise ValueError("n must be >= 1")
        if m is not None and m < 0:
            raise ValueError("m must be >= 0")
        self.n = n
        self.m = m
        gens = [(th(a, b), 1) for a in range(1, n + 1) for b in range(1, n + 1)]
        gens += [(om(a, b), 2) for a in range(1, n + 1) for b in range(1, n + 1)]
        weights = [0] * (n * n) + [1] * (n * n)
        self.sig = GCASignature(gens, weights=weights, bound=m, name="W(gl%d)_%s" % (n, m))
        T = self.theta_matrix()
        O = self.omega_matrix()
        table = {}
        for a in range(n):
            for b in range(n):
                tt = sum((T[a][c] * T[c][b] for c in range(n)), self.sig.zero())
                table[th(a + 1, b + 1)] = O[a][b] - tt
                ot = sum((O[a][c] * T[c][b] - T[a][c] * O[c][b] for c in range(n)), self.sig.zero())
                table[om(a + 1, b + 1)] = ot
        self.d = Derivation(self.sig, table, 1)
        for i in range(len(self.sig)):
            if self.d(self.d(self.sig.gen(i))):
                raise WeilConstructionError("d^2 != 0 on %s" % self.sig.names[i])

    def theta_matrix(self):
        return [[self.sig.gen(th(a, b)) for b in range(1, self.n + 1)] for a in range(1, self.n + 1)]

    def omega_matrix(self):
        return [[self.sig.gen(om(a, b)) for b in range(1, self.n + 1)] for a in range(1, self.n + 1)]

    def basis_by_degree(self):
        return self.sig.basis_by_degree()

    def complex(self) -> FiniteComplex:
        C = _complex_from_monomials(self.sig.name, self.sig, self.d, self.basis_by_degree())
        C.checks["d_squared_zero"] = _check_d_squared(C)
        return C

    # -- Cartan operations --------------------------------------------------
    def contraction(self, xi) -> Derivation:
        """i_xi: th^a_b -> xi[a][b], Om -> 0 (degree -1)."""
        n = self.n
        table = {}
        for a in range(n):
            for b in range(n):
                if xi[a][b]:
                    table[th(a + 1, b + 1)] = self.sig.scalar(xi[a][b])
        return Derivation(self.sig, table, -1)

    def lie_derivative(self, xi):
        i = self.contraction(xi)
        d = self.d
        return lambda x: d(i(x)) + i(d(x))

    def conjugation(self, r):
        """Automorphism induced by Ad(r) for a diagonal sign matrix r."""
        n = self.n
        images = {}
        for a in range(n):
            for b in range(n):
                s = r[a] * r[b]
                images[th(a + 1, b + 1)] = s * self.sig.gen(th(a + 1, b + 1))
                images[om(a + 1, b + 1)] = s * self.sig.gen(om(a + 1, b + 1))
        return AlgebraMap(self.sig, self.sig, images)


def build_weil(n: int, m: int | None) -> WeilAlgebra:
    return WeilAlgebra(n, m)


class WOComplex:
    """E(u_1, u_3, ...) (x) P_n[c_1..c_n] truncated at weight sum(i * exp c_i) <= n.

    ``odd_top`` is the largest odd index of a u-generator; the default is the
    largest odd integer <= n.  d u_i = c_i for i <= n and 0 otherwise.
    """

    def __init__(self, n: int, odd_top: int | None = None):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        if odd_top is None:
            odd_top = n if n % 2 else n - 1
        self.odd_top = odd_top
        us = list(range(1, odd_top + 1, 2))
        gens = [("u%d" % i, 2 * i - 1) for i in us] + [("c%d" % i, 2 * i) for i in range(1, n + 1)]
        weights = [0] * len(us) + list(range(1, n + 1))
        self.sig = GCASignature(gens, weights=weights, bound=n, name="WO%d" % n)
        table = {}
        for i in us:
            if i <= n:
                table["u%d" % i] = self.sig.gen("c%d" % i)
        self.d = Derivation(self.sig, table, 1)
        for i in range(len(self.sig)):
            if self.d(self.d(self.sig.gen(i))):
                raise WeilConstructionError("d^2 != 0")

    def basis_by_degree(self):
        return self.sig.basis_by_degree()

    def basis_size(self):
        return sum(len(v) for v in self.basis_by_degree().values())

    def complex(self) -> FiniteComplex:
        C = _complex_from_monomials(self.sig.name, self.sig, self.d, self.basis_by_degree())
        C.checks["d_squared_zero"] = _check_d_squared(C)
        return C


def build_wo(n: int, odd_top: int | None = None) -> WOComplex:
    return WOComplex(n, odd_top)


# -- basic subcomplexes --------------------------------------------------------

def _unit(n, a, b):
    M = [[0] * n for _ in range(n)]
    M[a][b] = 1
    return M


def subgroup_data(n: int, H: str):
    """(Lie algebra basis, component representatives) for H in {O, SO, GL}."""
    H = H.upper().rstrip("0123456789").replace("_", "")
    if H == "GL":
        lie = [_unit(n, a, b) for a in range(n) for b in range(n)]
    elif H in ("O", "SO"):
        lie = []
        for a in range(n):
            for b in range(a + 1, n):
                M = [[0] * n for _ in range(n)]
                M[a][b] = 1
                M[b][a] = -1
                lie.append(M)
    else:
        raise ValueError("unknown subgroup %r" % H)
    reps = [] if H == "SO" else [[-1] + [1] * (n - 1)]
    return lie, reps


@dataclass
class BasicSubcomplex:
    parent: WeilAlgebra
    subgroup: str
    complex: FiniteComplex


def basic_subcomplex(W: WeilAlgebra, H: str) -> BasicSubcomplex:
    if W.m is None:
        raise ValueError("basic_subcomplex needs a truncated Weil algebra")
    lie, reps = subgroup_data(W.n, H)
    sig = W.sig
    monos = W.basis_by_degree()
    contractions = [W.contraction(x) for x in lie]
    lies = [W.lie_derivative(x) for x in lie]
    conj = [W.conjugation(r) for r in reps]
    basis: dict[int, list[GCAElement]] = {}
    coords: dict[int, tuple] = {}
    for k, ms in monos.items():
        idx = {m: i for i, m in enumerate(ms)}
        idx_lo = {m: i for i, m in enumerate(monos.get(k - 1, []))}
        rows: dict[tuple[int, int], Fraction] = {}
        nrows = 0
        for j, m in enumerate(ms):
            x = GCAElement(sig, {m: Fraction(1)})
            r0 = 0
            for op in contractions:
                for i, v in vector_from_element(op(x), idx_lo).items():
                    rows[r0 + i, j] = v
                r0 += len(idx_lo)
            for op in lies:
                for i, v in vector_from_element(op(x), idx).items():
                    rows[r0 + i, j] = v
                r0 += len(idx)
            for op in conj:
                y = op(x) - x
                for i, v in vector_from_element(y, idx).items():
                    rows[r0 + i, j] = v
                r0 += len(idx)
            nrows = r0
        M = SparseMatrix(max(nrows, 1), len(ms), rows)
        ker = kernel_basis(M)
        # echelonise the basis so coordinates can be read at pivots
        K = SparseMatrix(len(ker), len(ms), {(r, c): v for r, vec in enumerate(ker) for c, v in enumerate(vec) if v})
        erows, pivots = rref(K)
        basis[k] = [GCAElement(sig, {ms[c]: v for c, v in r.items()}) for r in erows]
        coords[k] = (pivots, [ms[p] for p in pivots])
    diff = {}
    closed = True
    top = max(monos) if monos else 0
    for k in range(top + 1):
        src = basis.get(k, [])
        tgt = basis.get(k + 1, [])
        piv_monos = coords.get(k + 1, ([], []))[1]
        cols = []
        for x in src:
            y = W.d(x)
            col = {}
            recon = sig.zero()
            for i, pm in enumerate(piv_monos):
                c = y.terms.get(pm)
                if c:
                    col[i] = c
                    recon = recon + c * tgt[i]
            if recon != y:
                closed = False
            cols.append(col)
        diff[k] = SparseMatrix.from_columns(len(tgt), cols)
        basis.setdefault(k, [])
    name = "W(gl%d,%s%d)_%d" % (W.n, H.upper(), W.n, W.m)
    C = FiniteComplex(name, sig, basis, diff)
    C.checks["d_squared_zero"] = _check_d_squared(C)
    C.checks["closed_under_d"] = closed
    return BasicSubcomplex(W, H, C)


# -- cohomology -----------------------------------------------------------------

@dataclass
class CohomologyReport:
    complex: str
    dims: list[int]
    representatives: dict[int, list[GCAElement]]
    checks: dict[str, bool]
    euler_chain: int = 0
    euler_cohomology: int = 0

    def to_json(self) -> dict:
        return {
            "complex": self.complex,
            "degrees": [
                {"degree": k, "dimension": self.dims[k],
                 "basis": [r.render() for r in self.representatives.get(k, [])]}
                for k in range(len(self.dims))
            ],
            "checks": dict(sorted(self.checks.items())),
        }


def complex_cohomology(C) -> CohomologyReport:
    if isinstance(C, (WeilAlgebra, WOComplex)):
        C = C.complex()
    elif isinstance(C, BasicSubcomplex):
        C = C.complex
    if not C.checks.get("d_squared_zero", True):
        raise InconsistentComplex("d^2 != 0 in %s" % C.name)
    dims = []
    reps = {}
    for k in C.degrees():
        d_out = C.diff.get(k, SparseMatrix(0, C.dim(k)))
        if k > 0:
            d_in = C.diff[k - 1]
        else:
            d_in = SparseMatrix(C.dim(0), 0)
        dim, vecs = cohomology_at_degree(d_in, d_out)
        dims.append(dim)
        basis = C.basis[k]
        reps[k] = [sum((c * b for c, b in zip(v, basis) if c), C.sig.zero()) for v in vecs]
    checks = dict(C.checks)
    rep = CohomologyReport(C.name, dims, reps, checks)
    rep.euler_chain = C.euler_characteristic()
    rep.euler_cohomology = sum((-1) ** k * d for k, d in enumerate(dims))
    rep.checks["euler_characteristic"] = rep.euler_chain == rep.euler_cohomology
    return rep
