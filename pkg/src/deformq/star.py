"""Circle products on the Grassmann algebra, Wick conjugation and star exponentials."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

import numpy as np
from scipy.linalg import expm

from .grassmann import (
    BilinearForm,
    DimensionError,
    Multivector,
    _nonzero,
    bits,
    left_derivative_sign,
    popcount,
    right_derivative_sign,
    wedge_sign,
)
from .scalar import HBAR, ONE, ZERO, Scalar, to_complex


class SingularFormError(ArithmeticError):
    pass


# circle product -----------------------------------------------------------

def _pair_table(form: BilinearForm, a: int, b: int) -> dict:
    """theta^a ∘_B theta^b as {mask: coefficient}, cached on the form."""
    cache = form.__dict__.setdefault("_circle_cache", {})
    key = (a, b)
    hit = cache.get(key)
    if hit is not None:
        return hit
    B = form.B
    out: dict = {}
    ia = list(bits(a))

    def walk(pos, am, bm, coef):
        # pairs are chosen with strictly increasing left index so every
        # unordered set of contractions is produced once
        if not am & bm:
            s = wedge_sign(am, bm)
            m = am | bm
            c = coef if s > 0 else -coef
            v = out.get(m)
            out[m] = c if v is None else v + c
        for k in range(pos, len(ia)):
            i = ia[k]
            row = B[i]
            su = right_derivative_sign(am, i)
            am2 = am & ~(1 << i)
            for j in bits(bm):
                bij = row[j]
                if not _nonzero(bij):
                    continue
                s = su * left_derivative_sign(bm, j)
                c = coef * bij
                walk(k + 1, am2, bm & ~(1 << j), c if s > 0 else -c)

    one = ONE if form.is_exact() else 1.0 + 0j
    walk(0, a, b, one)
    out = {m: c for m, c in out.items() if _nonzero(c)}
    cache[key] = out
    return out


def circle_product(u: Multivector, v: Multivector, form: BilinearForm) -> Multivector:
    """u ∘_B v = u exp(sum_ij B_ij <-d_i d_j->) v, summed to the last nonzero order."""
    u._check(v)
    if form.d != u.d:
        raise DimensionError("bilinear form dimension differs from the algebra")
    out: dict = {}
    for a, ca in u._t.items():
        for b, cb in v._t.items():
            cab = ca * cb
            for m, c in _pair_table(form, a, b).items():
                t = cab * c
                prev = out.get(m)
                out[m] = t if prev is None else prev + t
    return Multivector._raw(u.d, {m: c for m, c in out.items() if _nonzero(c)})


def clifford_map(v: Multivector, u: Multivector, form: BilinearForm) -> Multivector:
    """gamma_v applied to u, i.e. v ∘_B u."""
    return circle_product(v, u, form)


def circle_chain(factors, form: BilinearForm) -> Multivector:
    it = iter(factors)
    out = next(it)
    for f in it:
        out = circle_product(out, f, form)
    return out


def circle_power(u: Multivector, n: int, form: BilinearForm) -> Multivector:
    out = Multivector.scalar(u.d, ONE if u.is_exact() else 1.0)
    for _ in range(n):
        out = circle_product(out, u, form)
    return out


def commutator(u, v, form):
    return circle_product(u, v, form) - circle_product(v, u, form)


def anticommutator(u, v, form):
    return circle_product(u, v, form) + circle_product(v, u, form)


# exterior exponential, Wick form ---------------------------------------------

def grassmann_exp(F: Multivector) -> Multivector:
    """Wedge exponential of a nilpotent even element (grades >= 2, even only)."""
    for m in F.masks():
        k = popcount(m)
        if k == 0 or k & 1:
            raise ValueError("grassmann_exp needs an element of even grade >= 2")
    exact = F.is_exact()
    one = ONE if exact else 1.0
    out = Multivector.scalar(F.d, one)
    term = out
    n = 1
    while True:
        term = term.wedge(F)
        if term.is_zero():
            return out
        term = term / n if exact else term.scale(1.0 / n)
        out = out + term
        n += 1


@dataclass(frozen=True)
class WickForm:
    """Grade-2 element F with g F g = -A/2, so that theta_i⌋(theta_j⌋F) = A_ij."""

    F: Multivector
    matrix: tuple
    g: BilinearForm
    A: BilinearForm

    def residual(self):
        """Entries of sum_rs F^{rs} g_is g_jr - A_ij / 2 (all zero when valid)."""
        d = self.g.d
        g, A, Fm = self.g.B, self.A.B, self.matrix
        exact = self.g.is_exact()
        half = ONE / 2 if exact else 0.5
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = ZERO if exact else 0j
                for r in range(d):
                    for s in range(d):
                        acc = acc + Fm[r][s] * g[i][s] * g[j][r]
                row.append(acc - A[i][j] * half)
            out.append(row)
        return out


def _inverse(M, exact: bool):
    """Gauss-Jordan inverse over the scalar field."""
    d = len(M)
    zero, one = (ZERO, ONE) if exact else (0j, 1 + 0j)
    aug = [list(M[i]) + [one if i == j else zero for j in range(d)] for i in range(d)]
    for col in range(d):
        piv = None
        for r in range(col, d):
            x = aug[r][col]
            if (_nonzero(x) if exact else abs(x) > 1e-13):
                piv = r
                break
        if piv is None:
            raise SingularFormError(f"symmetric part g is singular (no pivot in column {col + 1})")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        inv = p.inverse() if exact else 1 / p
        aug[col] = [x * inv for x in aug[col]]
        for r in range(d):
            if r != col and _nonzero(aug[r][col]):
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def _matmul(X, Y):
    n, k, m = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = X[i][0] * Y[0][j]
            for t in range(1, k):
                acc = acc + X[i][t] * Y[t][j]
            row.append(acc)
        out.append(row)
    return out


def solve_wick_form(g: BilinearForm, A: BilinearForm) -> WickForm:
    """F^{rs} = -(1/2) (g^-1 A g^-1)^{rs}; F = sum_{r,s} F^{rs} theta_r theta_s."""
    if g.d != A.d:
        raise DimensionError("g and A differ in dimension")
    exact = g.is_exact() and A.is_exact()
    if not exact:
        g, A = _as_float_form(g), _as_float_form(A)
    ginv = _inverse(g.B, exact)
    half = ONE / 2 if exact else 0.5
    M = _matmul(_matmul(ginv, [list(r) for r in A.B]), ginv)
    Fm = tuple(tuple(-x * half for x in row) for row in M)
    d = g.d
    terms = {}
    for r in range(d):
        for s in range(r + 1, d):
            c = Fm[r][s] - Fm[s][r]
            if _nonzero(c):
                terms[(1 << r) | (1 << s)] = c
    return WickForm(Multivector(d, terms), Fm, g, A)


def _as_float_form(f: BilinearForm) -> BilinearForm:
    return f if not f.is_exact() else f.to_float()


def wick_conjugate(u: Multivector, wick: WickForm) -> Multivector:
    """e^{-F} ∧ u ∧ e^{F}."""
    return grassmann_exp(-wick.F).wedge(u).wedge(grassmann_exp(wick.F))


def wick_clifford(v: Multivector, wick: WickForm):
    """The Wick-conjugated Clifford map u -> e^{-F} ∧ (v ∘_g (e^F ∧ u))."""
    eF = grassmann_exp(wick.F)
    emF = grassmann_exp(-wick.F)

    def apply(u: Multivector) -> Multivector:
        return emF.wedge(circle_product(v, eF.wedge(u), wick.g))

    return apply


def scalar_part(u: Multivector):
    return u.scalar_part()


@dataclass
class EquivalenceReport:
    indices: tuple
    lhs: object
    rhs: object
    difference: object

    @property
    def ok(self) -> bool:
        return not _nonzero(self.difference)


def scalar_equivalence_check(indices, form: BilinearForm) -> EquivalenceReport:
    """Compare eps[theta_i1 ∘_B ... ∘_B theta_in] with eps[e^{-F}(theta_i1 ∘_g ... ∘_g e^F)]."""
    d = form.d
    gens = [Multivector.generator(d, i, ONE if form.is_exact() else 1.0) for i in indices]
    one = Multivector.scalar(d, ONE if form.is_exact() else 1.0)
    lhs_el = circle_chain(gens, form) if gens else one
    g, A = form.g, form.A
    wick = solve_wick_form(g, A)
    eF = grassmann_exp(wick.F)
    rhs_el = circle_chain(gens + [eF], g) if gens else eF
    rhs_el = grassmann_exp(-wick.F).wedge(rhs_el)
    lhs, rhs = lhs_el.scalar_part(), rhs_el.scalar_part()
    return EquivalenceReport(tuple(indices), lhs, rhs, lhs - rhs)


def wick_pairing(indices, form: BilinearForm):
    """Signed sum over perfect matchings of positions, each pair (p<q) weighted by B(theta_ip, theta_iq)."""
    n = len(indices)
    exact = form.is_exact()
    zero = ZERO if exact else 0j
    if n % 2:
        return zero
    B = form.B

    def rec(pos):
        if not pos:
            return ONE if exact else 1 + 0j
        first, rest = pos[0], pos[1:]
        acc = zero
        for k, q in enumerate(rest):
            b = B[indices[first] - 1][indices[q] - 1]
            if not _nonzero(b):
                continue
            sub = rec(rest[:k] + rest[k + 1:])
            term = b * sub
            # moving position q next to `first` crosses k positions
            acc = acc - term if k & 1 else acc + term
        return acc

    return rec(tuple(range(n)))


# star-product specs and exponentials ----------------------------------------

@dataclass(frozen=True)
class StarProductSpec:
    """Selects a star product on Gr(d).

    Only the Grassmann kinds live here (``circle`` and ``pauli``); the
    bosonic and mixed kinds are handled by :mod:`deformq.phase`.
    """

    kind: str
    d: int
    form: BilinearForm = field(compare=False)

    @classmethod
    def circle(cls, form: BilinearForm) -> "StarProductSpec":
        return cls("circle", form.d, form)

    @classmethod
    def pauli(cls, d: int) -> "StarProductSpec":
        return cls("pauli", d, BilinearForm.pauli(d))

    def product(self, u: Multivector, v: Multivector) -> Multivector:
        if u.d != self.d:
            raise DimensionError(f"spec is for d={self.d}, element has d={u.d}")
        form = self.form
        if not (u.is_exact() and v.is_exact()):
            if form.is_exact():
                raise TypeError("float elements need a float form; use circle_product with float_form(hbar)")
        return circle_product(u, v, form)

    def float_form(self, hbar: float = 1.0) -> BilinearForm:
        return self.form.to_float(hbar)


def left_matrix(X: Multivector, form: BilinearForm) -> np.ndarray:
    """Matrix of w -> X ∘_B w in the monomial basis (float)."""
    n = 1 << X.d
    M = np.zeros((n, n), dtype=complex)
    for b in range(n):
        col = circle_product(X, Multivector._raw(X.d, {b: 1.0 + 0j}), form)
        for m, c in col._t.items():
            M[m, b] = c
    return M


def _vector_to_mv(d: int, vec) -> Multivector:
    return Multivector(d, {m: complex(x) for m, x in enumerate(vec) if x != 0})


def _float_mv(X: Multivector, hbar: float, c: float) -> Multivector:
    return X.to_float(hbar, c) if X.is_exact() else X


def star_exponential(X: Multivector, spec: StarProductSpec, t: float, hbar: float = 1.0,
                     c: float = 1.0, method: str = "auto") -> Multivector:
    """Exp(X t) = sum_n (1/n!) (-i t / hbar)^n X^{n⋆} as a float Multivector.

    ``method`` is ``matrix`` (exponential of the left-multiplication matrix),
    ``closed`` (cos/sin form, needs X⋆X scalar) or ``auto`` (closed when
    available, else matrix).
    """
    if X.d != spec.d:
        raise DimensionError(f"spec is for d={spec.d}, element has d={X.d}")
    form = spec.form.to_float(hbar, c) if spec.form.is_exact() else spec.form
    if method in ("auto", "closed"):
        s = square_scalar(X, spec, hbar, c)
        if s is not None:
            return _closed_exponential(X, s, t, hbar, c)
        if method == "closed":
            raise ValueError("closed form needs X⋆X to be a scalar")
    Xf = _float_mv(X, hbar, c)
    M = left_matrix(Xf, form) * (-1j * t / hbar)
    vec = expm(M)[:, 0]
    return _vector_to_mv(X.d, vec)


def square_scalar(X: Multivector, spec: StarProductSpec, hbar: float = 1.0, c: float = 1.0):
    """s with X⋆X = s, or None when the square is not a scalar.

    Exact X is squared with the exact form; float X with the form evaluated at ``hbar``.
    """
    if X.is_exact() and spec.form.is_exact():
        sq = circle_product(X, X, spec.form)
    else:
        form = spec.form.to_float(hbar, c) if spec.form.is_exact() else spec.form
        sq = circle_product(X, X, form)
    if set(sq.masks()) - {0}:
        return None
    return sq.scalar_part() if sq else (ZERO if sq.is_exact() else 0j)


def _closed_exponential(X, s, t, hbar, c):
    sf = to_complex(s, hbar, c)
    Xf = _float_mv(X, hbar, c)
    one = Multivector.scalar(X.d, 1.0 + 0j)
    if sf == 0:
        return one - Xf.scale(1j * t / hbar)
    r = cmath.sqrt(sf)
    return one.scale(cmath.cos(r * t / hbar)) - Xf.scale(1j * cmath.sin(r * t / hbar) / r)
