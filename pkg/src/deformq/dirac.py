"""Grassmann representations of the Dirac algebra under the Pauli star product."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, expm_frechet

from .grassmann import BilinearForm, Multivector, trace
from .scalar import HBAR, I, ONE, ZERO, Scalar, as_scalar, to_complex
from .spin import sigma
from .star import StarProductSpec, circle_product, left_matrix, star_exponential

# sqrt(2/hbar) = 1/h
_INV_H = Scalar.monomial(1, 0, h=-1)
DIRAC_TRACE_NORM = 4
METRIC = (1, -1, -1, -1)
LEVI = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}


@dataclass(frozen=True)
class DiracRep:
    kind: str
    d: int
    alpha: tuple
    beta: Multivector
    form: BilinearForm

    def product(self, *xs) -> Multivector:
        out = xs[0]
        for x in xs[1:]:
            out = circle_product(out, x, self._form_for(out, x))
        return out

    def _form_for(self, u, v):
        if u.is_exact() and v.is_exact():
            return self.form
        return self.float_form()

    def float_form(self, hbar: float = 1.0) -> BilinearForm:
        return self.form.to_float(hbar)

    def commutator(self, u, v):
        return self.product(u, v) - self.product(v, u)

    def anticommutator(self, u, v):
        return self.product(u, v) + self.product(v, u)

    def one(self, value=ONE) -> Multivector:
        return Multivector.scalar(self.d, value)

    @property
    def spec(self) -> StarProductSpec:
        return StarProductSpec.pauli(self.d)

    @property
    def gamma(self) -> tuple:
        return (self.beta,) + tuple(self.product(self.beta, a) for a in self.alpha)

    @property
    def gamma5(self) -> Multivector:
        g = self.gamma
        return self.product(g[0], g[1], g[2], g[3]).scale(I)

    def trace(self, u: Multivector):
        """Tr normalised to Tr(1) = 4 in every representation."""
        return trace(u, norm=DIRAC_TRACE_NORM)

    def slash(self, vec4) -> Multivector:
        """gamma^mu v_mu = v^0 gamma^0 - v·gamma for contravariant components v^mu."""
        g = self.gamma
        out = _mul(g[0], vec4[0])
        for i in (1, 2, 3):
            out = out - _mul(g[i], vec4[i])
        return out


def _mul(u: Multivector, k) -> Multivector:
    if isinstance(k, (float, complex)):
        return (u.to_float() if u.is_exact() else u).scale(k)
    return u.scale(as_scalar(k))


def build_rep(kind: str) -> DiracRep:
    """D4, D5 or D6 (case-insensitive)."""
    kind = kind.upper()
    if kind == "D4":
        d = 4
        alpha = tuple(Multivector.generator(d, i, _INV_H) for i in (1, 2, 3))
        beta = Multivector.generator(d, 4, _INV_H)
    elif kind == "D5":
        d = 5
        t5 = Multivector.generator(d, 5, _INV_H)
        alpha = tuple(sigma(i, d).wedge(t5) for i in (1, 2, 3))
        # (2i / hbar) theta_4 theta_5 = i h^-2 theta_4 theta_5
        beta = Multivector.monomial(d, [4, 5], I * Scalar.monomial(1, 0, h=-2))
    elif kind == "D6":
        d = 6
        s4 = sigma(1, d, offset=3)
        alpha = tuple(sigma(i, d).wedge(s4) for i in (1, 2, 3))
        beta = sigma(3, d, offset=3)
    else:
        raise ValueError(f"unknown representation {kind!r}; expected D4, D5 or D6")
    return DiracRep(kind, d, alpha, beta, BilinearForm.pauli(d))


REPS = ("D4", "D5", "D6")


def algebra_relations(rep: DiracRep) -> dict:
    """Named residuals of the Dirac and gamma algebra (all zero when the representation is valid)."""
    out = {}
    one = rep.one()
    for k in range(3):
        for l in range(3):
            exp = one.scale(2) if k == l else Multivector.zero(rep.d)
            out[f"{{alpha{k + 1},alpha{l + 1}}} = {2 if k == l else 0}"] = rep.anticommutator(rep.alpha[k], rep.alpha[l]) - exp
        out[f"{{alpha{k + 1},beta}} = 0"] = rep.anticommutator(rep.alpha[k], rep.beta)
    out["beta ⋆ beta = 1"] = rep.product(rep.beta, rep.beta) - one
    g = rep.gamma
    for mu in range(4):
        for nu in range(4):
            exp = one.scale(2 * METRIC[mu]) if mu == nu else Multivector.zero(rep.d)
            out[f"{{gamma{mu},gamma{nu}}} = 2g"] = rep.anticommutator(g[mu], g[nu]) - exp
    g5 = rep.gamma5
    out["gamma5 ⋆ gamma5 = 1"] = rep.product(g5, g5) - one
    for mu in range(4):
        out[f"{{gamma5,gamma{mu}}} = 0"] = rep.anticommutator(g5, g[mu])
    return out


# Lorentz structure ------------------------------------------------------------------

def spin_generators(rep: DiracRep) -> tuple:
    """S_i = -i (hbar/4) eps_ijk alpha^j ⋆ alpha^k."""
    out = []
    for i in range(3):
        acc = Multivector.zero(rep.d)
        for (a, b, c), s in LEVI.items():
            if a == i:
                acc = acc + rep.product(rep.alpha[b], rep.alpha[c]).scale(s)
        out.append(acc.scale(-I * HBAR / 4))
    return tuple(out)


def boost_generators(rep: DiracRep) -> tuple:
    """K_i = i (hbar/2) alpha^i."""
    return tuple(a.scale(I * HBAR / 2) for a in rep.alpha)


def sigma_mu_nu(rep: DiracRep) -> dict:
    """sigma^{mu nu} = (i/2) [gamma^mu, gamma^nu]."""
    g = rep.gamma
    return {(m, n): rep.commutator(g[m], g[n]).scale(I / 2) for m in range(4) for n in range(4)}


def lorentz_relations(rep: DiracRep) -> dict:
    S, K = spin_generators(rep), boost_generators(rep)
    sm = sigma_mu_nu(rep)
    out = {}
    ih = I * HBAR
    for (i, j, k), s in LEVI.items():
        if s < 0:
            continue
        out[f"[S{i + 1},S{j + 1}] = i hbar S{k + 1}"] = rep.commutator(S[i], S[j]) - S[k].scale(ih)
        out[f"[S{i + 1},K{j + 1}] = i hbar K{k + 1}"] = rep.commutator(S[i], K[j]) - K[k].scale(ih)
        out[f"[K{i + 1},K{j + 1}] = -i hbar S{k + 1}"] = rep.commutator(K[i], K[j]) + S[k].scale(ih)
    for i in range(3):
        out[f"K{i + 1} = (hbar/2) sigma^0{i + 1}"] = K[i] - sm[(0, i + 1)].scale(HBAR / 2)
        acc = Multivector.zero(rep.d)
        for (a, b, c), s in LEVI.items():
            if a == i and b < c:
                acc = acc + sm[(b + 1, c + 1)].scale(s)
        out[f"S{i + 1} = (hbar/2) eps sigma^jk"] = S[i] - acc.scale(HBAR / 2)
        # S_i = (hbar/2) sigma^i of the first generator triple, valid in every representation
        out[f"S{i + 1} = (hbar/2) sigma^{i + 1}"] = S[i] - sigma(i + 1, rep.d).scale(HBAR / 2)
    return out


def boost_element(rep: DiracRep, omega, hbar: float = 1.0) -> Multivector:
    """Exp_P(omega · K) through the star-exponential engine (float)."""
    K = boost_generators(rep)
    X = None
    for k, w in zip(K, omega):
        term = k.to_float(hbar).scale(float(w))
        X = term if X is None else X + term
    return star_exponential(X, rep.spec, 1.0, hbar)


def boost_element_closed(rep: DiracRep, omega, hbar: float = 1.0) -> Multivector:
    """cosh(eta/2) + (n·alpha) sinh(eta/2) with eta = |omega|."""
    eta = math.sqrt(sum(float(w) ** 2 for w in omega))
    out = rep.one(1.0 + 0j)
    if eta == 0:
        return out
    out = out.scale(math.cosh(eta / 2))
    for a, w in zip(rep.alpha, omega):
        out = out + a.to_float(hbar).scale(float(w) / eta * math.sinh(eta / 2))
    return out


def boost_matrix(omega) -> np.ndarray:
    """Standard pure boost with rapidity vector omega (symmetric 4x4)."""
    w = np.array([float(x) for x in omega])
    eta = float(np.linalg.norm(w))
    L = np.eye(4)
    if eta == 0:
        return L
    n = w / eta
    L[0, 0] = math.cosh(eta)
    L[0, 1:] = n * math.sinh(eta)
    L[1:, 0] = n * math.sinh(eta)
    L[1:, 1:] += (math.cosh(eta) - 1) * np.outer(n, n)
    return L


def extract_lambda(rep: DiracRep, images, hbar: float = 1.0) -> np.ndarray:
    """Lambda^mu_nu from images[mu] = sum_nu Lambda^mu_nu gamma^nu, via Tr(X ⋆ gamma_nu) / 4."""
    g = [x.to_float(hbar) for x in rep.gamma]
    form = rep.float_form(hbar)
    L = np.zeros((4, 4))
    for mu in range(4):
        for nu in range(4):
            val = circle_product(images[mu], g[nu], form).scalar_part()
            L[mu, nu] = (complex(val) * METRIC[nu]).real
    return L


def boost_gammas(rep: DiracRep, omega, hbar: float = 1.0) -> list:
    """Exp(-omega·K) ⋆ gamma^mu ⋆ Exp(omega·K)."""
    S = boost_element(rep, omega, hbar)
    Sinv = boost_element(rep, [-float(w) for w in omega], hbar)
    form = rep.float_form(hbar)
    return [circle_product(circle_product(Sinv, x.to_float(hbar), form), S, form) for x in rep.gamma]


def boost_alphas(rep: DiracRep, omega, hbar: float = 1.0) -> list:
    """Exp(omega·K) ⋆ alpha^mu ⋆ Exp(omega·K) with alpha^0 = 1."""
    S = boost_element(rep, omega, hbar)
    form = rep.float_form(hbar)
    alphas = [rep.one(1.0 + 0j)] + [a.to_float(hbar) for a in rep.alpha]
    return [circle_product(circle_product(S, a, form), S, form) for a in alphas]


def extract_lambda_alpha(rep: DiracRep, images, hbar: float = 1.0) -> np.ndarray:
    """Coefficients of images[mu] on the basis (1, alpha^1, alpha^2, alpha^3)."""
    basis = [rep.one(1.0 + 0j)] + [a.to_float(hbar) for a in rep.alpha]
    form = rep.float_form(hbar)
    L = np.zeros((4, 4))
    for mu in range(4):
        for nu in range(4):
            # each basis element squares to 1, so eps(X ⋆ b) picks its coefficient
            L[mu, nu] = complex(circle_product(images[mu], basis[nu], form).scalar_part()).real
    return L


def lorentz_transform(rep: DiracRep, omega_mn, hbar: float = 1.0) -> list:
    """Exp(-(hbar/4) sigma^{mu nu} omega_{mu nu}) ⋆ gamma ⋆ Exp(+(hbar/4) sigma^{mu nu} omega_{mu nu})."""
    sm = sigma_mu_nu(rep)
    G = None
    for m in range(4):
        for n in range(4):
            w = float(omega_mn[m][n])
            if w == 0:
                continue
            term = sm[(m, n)].to_float(hbar).scale(w * hbar / 4)
            G = term if G is None else G + term
    if G is None:
        G = rep.one(0j)
    spec = rep.spec
    left = star_exponential(-G, spec, 1.0, hbar, method="matrix")
    right = star_exponential(G, spec, 1.0, hbar, method="matrix")
    form = rep.float_form(hbar)
    return [circle_product(circle_product(left, x.to_float(hbar), form), right, form) for x in rep.gamma]


def lorentz_matrix(omega_mn) -> np.ndarray:
    """exp of the generator matrix  omega^mu_nu = g^{mu mu} omega_{mu nu}."""
    W = np.array([[float(omega_mn[m][n]) for n in range(4)] for m in range(4)])
    G = np.diag(METRIC).astype(float) @ W
    return expm(G)


def parity(rep: DiracRep, X: Multivector) -> Multivector:
    return rep.product(rep.beta, X, rep.beta)


def rapidity_for_momentum(p, m: float, c: float = 1.0) -> list:
    """omega with Exp(-omega·K) ⋆ gamma^0 ⋆ Exp(omega·K) = pslash / mc."""
    pf = [float(x) for x in p]
    pn = math.sqrt(sum(x * x for x in pf))
    if pn == 0:
        return [0.0, 0.0, 0.0]
    eta = math.asinh(pn / (m * c))
    return [-x / pn * eta for x in pf]


# kinematics and projectors --------------------------------------------------------------

@dataclass(frozen=True)
class Kinematics:
    p: tuple
    m: object
    c: object = 1
    u: tuple = (0, 1, 0)

    @property
    def energy_squared(self):
        c = self.c
        return sum(x * x for x in self.p) * c * c + self.m * self.m * c ** 4

    @property
    def energy(self):
        e2 = self.energy_squared
        if isinstance(e2, (int,)) or hasattr(e2, "numerator"):
            from fractions import Fraction

            e2f = Fraction(e2)
            num, den = math.isqrt(e2f.numerator), math.isqrt(e2f.denominator)
            if num * num == e2f.numerator and den * den == e2f.denominator:
                return Fraction(num, den)
        return math.sqrt(float(e2))

    def is_exact(self) -> bool:
        from fractions import Fraction

        return isinstance(self.energy, (int, Fraction))

    def check(self, tol: float = 1e-12):
        un = sum(float(x) ** 2 for x in self.u)
        if abs(un - 1) > tol:
            raise ValueError("spin axis must be a unit vector")
        if abs(sum(float(a) * float(b) for a, b in zip(self.u, self.p))) > tol:
            raise ValueError("spin axis must be orthogonal to the momentum")


def _k(x, exact: bool):
    return as_scalar(x) if exact else complex(float(x))


def dirac_hamiltonian(rep: DiracRep, kin: Kinematics) -> Multivector:
    """H_D = c alpha·p + beta m c^2 at fixed numeric momentum."""
    exact = kin.is_exact()
    H = _mul(rep.beta, _k(kin.m * kin.c ** 2, exact) if exact else float(kin.m * kin.c ** 2))
    for a, p in zip(rep.alpha, kin.p):
        H = H + _mul(a, _k(kin.c * p, exact) if exact else float(kin.c * p))
    return H


def energy_projectors(rep: DiracRep, kin: Kinematics) -> tuple:
    """pi_{±E} = (1 ± H_D / E) / 2."""
    exact = kin.is_exact()
    H = dirac_hamiltonian(rep, kin)
    E = kin.energy
    if exact:
        one = rep.one()
        x = H.scale(as_scalar(E).inverse())
        return ((one + x).scale(ONE / 2), (one - x).scale(ONE / 2))
    one = rep.one(1.0 + 0j)
    x = H.scale(1.0 / E)
    return ((one + x).scale(0.5), (one - x).scale(0.5))


def spin_observable(rep: DiracRep, u) -> Multivector:
    """S_u = (hbar/2) gamma5 ⋆ (gamma·u)."""
    g = rep.gamma
    gu = None
    for gi, ui in zip(g[1:], u):
        t = _mul(gi, ui if isinstance(ui, float) else as_scalar(ui))
        gu = t if gu is None else gu + t
    g5 = rep.gamma5
    if not gu.is_exact():
        g5 = g5.to_float()
    return rep.product(g5, gu).scale(HBAR / 2 if gu.is_exact() else 0.5)


def spin_projectors(rep: DiracRep, u) -> tuple:
    """pi_{±s} = 1/2 ± S_u / hbar."""
    Su = spin_observable(rep, u)
    if Su.is_exact():
        x = Su.scale(HBAR.inverse())
        half = rep.one(ONE / 2)
    else:
        x = Su
        half = rep.one(0.5 + 0j)
    return (half + x, half - x)


def covariant_energy_projectors(rep: DiracRep, p4, m, c=1) -> tuple:
    """pi_{±m} = (±pslash + mc) / 2mc."""
    ps = rep.slash(p4)
    mc = m * c
    if ps.is_exact():
        k = as_scalar(mc)
        return ((ps + rep.one(k)).scale((2 * k).inverse()), (-ps + rep.one(k)).scale((2 * k).inverse()))
    one = rep.one(complex(mc))
    return ((ps + one).scale(1 / (2 * mc)), (-ps + one).scale(1 / (2 * mc)))


def covariant_spin_projectors(rep: DiracRep, u4) -> tuple:
    """pi_{±s}(u) = (1 ∓ gamma5 ⋆ uslash) / 2."""
    us = rep.slash(u4)
    g5 = rep.gamma5 if us.is_exact() else rep.gamma5.to_float()
    x = rep.product(g5, us)
    if x.is_exact():
        one = rep.one()
        return ((one - x).scale(ONE / 2), (one + x).scale(ONE / 2))
    one = rep.one(1.0 + 0j)
    return ((one - x).scale(0.5), (one + x).scale(0.5))


def dirac_star_exponential(rep: DiracRep, kin: Kinematics, t: float, hbar: float = 1.0,
                           method: str = "matrix") -> Multivector:
    H = dirac_hamiltonian(rep, kin)
    return star_exponential(H, rep.spec, t, hbar, method=method)


def dirac_exponential_closed(rep: DiracRep, kin: Kinematics, t: float, hbar: float = 1.0) -> Multivector:
    """pi_{-E} e^{+itE/hbar} + pi_{+E} e^{-itE/hbar}."""
    pp, pm = energy_projectors(rep, kin)
    E = float(kin.energy)
    pp = pp.to_float(hbar) if pp.is_exact() else pp
    pm = pm.to_float(hbar) if pm.is_exact() else pm
    import cmath

    return pm.scale(cmath.exp(1j * t * E / hbar)) + pp.scale(cmath.exp(-1j * t * E / hbar))


# Zitterbewegung ------------------------------------------------------------------------

@dataclass
class ZBSample:
    t: float
    displacement: Multivector  # x_i(t) - x_i
    velocity: Multivector
    residual: float
    drift: float
    oscillation: float


def _zb_parts(rep: DiracRep, kin: Kinematics, i: int, hbar: float):
    form = rep.float_form(hbar)
    c = float(kin.c)
    H = dirac_hamiltonian(rep, kin)
    H = H.to_float(hbar) if H.is_exact() else H
    E2 = float(kin.energy_squared)
    Hinv = H.scale(1.0 / E2)
    alpha = rep.alpha[i].to_float(hbar)
    pi = float(kin.p[i])
    eta = alpha - Hinv.scale(c * pi)
    return form, c, H, Hinv, alpha, pi, eta


def zitterbewegung_displacement(rep: DiracRep, kin: Kinematics, i: int, t: float, hbar: float = 1.0):
    """x_i(t) - x_i = c^2 p_i t H^-1 + (i hbar c/2) eta ⋆ H^-1 ⋆ (Exp(2 H t) - 1), eta = alpha_i - c p_i H^-1.

    Returns (displacement, time derivative).
    """
    form, c, H, Hinv, alpha, pi, eta = _zb_parts(rep, kin, i, hbar)
    ex = star_exponential(H, rep.spec, 2 * t, hbar, method="matrix")
    one = rep.one(1.0 + 0j)
    osc = circle_product(circle_product(eta, Hinv, form), ex - one, form).scale(1j * hbar * c / 2)
    disp = Hinv.scale(c * c * pi * t) + osc
    vel = Hinv.scale(c * c * pi) + circle_product(eta, ex, form).scale(c)
    return disp, vel


def phase_space_hamiltonian(rep: DiracRep, kin: Kinematics, hbar: float = 1.0):
    """H_D = c alpha·p + beta m c^2 as a float Moyal-Pauli phase function of (q, p)."""
    from .phase import moyal_star

    star = moyal_star(3, form=rep.form).to_float(hbar)
    c, m = float(kin.c), float(kin.m)
    H = star.lift(rep.beta.to_float(hbar).scale(m * c * c))
    for a, p in zip(rep.alpha, ("p1", "p2", "p3")):
        H = H + star.lift(a.to_float(hbar)) * star.var(p, 1.0 + 0j).scale(c)
    return star, H


def evaluate_at(f, point: dict, d: int) -> Multivector:
    """Evaluate a polynomial phase function at numeric phase-space values."""
    out = {}
    for (g, e, m), coef in f.items():
        if g:
            raise ValueError("only polynomial phase functions can be evaluated here")
        val = complex(coef)
        for v, k in zip(f.vars, e):
            if k:
                val *= complex(point[v]) ** k
        out[m] = out.get(m, 0j) + val
    return Multivector(d, out)


def zitterbewegung_heisenberg_residual(rep: DiracRep, kin: Kinematics, i: int, t: float, hbar: float = 1.0) -> float:
    """|i hbar dx_i/dt - [x_i(t), H_D]_MP| at one time.

    The bracket of the bare coordinate x_i with H_D is evaluated with the
    Moyal-Pauli product on phase functions and then taken at the numeric
    momentum; the momentum-only displacement brackets through the Pauli part.
    """
    form, c, H, *_ = _zb_parts(rep, kin, i, hbar)
    disp, vel = zitterbewegung_displacement(rep, kin, i, t, hbar)
    star, Hps = phase_space_hamiltonian(rep, kin, hbar)
    x = star.var(f"q{i + 1}", 1.0 + 0j)
    point = {f"p{k + 1}": float(kin.p[k]) for k in range(3)}
    point.update({f"q{k + 1}": 0.0 for k in range(3)})
    moyal = evaluate_at(star.commutator(x, Hps), point, rep.d)
    comm = moyal + circle_product(disp, H, form) - circle_product(H, disp, form)
    return vel.scale(1j * hbar).distance(comm)


def zitterbewegung_direct(rep: DiracRep, kin: Kinematics, i: int, t: float, hbar: float = 1.0) -> Multivector:
    """(i hbar/2)[Exp(-Ht) ⋆ d_{p_i} Exp(Ht) - d_{p_i} Exp(-Ht) ⋆ Exp(Ht)] from matrix exponentials.

    Uses x ⋆ F(p) = x F + (i hbar/2) d_p F and F(p) ⋆ x = x F - (i hbar/2) d_p F,
    with the momentum derivative of the exponential taken as a Frechet derivative.
    """
    form = rep.float_form(hbar)
    c = float(kin.c)
    H = dirac_hamiltonian(rep, kin)
    H = H.to_float(hbar) if H.is_exact() else H
    M = left_matrix(H, form)
    dM = left_matrix(rep.alpha[i].to_float(hbar).scale(c), form)

    def exp_and_derivative(s):
        A = M * (-1j * s / hbar)
        dA = dM * (-1j * s / hbar)
        E, dE = expm_frechet(A, dA)
        return _col(rep.d, E), _col(rep.d, dE)

    ep, dep = exp_and_derivative(t)
    em, dem = exp_and_derivative(-t)
    return (circle_product(em, dep, form) - circle_product(dem, ep, form)).scale(1j * hbar / 2)


def _col(d, mat) -> Multivector:
    return Multivector(d, {m: complex(x) for m, x in enumerate(mat[:, 0]) if x != 0})


def sector_average(rep: DiracRep, projector: Multivector, X: Multivector, hbar: float = 1.0) -> complex:
    """Tr(pi ⋆ X) / Tr(pi)."""
    form = rep.float_form(hbar)
    pf = projector.to_float(hbar) if projector.is_exact() else projector
    num = complex(circle_product(pf, X, form).scalar_part())
    den = complex(pf.scalar_part())
    return num / den


def zitterbewegung_series(rep: DiracRep, kin: Kinematics, i: int, times, hbar: float = 1.0) -> list:
    """Samples of x_i(t) - x_i split into drift and oscillation, with the Heisenberg residual."""
    if not len(times):
        raise ValueError("empty time grid")
    form, c, H, Hinv, *_ = _zb_parts(rep, kin, i, hbar)
    out = []
    for t in times:
        disp, vel = zitterbewegung_displacement(rep, kin, i, t, hbar)
        drift = Hinv.scale(c * c * float(kin.p[i]) * t)
        osc = disp - drift
        res = zitterbewegung_heisenberg_residual(rep, kin, i, t, hbar)
        amp = max((abs(v) for _, v in osc.items()), default=0.0)
        drift_amp = max((abs(v) for _, v in drift.items()), default=0.0)
        out.append(ZBSample(t, disp, vel, res, drift_amp, amp))
    return out


def drift_slope(rep: DiracRep, kin: Kinematics, i: int, sign: int = 1, t: float = 0.37, hbar: float = 1.0) -> float:
    """d/dt of the pi_{±E} sector average of x_i(t); expected ±c^2 p_i / E."""
    pp, pm = energy_projectors(rep, kin)
    proj = pp if sign > 0 else pm
    _, vel = zitterbewegung_displacement(rep, kin, i, t, hbar)
    return sector_average(rep, proj, vel, hbar).real


# gamma traces -------------------------------------------------------------------------

def gamma_trace_suite(rep: DiracRep) -> dict:
    """Named residuals (computed minus expected) of the standard gamma trace rules."""
    g = rep.gamma
    out = {"Tr(1) = 4": rep.trace(rep.one()) - 4}
    for mu in range(4):
        out[f"Tr(gamma{mu}) = 0"] = rep.trace(g[mu])
        for nu in range(4):
            exp = 4 * METRIC[mu] if mu == nu else 0
            out[f"Tr(gamma{mu} gamma{nu})"] = rep.trace(rep.product(g[mu], g[nu])) - exp
    for a in range(4):
        for b in range(4):
            for c in range(4):
                out[f"Tr(gamma{a} gamma{b} gamma{c}) = 0"] = rep.trace(rep.product(g[a], g[b], g[c]))

    def gm(x, y):
        return METRIC[x] if x == y else 0

    for a in range(4):
        for b in range(4):
            for c in range(4):
                for d in range(4):
                    exp = 4 * (gm(a, b) * gm(c, d) - gm(a, c) * gm(b, d) + gm(a, d) * gm(b, c))
                    out[f"Tr(gamma{a} gamma{b} gamma{c} gamma{d})"] = rep.trace(rep.product(g[a], g[b], g[c], g[d])) - exp
    out["Tr(gamma5) = 0"] = rep.trace(rep.gamma5)
    return out


# rotations -------------------------------------------------------------------------

def exact_rotor(rep: DiracRep, cos_half, sin_half, n) -> Multivector:
    """cos(phi/2) - i (sigma·n) sin(phi/2), i.e. Exp(phi n·S) at rational half-angle values."""
    ch, sh = as_scalar(cos_half), as_scalar(sin_half)
    if ch * ch + sh * sh != ONE:
        raise ValueError("half-angle cosine and sine must satisfy c^2 + s^2 = 1")
    out = rep.one(ch)
    for i, ni in enumerate(n, start=1):
        out = out - sigma(i, rep.d).scale(I * sh * as_scalar(ni))
    return out


def rotate_vector_exact(rep: DiracRep, cos_half, sin_half, n, vec) -> list:
    """Exp(phi n·S) ⋆ v_i ⋆ Exp(-phi n·S) for a 3-list of elements."""
    R = exact_rotor(rep, cos_half, sin_half, n)
    Rinv = exact_rotor(rep, cos_half, -as_scalar(sin_half), n)
    return [rep.product(R, v, Rinv) for v in vec]
