"""Spinning particle in a magnetic field, the supersymmetric oscillator and its Witten index."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .grassmann import BilinearForm, Multivector
from .moyal import HOLO_VARS, holomorphic_moment, holomorphic_wigner
from .phase import PhaseFunction, PhaseStar, moyal_star
from .scalar import HBAR, ONE, ZERO, Scalar, as_scalar
from .spin import sigma

HALF = ONE / 2
# 1 / sqrt(hbar) = 1 / (sqrt2 h) = sqrt2 / (2 h)
INV_SQRT_HBAR = Scalar.monomial(Fraction(1, 2), 0, sqrt2=1, h=-1)


# Moyal-Pauli product ------------------------------------------------------------

MP_VARS = ("q1", "q2", "q3", "p1", "p2", "p3")


def moyal_pauli_star() -> PhaseStar:
    """Moyal kernel on (q_i, p_i), i = 1..3, and the Pauli form on theta_1..theta_3."""
    s = moyal_star(3, form=BilinearForm.pauli(3))
    return PhaseStar(s.variables, s.kernel, s.form, "moyal-pauli")


def moyal_pauli_product(F: PhaseFunction, G: PhaseFunction) -> PhaseFunction:
    return moyal_pauli_star().product(F, G)


def symmetric_gauge(B3, star: PhaseStar):
    """A = (B/2)(-q2, q1, 0)."""
    b = as_scalar(B3) / 2
    q1, q2 = star.var("q1"), star.var("q2")
    return (q2.scale(-b), q1.scale(b), star.zero())


def kinetic_momenta(star: PhaseStar, A, e=1, c=1):
    """p - (e/c) A."""
    k = as_scalar(e) / as_scalar(c)
    return tuple(star.var(f"p{i}") - A[i - 1].scale(k) for i in (1, 2, 3))


@dataclass
class FeynmanTrickReport:
    lhs: PhaseFunction
    rhs: PhaseFunction

    @property
    def residual(self) -> PhaseFunction:
        return self.lhs - self.rhs

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def feynman_trick(B3=1, e=1, c=1) -> FeynmanTrickReport:
    """[(p - eA/c)·sigma]^{2⋆} against (p - eA/c)^{2⋆} - (hbar e/c) sigma·B, symmetric gauge."""
    star = moyal_pauli_star()
    A = symmetric_gauge(B3, star)
    Pi = kinetic_momenta(star, A, e, c)
    sig = [star.lift(sigma(i)) for i in (1, 2, 3)]
    X = Pi[0] * sig[0] + Pi[1] * sig[1] + Pi[2] * sig[2]
    lhs = star.product(X, X)
    kin = star.zero()
    for P in Pi:
        kin = kin + star.product(P, P)
    Bvec = (ZERO, ZERO, as_scalar(B3))
    sB = star.zero()
    for s, b in zip(sig, Bvec):
        sB = sB + s.scale(b)
    rhs = kin - sB.scale(HBAR * as_scalar(e) / as_scalar(c))
    return FeynmanTrickReport(lhs, rhs)


def spin_interaction(B3=1, e=1, m=1, c=1) -> Multivector:
    """H_I = -(e hbar / 2mc) B sigma^3."""
    k = -HBAR * as_scalar(e) * as_scalar(B3) / (2 * as_scalar(m) * as_scalar(c))
    return sigma(3).scale(k)


# supersymmetric oscillator ----------------------------------------------------------

def holomorphic_fermion_form() -> BilinearForm:
    """Pauli form in (f, fbar) = (theta_1, theta_2): only B(f, fbar) = B(fbar, f) = hbar/2."""
    h2 = HBAR / 2
    return BilinearForm([[ZERO, h2], [h2, ZERO]])


def susy_star() -> PhaseStar:
    from .moyal import holomorphic_star

    return PhaseStar(HOLO_VARS, holomorphic_star().kernel, holomorphic_fermion_form(), "susy")


def susy_product(F: PhaseFunction, G: PhaseFunction) -> PhaseFunction:
    return susy_star().product(F, G)


def fermion(star: PhaseStar | None = None):
    """(f, fbar) as phase functions."""
    st = star or susy_star()
    return st.theta(1), st.theta(2)


def fermion_projector(sign: int, star: PhaseStar | None = None) -> PhaseFunction:
    """pi_{±1/2} = 1/2 ± fbar f / hbar."""
    st = star or susy_star()
    f, fb = fermion(st)
    ff = (fb * f).scale(HBAR.inverse())
    return st.one(HALF) + (ff if sign > 0 else -ff)


def holomorphic_to_theta(u: Multivector) -> Multivector:
    """Rewrite an element of Gr(f, fbar) in theta_1, theta_2 with f = (theta_2 + i theta_1)/sqrt2."""
    from .scalar import I, SQRT2

    r = SQRT2.inverse()
    t1 = Multivector.generator(2, 1, ONE)
    t2 = Multivector.generator(2, 2, ONE)
    f = (t2 + t1.scale(I)).scale(r)
    fb = (t2 - t1.scale(I)).scale(r)
    out = Multivector.zero(2)
    for m, c in u.items():
        term = Multivector.scalar(2, c)
        if m & 1:
            term = term * f
        if m & 2:
            term = term * fb
        out = out + term
    return out


@dataclass(frozen=True)
class SusyOscillator:
    omega: Scalar
    star: PhaseStar
    hamiltonian: PhaseFunction
    q_plus: PhaseFunction
    q_minus: PhaseFunction

    def state(self, n_f: int, n_b: int) -> PhaseFunction:
        """pi^(SU) with n_f = +1 or -1 standing for n_F = ±1/2."""
        if n_b < 0:
            raise ValueError("bosonic level must be nonnegative")
        return holomorphic_wigner(n_b, self.omega, 2) * fermion_projector(n_f, self.star)

    def energy(self, n_f: int, n_b: int):
        return HBAR * self.omega * (ONE * n_b + HALF + HALF * n_f)

    def genvalue_residual(self, n_f: int, n_b: int) -> PhaseFunction:
        pi = self.state(n_f, n_b)
        return self.star.product(self.hamiltonian, pi) - pi.scale(self.energy(n_f, n_b))

    def product(self, *fs) -> PhaseFunction:
        return self.star.chain(*fs)


def susy_oscillator(omega=1) -> SusyOscillator:
    w = as_scalar(omega)
    if not w:
        raise ValueError("omega must be nonzero")
    st = susy_star()
    a, ab = st.var("a"), st.var("abar")
    f, fb = fermion(st)
    H = (ab * a + fb * f).scale(w)
    qp = (a * fb).scale(INV_SQRT_HBAR)
    qm = (ab * f).scale(INV_SQRT_HBAR)
    return SusyOscillator(w, st, H, qp, qm)


def ladder_check(osc: SusyOscillator, n_b: int):
    """Q+ ⋆ pi_{-,n} ⋆ Q- and Q- ⋆ pi_{+,n} ⋆ Q+ with their expected right-hand sides.

    Returns ((lhs_up, rhs_up), (lhs_down, rhs_down)); the first pair is
    absent (None) for n = 0 where the lowering side is identically zero.
    """
    down_state = osc.state(-1, n_b)
    lhs1 = osc.product(osc.q_plus, down_state, osc.q_minus)
    rhs1 = osc.state(+1, n_b - 1).scale(HBAR * n_b) if n_b >= 1 else osc.star.zero()
    up_state = osc.state(+1, n_b)
    lhs2 = osc.product(osc.q_minus, up_state, osc.q_plus)
    rhs2 = osc.state(-1, n_b + 1).scale(HBAR * (n_b + 1))
    return (lhs1, rhs1), (lhs2, rhs2)


def fredholm_relations(osc: SusyOscillator) -> dict:
    """Named (lhs, rhs) pairs of the projector/supercharge quadruple."""
    pp, pm = fermion_projector(+1, osc.star), fermion_projector(-1, osc.star)
    P = osc.star.product
    return {
        "pi+ ⋆ pi+ = pi+": (P(pp, pp), pp),
        "pi- ⋆ pi- = pi-": (P(pm, pm), pm),
        "Q+ ⋆ pi- = Q+": (P(osc.q_plus, pm), osc.q_plus),
        "Q- ⋆ pi+ = Q-": (P(osc.q_minus, pp), osc.q_minus),
        "pi+ ⋆ Q+ = Q+": (P(pp, osc.q_plus), osc.q_plus),
        "pi- ⋆ Q- = Q-": (P(pm, osc.q_minus), osc.q_minus),
    }


# Witten index ---------------------------------------------------------------------

def state_trace(osc: SusyOscillator, state: PhaseFunction, F: PhaseFunction,
                m: float = 1.0, hbar: float = 1.0) -> complex:
    """int d^2a Tr(pi ⋆ F), with Tr = 2 × scalar part of the Grassmann factor."""
    prod = osc.star.product(state, F)
    body = prod.grassmann_part(0)
    if body.is_zero():
        return 0j
    return 2 * holomorphic_moment(body, m, float(osc.omega.evaluate(hbar).real), hbar)


@dataclass
class LevelEntry:
    level: int
    states: list
    bracket1: float
    bracket2: float

    @property
    def contribution(self) -> float:
        return self.bracket1 - self.bracket2


@dataclass
class WittenIndex:
    ledger: list
    value: float

    @property
    def index(self) -> int:
        return round(self.value)

    @property
    def classification(self) -> str:
        return "exact-susy" if self.index != 0 else "broken-susy"


def level_states(k: int):
    """States (n_F, n_B) with energy k hbar omega: (-, k) and, for k >= 1, (+, k-1)."""
    out = [(-1, k)]
    if k >= 1:
        out.append((+1, k - 1))
    return out


def witten_index(n_trunc: int, omega=1, m: float = 1.0, hbar: float = 1.0) -> WittenIndex:
    """tr[pi_- - Q- ⋆ Q+ / hbar] - tr[pi_+ - Q+ ⋆ Q- / hbar], summed level by level up to n_trunc.

    Each bracket pairs a fermion projector with the supercharge product that
    reproduces it on the zero-energy-free part of its own sector, so every
    level with E > 0 contributes two equal bracket values.
    """
    if n_trunc < 1:
        raise ValueError("truncation must be at least 1")
    osc = susy_oscillator(omega)
    st = osc.star
    inv = HBAR.inverse()
    b1 = fermion_projector(-1, st) - st.product(osc.q_minus, osc.q_plus).scale(inv)
    b2 = fermion_projector(+1, st) - st.product(osc.q_plus, osc.q_minus).scale(inv)
    ledger = []
    total = 0.0
    for k in range(n_trunc + 1):
        states = level_states(k)
        t1 = sum(state_trace(osc, osc.state(nf, nb), b1, m, hbar) for nf, nb in states)
        t2 = sum(state_trace(osc, osc.state(nf, nb), b2, m, hbar) for nf, nb in states)
        entry = LevelEntry(k, states, t1.real, t2.real)
        ledger.append(entry)
        total += entry.contribution
    return WittenIndex(ledger, total)
