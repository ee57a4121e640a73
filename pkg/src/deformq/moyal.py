"""Bosonic systems under Moyal-type products: oscillator, Gaussian moments, Landau problem, holomorphic form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .phase import PhaseFunction, PhaseStar, linear_change, moyal_star
from .scalar import HBAR, I, ONE, Scalar, as_scalar, to_complex


class NonDecayingError(ValueError):
    pass


@lru_cache(maxsize=None)
def laguerre_coefficients(n: int) -> tuple:
    """Coefficients of L_n(x) in ascending powers, from (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}."""
    if n < 0:
        raise ValueError("Laguerre index must be nonnegative")
    prev, cur = [Fraction(1)], [Fraction(1), Fraction(-1)]
    if n == 0:
        return tuple(prev)
    for k in range(1, n):
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(cur):
            nxt[i] += (2 * k + 1) * c
            nxt[i + 1] -= c
        for i, c in enumerate(prev):
            nxt[i] -= k * c
        prev, cur = cur, [c / (k + 1) for c in nxt]
    return tuple(cur)


def laguerre(n: int, x):
    """L_n evaluated at x (number, Scalar or PhaseFunction), Horner scheme."""
    exact = _exact(x)
    coefs = [as_scalar(c) if exact else float(c) for c in laguerre_coefficients(n)]
    if isinstance(x, PhaseFunction):
        out = PhaseFunction.constant(x.vars, coefs[-1], x.d)
        for ck in reversed(coefs[:-1]):
            out = out * x + ck
        return out
    out = coefs[-1]
    for ck in reversed(coefs[:-1]):
        out = out * x + ck
    return out


def _exact(x) -> bool:
    if isinstance(x, PhaseFunction):
        return x.is_exact()
    return isinstance(x, (int, Fraction, Scalar))


def _wigner_from_exponent(H: PhaseFunction, scale, n: int) -> PhaseFunction:
    """2 (-1)^n exp(-2 H / scale) L_n(4 H / scale)."""
    exact = H.is_exact()
    if exact:
        inv = as_scalar(scale).inverse()
        gauss = PhaseFunction.gaussian(H.vars, H.scale(-2 * inv), ONE * 2 * (-1) ** n, H.d)
        poly = laguerre(n, H.scale(4 * inv))
    else:
        inv = 1.0 / complex(scale)
        gauss = PhaseFunction.gaussian(H.vars, H.scale(-2 * inv), 2.0 * (-1) ** n, H.d)
        poly = laguerre(n, H.scale(4 * inv))
    return gauss * poly


# harmonic oscillator ------------------------------------------------------------

@dataclass(frozen=True)
class Oscillator:
    m: Scalar
    omega: Scalar
    star: PhaseStar
    hamiltonian: PhaseFunction

    def energy(self, n: int):
        return HBAR * self.omega * (ONE * n + ONE / 2)

    def wigner(self, n: int) -> PhaseFunction:
        return oscillator_wigner(n, self.m, self.omega)

    def residual(self, n: int) -> PhaseFunction:
        pi = self.wigner(n)
        return self.star.product(self.hamiltonian, pi) - pi.scale(self.energy(n))


def oscillator_hamiltonian(m=1, omega=1) -> PhaseFunction:
    m, w = as_scalar(m), as_scalar(omega)
    star = moyal_star()
    q, p = star.var("q"), star.var("p")
    return p * p / (2 * m) + q * q * (m * w * w / 2)


def oscillator(m=1, omega=1) -> Oscillator:
    m, w = as_scalar(m), as_scalar(omega)
    if not m or not w:
        raise ValueError("mass and frequency must be nonzero")
    return Oscillator(m, w, moyal_star(), oscillator_hamiltonian(m, w))


def oscillator_wigner(n: int, m=1, omega=1) -> PhaseFunction:
    """pi_n = 2 (-1)^n exp(-2H/hbar omega) L_n(4H/hbar omega)."""
    if n < 0:
        raise ValueError("level index must be nonnegative")
    H = oscillator_hamiltonian(m, omega)
    return _wigner_from_exponent(H, HBAR * as_scalar(omega), n)


# Gaussian moments -----------------------------------------------------------------

def _quadratic_data(gkey, n):
    M = np.zeros((n, n), dtype=complex)
    L = np.zeros(n, dtype=complex)
    c0 = 0j
    for e, c in gkey:
        c = complex(c)
        deg = sum(e)
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        if deg == 0:
            c0 += c
        elif deg == 1:
            L[idx[0]] += c
        else:
            i, j = idx
            if i == j:
                M[i, i] += -2 * c
            else:
                M[i, j] += -c
                M[j, i] += -c
    return M, L, c0


def _moments(mu, C):
    """E[x^e] for a Gaussian with mean mu and covariance C, memoized on e."""
    n = len(mu)
    cache = {(0,) * n: 1.0 + 0j}

    def E(e):
        hit = cache.get(e)
        if hit is not None:
            return hit
        i = next(k for k in range(n) if e[k])
        rest = list(e)
        rest[i] -= 1
        rest_t = tuple(rest)
        val = mu[i] * E(rest_t)
        for j in range(n):
            if rest[j]:
                d = list(rest)
                d[j] -= 1
                val += C[i, j] * rest[j] * E(tuple(d))
        cache[e] = val
        return val

    return E


def gaussian_integral(f: PhaseFunction, hbar: float = 1.0, c: float = 1.0) -> complex:
    """Plain integral of a bosonic phase function over all its variables."""
    ff = f.to_float(hbar, c) if f.is_exact() else f
    n = len(ff.vars)
    total = 0j
    groups: dict = {}
    for (g, e, m), coef in ff._t.items():
        if m:
            raise ValueError("integrate the bosonic coefficient of each Grassmann monomial separately")
        groups.setdefault(g, []).append((e, coef))
    for g, terms in groups.items():
        if not g:
            raise NonDecayingError("polynomial term without a Gaussian factor cannot be integrated")
        M, L, c0 = _quadratic_data(g, n)
        herm = (M + M.conj().T) / 2
        if np.min(np.linalg.eigvalsh(herm)) <= 0:
            raise NonDecayingError("Gaussian factor does not decay in every direction")
        C = np.linalg.inv(M)
        mu = C @ L
        norm = (2 * math.pi) ** (n / 2) / np.sqrt(np.linalg.det(M)) * np.exp(c0 + 0.5 * L @ C @ L)
        E = _moments(mu, C)
        total += norm * sum(coef * E(e) for e, coef in terms)
    return complex(total)


def gaussian_moment(f: PhaseFunction, hbar: float = 1.0, c: float = 1.0) -> complex:
    """(1 / 2 pi hbar)^{n/2} times the integral over the n phase-space variables."""
    n = len(f.vars)
    return gaussian_integral(f, hbar, c) / (2 * math.pi * hbar) ** (n / 2)


def expectation(pi: PhaseFunction, X: PhaseFunction, star: PhaseStar, hbar: float = 1.0) -> complex:
    """(1 / 2 pi hbar)^{n/2} int X ⋆ pi."""
    return gaussian_moment(star.product(X, pi), hbar)


# Landau problem -------------------------------------------------------------------

LANDAU_VARS = ("q1", "q2", "pt1", "pt2")


def tilde_star(m_omega) -> PhaseStar:
    """Moyal product in (q, p~) coordinates with the extra (i hbar m omega / 2) p~1-p~2 pairing."""
    k = I * HBAR / 2
    mw = as_scalar(m_omega)
    kern = {
        ("q1", "pt1"): k, ("pt1", "q1"): -k,
        ("q2", "pt2"): k, ("pt2", "q2"): -k,
        ("pt1", "pt2"): k * mw, ("pt2", "pt1"): -k * mw,
    }
    return PhaseStar(LANDAU_VARS, kern, None, "tilde-moyal")


@dataclass(frozen=True)
class Landau:
    m: Scalar
    omega: Scalar
    star: PhaseStar
    hamiltonian: PhaseFunction
    qt: tuple
    pt: tuple
    angular_momentum: PhaseFunction

    def energy(self, n: int):
        return HBAR * self.omega * (ONE * n + ONE / 2)

    def angular_eigenvalue(self, n: int, l: int):
        return HBAR * (l - n)

    def pi_p(self, n: int) -> PhaseFunction:
        """pi_n(p~) = 2 (-1)^n exp(-2 H_L / hbar omega) L_n(4 H_L / hbar omega)."""
        return _wigner_from_exponent(self.hamiltonian, HBAR * self.omega, n)

    def pi_q(self, l: int) -> PhaseFunction:
        """pi_l(q~) = 2 (-1)^l exp(-(m omega/hbar) q~^2) L_l(2 m omega q~^2 / hbar)."""
        # (m omega / 2) q~^2 plays the role of H with scale hbar
        G = (self.qt[0] * self.qt[0] + self.qt[1] * self.qt[1]).scale(self.m * self.omega / 2)
        return _wigner_from_exponent(G, HBAR, l)

    def wigner(self, n: int, l: int) -> PhaseFunction:
        return self.pi_q(l) * self.pi_p(n)

    def conserved_operators(self, f: PhaseFunction):
        """(d_q1 - m omega d_p~2) f and (d_q2 + m omega d_p~1) f."""
        mw = self.m * self.omega
        return (f.derivative("q1") - f.derivative("pt2").scale(mw),
                f.derivative("q2") + f.derivative("pt1").scale(mw))


def landau_problem(m=1, omega=1) -> Landau:
    m, w = as_scalar(m), as_scalar(omega)
    if not w:
        raise ValueError("omega must be nonzero")
    if not m:
        raise ValueError("mass must be nonzero")
    star = tilde_star(m * w)
    q1, q2, p1, p2 = (star.var(v) for v in LANDAU_VARS)
    H = (p1 * p1 + p2 * p2) / (2 * m)
    inv = (m * w).inverse()
    qt1 = q1 + p2.scale(inv)
    qt2 = q2 - p1.scale(inv)
    # J = q1 p2 - q2 p1 with p_i the canonical momenta; in (q, p~) variables
    # p1 = p~1 - (m omega / 2) q2 and p2 = p~2 + (m omega / 2) q1
    half = m * w / 2
    P1 = p1 - q2.scale(half)
    P2 = p2 + q1.scale(half)
    J = q1 * P2 - q2 * P1
    return Landau(m, w, star, H, (qt1, qt2), (p1, p2), J)


CONSERVED_VARS = ("qt1", "qt2", "pt1", "pt2")


@dataclass(frozen=True)
class LandauFrame:
    """The Landau problem rewritten in the coordinates (q~1, q~2, p~1, p~2).

    The kernel is obtained from the tilde-Moyal kernel by the linear change
    q1 = q~1 - p~2/m omega, q2 = q~2 + p~1/m omega, and H, J and the
    exponents of the Wigner factors are substituted, so every star product
    here equals the original one up to relabelling the coordinates.
    """

    problem: Landau
    star: PhaseStar
    mapping: dict
    hamiltonian: PhaseFunction
    angular_momentum: PhaseFunction
    qt_square: PhaseFunction

    def to_frame(self, f: PhaseFunction) -> PhaseFunction:
        return f.substitute(CONSERVED_VARS, self.mapping)

    def pi_p(self, n: int) -> PhaseFunction:
        return _wigner_from_exponent(self.hamiltonian, HBAR * self.problem.omega, n)

    def pi_q(self, l: int) -> PhaseFunction:
        G = self.qt_square.scale(self.problem.m * self.problem.omega / 2)
        return _wigner_from_exponent(G, HBAR, l)

    def wigner(self, n: int, l: int) -> PhaseFunction:
        return self.pi_q(l) * self.pi_p(n)


def conserved_frame(L: Landau) -> LandauFrame:
    inv = (L.m * L.omega).inverse()
    st = L.star
    new = {v: PhaseFunction.variable(CONSERVED_VARS, v) for v in CONSERVED_VARS}
    mapping = {
        "q1": new["qt1"] - new["pt2"].scale(inv),
        "q2": new["qt2"] + new["pt1"].scale(inv),
        "pt1": new["pt1"],
        "pt2": new["pt2"],
    }
    star = linear_change(st, CONSERVED_VARS, mapping, "tilde-moyal-conserved")
    sub = lambda f: f.substitute(CONSERVED_VARS, mapping)  # noqa: E731
    qsq = sub(L.qt[0] * L.qt[0] + L.qt[1] * L.qt[1])
    return LandauFrame(L, star, mapping, sub(L.hamiltonian), sub(L.angular_momentum), qsq)


# holomorphic coordinates ----------------------------------------------------------

HOLO_VARS = ("a", "abar")


def holomorphic_star(form=None) -> PhaseStar:
    """exp[(hbar/2)(<-d_a d_abar-> - <-d_abar d_a->)]."""
    k = HBAR / 2
    kern = {("a", "abar"): k, ("abar", "a"): -k}
    return PhaseStar(HOLO_VARS, kern, form, "holomorphic")


def holomorphic_product(f: PhaseFunction, g: PhaseFunction, star: PhaseStar | None = None) -> PhaseFunction:
    return (star or holomorphic_star()).product(f, g)


def holomorphic_hamiltonian(omega=1, d: int = 0) -> PhaseFunction:
    w = as_scalar(omega)
    a = PhaseFunction.variable(HOLO_VARS, "a", d)
    ab = PhaseFunction.variable(HOLO_VARS, "abar", d)
    return (ab * a).scale(w)


def holomorphic_wigner(n: int, omega=1, d: int = 0) -> PhaseFunction:
    """pi_n as a function of H = omega abar a, same functional form as in (q, p)."""
    return _wigner_from_exponent(holomorphic_hamiltonian(omega, d), HBAR * as_scalar(omega), n)


def holomorphic_to_canonical(f: PhaseFunction, m: float = 1.0, omega: float = 1.0, hbar: float = 1.0) -> PhaseFunction:
    """Float substitution a = sqrt(m omega/2)(q + i p/(m omega)), abar its conjugate."""
    ff = f.to_float(hbar) if f.is_exact() else f
    s = math.sqrt(m * omega / 2)
    qp = ("q", "p")
    q = PhaseFunction.variable(qp, "q", 0, 1.0 + 0j)
    p = PhaseFunction.variable(qp, "p", 0, 1.0 + 0j)
    a = (q + p.scale(1j / (m * omega))).scale(s)
    ab = (q - p.scale(1j / (m * omega))).scale(s)
    return ff.substitute(qp, {"a": a, "abar": ab})


def holomorphic_moment(f: PhaseFunction, m: float = 1.0, omega: float = 1.0, hbar: float = 1.0) -> complex:
    """int d^2a f, defined as (1/2 pi hbar) int dq dp after the canonical substitution."""
    return gaussian_moment(holomorphic_to_canonical(f, m, omega, hbar), hbar)


