"""Pauli star product: sigma functions, the fermionic oscillator, spin dynamics and rotations."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grassmann import BilinearForm, DimensionError, Multivector, involution, trace
from .scalar import HBAR, I, ONE, Scalar, as_scalar, to_complex
from .star import StarProductSpec, circle_product, star_exponential

# (2 / i hbar) = -i / h^2
_SIGMA_COEF = Scalar.monomial(0, -1, h=-2)

_CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def pauli_form(d: int = 3) -> BilinearForm:
    return BilinearForm.pauli(d)


def pauli_spec(d: int = 3) -> StarProductSpec:
    return StarProductSpec.pauli(d)


def pauli_product(u: Multivector, v: Multivector) -> Multivector:
    return pauli_spec(u.d).product(u, v)


def theta(i: int, d: int = 3) -> Multivector:
    return Multivector.generator(d, i, ONE)


def sigma(i: int, d: int = 3, offset: int = 0) -> Multivector:
    """sigma^i = (2 / i hbar) theta_j theta_k with (i, j, k) cyclic.

    ``offset`` shifts the generator triple, so ``offset=3`` builds the
    sigma functions of theta_4, theta_5, theta_6.
    """
    if d < 3 + offset:
        raise DimensionError("sigma functions need three generators")
    j, k = _CYCLIC[i]
    return Multivector.monomial(d, [j + offset, k + offset], _SIGMA_COEF)


def spin(i: int, d: int = 3) -> Multivector:
    """S_i = (hbar / 2) sigma^i."""
    return sigma(i, d).scale(HBAR / 2)


def sigma_dot(n, d: int = 3) -> Multivector:
    """sigma·n for an exact or float 3-vector."""
    out = None
    for i, ni in enumerate(n, start=1):
        term = _scaled(sigma(i, d), ni)
        out = term if out is None else out + term
    return out


def _scaled(u: Multivector, k) -> Multivector:
    if isinstance(k, (float, complex)):
        return u.to_float().scale(complex(k))
    return u.scale(k)


@dataclass(frozen=True)
class SpinState:
    wigner: Multivector
    label: Scalar  # +1/2 or -1/2


@dataclass(frozen=True)
class FermionicOscillator:
    omega: Scalar
    hamiltonian: Multivector
    energies: dict
    states: dict


def fermionic_oscillator(omega=1) -> FermionicOscillator:
    """H = -i omega theta_1 theta_2 = omega S_3 with Wigner functions (1 ± sigma^3)/2."""
    w = as_scalar(omega)
    if not w:
        raise ValueError("omega must be nonzero")
    H = Multivector.monomial(3, [1, 2], -I * w)
    half = ONE / 2
    one = Multivector.scalar(3, ONE)
    s3 = sigma(3)
    up = SpinState((one + s3).scale(half), half)
    down = SpinState((one - s3).scale(half), -half)
    energies = {half: HBAR * w / 2, -half: -HBAR * w / 2}
    return FermionicOscillator(w, H, energies, {half: up, -half: down})


def spin_projector(sign: int) -> Multivector:
    one = Multivector.scalar(3, ONE)
    s3 = sigma(3)
    return (one + s3).scale(ONE / 2) if sign > 0 else (one - s3).scale(ONE / 2)


def expectation(state, X: Multivector):
    """Tr(pi ⋆_P X)."""
    pi = state.wigner if isinstance(state, SpinState) else state
    return trace(pauli_product(pi, X))


def spin_expectations(state):
    """(<S_1>, <S_2>, <S_3>, <S^2>) computed as traces against the Wigner function."""
    S = [spin(i) for i in (1, 2, 3)]
    S2 = Multivector.zero(3)
    for s in S:
        S2 = S2 + pauli_product(s, s)
    return tuple(expectation(state, X) for X in S) + (expectation(state, S2),)


# time evolution -----------------------------------------------------------

def heisenberg_picture(X: Multivector, H: Multivector, t: float, hbar: float = 1.0) -> Multivector:
    """Exp(-H t) ⋆ X ⋆ Exp(H t) in the float backend."""
    spec = pauli_spec(X.d)
    form = spec.form.to_float(hbar)
    left = star_exponential(H, spec, -t, hbar)
    right = star_exponential(H, spec, t, hbar)
    Xf = X.to_float(hbar) if X.is_exact() else X
    return circle_product(circle_product(left, Xf, form), right, form)


def evolve_sigma(i: int, omega: float, t: float, hbar: float = 1.0) -> Multivector:
    H = fermionic_oscillator(1).hamiltonian.to_float(hbar).scale(omega)
    return heisenberg_picture(sigma(i), H, t, hbar)


def sigma_closed_form(i: int, omega: float, t: float, hbar: float = 1.0) -> Multivector:
    s1, s2, s3 = (sigma(k).to_float(hbar) for k in (1, 2, 3))
    c, s = math.cos(omega * t), math.sin(omega * t)
    if i == 1:
        return s1.scale(c) - s2.scale(s)
    if i == 2:
        return s1.scale(s) + s2.scale(c)
    return s3


def heisenberg_residual(f_t: Multivector, dfdt: Multivector, H: Multivector, hbar: float = 1.0) -> float:
    """max |i hbar df/dt - [f, H]_⋆| over coefficients."""
    form = pauli_form(f_t.d).to_float(hbar)
    Hf = H.to_float(hbar) if H.is_exact() else H
    comm = circle_product(f_t, Hf, form) - circle_product(Hf, f_t, form)
    return dfdt.scale(1j * hbar).distance(comm)


def precession_series(B, e: float = 1.0, m: float = 1.0, c: float = 1.0, times=(), hbar: float = 1.0):
    """Spin vector S(t) under H = (e/mc) B·S, with dS/dt from the star commutator.

    Returns rows (t, S(t) list, dS/dt list, residual) where the residual is the
    largest deviation between dS/dt and (e/mc) B × S.
    """
    if not times:
        raise ValueError("empty time grid")
    k = e / (m * c)
    form = pauli_form(3).to_float(hbar)
    S0 = [spin(i).to_float(hbar) for i in (1, 2, 3)]
    H = Multivector.zero(3).to_float()
    for b, s in zip(B, S0):
        H = H + s.scale(k * b)
    spec = pauli_spec(3)
    rows = []
    for t in times:
        left = star_exponential(H, spec, -t, hbar)
        right = star_exponential(H, spec, t, hbar)
        St = [circle_product(circle_product(left, s, form), right, form) for s in S0]
        dS = [(circle_product(s, H, form) - circle_product(H, s, form)).scale(1 / (1j * hbar)) for s in St]
        Bx = [k * b for b in B]
        cross = [
            St[2].scale(Bx[1]) - St[1].scale(Bx[2]),
            St[0].scale(Bx[2]) - St[2].scale(Bx[0]),
            St[1].scale(Bx[0]) - St[0].scale(Bx[1]),
        ]
        res = max(a.distance(b) for a, b in zip(dS, cross))
        rows.append((t, St, dS, res))
    return rows


# rotations ----------------------------------------------------------------

def _unit(n, tol: float = 1e-12):
    if all(isinstance(x, (int, Scalar)) or hasattr(x, "denominator") for x in n):
        norm2 = sum((as_scalar(x) * as_scalar(x) for x in n), as_scalar(0))
        if norm2 != ONE:
            raise ValueError("rotation axis must be a unit vector")
        return [as_scalar(x) for x in n]
    nf = [float(x) for x in n]
    if abs(math.sqrt(sum(x * x for x in nf)) - 1.0) > tol:
        raise ValueError("rotation axis must be a unit vector")
    return nf


def rotor(phi: float, n, hbar: float = 1.0) -> Multivector:
    """Exp_P(phi n·S) via the star-exponential engine."""
    nf = [float(to_complex(x).real) if isinstance(x, Scalar) else float(x) for x in _unit(n)]
    X = Multivector.zero(3).to_float()
    for i, ni in enumerate(nf, start=1):
        X = X + spin(i).to_float(hbar).scale(ni * phi)
    return star_exponential(X, pauli_spec(3), 1.0, hbar)


def rotor_closed_form(phi: float, n, hbar: float = 1.0) -> Multivector:
    """cos(phi/2) - i (sigma·n) sin(phi/2)."""
    nf = [float(x) for x in n]
    out = Multivector.scalar(3, math.cos(phi / 2) + 0j)
    for i, ni in enumerate(nf, start=1):
        out = out - sigma(i).to_float(hbar).scale(1j * ni * math.sin(phi / 2))
    return out


def exact_rotor(cos_half, sin_half, n) -> Multivector:
    """cos(phi/2) - i (sigma·n) sin(phi/2) with rational half-angle values."""
    ch, sh = as_scalar(cos_half), as_scalar(sin_half)
    if ch * ch + sh * sh != ONE:
        raise ValueError("half-angle cosine and sine must satisfy c^2 + s^2 = 1")
    nv = _unit(n)
    out = Multivector.scalar(3, ch)
    for i, ni in enumerate(nv, start=1):
        out = out - sigma(i).scale(I * sh * ni)
    return out


def rotate(phi: float, n, u: Multivector, hbar: float = 1.0) -> Multivector:
    """Exp_P(phi n·S) ⋆ u ⋆ Exp_P(-phi n·S) in the float backend."""
    form = pauli_form(3).to_float(hbar)
    R = rotor(phi, n, hbar)
    Rinv = rotor(-phi, n, hbar)
    uf = u.to_float(hbar) if u.is_exact() else u
    return circle_product(circle_product(R, uf, form), Rinv, form)


def rotate_exact(cos_half, sin_half, n, u: Multivector) -> Multivector:
    R = exact_rotor(cos_half, sin_half, n)
    Rinv = involution(R)
    form = pauli_form(3)
    return circle_product(circle_product(R, u, form), Rinv, form)


def rodrigues(phi, n, vec):
    """R(phi) v = n (n·v) + cos phi (v - n (n·v)) - sin phi (n × v) for a 3-list of Multivectors.

    ``phi`` may be a float angle or a pair (cos phi, sin phi) of exact values.
    """
    if isinstance(phi, tuple):
        cp, sp = phi
    else:
        cp, sp = math.cos(phi), math.sin(phi)
    ndotv = vec[0].scale(n[0]) + vec[1].scale(n[1]) + vec[2].scale(n[2])
    cross = [
        vec[2].scale(n[1]) - vec[1].scale(n[2]),
        vec[0].scale(n[2]) - vec[2].scale(n[0]),
        vec[1].scale(n[0]) - vec[0].scale(n[1]),
    ]
    out = []
    for k in range(3):
        par = ndotv.scale(n[k])
        out.append(par + (vec[k] - par).scale(cp) - cross[k].scale(sp))
    return out
