"""Order-tracked 1/c expansion of the Dirac Hamiltonian under the Moyal-Pauli product.

The speed of light is a formal Laurent symbol in the scalar ring, so every
coefficient carries an explicit power of c.  Quantities are kept in units of
m c^2 and truncated at a fixed lowest power of c (default c^-4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dirac import DiracRep, build_rep
from .grassmann import BilinearForm, popcount
from .phase import PhaseFunction, PhaseStar, moyal_star
from .scalar import C, HBAR, ONE, ZERO, Scalar, as_scalar
from .spin import sigma

QS = ("q1", "q2", "q3")
PS = ("p1", "p2", "p3")
DEFAULT_LOWEST = -4


class DegreeOverflowError(ValueError):
    pass


def _c(power: int) -> Scalar:
    return Scalar.monomial(1, 0, c=power)


def truncate(f: PhaseFunction, lowest: int) -> PhaseFunction:
    return f.map_coefficients(lambda x: x.filter_c(lowest))


@dataclass(frozen=True)
class CSeries:
    """A Moyal-Pauli phase function with c kept symbolic, truncated below c^lowest."""

    value: PhaseFunction
    lowest: int = DEFAULT_LOWEST

    def __post_init__(self):
        object.__setattr__(self, "value", truncate(self.value, self.lowest))

    @property
    def coefficients(self) -> dict:
        """power of 1/c -> c-free phase function."""
        powers = set()
        for _, coef in self.value.items():
            powers |= coef.c_powers()
        return {-k: self.value.map_coefficients(lambda x, k=k: x.c_part(k) * _c(-k)) for k in sorted(powers, reverse=True)}

    def order(self) -> int | None:
        """Lowest power of 1/c present (None for zero)."""
        keys = list(self.coefficients)
        return min(keys) if keys else None

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def _wrap(self, f: PhaseFunction) -> "CSeries":
        return CSeries(f, self.lowest)

    def __add__(self, other: "CSeries") -> "CSeries":
        return self._wrap(self.value + other.value)

    def __sub__(self, other: "CSeries") -> "CSeries":
        return self._wrap(self.value - other.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def scale(self, k) -> "CSeries":
        return self._wrap(self.value.scale(k))

    def __eq__(self, other):
        return isinstance(other, CSeries) and self.value == other.value

    def __hash__(self):
        return hash(self.value)


@dataclass
class FWContext:
    rep: DiracRep
    star: PhaseStar
    lowest: int = DEFAULT_LOWEST
    max_degree: int = 8

    def product(self, a: CSeries, b: CSeries) -> CSeries:
        out = CSeries(self.star.product(a.value, b.value), self.lowest)
        if out.value.degree() > self.max_degree:
            raise DegreeOverflowError(f"polynomial degree {out.value.degree()} exceeds {self.max_degree}")
        return out

    def chain(self, *xs) -> CSeries:
        out = xs[0]
        for x in xs[1:]:
            out = self.product(out, x)
        return out

    def commutator(self, a, b) -> CSeries:
        return self.product(a, b) - self.product(b, a)

    def power(self, a, n: int) -> CSeries:
        out = self.one()
        for _ in range(n):
            out = self.product(out, a)
        return out

    def lift(self, u) -> CSeries:
        return CSeries(self.star.lift(u), self.lowest)

    def one(self) -> CSeries:
        return CSeries(self.star.one(ONE), self.lowest)

    def zero(self) -> CSeries:
        return CSeries(self.star.zero(), self.lowest)

    @property
    def beta(self) -> CSeries:
        return self.lift(self.rep.beta)

    def conjugate_beta(self, X: CSeries) -> CSeries:
        b = self.beta
        return self.chain(b, X, b)


def fw_context(rep: DiracRep | str = "D4", lowest: int = DEFAULT_LOWEST) -> FWContext:
    if isinstance(rep, str):
        rep = build_rep(rep)
    star = moyal_star(3, form=BilinearForm.pauli(rep.d))
    return FWContext(rep, star, lowest)


def parity_split(H: CSeries, ctx: FWContext):
    """(E, O) with E = (H + beta H beta)/2 - beta and O = (H - beta H beta)/2."""
    bHb = ctx.conjugate_beta(H)
    E = (H + bHb).scale(ONE / 2) - ctx.beta
    O = (H - bHb).scale(ONE / 2)
    return E, O


def adjoint(f: PhaseFunction) -> PhaseFunction:
    """Complex conjugation with reversal of the Grassmann factor (real phase-space variables)."""
    out = {}
    for (g, e, m), coef in f._t.items():
        r = popcount(m)
        sign = -1 if (r * (r - 1) // 2) % 2 else 1
        gk = tuple((ge, gc.conjugate()) for ge, gc in g)
        out[(gk, e, m)] = coef.conjugate() * sign
    return PhaseFunction(f.vars, f.d, out)


def fw_generator(O: CSeries, ctx: FWContext) -> CSeries:
    """beta ⋆ O / 2."""
    return ctx.product(ctx.beta, O).scale(ONE / 2)


def fw_unitary(O: CSeries, ctx: FWContext, sign: int = 1) -> CSeries:
    """sum_n (1/n!) (± beta ⋆ O / 2)^n, summed until truncation kills the terms."""
    X = fw_generator(O, ctx)
    if sign < 0:
        X = -X
    out = ctx.one()
    term = ctx.one()
    n = 0
    while True:
        n += 1
        term = ctx.product(term, X).scale(ONE / n)
        if term.is_zero():
            return out
        out = out + term


def fw_step(H: CSeries, ctx: FWContext) -> CSeries:
    """U ⋆ H ⋆ U^-1 for static fields, with U built from the odd part of H (in units of mc^2)."""
    _, O = parity_split(H, ctx)
    U = fw_unitary(O, ctx, +1)
    Uinv = fw_unitary(O, ctx, -1)
    return ctx.chain(U, H, Uinv)


def unitarity_residual(O: CSeries, ctx: FWContext) -> CSeries:
    """U ⋆ adjoint(U) - 1 at the truncation order."""
    U = fw_unitary(O, ctx, +1)
    return ctx.product(U, CSeries(adjoint(U.value), ctx.lowest)) - ctx.one()


def even_row(E: CSeries, O: CSeries, ctx: FWContext) -> CSeries:
    """beta ⋆ (1 + O^2/2 - O^4/8) + E - (1/8)[O, [O, E]]."""
    O2 = ctx.power(O, 2)
    O4 = ctx.product(O2, O2)
    inner = ctx.one() + O2.scale(ONE / 2) - O4.scale(ONE / 8)
    return ctx.product(ctx.beta, inner) + E - ctx.commutator(O, ctx.commutator(O, E)).scale(ONE / 8)


def odd_row(E: CSeries, O: CSeries, ctx: FWContext, cube_factor=Scalar.rational(-1) / 3) -> CSeries:
    """(1/2) beta ⋆ [O, E] + cube_factor O^3."""
    return ctx.product(ctx.beta, ctx.commutator(O, E)).scale(ONE / 2) + ctx.power(O, 3).scale(cube_factor)


# electromagnetic Dirac Hamiltonian -------------------------------------------------------

@dataclass(frozen=True)
class Fields:
    """Static potentials as polynomials in q1..q3 over the Moyal-Pauli variables."""

    A: tuple
    phi: PhaseFunction
    e: Scalar = ONE
    m: Scalar = ONE
    label: str = "custom"


def _poly(star: PhaseStar, spec) -> PhaseFunction:
    """Build a polynomial in q1..q3 from {exponent tuple (3 ints): coefficient}."""
    terms = {}
    for exps, coef in spec.items():
        e = tuple(exps) + (0, 0, 0)
        terms[((), e, 0)] = as_scalar(coef)
    return PhaseFunction(star.variables, star.d, terms)


def free_fields(star: PhaseStar, e=1, m=1) -> Fields:
    z = star.zero()
    return Fields((z, z, z), z, as_scalar(e), as_scalar(m), "free")


def constant_b_fields(star: PhaseStar, B3=1, e=1, m=1) -> Fields:
    b = as_scalar(B3) / 2
    A = (star.var("q2").scale(-b), star.var("q1").scale(b), star.zero())
    return Fields(A, star.zero(), as_scalar(e), as_scalar(m), "constant-B")


def linear_phi_fields(star: PhaseStar, grad=(1, 0, 0), e=1, m=1) -> Fields:
    phi = star.zero()
    for q, g in zip(QS, grad):
        phi = phi + star.var(q).scale(as_scalar(g))
    z = star.zero()
    return Fields((z, z, z), phi, as_scalar(e), as_scalar(m), "linear-phi")


def quadratic_phi_fields(star: PhaseStar, k=(1, 1, 1), e=1, m=1) -> Fields:
    """phi = sum_i k_i q_i^2 / 2."""
    phi = star.zero()
    for q, ki in zip(QS, k):
        phi = phi + (star.var(q) * star.var(q)).scale(as_scalar(ki) / 2)
    z = star.zero()
    return Fields((z, z, z), phi, as_scalar(e), as_scalar(m), "quadratic-phi")


def _check_polynomial(f: Fields):
    for x in f.A + (f.phi,):
        if not x.is_polynomial() or x.masks() - {0}:
            raise ValueError("potentials must be bosonic polynomials")
        if any(sum(e[3:]) for (_, e, _), _ in x.items()):
            raise ValueError("potentials may depend on q only")


def dirac_em_hamiltonian(f: Fields, ctx: FWContext) -> CSeries:
    """H / mc^2 = alpha·(cp - eA)/mc^2 + beta + e phi / mc^2."""
    _check_polynomial(f)
    star, rep = ctx.star, ctx.rep
    inv_m = f.m.inverse()
    H = star.lift(rep.beta)
    for a, p, Ai in zip(rep.alpha, PS, f.A):
        kin = star.var(p).scale(inv_m * _c(-1)) - Ai.scale(f.e * inv_m * _c(-2))
        H = H + star.lift(a) * kin
    H = H + f.phi.scale(f.e * inv_m * _c(-2))
    return CSeries(H, ctx.lowest)


def curl(A) -> tuple:
    d = {q: [Ai.derivative(q) for Ai in A] for q in QS}
    return (
        d["q2"][2] - d["q3"][1],
        d["q3"][0] - d["q1"][2],
        d["q1"][1] - d["q2"][0],
    )


def electric_field(phi: PhaseFunction) -> tuple:
    return tuple(-phi.derivative(q) for q in QS)


def divergence(V) -> PhaseFunction:
    return V[0].derivative("q1") + V[1].derivative("q2") + V[2].derivative("q3")


def target_terms(f: Fields, ctx: FWContext) -> dict:
    """Named terms of the expected H'' (full units, c symbolic)."""
    star, rep = ctx.star, ctx.rep
    e, m = f.e, f.m
    beta = star.lift(rep.beta)
    sig = [star.lift(sigma(i, rep.d)) for i in (1, 2, 3)]
    p = [star.var(x) for x in PS]
    pi = [pk - Ak.scale(e * _c(-1)) for pk, Ak in zip(p, f.A)]
    kin = star.zero()
    for x in pi:
        kin = kin + star.product(x, x)
    p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2]
    B = curl(f.A)
    E = electric_field(f.phi)
    sB = sig[0] * B[0] + sig[1] * B[1] + sig[2] * B[2]
    Exp = (E[1] * p[2] - E[2] * p[1], E[2] * p[0] - E[0] * p[2], E[0] * p[1] - E[1] * p[0])
    sExp = sig[0] * Exp[0] + sig[1] * Exp[1] + sig[2] * Exp[2]
    m2 = m * m
    return {
        "rest energy": beta.scale(m * _c(2)),
        "kinetic": beta * kin.scale(ONE / (2 * m)),
        "relativistic correction": beta * (p2 * p2).scale(-(m2 * m * 8).inverse() * _c(-2)),
        "magnetic moment": star.product(beta, sB).scale(-e * HBAR / (2 * m) * _c(-1)),
        "electrostatic": f.phi.scale(e),
        "spin-orbit": sExp.scale(-e * HBAR / (4 * m2) * _c(-2)),
        "Darwin": divergence(E).scale(-e * HBAR * HBAR / (8 * m2) * _c(-2)),
    }


@dataclass
class TermRow:
    name: str
    expected: PhaseFunction
    computed: PhaseFunction

    @property
    def residual(self) -> PhaseFunction:
        return self.computed - self.expected

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


@dataclass
class FWResult:
    fields: Fields
    hamiltonian: CSeries
    first: CSeries
    second: CSeries
    rows: list = field(default_factory=list)
    odd_after_first: CSeries | None = None
    odd_after_second: CSeries | None = None
    even_row_residual: CSeries | None = None
    odd_row_residual: CSeries | None = None

    @property
    def h_double_prime(self) -> PhaseFunction:
        """H'' in full units."""
        return self.second.value.scale(self.fields.m * _c(2))

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows) and self.odd_after_second.is_zero()


def _restrict(f: PhaseFunction, keys) -> PhaseFunction:
    return PhaseFunction(f.vars, f.d, {k: c for k, c in f._t.items() if k in keys})


def _expand_c(f: PhaseFunction) -> dict:
    """Split coefficients by c-power so that support keys include the order."""
    out = {}
    for key, coef in f._t.items():
        for k in coef.c_powers():
            out[(key, k)] = coef.c_part(k)
    return out


def compare_terms(H2: PhaseFunction, targets: dict) -> list:
    """Term-by-term rows: each target against the part of H'' on that target's support.

    Supports are (monomial, c-power) pairs; where targets share a support the
    other targets' contributions are subtracted first.  A final row collects
    whatever H'' holds outside every target's support.
    """
    h = _expand_c(H2)
    tgt = {name: _expand_c(t) for name, t in targets.items()}
    rows = []

    def rebuild(d):
        terms = {}
        for (key, _), coef in d.items():
            terms[key] = terms.get(key, ZERO) + coef
        return PhaseFunction(H2.vars, H2.d, terms)

    covered = set()
    for name, t in tgt.items():
        keys = set(t)
        covered |= keys
        comp = {k: h.get(k, ZERO) for k in keys}
        for other, u in tgt.items():
            if other != name:
                for k in keys & set(u):
                    comp[k] = comp[k] - u[k]
        rows.append(TermRow(name, targets[name], rebuild(comp)))
    rest = {k: v for k, v in h.items() if k not in covered}
    zero = PhaseFunction(H2.vars, H2.d)
    rows.append(TermRow("unmatched remainder", zero, rebuild(rest)))
    return rows


def fw_dirac_em(f: Fields, ctx: FWContext | None = None) -> FWResult:
    """Two FW steps on the EM Dirac Hamiltonian and the term-by-term comparison of H''."""
    ctx = ctx or fw_context()
    H = dirac_em_hamiltonian(f, ctx)
    E, O = parity_split(H, ctx)
    H1 = fw_step(H, ctx)
    E1, O1 = parity_split(H1, ctx)
    H2 = fw_step(H1, ctx)
    _, O2 = parity_split(H2, ctx)
    res = FWResult(f, H, H1, H2, odd_after_first=O1, odd_after_second=O2)
    res.even_row_residual = (ctx.beta + E1) - even_row(E, O, ctx)
    res.odd_row_residual = O1 - odd_row(E, O, ctx)
    res.rows = compare_terms(res.h_double_prime, target_terms(f, ctx))
    return res


def standard_cases(ctx: FWContext, e=3, m=2):
    """The four field configurations of the acceptance check (rational parameters)."""
    st = ctx.star
    return [
        free_fields(st, e, m),
        constant_b_fields(st, 5, e, m),
        linear_phi_fields(st, (7, -2, 1), e, m),
        quadratic_phi_fields(st, (1, 2, 4), e, m),
    ]


def free_kinetic_target(ctx: FWContext, m=1) -> PhaseFunction:
    """beta (mc^2 + p^2/2m - p^4/8m^3c^2) in full units."""
    st = ctx.star
    m = as_scalar(m)
    p2 = sum((st.var(x) * st.var(x) for x in PS), st.zero())
    beta = st.lift(ctx.rep.beta)
    body = st.one(m * _c(2)) + p2.scale((2 * m).inverse()) - (p2 * p2).scale((8 * m * m * m).inverse() * _c(-2))
    return beta * body


def scalar_odd_check(ctx: FWContext, k=1) -> tuple:
    """Commutator-free input: O = k alpha_1/c (constant), E = 0.

    Returns (even part of H' in units of mc^2, beta (1 + O^2/2 - O^4/8)).
    """
    O = CSeries(ctx.star.lift(ctx.rep.alpha[0]).scale(as_scalar(k) * _c(-1)), ctx.lowest)
    H = ctx.beta + O
    H1 = fw_step(H, ctx)
    E1, _ = parity_split(H1, ctx)
    z = ctx.zero()
    return ctx.beta + E1, even_row(z, O, ctx)


def closed_form_scalar_odd(k: float, c: float = 1.0) -> float:
    """sqrt(1 + x^2) for x = k/c: the exact rotated beta coefficient the series truncates."""
    x = k / c
    return math.sqrt(1 + x * x)
