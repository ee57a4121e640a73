"""Verification suites: each returns a list of CheckRecords."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import dirac as dr
from . import fw
from .grassmann import (
    BilinearForm,
    Multivector,
    berezin_integrate,
    contract_closed,
    contract_rules,
    hodge,
    involution,
    popcount,
    trace,
    trace_norm,
)
from .moyal import (
    conserved_frame,
    gaussian_moment,
    landau_problem,
    oscillator,
)
from .phase import PhaseFunction
from .report import CheckRecord
from .scalar import HBAR, I, ONE, ZERO, Scalar, as_scalar
from .spin import (
    evolve_sigma,
    fermionic_oscillator,
    pauli_form,
    precession_series,
    rodrigues,
    rotate,
    rotate_exact,
    rotor,
    rotor_closed_form,
    sigma,
    sigma_closed_form,
    spin_expectations,
    spin_projector,
)
from .star import (
    StarProductSpec,
    circle_product,
    grassmann_exp,
    scalar_equivalence_check,
    solve_wick_form,
    star_exponential,
    wick_clifford,
    wick_pairing,
)
from .susy import (
    feynman_trick,
    fredholm_relations,
    ladder_check,
    spin_interaction,
    susy_oscillator,
    witten_index,
)

SUITES = ("cliffordization", "wick", "oscillator", "landau", "susy", "dirac", "fw")
DEFAULT_SEED = 20240531


@dataclass
class RunConfig:
    backend: str = "exact"
    hbar: float = 1.0
    tolerance: float = 1e-10
    seed: int = DEFAULT_SEED
    truncation: int = 8
    reps: tuple = dr.REPS
    triples: int = 1000
    suites: tuple = SUITES
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.backend not in ("exact", "float"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")
        for s in self.suites:
            if s not in SUITES:
                raise ValueError(f"unknown suite {s!r}")
        for r in self.reps:
            if r.upper() not in dr.REPS:
                raise ValueError(f"unknown representation {r!r}")

    def as_dict(self) -> dict:
        return {
            "backend": self.backend, "hbar": float(self.hbar), "tolerance": float(self.tolerance),
            "seed": self.seed, "truncation": self.truncation, "reps": list(self.reps),
            "triples": self.triples, "suites": list(self.suites),
        }


class Recorder:
    def __init__(self, config: RunConfig, suite: str):
        self.cfg = config
        self.suite = suite
        self.records: list = []

    # residual helpers ------------------------------------------------------
    def _float_norm(self, diff) -> float:
        hb = self.cfg.hbar
        if isinstance(diff, (Multivector, PhaseFunction)):
            if diff.is_zero():
                return 0.0
            return max(abs(complex(c) if not isinstance(c, Scalar) else c.evaluate(hb)) for _, c in diff.items())
        if isinstance(diff, Scalar):
            return abs(diff.evaluate(hb))
        return abs(complex(diff))

    @staticmethod
    def _is_zero(diff) -> bool:
        if isinstance(diff, (Multivector, PhaseFunction)):
            return diff.is_zero()
        if isinstance(diff, Scalar):
            return diff.is_zero()
        return diff == 0

    def identity(self, name, topic, inputs, lhs, rhs, diff=None):
        """An algebraic identity: exact zero in the exact backend, |residual| <= tol in float."""
        if diff is None:
            diff = lhs - rhs
        if self.cfg.backend == "exact" and _exact_value(diff):
            ok = self._is_zero(diff)
            residual = "0" if ok else diff
        else:
            residual = self._float_norm(diff)
            ok = residual <= self.cfg.tolerance
        self._add(name, topic, inputs, lhs, rhs, residual, ok)
        return ok

    def numeric(self, name, topic, inputs, lhs, rhs, residual: float, tol: float | None = None):
        tol = self.cfg.tolerance if tol is None else tol
        ok = bool(residual <= tol) and math.isfinite(residual)
        self._add(name, topic, inputs, lhs, rhs, float(residual), ok, {"tolerance": tol})
        return ok

    def flag(self, name, topic, inputs, ok: bool, lhs=None, rhs=None):
        self._add(name, topic, inputs, lhs, rhs, "0" if ok else "mismatch", ok)
        return ok

    def _add(self, name, topic, inputs, lhs, rhs, residual, ok, extra=None):
        rid = f"{self.suite}.{len(self.records) + 1:03d}"
        self.records.append(CheckRecord(rid, name, topic, dict(inputs), lhs, rhs, residual,
                                        self.cfg.backend, bool(ok), extra or {}))


def _exact_value(x) -> bool:
    if isinstance(x, (Multivector, PhaseFunction)):
        return x.is_exact()
    return isinstance(x, (Scalar, int, Fraction))


def _rand_q(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def random_form(rng: random.Random, d: int, backend: str = "exact") -> BilinearForm:
    if backend == "float":
        return BilinearForm([[complex(rng.uniform(-2, 2)) for _ in range(d)] for _ in range(d)])
    return BilinearForm([[as_scalar(_rand_q(rng)) for _ in range(d)] for _ in range(d)])


def random_invertible_form(rng: random.Random, d: int) -> BilinearForm:
    """Random exact B whose symmetric part is invertible (diagonally dominant g)."""
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            row.append(as_scalar(_rand_q(rng) if i != j else Fraction(rng.randint(5, 9), 1)))
        rows.append(row)
    return BilinearForm(rows)


def random_monomial(rng: random.Random, d: int, backend: str = "exact") -> Multivector:
    mask = rng.randrange(1 << d)
    coef = complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) if backend == "float" else as_scalar(_rand_q(rng) or 1)
    return Multivector(d, {mask: coef})


def random_element(rng: random.Random, d: int, terms: int = 4) -> Multivector:
    return Multivector(d, {rng.randrange(1 << d): as_scalar(_rand_q(rng)) for _ in range(terms)})


# cliffordization ---------------------------------------------------------------

def suite_cliffordization(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "cliffordization")
    rng = random.Random(cfg.seed)
    topic_ax = "antiderivation axioms and closed contraction formula"
    fails_eq, fails_assoc, fails_grade = 0, 0, 0
    worst = 0.0
    for _ in range(cfg.triples):
        d = rng.randint(1, 8)
        B = random_form(rng, d, cfg.backend)
        u, v, w = (random_monomial(rng, d, cfg.backend) for _ in range(3))
        a = contract_closed(u, w, B)
        b = contract_rules(u, w, B)
        lhs = contract_rules(u.wedge(v), w, B)
        rhs = contract_rules(u, contract_rules(v, w, B), B)
        if cfg.backend == "exact":
            fails_eq += a != b
            fails_assoc += lhs != rhs
        else:
            worst = max(worst, a.distance(b), lhs.distance(rhs))
        if not a.is_zero():
            gu = popcount(next(iter(u.masks())))
            gw = popcount(next(iter(w.masks())))
            fails_grade += a.grades() != {gw - gu}
    inputs = {"triples": cfg.triples, "seed": cfg.seed, "max_d": 8}
    if cfg.backend == "exact":
        rec.flag("contract_closed equals contract_rules on random monomials", topic_ax, inputs, fails_eq == 0, fails_eq, 0)
        rec.flag("(u v) ⌋ w = u ⌋ (v ⌋ w) on random monomials", topic_ax, inputs, fails_assoc == 0, fails_assoc, 0)
    else:
        rec.numeric("contract_closed vs contract_rules and (uv)⌋w = u⌋(v⌋w), float B", topic_ax, inputs,
                    None, None, worst)
    rec.flag("grade law: grade(u ⌋ w) = grade(w) - grade(u)", topic_ax, inputs, fails_grade == 0, fails_grade, 0)

    d = 4
    B = random_form(rng, d)
    t = [Multivector.generator(d, i, ONE) for i in range(1, d + 1)]
    one = Multivector.scalar(d, ONE)
    u = random_element(rng, d)
    rec.identity("theta_i ⌋ 1 = 0", topic_ax, {"d": d}, contract_rules(t[0], one, B), Multivector.zero(d))
    rec.identity("1 ⌋ u = u", topic_ax, {"d": d}, contract_rules(one, u, B), u)
    rec.identity("theta_1 ⌋ theta_2 = B(theta_1, theta_2)", topic_ax, {"d": d},
                 contract_rules(t[0], t[1], B), Multivector.scalar(d, B(1, 2)))

    topic_c = "circle product"
    bad_assoc = bad_top = 0
    for _ in range(200):
        d = rng.randint(1, 5)
        B = random_form(rng, d)
        x, y, z = (random_element(rng, d, 3) for _ in range(3))
        bad_assoc += circle_product(circle_product(x, y, B), z, B) != circle_product(x, circle_product(y, z, B), B)
        a, b = random_monomial(rng, d), random_monomial(rng, d)
        ga, gb = popcount(next(iter(a.masks()))), popcount(next(iter(b.masks())))
        if ga <= gb:
            # only the fully contracted term has grade gb - ga
            bad_top += circle_product(a, b, B).grade_part(gb - ga) != contract_closed(a, b, B)
    rec.flag("circle product associative on 200 random triples", topic_c, {"seed": cfg.seed}, bad_assoc == 0, bad_assoc, 0)
    rec.flag("fully contracted term of u ∘ v equals contract_closed", topic_c, {"seed": cfg.seed}, bad_top == 0, bad_top, 0)
    d = 3
    B = random_form(rng, d)
    g = B.g
    t = [Multivector.generator(d, i, ONE) for i in range(1, d + 1)]
    for i in range(d):
        for j in range(d):
            lhs = circle_product(t[i], t[j], B) + circle_product(t[j], t[i], B)
            rec.identity(f"theta_{i + 1} ∘ theta_{j + 1} + theta_{j + 1} ∘ theta_{i + 1} = 2 g", topic_c,
                         {"i": i + 1, "j": j + 1}, lhs, Multivector.scalar(d, g(i + 1, j + 1) * 2))
    # Clifford map composition and the Pauli specialization
    x, y, w = (random_element(rng, d, 3) for _ in range(3))
    rec.identity("gamma_x gamma_y w = gamma_{x ∘ y} w", "Clifford map", {"d": d},
                 circle_product(x, circle_product(y, w, B), B), circle_product(circle_product(x, y, B), w, B))
    ps = StarProductSpec.pauli(d)
    cs = StarProductSpec.circle(BilinearForm.diagonal(d, HBAR / 2))
    rec.identity("pauli spec equals circle spec with B = (hbar/2) delta", "Pauli star product", {"d": d},
                 ps.product(x, y), cs.product(x, y))

    topic_t = "Hodge dual, Berezin integral and trace"
    t3 = [Multivector.generator(3, i, ONE) for i in (1, 2, 3)]
    top = t3[0].wedge(t3[1]).wedge(t3[2])
    rec.identity("⋆1 = theta_1 theta_2 theta_3", topic_t, {"d": 3}, hodge(Multivector.scalar(3, ONE)), top)
    rec.identity("⋆theta_1 = theta_2 theta_3", topic_t, {"d": 3}, hodge(t3[0]), t3[1].wedge(t3[2]))
    rec.identity("∫ d^3 theta theta_1 theta_2 theta_3 = hbar^3", topic_t, {"d": 3}, berezin_integrate(top), HBAR ** 3)
    rec.identity("∫ d theta_1 theta_1 = hbar", topic_t, {"d": 1},
                 berezin_integrate(Multivector.generator(1, 1, ONE)), HBAR)
    bad = 0
    for _ in range(50):
        d = rng.randint(1, 6)
        u = random_element(rng, d)
        bad += trace(u) != u.scalar_part() * trace_norm(d)
    rec.flag("Tr(u) = 2^{d//2} eps(u) on random elements", topic_t, {"seed": cfg.seed}, bad == 0, bad, 0)
    bad = 0
    for _ in range(50):
        d = rng.randint(1, 6)
        u, v = random_element(rng, d), random_element(rng, d)
        bad += involution(involution(u)) != u or involution(u.wedge(v)) != involution(v).wedge(involution(u))
    rec.flag("involution is an anti-automorphism of order two", topic_t, {"seed": cfg.seed}, bad == 0, bad, 0)

    _spin_checks(rec, cfg)
    return rec.records


def _spin_checks(rec: Recorder, cfg: RunConfig):
    topic = "Pauli star product and spin"
    P = pauli_form(3)
    t = [Multivector.generator(3, i, ONE) for i in (1, 2, 3)]
    one = Multivector.scalar(3, ONE)
    for i in range(3):
        for j in range(3):
            lhs = circle_product(t[i], t[j], P) + circle_product(t[j], t[i], P)
            rec.identity(f"{{theta_{i + 1}, theta_{j + 1}}} = hbar delta", topic, {"i": i + 1, "j": j + 1},
                         lhs, one.scale(HBAR) if i == j else Multivector.zero(3))
    s = [sigma(i) for i in (1, 2, 3)]
    rec.identity("[sigma^1, sigma^2] = 2i sigma^3", topic, {},
                 circle_product(s[0], s[1], P) - circle_product(s[1], s[0], P), s[2].scale(2 * I))
    for i in range(3):
        for j in range(3):
            lhs = circle_product(s[i], s[j], P) + circle_product(s[j], s[i], P)
            rec.identity(f"{{sigma^{i + 1}, sigma^{j + 1}}} = 2 delta", topic, {"i": i + 1, "j": j + 1},
                         lhs, one.scale(2) if i == j else Multivector.zero(3))
        rec.identity(f"conj(sigma^{i + 1}) = sigma^{i + 1}", topic, {"i": i + 1}, involution(s[i]), s[i])
    osc = fermionic_oscillator(1)
    for label, st in osc.states.items():
        rec.identity(f"H ⋆ pi_{label} = E pi", topic, {"label": str(label)},
                     circle_product(osc.hamiltonian, st.wigner, P), st.wigner.scale(osc.energies[label]))
        rec.identity(f"pi_{label} idempotent", topic, {"label": str(label)},
                     circle_product(st.wigner, st.wigner, P), st.wigner)
        rec.identity(f"Tr pi_{label} = 1", topic, {"label": str(label)}, trace(st.wigner), ONE)
        e = spin_expectations(st)
        sign = 1 if label == ONE / 2 else -1
        rec.identity(f"<S_1> = 0 for pi_{label}", topic, {"label": str(label)}, e[0], ZERO)
        rec.identity(f"<S_2> = 0 for pi_{label}", topic, {"label": str(label)}, e[1], ZERO)
        rec.identity(f"<S_3> = ±hbar/2 for pi_{label}", topic, {"label": str(label)}, e[2], HBAR / 2 * sign)
        rec.identity(f"<S^2> = 3 hbar^2 / 4 for pi_{label}", topic, {"label": str(label)}, e[3], HBAR * HBAR * 3 / 4)
    pp, pm = spin_projector(1), spin_projector(-1)
    rec.identity("pi_+ + pi_- = 1", topic, {}, pp + pm, one)
    rec.identity("pi_+ ⋆ pi_- = 0", topic, {}, circle_product(pp, pm, P), Multivector.zero(3))

    hb = cfg.hbar
    tol = cfg.tolerance
    worst = 0.0
    for tt in np.linspace(0.0, 3.0, 7):
        for i in (1, 2, 3):
            worst = max(worst, evolve_sigma(i, 1.3, float(tt), hb).distance(sigma_closed_form(i, 1.3, float(tt), hb)))
    rec.numeric("sigma^i(t) by star exponential vs closed form", topic, {"omega": 1.3, "hbar": hb}, None, None, worst, tol)
    times = [float(x) for x in np.linspace(0.0, 6.0, 64)]
    rows = precession_series((0.0, 0.0, 1.7), 1.0, 1.0, 1.0, times, hb)
    rec.numeric("precession dS/dt = (e/mc) B × S over 64 samples", topic, {"B": [0, 0, 1.7], "hbar": hb},
                None, None, max(r[3] for r in rows), tol)
    rows = precession_series((0.3, -0.8, 0.5), 1.0, 2.0, 1.0, times, hb)
    rec.numeric("precession with oblique B over 64 samples", topic, {"B": [0.3, -0.8, 0.5], "hbar": hb},
                None, None, max(r[3] for r in rows), tol)
    n = (2 / 3, -1 / 3, 2 / 3)
    rec.numeric("Exp(phi n·S) = cos(phi/2) - i sigma·n sin(phi/2)", topic, {"phi": 1.1},
                None, None, rotor(1.1, n, hb).distance(rotor_closed_form(1.1, n, hb)), tol)
    tf = [x.to_float(hb) for x in t]
    rot = [rotate(1.1, n, x, hb) for x in t]
    rod = rodrigues(1.1, n, tf)
    rec.numeric("rotation of theta_i equals the Rodrigues action", topic, {"phi": 1.1},
                None, None, max(a.distance(b) for a, b in zip(rot, rod)), tol)
    rot2 = [rotate(0.4, n, rotate(0.7, n, x, hb), hb) for x in t]
    rec.numeric("rotations about one axis compose additively", topic, {"phi": [0.4, 0.7]},
                None, None, max(a.distance(b) for a, b in zip(rot2, rot)), tol)
    nq = (Fraction(2, 3), Fraction(-1, 3), Fraction(2, 3))
    ex = [rotate_exact(Fraction(3, 5), Fraction(4, 5), nq, x) for x in s]
    ref = rodrigues((Fraction(-7, 25), Fraction(24, 25)), nq, s)
    for k in range(3):
        rec.identity(f"exact rotation of sigma^{k + 1} at cos(phi/2) = 3/5", topic, {"axis": "2/3,-1/3,2/3"}, ex[k], ref[k])
    X = random_element(random.Random(cfg.seed + 7), 3).even_part().to_float(hb)
    spec = StarProductSpec.pauli(3)
    ff = P.to_float(hb)
    lhs = circle_product(star_exponential(X, spec, 0.3, hb), star_exponential(X, spec, 0.5, hb), ff)
    rec.numeric("Exp(X t1) ⋆ Exp(X t2) = Exp(X (t1 + t2))", topic, {"t": [0.3, 0.5]},
                None, None, lhs.distance(star_exponential(X, spec, 0.8, hb)), tol)


# wick --------------------------------------------------------------------------

def suite_wick(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "wick")
    rng = random.Random(cfg.seed + 1)
    topic = "Wick isomorphism and scalar-part theorem"
    for n in (2, 4, 6):
        bad = bad_pair = 0
        for _ in range(200):
            d = rng.randint(2, 6)
            B = random_invertible_form(rng, d)
            idx = [rng.randint(1, d) for _ in range(n)]
            r = scalar_equivalence_check(idx, B)
            bad += not r.ok
            if n == 4:
                bad_pair += r.lhs != wick_pairing(idx, B)
        rec.flag(f"eps[theta ∘_B ... ∘_B theta] = eps[e^-F (theta ∘_g ... ∘_g e^F)], n = {n}, 200 draws",
                 topic, {"n": n, "seed": cfg.seed}, bad == 0, bad, 0)
        if n == 4:
            rec.flag("n = 4 scalar part equals the Wick pairing sum", topic, {"n": 4}, bad_pair == 0, bad_pair, 0)
    B = random_invertible_form(rng, 4)
    r = scalar_equivalence_check([1, 2, 3], B)
    rec.identity("odd n: both sides vanish", topic, {"n": 3}, r.lhs + r.rhs, ZERO)
    for _ in range(5):
        d = rng.randint(2, 5)
        B = random_invertible_form(rng, d)
        wick = solve_wick_form(B.g, B.A)
        res = wick.residual()
        ok = all(not x for row in res for x in row)
        rec.flag("F solves sum F^{rs} g_is g_jr = A_ij / 2", topic, {"d": d}, ok)
        bad = 0
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                ti, tj = Multivector.generator(d, i, ONE), Multivector.generator(d, j, ONE)
                val = contract_rules(ti, contract_rules(tj, wick.F, B.g), B.g).scalar_part()
                bad += val != B.A(i, j)
        rec.flag("theta_i ⌋_g (theta_j ⌋_g F) = A_ij", topic, {"d": d}, bad == 0, bad, 0)
        e = grassmann_exp(wick.F)
        rec.identity("e^F ∧ e^-F = 1", topic, {"d": d}, e.wedge(grassmann_exp(-wick.F)), Multivector.scalar(d, ONE))
        u = random_element(rng, d)
        for i in range(1, d + 1):
            ti = Multivector.generator(d, i, ONE)
            lhs = wick_clifford(ti, wick)(u)
            rhs = ti.wedge(u) + contract_rules(ti, u, B.g) + contract_rules(ti, wick.F, B.g).wedge(u)
            rec.identity(f"e^-F gamma^g_theta{i} e^F u = theta u + theta ⌋_g u + (theta ⌋_g F) u",
                         topic, {"d": d, "i": i}, lhs, rhs)
        ti, tj = Multivector.generator(d, 1, ONE), Multivector.generator(d, d, ONE)
        gi, gj = wick_clifford(ti, wick), wick_clifford(tj, wick)
        lhs = gi(gj(u)) + gj(gi(u))
        rec.identity("Wick-conjugated anticommutator = 2 g u", topic, {"d": d}, lhs, u.scale(B.g(1, d) * 2))
    return rec.records


# oscillator ----------------------------------------------------------------------

def suite_oscillator(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "oscillator")
    topic = "harmonic oscillator Wigner functions"
    m, w = Fraction(3, 2), Fraction(2, 3)
    osc = oscillator(m, w)
    for n in range(13):
        pi = osc.wigner(n)
        rec.identity(f"H ⋆ pi_{n} = hbar omega ({n} + 1/2) pi_{n}", topic, {"n": n, "m": "3/2", "omega": "2/3"},
                     osc.residual(n), PhaseFunction(pi.vars, pi.d))
    hb = cfg.hbar
    for n in range(6):
        pi = osc.wigner(n)
        norm = gaussian_moment(pi.to_float(hb), hb)
        rec.numeric(f"(1/2 pi hbar) ∫ pi_{n} = 1", topic, {"n": n, "hbar": hb}, norm, 1.0, abs(norm - 1), 1e-9)
        e = gaussian_moment(pi.to_float(hb) * osc.hamiltonian.to_float(hb), hb)
        target = hb * float(w) * (n + 0.5)
        rec.numeric(f"<H> in pi_{n} = hbar omega ({n} + 1/2)", topic, {"n": n, "hbar": hb}, e, target, abs(e - target), 1e-9)
    return rec.records


# landau ---------------------------------------------------------------------------

def random_polynomial(rng: random.Random, gens, degree: int, one) -> PhaseFunction:
    """Random polynomial of total degree <= degree in the given phase functions."""
    out = one.scale(ZERO)
    for _ in range(6):
        e = [rng.randint(0, degree) for _ in gens]
        while sum(e) > degree:
            k = rng.randrange(len(e))
            if e[k]:
                e[k] -= 1
        term = one.scale(as_scalar(_rand_q(rng) or 1))
        for g, k in zip(gens, e):
            for _ in range(k):
                term = term * g
        out = out + term
    return out


def suite_landau(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "landau")
    topic = "Landau levels and angular momentum"
    m, w = Fraction(3, 2), Fraction(2, 3)
    L = landau_problem(m, w)
    F = conserved_frame(L)
    zero_k = all(not F.star.kernel.get((a, b)) for a in ("qt1", "qt2") for b in ("pt1", "pt2"))
    rec.flag("transformed kernel has no q~-p~ pairing", topic, {"m": "3/2", "omega": "2/3"}, zero_k)
    for n in range(7):
        for l in range(7):
            pi = F.wigner(n, l)
            z = PhaseFunction(pi.vars, pi.d)
            rec.identity(f"H_L ⋆ pi_{n}{l} = hbar omega ({n} + 1/2) pi_{n}{l}", topic, {"n": n, "l": l},
                         F.star.product(F.hamiltonian, pi) - pi.scale(L.energy(n)), z)
            rec.identity(f"J ⋆ pi_{n}{l} = hbar ({l} - {n}) pi_{n}{l}", topic, {"n": n, "l": l},
                         F.star.product(F.angular_momentum, pi) - pi.scale(L.angular_eigenvalue(n, l)), z)
    for n in range(3):
        for l in range(3):
            pi = L.wigner(n, l)
            z = PhaseFunction(pi.vars, pi.d)
            rec.identity(f"original coordinates: H_L ⋆ pi_{n}{l} = E_n pi_{n}{l}", topic, {"n": n, "l": l},
                         L.star.product(L.hamiltonian, pi) - pi.scale(L.energy(n)), z)
            rec.identity(f"original coordinates: J ⋆ pi_{n}{l} = j_{n}{l} pi_{n}{l}", topic, {"n": n, "l": l},
                         L.star.product(L.angular_momentum, pi) - pi.scale(L.angular_eigenvalue(n, l)), z)
            rec.identity(f"pi_{n}{l} agrees between the two coordinate systems", topic, {"n": n, "l": l},
                         F.to_frame(pi), F.wigner(n, l))
    rng = random.Random(cfg.seed + 2)
    one = L.star.one(ONE)
    for k in range(5):
        f = random_polynomial(rng, L.qt, 4, one)
        g = random_polynomial(rng, L.pt, 4, one)
        z = PhaseFunction(f.vars, f.d)
        rec.identity("H_L ⋆ f(q~) = f(q~) ⋆ H_L", topic, {"draw": k}, L.star.commutator(L.hamiltonian, f), z)
        rec.identity("f(q~) ⋆ g(p~) = g(p~) ⋆ f(q~)", topic, {"draw": k}, L.star.commutator(f, g), z)
    for i, q in enumerate(L.qt):
        a, b = L.conserved_operators(q)
        rec.identity(f"conserved operators annihilate q~{i + 1}", topic, {"i": i + 1}, a + b, PhaseFunction(q.vars, q.d))
    return rec.records


# susy ----------------------------------------------------------------------------------

def suite_susy(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "susy")
    topic = "spinning particle and supersymmetric oscillator"
    for B3 in (1, Fraction(5, 3)):
        r = feynman_trick(B3, 2, 3)
        rec.identity("[(p - eA/c)·sigma]^2 = (p - eA/c)^2 - (hbar e/c) sigma·B", topic, {"B3": str(B3), "e": 2, "c": 3},
                     r.lhs, r.rhs)
    B3, e, m, c = Fraction(5, 3), 2, Fraction(1, 2), 3
    wL = Fraction(B3) * e / (m * c)
    rec.identity("H_I = -(e hbar/2mc) B sigma^3 equals -H_ferm at omega = eB/mc", topic, {"B3": "5/3"},
                 spin_interaction(B3, e, m, c), fermionic_oscillator(wL).hamiltonian.scale(-1))
    osc = susy_oscillator(Fraction(3, 2))
    for nb in range(9):
        for nf in (-1, 1):
            pi = osc.state(nf, nb)
            rec.identity(f"H ⋆ pi(n_F = {nf:+d}/2, n_B = {nb}) = hbar omega (n_B + 1/2 + n_F) pi", topic,
                         {"n_B": nb, "n_F": nf}, osc.genvalue_residual(nf, nb), PhaseFunction(pi.vars, pi.d))
        if nb >= 1:
            rec.identity(f"degeneracy E(-, {nb}) = E(+, {nb - 1})", topic, {"n_B": nb},
                         osc.energy(-1, nb), osc.energy(1, nb - 1))
    for nb in range(4):
        (l1, r1), (l2, r2) = ladder_check(osc, nb)
        rec.identity(f"Q+ ⋆ pi(-, {nb}) ⋆ Q- = {nb} hbar pi(+, {nb - 1})", topic, {"n_B": nb}, l1, r1)
        rec.identity(f"Q- ⋆ pi(+, {nb}) ⋆ Q+ = {nb + 1} hbar pi(-, {nb + 1})", topic, {"n_B": nb}, l2, r2)
    for name, (lhs, rhs) in fredholm_relations(osc).items():
        rec.identity(name, "Fredholm quadruple", {}, lhs, rhs)
    values = []
    for N in range(1, cfg.truncation + 1):
        wi = witten_index(N, omega=1, hbar=cfg.hbar)
        values.append(wi.value)
        rec.numeric(f"Witten index at truncation {N} equals 1", "Witten index", {"N": N, "hbar": cfg.hbar},
                    wi.value, 1.0, abs(wi.value - 1), 1e-9)
        worst = max(abs(x.contribution) for x in wi.ledger if x.level >= 1)
        rec.numeric(f"E > 0 levels cancel at truncation {N}", "Witten index", {"N": N},
                    worst, 0.0, worst, 1e-9)
    rec.numeric("Witten index independent of truncation", "Witten index", {"N": cfg.truncation},
                max(values), min(values), max(values) - min(values), 1e-9)
    return rec.records


# dirac -------------------------------------------------------------------------------

PYTHAGOREAN = dr.Kinematics((4, 0, 0), 3, 1, (0, 1, 0))


def suite_dirac(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "dirac")
    hb = cfg.hbar
    tol = cfg.tolerance
    lambdas = {}
    for kind in cfg.reps:
        rep = dr.build_rep(kind)
        K = rep.kind
        for name, diff in dr.algebra_relations(rep).items():
            rec.identity(f"{K}: {name}", "Dirac algebra", {"rep": K}, diff, Multivector.zero(rep.d), diff)
        for name, diff in dr.lorentz_relations(rep).items():
            rec.identity(f"{K}: {name}", "Lorentz generators", {"rep": K}, diff, Multivector.zero(rep.d), diff)
        tr = dr.gamma_trace_suite(rep)
        bad = [n for n, v in tr.items() if v != 0]
        rec.flag(f"{K}: {len(tr)} gamma trace rules", "gamma traces", {"rep": K}, not bad, bad, [])
        # 4 (g01 g01 - g00 g11 + g01 g10) = 4
        rec.identity(f"{K}: Tr(gamma0 gamma1 gamma0 gamma1) = 4", "gamma traces", {"rep": K},
                     rep.trace(rep.product(rep.gamma[0], rep.gamma[1], rep.gamma[0], rep.gamma[1])), as_scalar(4))
        # parity
        for i, a in enumerate(rep.alpha):
            rec.identity(f"{K}: P(alpha{i + 1}) = -alpha{i + 1}", "parity", {"rep": K}, dr.parity(rep, a), a.scale(-1))
            s = sigma(i + 1, rep.d)
            rec.identity(f"{K}: P(sigma{i + 1}) = sigma{i + 1}", "parity", {"rep": K}, dr.parity(rep, s), s)
        X = random_element(random.Random(cfg.seed + 3), rep.d, 5)
        rec.identity(f"{K}: P(P(X)) = X", "parity", {"rep": K}, dr.parity(rep, dr.parity(rep, X)), X)
        _projector_checks(rec, rep)
        # rotations with gamma in place of alpha
        n = (Fraction(2, 3), Fraction(1, 3), Fraction(2, 3))
        g = list(rep.gamma[1:])
        rot = dr.rotate_vector_exact(rep, Fraction(3, 5), Fraction(4, 5), n, g)
        ref = rodrigues((Fraction(-7, 25), Fraction(24, 25)), n, g)
        for i in range(3):
            rec.identity(f"{K}: rotation of gamma{i + 1} at cos(phi/2) = 3/5", "rotations", {"rep": K}, rot[i], ref[i])
        rec.identity(f"{K}: rotation leaves gamma0 fixed", "rotations", {"rep": K},
                     dr.rotate_vector_exact(rep, Fraction(3, 5), Fraction(4, 5), n, [rep.beta])[0], rep.beta)
        # boosts (float)
        om = (0.3, -0.2, 0.5)
        L = dr.extract_lambda(rep, dr.boost_gammas(rep, om, hb), hb)
        lambdas[K] = L
        rec.numeric(f"{K}: Exp(-w·K) ⋆ gamma ⋆ Exp(w·K) = Lambda gamma", "boosts", {"rep": K, "omega": list(om)},
                    None, None, float(np.abs(L - dr.boost_matrix(om)).max()), tol)
        La = dr.extract_lambda_alpha(rep, dr.boost_alphas(rep, om, hb), hb)
        rec.numeric(f"{K}: Exp(w·K) ⋆ alpha^mu ⋆ Exp(w·K) = Lambda alpha", "boosts", {"rep": K, "omega": list(om)},
                    None, None, float(np.abs(La - dr.boost_matrix(om)).max()), tol)
        rec.numeric(f"{K}: boost element = cosh(eta/2) + n·alpha sinh(eta/2)", "boosts", {"rep": K},
                    None, None, dr.boost_element(rep, om, hb).distance(dr.boost_element_closed(rep, om, hb)), tol)
        W = np.zeros((4, 4))
        W[0, 1], W[1, 0], W[1, 2], W[2, 1], W[0, 3], W[3, 0] = 0.3, -0.3, 0.4, -0.4, -0.2, 0.2
        Lt = dr.extract_lambda(rep, dr.lorentz_transform(rep, W, hb), hb)
        rec.numeric(f"{K}: general Lorentz transformation from sigma^{{mu nu}} omega_{{mu nu}}", "boosts",
                    {"rep": K}, None, None, float(np.abs(Lt - dr.lorentz_matrix(W)).max()), tol)
        kin = PYTHAGOREAN
        p4 = (5, 4, 0, 0)
        wp = dr.rapidity_for_momentum(kin.p, 3, 1)
        imgs = dr.boost_gammas(rep, wp, hb)
        target = rep.slash(p4).scale(Fraction(1, 3)).to_float(hb)
        rec.numeric(f"{K}: S^-1 ⋆ gamma0 ⋆ S = pslash / mc", "boosts", {"rep": K, "p": [4, 0, 0]},
                    None, None, imgs[0].distance(target), tol)
        S = dr.boost_element(rep, wp, hb)
        Sinv = dr.boost_element(rep, [-x for x in wp], hb)
        rest = dr.Kinematics((0, 0, 0), 3, 1)
        cov = dr.covariant_energy_projectors(rep, p4, 3)
        ff = rep.float_form(hb)
        for sgn, pr, cv in zip(("+", "-"), dr.energy_projectors(rep, rest), cov):
            boosted = circle_product(circle_product(Sinv, pr.to_float(hb), ff), S, ff)
            rec.numeric(f"{K}: boosted rest projector pi_{sgn}E(0) = pi_{sgn}m(p)", "boosts", {"rep": K},
                        None, None, boosted.distance(cv.to_float(hb)), tol)
        # star exponential and Zitterbewegung
        t1, t2 = 0.4, 0.9
        ex = dr.dirac_star_exponential(rep, kin, t1 + t2, hb)
        rec.numeric(f"{K}: Exp(H t) matrix route = pi_-E e^(itE) + pi_+E e^(-itE)", "Dirac star exponential",
                    {"rep": K}, None, None, ex.distance(dr.dirac_exponential_closed(rep, kin, t1 + t2, hb)), tol)
        gl = circle_product(dr.dirac_star_exponential(rep, kin, t1, hb), dr.dirac_star_exponential(rep, kin, t2, hb), ff)
        rec.numeric(f"{K}: Exp(H t1) ⋆ Exp(H t2) = Exp(H (t1 + t2))", "Dirac star exponential", {"rep": K},
                    None, None, gl.distance(ex), tol)
        E = float(kin.energy)
        times = np.linspace(0.0, 10 * hb / E, 64)
        worst = max(dr.zitterbewegung_heisenberg_residual(rep, kin, 0, float(t), hb) for t in times)
        rec.numeric(f"{K}: Heisenberg residual of x_1(t) over 64 samples", "Zitterbewegung", {"rep": K},
                    None, None, worst, 1e-8)
        worst = max(dr.zitterbewegung_displacement(rep, kin, 0, float(t), hb)[0]
                    .distance(dr.zitterbewegung_direct(rep, kin, 0, float(t), hb)) for t in times[::8])
        rec.numeric(f"{K}: closed-form x_1(t) vs Frechet-derivative route", "Zitterbewegung", {"rep": K},
                    None, None, worst, 1e-8)
        d0 = dr.zitterbewegung_displacement(rep, kin, 0, 0.0, hb)[0]
        rec.numeric(f"{K}: x_1(0) = x_1", "Zitterbewegung", {"rep": K}, None, None,
                    max((abs(v) for _, v in d0.items()), default=0.0), tol)
        for sgn in (1, -1):
            slope = dr.drift_slope(rep, kin, 0, sgn, hbar=hb)
            rec.numeric(f"{K}: drift slope in the {'+' if sgn > 0 else '-'}E sector = ±c^2 p/E", "Zitterbewegung",
                        {"rep": K}, slope, sgn * 0.8, abs(slope - sgn * 0.8), 1e-9)
    keys = list(lambdas)
    if len(keys) > 1:
        spread = max(float(np.abs(lambdas[a] - lambdas[keys[0]]).max()) for a in keys)
        rec.numeric("Lambda matrices agree across representations", "boosts", {"reps": keys}, None, None, spread, tol)
    return rec.records


def _projector_checks(rec: Recorder, rep):
    K = rep.kind
    kin = PYTHAGOREAN
    topic = "Dirac projectors"
    one = rep.one()
    z = Multivector.zero(rep.d)
    H = dr.dirac_hamiltonian(rep, kin)
    E = as_scalar(kin.energy)
    pp, pm = dr.energy_projectors(rep, kin)
    rec.identity(f"{K}: H ⋆ H = c^2 p^2 + m^2 c^4", topic, {"rep": K}, rep.product(H, H), one.scale(E * E))
    rec.identity(f"{K}: H ⋆ pi_+E = E pi_+E", topic, {"rep": K}, rep.product(H, pp), pp.scale(E))
    rec.identity(f"{K}: H ⋆ pi_-E = -E pi_-E", topic, {"rep": K}, rep.product(H, pm), pm.scale(-E))
    rec.identity(f"{K}: pi_+E idempotent", topic, {"rep": K}, rep.product(pp, pp), pp)
    rec.identity(f"{K}: pi_+E ⋆ pi_-E = 0", topic, {"rep": K}, rep.product(pp, pm), z)
    rec.identity(f"{K}: pi_+E + pi_-E = 1", topic, {"rep": K}, pp + pm, one)
    Su = dr.spin_observable(rep, kin.u)
    rec.identity(f"{K}: S_u ⋆ S_u = hbar^2/4", topic, {"rep": K}, rep.product(Su, Su), one.scale(HBAR * HBAR / 4))
    rec.identity(f"{K}: [H, S_u] = 0", topic, {"rep": K}, rep.commutator(H, Su), z)
    sp, sm = dr.spin_projectors(rep, kin.u)
    rec.identity(f"{K}: S_u ⋆ pi_+s = (hbar/2) pi_+s", topic, {"rep": K}, rep.product(Su, sp), sp.scale(HBAR / 2))
    rec.identity(f"{K}: S_u ⋆ pi_-s = -(hbar/2) pi_-s", topic, {"rep": K}, rep.product(Su, sm), sm.scale(-HBAR / 2))
    for a, pa in (("+", pp), ("-", pm)):
        for b, sb in (("+", sp), ("-", sm)):
            comb = rep.product(pa, sb)
            rec.identity(f"{K}: pi_{a}E ⋆ pi_{b}s = pi_{b}s ⋆ pi_{a}E", topic, {"rep": K}, comb, rep.product(sb, pa))
            rec.identity(f"{K}: pi_{a}E,{b}s idempotent", topic, {"rep": K}, rep.product(comb, comb), comb)
            rec.identity(f"{K}: Tr pi_{a}E,{b}s = 1", topic, {"rep": K}, rep.trace(comb), ONE)
    p4 = (5, 4, 0, 0)
    mc = 3
    cp, cm = dr.covariant_energy_projectors(rep, p4, 3)
    ps = rep.slash(p4)
    rec.identity(f"{K}: (pslash - mc) ⋆ pi_+m = 0", topic, {"rep": K}, rep.product(ps - one.scale(mc), cp), z)
    rec.identity(f"{K}: (pslash + mc) ⋆ pi_-m = 0", topic, {"rep": K}, rep.product(ps + one.scale(mc), cm), z)
    rec.identity(f"{K}: pi_+m idempotent", topic, {"rep": K}, rep.product(cp, cp), cp)
    rest = dr.covariant_energy_projectors(rep, (3, 0, 0, 0), 3)
    g0 = rep.gamma[0]
    rec.identity(f"{K}: rest frame pi_+m = (1 + gamma0)/2", topic, {"rep": K}, rest[0], (one + g0).scale(ONE / 2))
    rec.identity(f"{K}: rest frame pi_+E(0) = (1 + gamma0)/2", topic, {"rep": K},
                 dr.energy_projectors(rep, dr.Kinematics((0, 0, 0), 3, 1))[0], (one + g0).scale(ONE / 2))
    u4 = (0, 0, 1, 0)
    csp, csm = dr.covariant_spin_projectors(rep, u4)
    rec.identity(f"{K}: pi_+s(u) covariant = 1/2 + S_u/hbar", topic, {"rep": K}, csp, sp)
    rec.identity(f"{K}: [pi_+m, pi_+s(u)] = 0", topic, {"rep": K}, rep.commutator(cp, csp), z)
    rec.identity(f"{K}: pi_+s(u) idempotent", topic, {"rep": K}, rep.product(csp, csp), csp)


# fw -------------------------------------------------------------------------------------

def suite_fw(cfg: RunConfig) -> list:
    rec = Recorder(cfg, "fw")
    ctx = fw.fw_context("D4")
    topic = "non-relativistic expansion"
    for f in fw.standard_cases(ctx):
        res = fw.fw_dirac_em(f, ctx)
        for row in res.rows:
            rec.identity(f"{f.label}: H'' term '{row.name}'", topic, {"case": f.label}, row.computed, row.expected)
        rec.flag(f"{f.label}: odd part after one step starts at (1/c)^3", topic, {"case": f.label},
                 res.odd_after_first.is_zero() or res.odd_after_first.order() >= 3, res.odd_after_first.order(), 3)
        rec.identity(f"{f.label}: no odd terms to (1/c)^4 after two steps", topic, {"case": f.label},
                     res.odd_after_second.value, ctx.star.zero())
        rec.identity(f"{f.label}: even part of H'/mc^2 matches the printed even row", topic, {"case": f.label},
                     res.even_row_residual.value, ctx.star.zero())
        rec.identity(f"{f.label}: odd part of H'/mc^2 matches the printed odd row", topic, {"case": f.label},
                     res.odd_row_residual.value, ctx.star.zero())
        _, O = fw.parity_split(res.hamiltonian, ctx)
        rec.identity(f"{f.label}: U ⋆ adjoint(U) = 1 to (1/c)^4", topic, {"case": f.label},
                     fw.unitarity_residual(O, ctx).value, ctx.star.zero())
    free = fw.fw_dirac_em(fw.free_fields(ctx.star, 1, 2), ctx)
    rec.identity("free particle: H'' = beta (mc^2 + p^2/2m - p^4/8m^3c^2)", topic, {"m": 2},
                 free.h_double_prime, fw.free_kinetic_target(ctx, 2))
    lhs, rhs = fw.scalar_odd_check(ctx, 3)
    rec.identity("constant odd part: even part of H' = beta (1 + O^2/2 - O^4/8)", topic, {"k": 3}, lhs.value, rhs.value)
    H = fw.dirac_em_hamiltonian(fw.standard_cases(ctx)[1], ctx)
    E, O = fw.parity_split(H, ctx)
    rec.identity("parity split: beta ⋆ E ⋆ beta = E", topic, {}, ctx.conjugate_beta(E).value, E.value)
    rec.identity("parity split: beta ⋆ O ⋆ beta = -O", topic, {}, ctx.conjugate_beta(O).value, (-O).value)
    E2, O2 = fw.parity_split(ctx.beta + E + O, ctx)
    rec.identity("parity split is idempotent", topic, {}, (E2 - E).value + (O2 - O).value, ctx.star.zero())
    Eb, Ob = fw.parity_split(ctx.beta, ctx)
    rec.identity("parity split of beta alone is (0, 0)", topic, {}, Eb.value + Ob.value, ctx.star.zero())
    return rec.records


SUITE_FUNCS = {
    "cliffordization": suite_cliffordization,
    "wick": suite_wick,
    "oscillator": suite_oscillator,
    "landau": suite_landau,
    "susy": suite_susy,
    "dirac": suite_dirac,
    "fw": suite_fw,
}


def run(cfg: RunConfig) -> list:
    cfg.validate()
    out = []
    for s in cfg.suites:
        out.extend(SUITE_FUNCS[s](cfg))
    return out
