"""Phase-space functions: polynomial × Gaussian × Grassmann monomial, and their star products.

A :class:`PhaseFunction` is a finite sum of terms

    coef * x^e * exp(Q(x)) * theta^mask

over an ordered tuple of bosonic variables ``x``.  ``Q`` is a polynomial of
degree at most two, stored canonically so that equal Gaussians share a key.
The Grassmann factor lives in Gr(d); ``d = 0`` means a purely bosonic function.

Bosonic star products are given by a kernel ``K`` (the bidifferential
operator is ``exp(sum_ab K_ab <-d_a d_b->)``); the Grassmann part uses a
circle product with a bilinear form.  Because the two sets of derivatives
commute, a product of two terms factorizes into a bosonic product times a
circle product of the monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from .grassmann import BilinearForm, Multivector, _nonzero, wedge_sign
from .scalar import ONE, ZERO, Scalar, as_scalar, to_complex


class UnsupportedProductError(ValueError):
    """Both factors carry Gaussians in kernel-coupled variables."""


def _coef(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (float, complex)):
        return complex(x)
    return as_scalar(x)


def _add_into(out: dict, key, c):
    v = out.get(key)
    if v is None:
        out[key] = c
    else:
        s = v + c
        if _nonzero(s):
            out[key] = s
        else:
            del out[key]


def _poly_key(poly: dict) -> tuple:
    return tuple(sorted((e, c) for e, c in poly.items() if _nonzero(c)))


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class PhaseFunction:
    __slots__ = ("vars", "d", "_t")

    def __init__(self, variables, d: int = 0, terms=None):
        self.vars = tuple(variables)
        self.d = d
        out: dict = {}
        n = len(self.vars)
        for key, c in (terms or {}).items():
            g, e, m = key
            if len(e) != n:
                raise ValueError("exponent tuple length differs from the variable count")
            c = _coef(c)
            if _nonzero(c):
                _add_into(out, (g, tuple(e), m), c)
        self._t = out

    @classmethod
    def _raw(cls, variables, d, terms):
        obj = object.__new__(cls)
        obj.vars = variables
        obj.d = d
        obj._t = {k: c for k, c in terms.items() if _nonzero(c)}
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, variables, value=1, d: int = 0) -> "PhaseFunction":
        n = len(tuple(variables))
        return cls(variables, d, {((), (0,) * n, 0): value})

    @classmethod
    def variable(cls, variables, name: str, d: int = 0, coef=1) -> "PhaseFunction":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, d, {((), tuple(e), 0): coef})

    @classmethod
    def gaussian(cls, variables, exponent: "PhaseFunction", coef=1, d: int = 0) -> "PhaseFunction":
        """coef * exp(exponent) for a bosonic polynomial exponent of degree <= 2."""
        poly = {}
        for (g, e, m), c in exponent._t.items():
            if g or m:
                raise ValueError("the exponent must be a bosonic polynomial")
            if sum(e) > 2:
                raise ValueError("the exponent must have degree at most two")
            poly[e] = c
        n = len(tuple(variables))
        return cls(variables, d, {(_poly_key(poly), (0,) * n, 0): coef})

    @classmethod
    def grassmann(cls, variables, u: Multivector) -> "PhaseFunction":
        n = len(tuple(variables))
        return cls(variables, u.d, {((), (0,) * n, m): c for m, c in u._t.items()})

    # inspection -------------------------------------------------------
    def items(self):
        return sorted(self._t.items(), key=lambda kv: repr(kv[0]))

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_exact(self) -> bool:
        return all(isinstance(c, Scalar) for c in self._t.values())

    def is_polynomial(self) -> bool:
        return all(not g for (g, _, _) in self._t)

    def gaussian_keys(self) -> set:
        return {g for (g, _, _) in self._t}

    def degree(self) -> int:
        return max((sum(e) for (_, e, _) in self._t), default=0)

    def grassmann_part(self, mask: int) -> "PhaseFunction":
        """Bosonic coefficient function of theta^mask."""
        return PhaseFunction._raw(self.vars, 0, {(g, e, 0): c for (g, e, m), c in self._t.items() if m == mask})

    def masks(self) -> set:
        return {m for (_, _, m) in self._t}

    def dependencies(self, key) -> set:
        g, e, _ = key
        deps = {i for i, k in enumerate(e) if k}
        for ge, _c in g:
            deps.update(i for i, k in enumerate(ge) if k)
        return deps

    def coefficient(self, exps, mask: int = 0, gauss=()):
        return self._t.get((gauss, tuple(exps), mask), ZERO if self.is_exact() else 0j)

    def to_multivector(self) -> Multivector:
        """The Grassmann element of a function with no bosonic dependence."""
        out = {}
        for (g, e, m), c in self._t.items():
            if g or any(e):
                raise ValueError("function depends on bosonic variables")
            out[m] = c
        return Multivector(self.d, out)

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, PhaseFunction):
            raise TypeError(f"expected PhaseFunction, got {type(other).__name__}")
        if other.vars != self.vars or other.d != self.d:
            raise ValueError("phase functions live on different spaces")

    def _lift(self, other):
        if isinstance(other, PhaseFunction):
            return other
        if isinstance(other, Multivector):
            return PhaseFunction.grassmann(self.vars, other)
        return PhaseFunction.constant(self.vars, other, self.d)

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        out = dict(self._t)
        for k, c in other._t.items():
            _add_into(out, k, c)
        return PhaseFunction._raw(self.vars, self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return PhaseFunction._raw(self.vars, self.d, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, k) -> "PhaseFunction":
        k = _coef(k)
        if not _nonzero(k):
            return PhaseFunction._raw(self.vars, self.d, {})
        return PhaseFunction._raw(self.vars, self.d, {key: c * k for key, c in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (PhaseFunction, Multivector)):
            return pointwise(self, self._lift(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return pointwise(self._lift(other), self)
        return self.scale(other)

    def __truediv__(self, k):
        k = _coef(k)
        return self.scale(k.inverse() if isinstance(k, Scalar) else 1 / k)

    def __pow__(self, n: int):
        out = PhaseFunction.constant(self.vars, ONE if self.is_exact() else 1.0, self.d)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, PhaseFunction):
            try:
                other = self._lift(other)
            except TypeError:
                return NotImplemented
        return self.vars == other.vars and self.d == other.d and self._t == other._t

    def __hash__(self):
        return hash((self.vars, self.d, frozenset(self._t.items())))

    def derivative(self, var) -> "PhaseFunction":
        a = self.vars.index(var) if isinstance(var, str) else var
        out: dict = {}
        for (g, e, m), c in self._t.items():
            if e[a]:
                ne = list(e)
                ne[a] -= 1
                _add_into(out, (g, tuple(ne), m), c * e[a])
            for ge, gc in g:
                if ge[a]:
                    ne = list(_add_exps(e, ge))
                    ne[a] -= 1
                    _add_into(out, (g, tuple(ne), m), c * gc * ge[a])
        return PhaseFunction._raw(self.vars, self.d, out)

    def to_float(self, hbar: float = 1.0, c: float = 1.0) -> "PhaseFunction":
        def f(x):
            return to_complex(x, hbar, c)

        out: dict = {}
        for (g, e, m), coef in self._t.items():
            gk = tuple((ge, f(gc)) for ge, gc in g)
            _add_into(out, (gk, e, m), f(coef))
        return PhaseFunction._raw(self.vars, self.d, out)

    def map_coefficients(self, fn) -> "PhaseFunction":
        return PhaseFunction(self.vars, self.d, {k: fn(c) for k, c in self._t.items()})

    def distance(self, other, hbar: float = 1.0, c: float = 1.0) -> float:
        """Max coefficient difference; Gaussian keys must match after float promotion."""
        a = self.to_float(hbar, c)._t
        b = self._lift(other).to_float(hbar, c)._t
        worst = 0.0
        for k in set(a) | set(b):
            worst = max(worst, abs(a.get(k, 0j) - b.get(k, 0j)))
        return worst

    def __repr__(self):
        return f"PhaseFunction({self.vars}, d={self.d}, {len(self._t)} terms)"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for (g, e, m), c in self.items():
            mono = "·".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k)
            gauss = ""
            if g:
                gauss = "exp(" + " + ".join(
                    f"[{gc}]" + "·".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, ge) if k)
                    for ge, gc in g) + ")"
            fer = "".join(f"θ{i + 1}" for i in range(self.d) if m >> i & 1)
            parts.append(f"[{c}]" + "·".join(x for x in (mono, gauss, fer) if x))
        return " + ".join(parts)

    # substitution -------------------------------------------------------
    def substitute(self, new_vars, mapping: dict) -> "PhaseFunction":
        """Replace each old variable by a polynomial of degree <= 1 in ``new_vars``."""
        new_vars = tuple(new_vars)
        n = len(new_vars)
        lin = []
        for v in self.vars:
            fpoly = mapping[v]
            if not fpoly.is_polynomial() or fpoly.degree() > 1 or fpoly.masks() - {0}:
                raise ValueError("substitution must be affine and bosonic")
            lin.append(fpoly)
        one = PhaseFunction.constant(new_vars, ONE if self.is_exact() and all(p.is_exact() for p in lin) else 1.0)

        def power_product(e):
            out = one
            for k, p in zip(e, lin):
                for _ in range(k):
                    out = out * p
            return out

        result = PhaseFunction._raw(new_vars, self.d, {})
        for (g, e, m), c in self._t.items():
            expo = PhaseFunction._raw(new_vars, 0, {})
            for ge, gc in g:
                expo = expo + power_product(ge).scale(gc)
            base = power_product(e).scale(c)
            if expo.is_zero():
                gauss = ()
            else:
                gauss = _poly_key({ee: cc for (_, ee, _), cc in expo._t.items()})
            for (_, ee, _), cc in base._t.items():
                result = result + PhaseFunction._raw(new_vars, self.d, {(gauss, ee, m): cc})
        return result


# products -------------------------------------------------------------------

def _merge_gauss(g1: tuple, g2: tuple) -> tuple:
    if not g1:
        return g2
    if not g2:
        return g1
    poly = dict(g1)
    for e, c in g2:
        _add_into(poly, e, c)
    return _poly_key(poly)


def _combine(f: PhaseFunction, g: PhaseFunction, form: BilinearForm | None) -> PhaseFunction:
    """Pointwise in the bosonic variables, circle product (or wedge) in the Grassmann part."""
    out: dict = {}
    table = None
    if form is not None:
        from .star import _pair_table

        table = _pair_table
    for (g1, e1, m1), c1 in f._t.items():
        for (g2, e2, m2), c2 in g._t.items():
            gk = _merge_gauss(g1, g2)
            e = _add_exps(e1, e2)
            c = c1 * c2
            if table is None or (m1 == 0 or m2 == 0):
                if m1 & m2:
                    continue
                s = wedge_sign(m1, m2)
                _add_into(out, (gk, e, m1 | m2), c if s > 0 else -c)
            else:
                for m, cm in table(form, m1, m2).items():
                    _add_into(out, (gk, e, m), c * cm)
    return PhaseFunction._raw(f.vars, f.d, out)


def pointwise(f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
    """Ordinary product; the Grassmann factors are wedged."""
    f._check(g)
    return _combine(f, g, None)


@dataclass(frozen=True)
class PhaseStar:
    """A star product on functions of ``variables`` times Gr(d).

    ``kernel`` maps (a, b) variable-name pairs to the coefficient of
    ``<-d_a d_b->``; ``form`` is the Grassmann bilinear form (None when d = 0).
    """

    variables: tuple
    kernel: dict = field(compare=False)
    form: BilinearForm | None = field(default=None, compare=False)
    name: str = "custom"

    @property
    def d(self) -> int:
        return 0 if self.form is None else self.form.d

    def matrix(self):
        idx = {v: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        K = [[None] * n for _ in range(n)]
        for (a, b), c in self.kernel.items():
            K[idx[a]][idx[b]] = c
        return K

    def to_float(self, hbar: float = 1.0, c: float = 1.0) -> "PhaseStar":
        kern = {k: to_complex(v, hbar, c) for k, v in self.kernel.items()}
        form = None if self.form is None else self.form.to_float(hbar, c)
        return PhaseStar(self.variables, kern, form, self.name)

    def zero(self) -> PhaseFunction:
        return PhaseFunction(self.variables, self.d)

    def one(self, value=1) -> PhaseFunction:
        return PhaseFunction.constant(self.variables, value, self.d)

    def var(self, name: str, coef=1) -> PhaseFunction:
        return PhaseFunction.variable(self.variables, name, self.d, coef)

    def theta(self, i: int, coef=1) -> PhaseFunction:
        return PhaseFunction.grassmann(self.variables, Multivector.generator(self.d, i, coef))

    def lift(self, u: Multivector) -> PhaseFunction:
        return PhaseFunction.grassmann(self.variables, u)

    def product(self, f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
        return star_product(f, g, self)

    def commutator(self, f, g):
        return self.product(f, g) - self.product(g, f)

    def anticommutator(self, f, g):
        return self.product(f, g) + self.product(g, f)

    def power(self, f: PhaseFunction, n: int) -> PhaseFunction:
        out = self.one(ONE if f.is_exact() else 1.0)
        for _ in range(n):
            out = self.product(out, f)
        return out

    def chain(self, *fs) -> PhaseFunction:
        out = fs[0]
        for f in fs[1:]:
            out = self.product(out, f)
        return out


def _split(f: PhaseFunction):
    poly = {k: c for k, c in f._t.items() if not k[0]}
    gauss = {k: c for k, c in f._t.items() if k[0]}
    return (PhaseFunction._raw(f.vars, f.d, poly), PhaseFunction._raw(f.vars, f.d, gauss))


def _apply_direction(f: PhaseFunction, row: list, n: int) -> PhaseFunction:
    """sum_b row[b] d_b f."""
    out = None
    for b in range(n):
        k = row[b]
        if k is None or not _nonzero(k):
            continue
        term = f.derivative(b).scale(k)
        out = term if out is None else out + term
    return out if out is not None else PhaseFunction._raw(f.vars, f.d, {})


def _expand(left: PhaseFunction, right: PhaseFunction, K, form, poly_on_left: bool) -> PhaseFunction:
    """sum over multi-indices alpha of (1/alpha!) (d^alpha P)(Y^alpha G).

    With the polynomial on the left, Y_a = sum_b K_ab d_b acts on the right
    factor; with the polynomial on the right, Z_b = sum_a K_ab d_a acts on the
    left factor.  Either way the series stops once the polynomial runs out.
    """
    n = len(left.vars)
    if poly_on_left:
        dirs = [list(K[a]) for a in range(n)]
    else:
        dirs = [[K[a][b] for a in range(n)] for b in range(n)]
    exact = left.is_exact() and right.is_exact()
    total: dict = {}

    def rec(k, lf, rf, weight):
        if lf.is_zero() or rf.is_zero():
            return
        if k == n:
            prod = _combine(lf, rf, form)
            for key, c in prod._t.items():
                _add_into(total, key, c * weight if not exact else c * weight)
            return
        row = dirs[k]
        has_dir = any(x is not None and _nonzero(x) for x in row)
        j = 0
        cur_l, cur_r = lf, rf
        while True:
            w = weight / factorial(j) if exact else weight / float(factorial(j))
            rec(k + 1, cur_l, cur_r, w)
            if not has_dir:
                break
            if poly_on_left:
                cur_l = cur_l.derivative(k)
                if cur_l.is_zero():
                    break
                cur_r = _apply_direction(cur_r, row, n)
            else:
                cur_r = cur_r.derivative(k)
                if cur_r.is_zero():
                    break
                cur_l = _apply_direction(cur_l, row, n)
            if cur_l.is_zero() or cur_r.is_zero():
                break
            j += 1

    rec(0, left, right, ONE if exact else 1.0)
    return PhaseFunction._raw(left.vars, left.d, total)


def star_product(f: PhaseFunction, g: PhaseFunction, star: PhaseStar) -> PhaseFunction:
    """f ⋆ g for the kernel and Grassmann form of ``star``.

    Supported when, term by term, one factor is polynomial, or the two
    Gaussian terms depend on variables the kernel does not couple.
    """
    f._check(g)
    if f.vars != star.variables or f.d != star.d:
        raise ValueError("function space does not match the star product")
    exact = f.is_exact() and g.is_exact()
    st = star if exact or all(not isinstance(v, Scalar) for v in star.kernel.values()) else star.to_float()
    if not exact and (f.is_exact() or g.is_exact()):
        raise TypeError("mix of exact and float phase functions; promote with to_float first")
    K = st.matrix()
    form = st.form
    fp, fg = _split(f)
    gp, gg = _split(g)
    result = PhaseFunction._raw(f.vars, f.d, {})
    if not fp.is_zero():
        result = result + _expand(fp, g, K, form, True)
    if not fg.is_zero() and not gp.is_zero():
        result = result + _expand(fg, gp, K, form, False)
    if not fg.is_zero() and not gg.is_zero():
        n = len(f.vars)
        for k1, c1 in fg._t.items():
            d1 = fg.dependencies(k1)
            for k2, c2 in gg._t.items():
                d2 = gg.dependencies(k2)
                if any(K[a][b] is not None and _nonzero(K[a][b]) for a in d1 for b in d2):
                    raise UnsupportedProductError(
                        "both factors are Gaussian in variables coupled by the star kernel"
                    )
                t1 = PhaseFunction._raw(f.vars, f.d, {k1: c1})
                t2 = PhaseFunction._raw(f.vars, f.d, {k2: c2})
                result = result + _combine(t1, t2, form)
        del n
    return result


# standard kernels -------------------------------------------------------------

def moyal_star(n: int = 1, hbar=None, form: BilinearForm | None = None, names=None) -> PhaseStar:
    """exp[(i hbar/2) sum_i (<-d_qi d_pi-> - <-d_pi d_qi->)] on (q_1..q_n, p_1..p_n)."""
    from .scalar import HBAR, I

    hb = HBAR if hbar is None else hbar
    k = I * hb / 2 if hbar is None else 1j * hb / 2
    if names is None:
        qs = ["q"] if n == 1 else [f"q{i}" for i in range(1, n + 1)]
        ps = ["p"] if n == 1 else [f"p{i}" for i in range(1, n + 1)]
    else:
        qs, ps = names
    kern = {}
    for q, p in zip(qs, ps):
        kern[(q, p)] = k
        kern[(p, q)] = -k
    return PhaseStar(tuple(qs) + tuple(ps), kern, form, "moyal")


def linear_change(star: PhaseStar, new_vars, old_in_new: dict, name: str | None = None) -> PhaseStar:
    """The same star product written in new coordinates.

    ``old_in_new`` gives each old variable as an affine polynomial in
    ``new_vars``.  With x = M y + const the kernel transforms as
    K' = M^-1 K M^-T, since d/dx = M^-T d/dy.
    """
    from .star import _inverse

    new_vars = tuple(new_vars)
    n = len(new_vars)
    if len(star.variables) != n:
        raise ValueError("a change of variables must keep the dimension")
    M = []
    for v in star.variables:
        f = old_in_new[v]
        if not f.is_polynomial() or f.degree() > 1 or f.masks() - {0}:
            raise ValueError("change of variables must be affine and bosonic")
        row = [ZERO] * n
        for (_, e, _), c in f._t.items():
            if sum(e):
                row[e.index(1)] = c
        M.append(row)
    Minv = _inverse(M, True)
    K = [[ZERO if x is None else x for x in row] for row in star.matrix()]
    kern = {}
    for i in range(n):
        for j in range(n):
            acc = ZERO
            for a in range(n):
                if not Minv[i][a]:
                    continue
                for b in range(n):
                    if K[a][b] and Minv[j][b]:
                        acc = acc + Minv[i][a] * K[a][b] * Minv[j][b]
            if acc:
                kern[(new_vars[i], new_vars[j])] = acc
    return PhaseStar(new_vars, kern, star.form, name or star.name)
