"""Grassmann algebra on up to 16 generators.

Monomials are bitmasks: bit ``i`` set means generator ``theta_{i+1}`` is
present, always in ascending index order.  Coefficients are either exact
:class:`~deformq.scalar.Scalar` values or Python complex numbers (float
backend); one Multivector never mixes the two.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

from .scalar import HBAR, ONE, ZERO, Scalar, as_scalar, is_exact, to_complex

MAX_DIM = 16
FLOAT_PRUNE = 1e-14


class DimensionError(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int):
    """Indices (0-based) of the set bits, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@lru_cache(maxsize=1 << 20)
def wedge_sign(a: int, b: int) -> int:
    """Sign of theta^a theta^b relative to the sorted monomial a|b (0 if they share a generator)."""
    if a & b:
        return 0
    swaps = 0
    for j in bits(b):
        swaps += popcount(a >> (j + 1))
    return -1 if swaps & 1 else 1


def right_derivative_sign(mask: int, i: int) -> int:
    """Sign of  theta^mask <-d_i : count generators to the right of i."""
    return -1 if popcount(mask >> (i + 1)) & 1 else 1


def left_derivative_sign(mask: int, j: int) -> int:
    """Sign of  d_j-> theta^mask : count generators to the left of j."""
    return -1 if popcount(mask & ((1 << j) - 1)) & 1 else 1


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (complex, float)):
        return complex(x)
    return as_scalar(x)


def _nonzero(x) -> bool:
    return bool(x)


class Multivector:
    """Sparse element of the Grassmann algebra Gr(d)."""

    __slots__ = ("d", "_t")

    def __init__(self, d: int, terms=None):
        if not 0 <= d <= MAX_DIM:
            raise DimensionError(f"dimension must be in 0..{MAX_DIM}, got {d}")
        self.d = d
        out = {}
        if terms:
            top = 1 << d
            for mask, coef in terms.items():
                if mask < 0 or mask >= top:
                    raise DimensionError(f"mask {mask:b} outside dimension {d}")
                coef = _coerce(coef)
                if _nonzero(coef):
                    out[mask] = coef
        self._t = _prune(out)

    @classmethod
    def _raw(cls, d, terms):
        obj = object.__new__(cls)
        obj.d = d
        obj._t = _prune(terms)
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, d: int, value=1) -> "Multivector":
        return cls(d, {0: value})

    @classmethod
    def zero(cls, d: int) -> "Multivector":
        return cls(d)

    @classmethod
    def generator(cls, d: int, i: int, coef=1) -> "Multivector":
        """theta_i with 1-based index i."""
        if not 1 <= i <= d:
            raise DimensionError(f"generator index {i} outside 1..{d}")
        return cls(d, {1 << (i - 1): coef})

    @classmethod
    def monomial(cls, d: int, indices, coef=1) -> "Multivector":
        """Product theta_{i1} theta_{i2} ... in the given (1-based) order."""
        out = cls.scalar(d, coef)
        for i in indices:
            out = out * cls.generator(d, i)
        return out

    # inspection -------------------------------------------------------
    def items(self):
        return sorted(self._t.items())

    def masks(self):
        return sorted(self._t)

    def coefficient(self, mask: int):
        return self._t.get(mask, ZERO if self.is_exact() else 0j)

    def __getitem__(self, mask: int):
        return self.coefficient(mask)

    def __len__(self):
        return len(self._t)

    def __iter__(self):
        return iter(self.items())

    def is_zero(self) -> bool:
        return not self._t

    def is_exact(self) -> bool:
        return all(isinstance(c, Scalar) for c in self._t.values())

    def grades(self) -> set[int]:
        return {popcount(m) for m in self._t}

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def grade(self) -> int:
        g = self.grades()
        if len(g) != 1:
            raise ValueError("grade() needs a nonzero homogeneous element")
        return g.pop()

    def grade_part(self, r: int) -> "Multivector":
        return Multivector._raw(self.d, {m: c for m, c in self._t.items() if popcount(m) == r})

    def even_part(self) -> "Multivector":
        return Multivector._raw(self.d, {m: c for m, c in self._t.items() if not popcount(m) & 1})

    def odd_part(self) -> "Multivector":
        return Multivector._raw(self.d, {m: c for m, c in self._t.items() if popcount(m) & 1})

    def scalar_part(self):
        return self._t.get(0, ZERO if self.is_exact() or not self._t else 0j)

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Multivector"):
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.d != self.d:
            raise DimensionError(f"dimension mismatch: {self.d} vs {other.d}")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.d, other)
        self._check(other)
        out = dict(self._t)
        for m, c in other._t.items():
            v = out.get(m)
            out[m] = c if v is None else v + c
        return Multivector._raw(self.d, {m: c for m, c in out.items() if _nonzero(c)})

    __radd__ = __add__

    def __neg__(self):
        return Multivector._raw(self.d, {m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.d, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "Multivector":
        k = _coerce(k)
        if not _nonzero(k):
            return Multivector._raw(self.d, {})
        return Multivector._raw(self.d, {m: c * k for m, c in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, Multivector):
            return NotImplemented
        other = _coerce(other)
        inv = other.inverse() if isinstance(other, Scalar) else 1 / other
        return self.scale(inv)

    def wedge(self, other: "Multivector") -> "Multivector":
        """Grassmann (exterior) product."""
        self._check(other)
        out: dict = {}
        for a, ca in self._t.items():
            for b, cb in other._t.items():
                if a & b:
                    continue
                s = wedge_sign(a, b)
                c = ca * cb
                if s < 0:
                    c = -c
                m = a | b
                v = out.get(m)
                out[m] = c if v is None else v + c
        return Multivector._raw(self.d, {m: c for m, c in out.items() if _nonzero(c)})

    __xor__ = wedge

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.d == other.d and self._t == other._t
        try:
            other = Multivector.scalar(self.d, other)
        except TypeError:
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash((self.d, frozenset(self._t.items())))

    def allclose(self, other: "Multivector", tol: float = 1e-10, hbar: float = 1.0, c: float = 1.0) -> bool:
        return self.distance(other, hbar, c) <= tol

    def distance(self, other, hbar: float = 1.0, c: float = 1.0) -> float:
        """Max-norm of the coefficient difference after float promotion."""
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.d, other)
        self._check(other)
        worst = 0.0
        for m in set(self._t) | set(other._t):
            a = to_complex(self._t[m], hbar, c) if m in self._t else 0j
            b = to_complex(other._t[m], hbar, c) if m in other._t else 0j
            worst = max(worst, abs(a - b))
        return worst

    def to_float(self, hbar: float = 1.0, c: float = 1.0) -> "Multivector":
        return Multivector(self.d, {m: to_complex(v, hbar, c) for m, v in self._t.items()})

    def map_coefficients(self, fn) -> "Multivector":
        return Multivector(self.d, {m: fn(v) for m, v in self._t.items()})

    def embed(self, d: int, offset: int = 0) -> "Multivector":
        """Same element inside Gr(d), generators shifted up by ``offset``."""
        if self._t and max(self._t).bit_length() + offset > d:
            raise DimensionError("element does not fit the target dimension")
        return Multivector._raw(d, {m << offset: c for m, c in self._t.items()})

    def __repr__(self):
        return f"Multivector({self.d}, {{{self._fmt_terms()}}})"

    def _fmt_terms(self):
        return ", ".join(f"{mask_label(m)}: {c}" for m, c in self.items())

    def __str__(self):
        if not self._t:
            return "0"
        return " + ".join(f"[{c}]{mask_label(m) if m else ''}" for m, c in self.items())

    # serialisation ----------------------------------------------------
    def to_json(self):
        out = []
        for m, c in self.items():
            idx = [i + 1 for i in bits(m)]
            if isinstance(c, Scalar):
                out.append({"mask": idx, "coef": str(c)})
            else:
                out.append({"mask": idx, "coef": [format(c.real, ".17g"), format(c.imag, ".17g")]})
        return {"d": self.d, "terms": out}

    @classmethod
    def from_json(cls, data) -> "Multivector":
        terms = {}
        for t in data["terms"]:
            m = sum(1 << (i - 1) for i in t["mask"])
            coef = t["coef"]
            if isinstance(coef, str):
                terms[m] = Scalar.parse(coef)
            else:
                terms[m] = complex(float(coef[0]), float(coef[1]))
        return cls(data["d"], terms)


def _prune(terms: dict) -> dict:
    """Drop float coefficients below FLOAT_PRUNE relative to the largest one."""
    if not terms:
        return terms
    floats = [abs(c) for c in terms.values() if not isinstance(c, Scalar)]
    if not floats:
        return terms
    if len(floats) != len(terms):
        raise TypeError("a Multivector cannot mix exact and float coefficients")
    cut = FLOAT_PRUNE * max(floats)
    return {m: c for m, c in terms.items() if abs(c) > cut}


def mask_label(mask: int) -> str:
    return "".join(f"θ{i + 1}" for i in bits(mask)) or "1"


class BilinearForm:
    """d x d matrix B with symmetric part g and antisymmetric part A."""

    def __init__(self, matrix):
        rows = [[_coerce(x) for x in row] for row in matrix]
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise DimensionError("bilinear form must be square")
        self.d = d
        self.B = tuple(tuple(r) for r in rows)

    @classmethod
    def diagonal(cls, d: int, value) -> "BilinearForm":
        z = ZERO if is_exact(value) else 0j
        return cls([[value if i == j else z for j in range(d)] for i in range(d)])

    @classmethod
    def pauli(cls, d: int, hbar=None) -> "BilinearForm":
        """B = (hbar/2) delta; symbolic hbar unless a float is supplied."""
        half = HBAR / 2 if hbar is None else complex(hbar) / 2
        return cls.diagonal(d, half)

    def __call__(self, i: int, j: int):
        """B(theta_i, theta_j) with 1-based indices."""
        return self.B[i - 1][j - 1]

    def entry(self, i: int, j: int):
        return self.B[i][j]

    def _half(self):
        return ONE / 2 if self.is_exact() else 0.5

    @property
    def g(self) -> "BilinearForm":
        h = self._half()
        return BilinearForm([[(self.B[i][j] + self.B[j][i]) * h for j in range(self.d)] for i in range(self.d)])

    @property
    def A(self) -> "BilinearForm":
        h = self._half()
        return BilinearForm([[(self.B[i][j] - self.B[j][i]) * h for j in range(self.d)] for i in range(self.d)])

    def is_exact(self) -> bool:
        return all(isinstance(x, Scalar) for r in self.B for x in r)

    def to_float(self, hbar: float = 1.0, c: float = 1.0) -> "BilinearForm":
        return BilinearForm([[to_complex(x, hbar, c) for x in r] for r in self.B])

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.B, other.B)])

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.B == other.B

    def __hash__(self):
        return hash(self.B)

    def rows(self):
        return [list(r) for r in self.B]

    def __repr__(self):
        return f"BilinearForm({self.rows()!r})"


# contraction --------------------------------------------------------------

def _gen_contract(i: int, w: int, B, cache) -> dict:
    """theta_{i+1} ⌋ theta^w by the graded Leibniz rule, peeling the first generator."""
    key = (i, w)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out: dict = {}
    if w:
        j = (w & -w).bit_length() - 1
        rest = w & ~(1 << j)
        # theta_i ⌋ (theta_j rest) = B_ij rest - theta_j (theta_i ⌋ rest)
        bij = B[i][j]
        if bij:
            out[rest] = bij
        for m, c in _gen_contract(i, rest, B, cache).items():
            # theta_j is the lowest index, so theta_j m is already sorted
            nm = m | (1 << j)
            v = out.get(nm)
            out[nm] = -c if v is None else v - c
        out = {m: c for m, c in out.items() if _nonzero(c)}
    cache[key] = out
    return out


def contract_rules(x: Multivector, u: Multivector, form: BilinearForm) -> Multivector:
    """x ⌋_B u built only from the three antiderivation axioms.

    Generators act by the graded Leibniz rule, a product acts as
    ``(theta_i v) ⌋ w = theta_i ⌋ (v ⌋ w)``, and everything is extended
    linearly in both arguments.
    """
    x._check(u)
    if form.d != u.d:
        raise DimensionError("bilinear form dimension differs from the algebra")
    B = form.B
    cache: dict = {}
    total: dict = {}
    for xm, xc in x._t.items():
        cur = dict(u._t)
        # peel generators of x from the right: theta_{i1}...theta_{ir} ⌋ w
        #   = theta_{i1} ⌋ (theta_{i2} ... ⌋ w)
        for i in reversed(list(bits(xm))):
            nxt: dict = {}
            for w, wc in cur.items():
                for m, c in _gen_contract(i, w, B, cache).items():
                    v = nxt.get(m)
                    nxt[m] = wc * c if v is None else v + wc * c
            cur = {m: c for m, c in nxt.items() if _nonzero(c)}
            if not cur:
                break
        for m, c in cur.items():
            v = total.get(m)
            total[m] = xc * c if v is None else v + xc * c
    return Multivector._raw(u.d, {m: c for m, c in total.items() if _nonzero(c)})


def contract_closed(u: Multivector, v: Multivector, form: BilinearForm) -> Multivector:
    """u ⌋_B v as the single term (1/n!) u (sum B <-d d->)^n v with n = grade(u).

    The bidifferential operator is applied n times to the pair (u, v), with
    right derivatives on the left factor and left derivatives on the right
    factor; the n! orderings of the same contraction are summed explicitly
    and divided out at the end.  Inhomogeneous u is split by grade.
    """
    u._check(v)
    if form.d != u.d:
        raise DimensionError("bilinear form dimension differs from the algebra")
    B = form.B
    d = u.d
    total: dict = {}
    for r in sorted(u.grades()):
        state: dict = {}
        for a, ca in u._t.items():
            if popcount(a) != r:
                continue
            for b, cb in v._t.items():
                key = (a, b)
                c = ca * cb
                prev = state.get(key)
                state[key] = c if prev is None else prev + c
        for _ in range(r):
            nxt: dict = {}
            for (a, b), c in state.items():
                for i in bits(a):
                    sa = right_derivative_sign(a, i)
                    a2 = a & ~(1 << i)
                    row = B[i]
                    for j in bits(b):
                        bij = row[j]
                        if not bij:
                            continue
                        s = sa * left_derivative_sign(b, j)
                        term = c * bij
                        if s < 0:
                            term = -term
                        key = (a2, b & ~(1 << j))
                        prev = nxt.get(key)
                        nxt[key] = term if prev is None else prev + term
            state = {k: c for k, c in nxt.items() if _nonzero(c)}
        contrib: dict = {}
        for (_a, b), c in state.items():
            # _a is empty: every generator of u has been differentiated away
            prev = contrib.get(b)
            contrib[b] = c if prev is None else prev + c
        n = factorial(r)
        for b, c in contrib.items():
            c = c / n if isinstance(c, Scalar) else c / float(n)
            prev = total.get(b)
            total[b] = c if prev is None else prev + c
    return Multivector._raw(d, {m: c for m, c in total.items() if _nonzero(c)})


# involution, Hodge dual, Berezin integral, trace -----------------------------

def involution(u: Multivector) -> Multivector:
    """Conjugate-linear anti-automorphism with real generators."""
    out = {}
    for m, c in u._t.items():
        k = popcount(m)
        cc = c.conjugate()
        if (k * (k - 1) // 2) & 1:
            cc = -cc
        out[m] = cc
    return Multivector._raw(u.d, out)


def hodge(u: Multivector) -> Multivector:
    """Levi-Civita completion of each monomial into its complement."""
    full = (1 << u.d) - 1
    out = {}
    for m, c in u._t.items():
        comp = full & ~m
        s = wedge_sign(m, comp)
        out[comp] = c if s > 0 else -c
    return Multivector._raw(u.d, out)


def berezin_integrate(u: Multivector, hbar=None):
    """Integral  d theta_d ... d theta_1  with  int d theta_i theta_j = hbar delta_ij.

    Only the top monomial survives; the innermost integration is over theta_1,
    which makes the sign of theta_1...theta_d positive.  ``hbar`` defaults to
    the symbolic value for exact input and must be given for float input.
    """
    top = (1 << u.d) - 1
    c = u._t.get(top)
    exact = u.is_exact()
    if hbar is None:
        if not exact:
            raise ValueError("float Multivector needs a numeric hbar")
        hb = HBAR
    else:
        hb = hbar
    if c is None:
        return ZERO if exact else 0j
    return c * hb ** u.d


def trace_norm(d: int) -> int:
    return 2 ** (d // 2)


def trace(u: Multivector, norm: int | None = None, hbar=None):
    """Tr(u) = (N / hbar^d) int d^d theta  ⋆u, with N = 2^(d//2) unless given."""
    n = trace_norm(u.d) if norm is None else norm
    val = berezin_integrate(hodge(u), hbar)
    if u.is_exact() and hbar is None:
        return val * n / HBAR ** u.d
    hb = 1.0 if hbar is None else hbar
    return val * n / hb ** u.d


def scalar_part(u: Multivector):
    return u.scalar_part()


def left_derivative(u: Multivector, i: int) -> Multivector:
    """d/dtheta_i acting from the left (1-based index)."""
    j = i - 1
    out = {}
    for m, c in u._t.items():
        if m >> j & 1:
            out[m & ~(1 << j)] = c if left_derivative_sign(m, j) > 0 else -c
    return Multivector._raw(u.d, out)


def right_derivative(u: Multivector, i: int) -> Multivector:
    j = i - 1
    out = {}
    for m, c in u._t.items():
        if m >> j & 1:
            out[m & ~(1 << j)] = c if right_derivative_sign(m, j) > 0 else -c
    return Multivector._raw(u.d, out)
