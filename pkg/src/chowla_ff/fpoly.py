"""Dense univariate polynomials over F_q and a tiny multivariate evaluator.

Coefficient lists run lowest degree first and carry no trailing zeros; the
empty list is the zero polynomial.  The list-level functions (``pmul``,
``presultant`` ...) take the field as first argument and work on raw indices;
``Poly`` wraps them for the public API.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field

from .budget import check_budget
from .errors import (
    ConstantPolynomial,
    DivisionByZero,
    DuplicateNode,
    FieldMismatch,
    ZeroPolynomial,
)
from .ffield import FieldElement, FieldSpec

NEG_INF = -math.inf


def deg(a) -> float:
    return len(a) - 1 if a else NEG_INF


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    add = F.add
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add(out[i], c)
    return trim(out)


def psub(F, a, b):
    sub = F.sub
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(sub(x, y) if y else x)
    return trim(out)


def pscale(F, a, c):
    if c == 0:
        return []
    mul = F.mul
    return [mul(x, c) for x in a]


def pmul(F, a, b):
    if not a or not b:
        return []
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return trim(out)


def pdivmod(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    sub, mul = F.sub, F.mul
    inv_lc = F.inv(b[-1])
    r = list(a)
    qt = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c:
            c = mul(c, inv_lc)
            qt[i - db] = c
            off = i - db
            for j in range(db):
                if b[j]:
                    r[off + j] = sub(r[off + j], mul(c, b[j]))
            r[i] = 0
    return trim(qt), trim(r[:db])


def pmod(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return list(a)
    sub, mul = F.sub, F.mul
    inv_lc = F.inv(b[-1])
    r = list(a)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            c = mul(c, inv_lc)
            off = i - db
            for j in range(db):
                if b[j]:
                    r[off + j] = sub(r[off + j], mul(c, b[j]))
    return trim(r[:db])


def pmonic(F, a):
    if not a or a[-1] == 1:
        return list(a)
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = list(a), list(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pderiv(F, a):
    from_int, mul = F.from_int, F.mul
    return trim([mul(from_int(i), a[i]) for i in range(1, len(a))])


def peval(F, a, x):
    add, mul = F.add, F.mul
    acc = 0
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def pmulmod(F, a, b, m):
    return pmod(F, pmul(F, a, b), m)


def ppowmod(F, a, e, m):
    result = [1]
    base = pmod(F, a, m)
    while e:
        if e & 1:
            result = pmulmod(F, result, base, m)
        e >>= 1
        if e:
            base = pmulmod(F, base, base, m)
    return result


def presultant(F, a, b):
    """Res(a, b) by the Euclidean remainder chain.

    Each step uses Res(A, B) = (-1)^{deg A deg B} Res(B, A) and
    Res(B, A) = lc(B)^{deg A - deg R} Res(B, R) with R = A mod B.
    """
    if not a or not b:
        raise ZeroPolynomial("resultant of the zero polynomial")
    mul, pw, neg = F.mul, F.pow, F.neg
    A, B = list(a), list(b)
    res = 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        if db == 0:
            return mul(res, pw(B[0], da))
        if da == 0:
            return mul(res, pw(A[0], db))
        R = pmod(F, A, B)
        if not R:
            return 0
        dr = len(R) - 1
        res = mul(res, pw(B[-1], da - dr))
        if (da * db) & 1:
            res = neg(res)
        A, B = B, R


def det(F, rows) -> int:
    """Determinant over F by Gaussian elimination (rows are copied)."""
    M = [list(r) for r in rows]
    n = len(M)
    mul, sub, neg = F.mul, F.sub, F.neg
    result = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            result = neg(result)
        pv = M[col][col]
        result = mul(result, pv)
        inv = F.inv(pv)
        for r in range(col + 1, n):
            c = M[r][col]
            if c:
                c = mul(c, inv)
                row, prow = M[r], M[col]
                for j in range(col, n):
                    if prow[j]:
                        row[j] = sub(row[j], mul(c, prow[j]))
    return result


def sylvester_matrix(F, a, b):
    n, m = len(a) - 1, len(b) - 1
    size = n + m
    ha, hb = list(a)[::-1], list(b)[::-1]
    rows = []
    for i in range(m):
        rows.append([0] * i + ha + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + hb + [0] * (size - m - 1 - i))
    return rows


def presultant_sylvester(F, a, b):
    """Res(a, b) as the Sylvester determinant; independent test oracle."""
    if not a or not b:
        raise ZeroPolynomial("resultant of the zero polynomial")
    n, m = len(a) - 1, len(b) - 1
    if n == 0 and m == 0:
        return 1
    return det(F, sylvester_matrix(F, a, b))


def pdisc(F, a):
    n = len(a) - 1
    if n < 1:
        raise ConstantPolynomial("discriminant of a constant")
    da = pderiv(F, a)
    if not da:
        return 0
    r = presultant(F, a, da)
    if r == 0:
        return 0
    r = F.mul(r, F.pow(a[-1], n - (len(da) - 1) - 2))
    return F.neg(r) if (n * (n - 1) // 2) & 1 else r


def pis_squarefree(F, a) -> bool:
    if not a:
        raise ZeroPolynomial("squarefree test of the zero polynomial")
    if len(a) == 1:
        return True
    da = pderiv(F, a)
    if not da:
        return False
    return len(pgcd(F, a, da)) == 1


def rank(F, rows) -> int:
    M = [list(r) for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    mul, sub = F.mul, F.sub
    rk = 0
    for col in range(ncols):
        piv = next((r for r in range(rk, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        prow = M[rk]
        inv = F.inv(prow[col])
        for r in range(rk + 1, len(M)):
            c = M[r][col]
            if c:
                c = mul(c, inv)
                row = M[r]
                for j in range(col, ncols):
                    if prow[j]:
                        row[j] = sub(row[j], mul(c, prow[j]))
        rk += 1
    return rk


def berlekamp_matrix(F, a):
    """Rows x^{q i} mod a, i < deg a, minus the identity."""
    n = len(a) - 1
    xq = ppowmod(F, [0, 1], F.q, a)
    rows = []
    cur = [1]
    for i in range(n):
        row = cur + [0] * (n - len(cur))
        row[i] = F.sub(row[i], 1)
        rows.append(row)
        if i + 1 < n:
            cur = pmulmod(F, cur, xq, a)
    return rows


def pfactor_count(F, a) -> int:
    n = len(a) - 1
    if n < 1:
        raise ConstantPolynomial("factor count of a constant")
    if n == 1:
        return 1
    return n - rank(F, berlekamp_matrix(F, a))


# -- full factorization (oracle path) ---------------------------------------


def _pth_root(F, a):
    p = F.p
    e = F.q // p
    return [F.pow(a[i], e) for i in range(0, len(a), p)]


def _squarefree_decomposition(F, f):
    out = []
    df = pderiv(F, f)
    c = pgcd(F, f, df)
    w = pdivmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(F, w, c)
        z = pdivmod(F, w, y)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = pdivmod(F, c, y)[0]
    if len(c) > 1:
        for g, m in _squarefree_decomposition(F, _pth_root(F, c)):
            out.append((g, m * F.p))
    return out


def _distinct_degree(F, f):
    out = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = ppowmod(F, h, F.q, f)
        g = pgcd(F, f, psub(F, h, [0, 1]))
        if len(g) > 1:
            out.append((g, d))
            f = pdivmod(F, f, g)[0]
            h = pmod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _equal_degree(F, g, d, rng):
    n = len(g) - 1
    if n == d:
        return [g]
    e = (F.q**d - 1) // 2
    while True:
        r = trim([rng.randrange(F.q) for _ in range(n)])
        if len(r) < 2:
            continue
        b = psub(F, ppowmod(F, r, e, g), [1])
        u = pgcd(F, g, b)
        if 1 < len(u) < len(g):
            v = pdivmod(F, g, u)[0]
            return _equal_degree(F, u, d, rng) + _equal_degree(F, pmonic(F, v), d, rng)


def pfactorize(F, a, seed=0):
    """[(monic irreducible, multiplicity)] sorted by (degree, coefficients)."""
    if len(a) < 2:
        raise ConstantPolynomial("factorization of a constant")
    rng = random.Random(seed)
    f = pmonic(F, a)
    factors = []
    for s, mult in _squarefree_decomposition(F, f):
        for g, d in _distinct_degree(F, s):
            for h in _equal_degree(F, g, d, rng):
                factors.append((tuple(h), mult))
    merged = {}
    for h, m in factors:
        merged[h] = merged.get(h, 0) + m
    return sorted(merged.items(), key=lambda item: (len(item[0]), item[0][::-1]))


def pinterpolate(F, xs, ys):
    """Lagrange interpolation through (xs[i], ys[i]); nodes must be distinct."""
    if len(set(xs)) != len(xs):
        raise DuplicateNode("interpolation nodes must be distinct")
    master = [1]
    for x in xs:
        master = pmul(F, master, [F.neg(x), 1])
    out = []
    for xi, yi in zip(xs, ys):
        if yi == 0:
            continue
        # master / (x - xi) by synthetic division
        quo = [0] * (len(master) - 1)
        carry = 0
        for i in range(len(master) - 1, 0, -1):
            carry = F.add(master[i], F.mul(carry, xi))
            quo[i - 1] = carry
        denom = peval(F, quo, xi)
        out = padd(F, out, pscale(F, quo, F.div(yi, denom)))
    return out


# -- public wrapper -----------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    field: FieldSpec
    coeffs: tuple = ()

    def __post_init__(self):
        c = list(self.coeffs)
        trim(c)
        q = self.field.q
        for x in c:
            if not 0 <= x < q:
                raise ValueError(f"coefficient {x} outside F_{q}")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, field, coeffs):
        """Build from ints or FieldElements (ints below p map to the prime subfield)."""
        out = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldMismatch("coefficient from another field")
                out.append(c.index)
            elif field.k == 1:
                out.append(c % field.q)
            else:
                out.append(c)
        return cls(field, tuple(out))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        return cls.of(field, [c])

    @property
    def degree(self):
        return deg(self.coeffs)

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other):
        if not isinstance(other, Poly):
            return Poly.constant(self.field, other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def _new(self, c):
        return Poly(self.field, tuple(c))

    def __add__(self, other):
        other = self._check(other)
        return self._new(padd(self.field, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return self._new(psub(self.field, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return self._new([self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        other = self._check(other)
        return self._new(pmul(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly(self.field, (1,))
        for _ in range(e):
            result = result * self
        return result

    def __divmod__(self, other):
        other = self._check(other)
        qt, r = pdivmod(self.field, self.coeffs, other.coeffs)
        return self._new(qt), self._new(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, c):
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise FieldMismatch("evaluation point from another field")
            return FieldElement(self.field, peval(self.field, self.coeffs, c.index))
        return peval(self.field, self.coeffs, c)

    def monic(self):
        return self._new(pmonic(self.field, self.coeffs))

    def derivative(self):
        return self._new(pderiv(self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(terms)


def _same_field(a: Poly, b: Poly):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
    return a.field


def poly_arith(a: Poly, b: Poly, op: str):
    F = _same_field(a, b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    if op == "gcd":
        return Poly(F, tuple(pgcd(F, a.coeffs, b.coeffs)))
    raise ValueError(f"unknown op {op!r}")


def gcd(a: Poly, b: Poly) -> Poly:
    return poly_arith(a, b, "gcd")


def derivative(f: Poly) -> Poly:
    return f.derivative()


def evaluate(f: Poly, c):
    return f(c)


def interpolate(points) -> Poly:
    """Unique polynomial of degree < len(points) through (x, y) FieldElement pairs."""
    points = list(points)
    if not points:
        raise ValueError("no interpolation points")
    F = points[0][0].field
    for x, y in points:
        if x.field != F or y.field != F:
            raise FieldMismatch("interpolation points from different fields")
    xs = [x.index for x, _ in points]
    ys = [y.index for _, y in points]
    return Poly(F, tuple(pinterpolate(F, xs, ys)))


def resultant(f: Poly, g: Poly) -> FieldElement:
    F = _same_field(f, g)
    return FieldElement(F, presultant(F, f.coeffs, g.coeffs))


def resultant_sylvester(f: Poly, g: Poly) -> FieldElement:
    F = _same_field(f, g)
    return FieldElement(F, presultant_sylvester(F, f.coeffs, g.coeffs))


def discriminant(f: Poly) -> FieldElement:
    if f.is_zero():
        raise ConstantPolynomial("discriminant of the zero polynomial")
    return FieldElement(f.field, pdisc(f.field, f.coeffs))


def is_squarefree(f: Poly) -> bool:
    return pis_squarefree(f.field, f.coeffs)


def factor_count(f: Poly) -> int:
    if f.is_zero():
        raise ConstantPolynomial("factor count of the zero polynomial")
    return pfactor_count(f.field, pmonic(f.field, f.coeffs))


def factorize(f: Poly, seed: int = 0):
    if f.is_zero():
        raise ConstantPolynomial("factorization of the zero polynomial")
    return [(Poly(f.field, h), m) for h, m in pfactorize(f.field, f.coeffs, seed)]


# -- multivariate, m <= 3 -----------------------------------------------------


@dataclass(frozen=True)
class MultiPoly:
    field: FieldSpec
    nvars: int
    terms: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.nvars <= 3:
            raise ValueError("MultiPoly supports 1 to 3 variables")
        clean = {}
        for exps, c in self.terms.items():
            exps = tuple(exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps}")
            if not 0 <= c < self.field.q:
                raise ValueError(f"coefficient {c} outside F_{self.field.q}")
            if c:
                clean[exps] = c
        object.__setattr__(self, "terms", clean)

    @property
    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, point) -> int:
        F = self.field
        acc = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = F.mul(v, F.pow(x, e))
            acc = F.add(acc, v)
        return acc


def random_multipoly(field: FieldSpec, nvars: int, max_degree: int, rng: random.Random, nterms=None):
    """Random nonzero polynomial with total degree at most max_degree."""
    monomials = [e for e in itertools.product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree]
    if nterms is None:
        nterms = rng.randint(1, len(monomials))
    while True:
        chosen = rng.sample(monomials, min(nterms, len(monomials)))
        terms = {e: rng.randrange(1, field.q) for e in chosen}
        h = MultiPoly(field, nvars, terms)
        if not h.is_zero():
            return h


def mv_count_zeros(h: MultiPoly, budget=None) -> int:
    """Exact number of zeros of h in F_q^m, by exhaustive evaluation."""
    if h.is_zero():
        raise ZeroPolynomial("zero count of the zero polynomial")
    F, m = h.field, h.nvars
    check_budget(F.q**m, budget, "zero count")
    dmax = max(max(e) for e in h.terms) if h.terms else 0
    powtab = [[F.pow(x, e) for e in range(dmax + 1)] for x in range(F.q)]
    terms = list(h.terms.items())
    add, mul = F.add, F.mul
    count = 0
    for point in itertools.product(range(F.q), repeat=m):
        acc = 0
        for exps, c in terms:
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = mul(v, powtab[x][e])
            acc = add(acc, v)
        if acc == 0:
            count += 1
    return count
