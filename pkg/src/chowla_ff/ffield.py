"""Finite fields F_q, q = p^k odd, with elements encoded as integers in [0, q).

An element of F_{p^k} is a residue c_0 + c_1 x + ... + c_{k-1} x^{k-1} modulo a
fixed monic irreducible of degree k; its index is sum(c_i * p**i).  Index 0 is
zero, index 1 is one, and indices below p are the prime subfield.

Arithmetic is exposed as plain functions on indices (``F.add(a, b)`` and so on)
because the enumeration loops elsewhere call them millions of times.
``FieldElement`` wraps an index for interactive use.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import (
    BoundExceeded,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NotPrime,
)

TABLE_BOUND = 2**16
# above this an extension field adds digit-wise instead of via a q*q table
_ADD_TABLE_MAX = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int):
    """Return (p, k) with q = p**k, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


# -- small helpers on F_p[x], coefficient lists low degree first ------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lc = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lc % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm] if len(a) > dm else a)


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(m, p) -> bool:
    """Rabin's test for a monic m over F_p (gcd with x^{p^{k/d}} - x)."""
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if m[0] == 0:
        return False
    x = [0, 1]
    for d in _prime_divisors(k):
        h = _ppowmod(x, p ** (k // d), m, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _pgcd(m, _trim(h), p)
        if len(g) > 1:
            return False
    return _ppowmod(x, p**k, m, p) == [0, 1]


def first_irreducible(p: int, k: int):
    """Lowest monic irreducible of degree k over F_p in canonical index order."""
    if k == 1:
        return (0, 1)
    for idx in range(p**k):
        low = [(idx // p**i) % p for i in range(k)]
        m = low + [1]
        if is_irreducible_mod_p(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldSpec:
    """F_{p^k} for odd p.  Immutable once built; pickles by parameters."""

    def __init__(self, p: int, k: int = 1, table_mode=None, table_bound: int = TABLE_BOUND):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported (q must be odd)")
        if k < 1:
            raise ValueError("extension degree must be positive")
        q = p**k
        if q > table_bound:
            raise BoundExceeded(f"q = {q} exceeds the field bound {table_bound}")
        if table_mode is None:
            table_mode = True
        self.p = p
        self.k = k
        self.q = q
        self.table_bound = table_bound
        self.table_mode = bool(table_mode)
        self.modulus = first_irreducible(p, k)
        self._build()

    def __reduce__(self):
        return (_rebuild_field, (self.p, self.k, self.table_mode, self.table_bound))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"FieldSpec(F_{self.q})"
        return f"FieldSpec(F_{self.q} = F_{self.p}[x]/{self.modulus})"

    def __call__(self, index: int) -> "FieldElement":
        return FieldElement(self, index % self.q if self.k == 1 else index)

    def elements(self):
        return range(self.q)

    # -- vector encoding ---------------------------------------------------

    def to_vector(self, a: int):
        p = self.p
        return [(a // p**i) % p for i in range(self.k)]

    def from_vector(self, v) -> int:
        idx = 0
        for c in reversed(list(v)):
            idx = idx * self.p + c % self.p
        return idx

    # -- construction --------------------------------------------------------

    def _build(self):
        p, k, q = self.p, self.k, self.q
        if k == 1:
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.neg = lambda a: -a % p
            self.mul = lambda a, b: a * b % p
        else:
            digits = [tuple(self.to_vector(i)) for i in range(q)]
            self._digits = digits
            powers = [p**i for i in range(k)]

            def add_digits(a, b):
                da, db = digits[a], digits[b]
                return sum(((x + y) % p) * w for x, y, w in zip(da, db, powers))

            neg_tab = [sum((-x % p) * w for x, w in zip(d, powers)) for d in digits]
            self._neg_table = neg_tab
            self.neg = neg_tab.__getitem__
            if q <= _ADD_TABLE_MAX:
                add_tab = [add_digits(a, b) for a in range(q) for b in range(q)]
                self.add = lambda a, b: add_tab[a * q + b]
                self.sub = lambda a, b: add_tab[a * q + neg_tab[b]]
            else:
                self.add = add_digits
                self.sub = lambda a, b: add_digits(a, neg_tab[b])
            self.mul = self._mul_direct

        self._exp = self._log = None
        if self.table_mode:
            g = self._find_generator()
            exp = [0] * (2 * (q - 1))
            log = [0] * q
            x = 1
            for i in range(q - 1):
                exp[i] = exp[i + q - 1] = x
                log[x] = i
                x = self.mul(x, g)
            self._exp, self._log = exp, log
            self.generator = g
            if k > 1:
                def mul(a, b):
                    if a == 0 or b == 0:
                        return 0
                    return exp[log[a] + log[b]]

                self.mul = mul
            half = (q - 1) // 2
            self._chi = [0] + [1 if log[c] % 2 == 0 else -1 for c in range(1, q)]
            # cross-check the parity table against Euler's criterion once
            for c in range(1, min(q, 64)):
                assert (self._pow_direct(c, half) == 1) == (self._chi[c] == 1)
        else:
            self._chi = None

    def _find_generator(self) -> int:
        q = self.q
        factors = _prime_divisors(q - 1)
        for g in range(2 if q > 2 else 1, q):
            if all(self._pow_direct(g, (q - 1) // r) != 1 for r in factors):
                return g
        return 1

    def _mul_direct(self, a, b):
        if self.k == 1:
            return a * b % self.p
        va, vb = self.to_vector(a), self.to_vector(b)
        return self.from_vector(_pmulmod(_trim(va), _trim(vb), self.modulus, self.p))

    def _pow_direct(self, a, e):
        if self.k == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_direct(result, base)
            base = self._mul_direct(base, base)
            e >>= 1
        return result

    # -- arithmetic on indices -------------------------------------------------

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._pow_direct(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a**e; negative exponents invert first, 0**0 is 1."""
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self._log is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        return self._pow_direct(a, e)

    def chi2(self, a: int) -> int:
        """Quadratic character: 0 at zero, 1 on nonzero squares, -1 otherwise."""
        if self._chi is not None:
            return self._chi[a]
        if a == 0:
            return 0
        return 1 if self._pow_direct(a, (self.q - 1) // 2) == 1 else -1

    @property
    def chi_table(self):
        """chi2 for every index, as a list (built on demand in direct mode)."""
        if self._chi is None:
            return [self.chi2(c) for c in range(self.q)]
        return self._chi

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        return self.chi2(a) >= 0


def _rebuild_field(p, k, table_mode, table_bound):
    return field_make(p, k, table_mode=table_mode, table_bound=table_bound)


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1, table_mode=None, table_bound: int = TABLE_BOUND) -> FieldSpec:
    """Build (and cache) F_{p^k} with the deterministically chosen modulus."""
    return FieldSpec(p, k, table_mode=table_mode, table_bound=table_bound)


def field_from_q(q: int, table_mode=None) -> FieldSpec:
    pk = prime_power(q)
    if pk is None:
        raise NotPrime(f"{q} is not a prime power")
    return field_make(pk[0], pk[1], table_mode=table_mode)


def extension_field(F: FieldSpec, m: int) -> FieldSpec:
    """F_{q^m} built over the same prime."""
    return field_make(F.p, F.k * m, table_mode=F.table_mode)


@lru_cache(maxsize=None)
def embedding(small: FieldSpec, big: FieldSpec):
    """Index map small -> big for a subfield, via a root of small's modulus.

    The root is the lowest big-field index satisfying the modulus, so the map
    is deterministic.
    """
    if small.p != big.p or big.k % small.k:
        raise FieldMismatch(f"{small!r} is not a subfield of {big!r}")
    if small.k == 1:
        return tuple(range(small.p))
    mod = small.modulus
    theta = None
    for z in range(big.q):
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, z), c)
        if acc == 0:
            theta = z
            break
    powers = [1]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], theta))
    out = []
    for a in range(small.q):
        acc = 0
        for c, w in zip(small.to_vector(a), powers):
            if c:
                acc = big.add(acc, big.mul(c, w))
        out.append(acc)
    return tuple(out)


def odd_prime_powers(lo: int, hi: int):
    return [q for q in range(lo, hi + 1) if q % 2 and prime_power(q)]


class FieldElement:
    __slots__ = ("field", "index")

    def __init__(self, field: FieldSpec, index: int):
        if not 0 <= index < field.q:
            raise ValueError(f"index {index} out of range for q = {field.q}")
        self.field = field
        self.index = index

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.index
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def _wrap(self, index):
        return FieldElement(self.field, index)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.index, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.index, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.index))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.index, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.index, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.index))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.index, e))

    def __neg__(self):
        return self._wrap(self.field.neg(self.index))

    def inverse(self):
        return self._wrap(self.field.inv(self.index))

    def chi2(self) -> int:
        return self.field.chi2(self.index)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.index))

    def __int__(self):
        return self.index

    def __bool__(self):
        return self.index != 0

    def __repr__(self):
        return f"{self.index}@F{self.field.q}"


_OPS = {
    "add": lambda F, a, b: F.add(a, b),
    "sub": lambda F, a, b: F.sub(a, b),
    "mul": lambda F, a, b: F.mul(a, b),
    "div": lambda F, a, b: F.div(a, b),
}


def arith(a: FieldElement, b, op: str) -> FieldElement:
    """Apply ``op`` to field elements.

    Binary ops take a second FieldElement; ``pow`` takes an integer exponent and
    ``inv``/``neg`` ignore ``b``.
    """
    F = a.field
    if op == "pow":
        return FieldElement(F, F.pow(a.index, int(b)))
    if op == "inv":
        return FieldElement(F, F.inv(a.index))
    if op == "neg":
        return FieldElement(F, F.neg(a.index))
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    if not isinstance(b, FieldElement):
        raise TypeError("binary field op needs a FieldElement operand")
    if b.field != F:
        raise FieldMismatch(f"{F!r} vs {b.field!r}")
    return FieldElement(F, _OPS[op](F, a.index, b.index))


def chi2(c: FieldElement) -> int:
    return c.field.chi2(c.index)
