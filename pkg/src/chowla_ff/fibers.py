"""Fibers of M_n over the constant term, and the shifted discriminant D(t).

A monic F of degree n is written F = f + t with f(x) = x^n + a_{n-1} x^{n-1}
+ ... + a_1 x.  The a-vector is indexed by sum(a_i q^{i-1}), so the canonical
index of F is a_index * q + t.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ffield import FieldSpec, embedding, extension_field
from .fpoly import Poly, padd, pdisc, pinterpolate


@dataclass(frozen=True)
class FiberCoeffs:
    field: FieldSpec
    n: int
    a: tuple  # a_1 .. a_{n-1}

    def __post_init__(self):
        if len(self.a) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} coefficients, got {len(self.a)}")

    @classmethod
    def from_index(cls, field: FieldSpec, n: int, idx: int) -> "FiberCoeffs":
        q = field.q
        a = []
        for _ in range(n - 1):
            idx, c = divmod(idx, q)
            a.append(c)
        return cls(field, n, tuple(a))

    @property
    def index(self) -> int:
        idx = 0
        for c in reversed(self.a):
            idx = idx * self.field.q + c
        return idx

    @property
    def f(self):
        """Coefficients of f, constant term zero."""
        return [0, *self.a, 1]

    def poly(self) -> Poly:
        return Poly(self.field, tuple(self.f))


def fiber_coeff_list(F: FieldSpec, n: int, idx: int):
    q = F.q
    out = [0]
    for _ in range(n - 1):
        idx, c = divmod(idx, q)
        out.append(c)
    out.append(1)
    return out


@lru_cache(maxsize=None)
def _sampling_plan(F: FieldSpec, n: int):
    """(field to sample in, embedding F -> it or None, projection dict or None)."""
    if F.q >= n:
        return F, None, None
    m = 1
    while F.q**m < n + 1:
        m += 1
    E = extension_field(F, m)
    emb = embedding(F, E)
    return E, emb, {e: i for i, e in enumerate(emb)}


def shifted_disc(F: FieldSpec, g):
    """D(t) = disc(g(x) + t) as a coefficient list in t.

    g is a monic coefficient list of degree n >= 1.  D is sampled at n nodes
    and interpolated; when F has fewer than n elements the sampling happens in
    the smallest extension with at least n + 1 elements and the result is
    projected back after checking every coefficient lies in F.
    """
    n = len(g) - 1
    E, emb, proj = _sampling_plan(F, n)
    if emb is not None:
        g = [emb[c] for c in g]
    xs = list(range(n))
    ys = []
    for t in xs:
        h = list(g)
        h[0] = E.add(h[0], t)
        ys.append(pdisc(E, h))
    D = pinterpolate(E, xs, ys)
    if proj is None:
        return D
    out = []
    for c in D:
        if c not in proj:
            raise ArithmeticError(f"interpolated coefficient {c} is not in F_{F.q}")
        out.append(proj[c])
    return out


def shifted_poly(F: FieldSpec, f, alpha):
    """f + alpha as a coefficient list (alpha has degree < n)."""
    return padd(F, f, alpha)


def dpoly(fc: FiberCoeffs, alpha=None) -> Poly:
    """The polynomial t -> disc_x(f(x) + alpha(x) + t)."""
    F = fc.field
    if alpha is None:
        a = []
    elif isinstance(alpha, Poly):
        a = list(alpha.coeffs)
    else:
        a = list(alpha)
    if len(a) > fc.n:
        raise ValueError("deg alpha must be below n")
    return Poly(F, tuple(shifted_disc(F, shifted_poly(F, fc.f, a))))
