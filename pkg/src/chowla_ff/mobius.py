"""The Möbius function on F_q[x], by factor counting and by Pellet's formula.

The two routes share only the polynomial arithmetic: ``mobius_factor`` uses
gcd(F, F') and the Berlekamp kernel dimension, ``mobius_pellet`` uses the
discriminant and the quadratic character.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .budget import check_budget
from .errors import ConsistencyFailure, EvenCharacteristic, ZeroPolynomial
from .ffield import FieldSpec
from .fpoly import Poly, pdisc, pfactor_count, pis_squarefree, pmonic
from .parallel import chunk_ranges, ordered_map


def mu_factor(F: FieldSpec, a) -> int:
    if not a:
        raise ZeroPolynomial("Möbius of the zero polynomial")
    if len(a) == 1:
        return 1
    a = pmonic(F, a)
    if not pis_squarefree(F, a):
        return 0
    return -1 if pfactor_count(F, a) & 1 else 1


def mu_pellet(F: FieldSpec, a) -> int:
    if not a:
        raise ZeroPolynomial("Möbius of the zero polynomial")
    if F.p == 2:
        raise EvenCharacteristic("Pellet's formula needs q odd")
    n = len(a) - 1
    if n < 1:
        raise ValueError("Pellet's formula needs deg F >= 1")
    c = F.chi2(pdisc(F, a))
    return -c if n & 1 else c


def mobius_factor(f: Poly) -> int:
    """μ(f) from the squarefree test and the number of irreducible factors."""
    return mu_factor(f.field, f.coeffs)


def mobius_pellet(f: Poly) -> int:
    """μ(f) = (-1)^{deg f} χ₂(disc f)."""
    return mu_pellet(f.field, f.coeffs)


def monic_from_index(F: FieldSpec, n: int, idx: int):
    """Monic degree-n coefficient list for canonical index idx in [0, q^n).

    The index is sum(c_i q^i) over the n lower coefficients, so the constant
    term varies fastest.
    """
    q = F.q
    out = []
    for _ in range(n):
        idx, c = divmod(idx, q)
        out.append(c)
    out.append(1)
    return out


def iter_monic(F: FieldSpec, n: int, start: int = 0, stop=None):
    """Monic polynomials of degree n in canonical order, as coefficient lists."""
    q = F.q
    stop = q**n if stop is None else stop
    if start >= stop:
        return
    cur = monic_from_index(F, n, start)
    for _ in range(start, stop):
        yield cur
        cur = list(cur)
        i = 0
        while i < n:
            cur[i] += 1
            if cur[i] < q:
                break
            cur[i] = 0
            i += 1


@dataclass
class MobiusScanReport:
    q: int
    n: int
    total: int = 0
    zeros: int = 0
    plus: int = 0
    minus: int = 0
    counterexample: dict = field(default=None)

    @property
    def mu_sum(self) -> int:
        return self.plus - self.minus

    @property
    def squarefree(self) -> int:
        return self.plus + self.minus

    def merge(self, other: "MobiusScanReport") -> "MobiusScanReport":
        return MobiusScanReport(
            self.q,
            self.n,
            self.total + other.total,
            self.zeros + other.zeros,
            self.plus + other.plus,
            self.minus + other.minus,
            self.counterexample or other.counterexample,
        )


def scan_range(F: FieldSpec, n: int, start: int, stop: int) -> MobiusScanReport:
    rep = MobiusScanReport(F.q, n)
    for idx, a in enumerate(iter_monic(F, n, start, stop), start):
        m1 = mu_factor(F, a)
        m2 = mu_pellet(F, a)
        if m1 != m2:
            rep.counterexample = {"q": F.q, "n": n, "index": idx, "coeffs": list(a),
                                  "mobius_factor": m1, "mobius_pellet": m2}
            break
        rep.total += 1
        if m1 == 0:
            rep.zeros += 1
        elif m1 == 1:
            rep.plus += 1
        else:
            rep.minus += 1
    return rep


def mobius_consistency_scan(field: FieldSpec, n: int, budget=None, workers: int = 1) -> MobiusScanReport:
    """Check μ by both routes on every monic polynomial of degree n.

    Raises ConsistencyFailure with the first disagreement in canonical order.
    """
    if n < 1:
        raise ValueError("degree must be at least 1")
    total = field.q**n
    check_budget(total, budget, "Möbius scan")
    chunks = chunk_ranges(total, workers)
    parts = ordered_map(_scan_chunk, [(field, n, lo, hi) for lo, hi in chunks], workers)
    rep = MobiusScanReport(field.q, n)
    for part in parts:
        rep = rep.merge(part)
        if rep.counterexample:
            raise ConsistencyFailure(
                f"Pellet and factorization disagree at {rep.counterexample}", rep.counterexample
            )
    return rep


def _scan_chunk(args):
    return scan_range(*args)
