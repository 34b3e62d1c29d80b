"""Good and bad fibers of the character sum, and the explicit D(t) identities.

For a spec and a chosen index i with ε_i odd, an a-vector is good when
D_{f+α_i} has positive degree, is squarefree, and is coprime to every other
D_{f+α_j}.  Bad vectors fall into A (D_{f+α_i} constant or not squarefree) or
some B(j) (D_{f+α_i}, D_{f+α_j} share a root), except for the p | n edge where
every D is constant; those are tallied as edge-only.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .budget import check_budget
from .chowla import CorrelationSpec, charsum_sign, fiber_char_sum
from .errors import InvalidSpec
from .ffield import FieldSpec, embedding, extension_field
from .fibers import FiberCoeffs, dpoly, fiber_coeff_list, shifted_disc
from .fpoly import Poly, padd, pderiv, pdisc, peval, pgcd, pis_squarefree, deg
from .parallel import chunk_ranges, ordered_map

WITNESS_CAP = 10

__all__ = [
    "BadSetReport",
    "FiberCoeffs",
    "badset_scan",
    "cubic_formula_check",
    "degree_structure_check",
    "det_identity_check",
    "dpoly",
    "dpoly_root_check",
    "good_predicate",
    "quadratic_formula_check",
    "weil_fiber_check",
    "weil_scan",
]


def default_index(spec: CorrelationSpec) -> int:
    for j, e in enumerate(spec.eps):
        if e & 1:
            return j
    raise InvalidSpec("no shift with odd exponent")


def _check_index(spec, i):
    if i is None:
        return default_index(spec)
    if not 0 <= i < spec.r:
        raise InvalidSpec(f"index {i} out of range for r = {spec.r}")
    if not spec.eps[i] & 1:
        raise InvalidSpec(f"chosen index {i} has even exponent")
    return i


def _fiber_dpolys(F, n, f, alphas):
    return [shifted_disc(F, padd(F, f, a)) for a in alphas]


def _classify(F, ds, i):
    """(in_A, [j for which B(j) holds]) for D lists ds."""
    Di = ds[i]
    in_a = len(Di) < 2 or not pis_squarefree(F, Di)
    in_b = [j for j, Dj in enumerate(ds) if j != i and len(pgcd(F, Di, Dj)) > 1]
    return in_a, in_b


def good_predicate(fc: FiberCoeffs, spec: CorrelationSpec, i=None) -> bool:
    """True when the Weil bound applies to this fiber's product character sum."""
    i = _check_index(spec, i)
    F = spec.field
    ds = _fiber_dpolys(F, spec.n, fc.f, [list(a.coeffs) for a in spec.alphas])
    in_a, in_b = _classify(F, ds, i)
    return not in_a and not in_b


def _edge(F, n, f, alphas):
    """p | n and some f + α_j loses its x^{n-1} coefficient."""
    if n % F.p:
        return False
    for a in alphas:
        top = a[n - 1] if len(a) >= n else 0
        if F.add(f[n - 1], top) == 0:
            return True
    return False


@dataclass
class BadSetReport:
    n: int
    q: int
    r: int
    chosen_i: int
    total: int = 0
    count_A: int = 0
    count_B: int = 0
    count_B_by_j: dict = field(default_factory=dict)
    count_good: int = 0
    edge_count: int = 0
    edge_only: int = 0  # edge a's with every D constant, kept out of A and B
    witnesses: dict = field(default_factory=lambda: {"A": [], "B": [], "edge": []})

    @property
    def bound_A(self) -> int:
        return 3 * self.n**2 * self.q ** (self.n - 2)

    @property
    def bound_B(self) -> int:
        return 3 * (self.r - 1) * self.n**2 * self.q ** (self.n - 2)

    @property
    def bound_total(self) -> int:
        return 3 * self.r * self.n**2 * self.q ** (self.n - 2)

    @property
    def count_bad(self) -> int:
        return self.total - self.count_good

    def bounds_hold(self) -> bool:
        return self.count_A <= self.bound_A and self.count_B <= self.bound_B

    def cover_holds(self) -> bool:
        return self.count_A + self.count_B + self.edge_only >= self.count_bad

    def merge(self, other: "BadSetReport") -> "BadSetReport":
        by_j = dict(self.count_B_by_j)
        for j, c in other.count_B_by_j.items():
            by_j[j] = by_j.get(j, 0) + c
        wit = {k: (self.witnesses[k] + other.witnesses[k])[:WITNESS_CAP] for k in self.witnesses}
        return BadSetReport(
            self.n, self.q, self.r, self.chosen_i,
            self.total + other.total,
            self.count_A + other.count_A,
            self.count_B + other.count_B,
            by_j,
            self.count_good + other.count_good,
            self.edge_count + other.edge_count,
            self.edge_only + other.edge_only,
            wit,
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "r": self.r,
            "chosen_i": self.chosen_i,
            "total": self.total,
            "count_A": self.count_A,
            "count_B": self.count_B,
            "count_B_by_j": {str(j): c for j, c in sorted(self.count_B_by_j.items())},
            "count_good": self.count_good,
            "bound_A": self.bound_A,
            "bound_B": self.bound_B,
            "edge_count": self.edge_count,
            "edge_only": self.edge_only,
            "bounds_hold": self.bounds_hold(),
            "cover_holds": self.cover_holds(),
            "witnesses": self.witnesses,
        }


def _scan_range(args):
    spec, i, lo, hi = args
    F, n = spec.field, spec.n
    alphas = [list(a.coeffs) for a in spec.alphas]
    rep = BadSetReport(n, spec.q, spec.r, i)
    rep.count_B_by_j = {j: 0 for j in range(spec.r) if j != i}
    wit = rep.witnesses
    for ai in range(lo, hi):
        f = fiber_coeff_list(F, n, ai)
        avec = f[1:n]
        rep.total += 1
        ds = _fiber_dpolys(F, n, f, alphas)
        edge = _edge(F, n, f, alphas)
        if edge:
            rep.edge_count += 1
            if len(wit["edge"]) < WITNESS_CAP:
                wit["edge"].append(avec)
            if all(len(D) < 2 for D in ds):
                rep.edge_only += 1
                continue
        in_a, in_b = _classify(F, ds, i)
        if in_a:
            rep.count_A += 1
            if len(wit["A"]) < WITNESS_CAP:
                wit["A"].append(avec)
        if in_b:
            rep.count_B += 1
            for j in in_b:
                rep.count_B_by_j[j] += 1
            if len(wit["B"]) < WITNESS_CAP:
                wit["B"].append(avec)
        if not in_a and not in_b:
            rep.count_good += 1
    return rep


def badset_scan(spec: CorrelationSpec, i=None, budget=None, workers: int = 1) -> BadSetReport:
    """Classify every a in F_q^{n-1} into good, A, B(j) and the p | n edge."""
    i = _check_index(spec, i)
    if spec.n < 2:
        raise InvalidSpec("bad-set scan needs n >= 2")
    blocks = spec.q ** (spec.n - 1)
    check_budget(blocks * spec.r * spec.n, budget, "bad-set scan")
    parts = ordered_map(_scan_range, [(spec, i, lo, hi) for lo, hi in chunk_ranges(blocks, workers)], workers)
    rep = parts[0]
    for part in parts[1:]:
        rep = rep.merge(part)
    return rep


# -- Weil bound on good fibers ------------------------------------------------


def _weil_ok(s: int, deg_p: int, q: int) -> bool:
    """|s| <= (deg_p - 1) sqrt(q), exactly."""
    if deg_p < 1:
        return False
    return s * s <= (deg_p - 1) ** 2 * q


def fiber_sum(fc: FiberCoeffs, spec: CorrelationSpec):
    """(Σ_t χ₂(P(t)), deg P) for the fiber's product polynomial P."""
    F = spec.field
    ds = _fiber_dpolys(F, spec.n, fc.f, [list(a.coeffs) for a in spec.alphas])
    pairs = list(zip(ds, spec.eps))
    deg_p = sum(e * max(len(D) - 1, 0) for D, e in pairs)
    return fiber_char_sum(F, pairs), deg_p


def weil_fiber_check(fc: FiberCoeffs, spec: CorrelationSpec, i=None) -> bool:
    if not good_predicate(fc, spec, i):
        raise ValueError("Weil check requires a good fiber")
    s, deg_p = fiber_sum(fc, spec)
    return _weil_ok(s, deg_p, spec.q)


@dataclass
class WeilReport:
    q: int
    n: int
    good: int = 0
    passed: int = 0
    reassembled: int = 0  # signed total of all fiber sums
    worst_ratio: float = 0.0
    failures: list = field(default_factory=list)


def weil_scan(spec: CorrelationSpec, i=None, budget=None) -> WeilReport:
    """Weil bound on every good fiber plus the signed total over all fibers."""
    i = _check_index(spec, i)
    F, n = spec.field, spec.n
    blocks = spec.q ** (n - 1)
    check_budget(blocks * spec.q * spec.r, budget, "Weil scan")
    alphas = [list(a.coeffs) for a in spec.alphas]
    rep = WeilReport(spec.q, n)
    total = 0
    for ai in range(blocks):
        f = fiber_coeff_list(F, n, ai)
        ds = _fiber_dpolys(F, n, f, alphas)
        pairs = list(zip(ds, spec.eps))
        s = fiber_char_sum(F, pairs)
        total += s
        in_a, in_b = _classify(F, ds, i)
        if in_a or in_b:
            continue
        rep.good += 1
        deg_p = sum(e * (len(D) - 1) for D, e in pairs)
        if _weil_ok(s, deg_p, spec.q):
            rep.passed += 1
            if deg_p > 1:
                rep.worst_ratio = max(rep.worst_ratio, abs(s) / ((deg_p - 1) * spec.q**0.5))
        elif len(rep.failures) < WITNESS_CAP:
            rep.failures.append({"a": f[1:n], "sum": s, "deg_P": deg_p})
    rep.reassembled = charsum_sign(spec) * total
    return rep


# -- degree structure and critical values -----------------------------------------


def expected_leading(F: FieldSpec, n: int, f):
    """(degree, leading coefficient) that D_f must have, or None when unclaimed."""
    sign = -1 if (n * (n - 1) // 2) & 1 else 1
    if n % F.p:
        lc = F.pow(F.from_int(n), n)
        return n - 1, lc if sign > 0 else F.neg(lc)
    top = f[n - 1]
    if top == 0:
        return None
    lc = F.pow(top, n)
    return n - 2, lc if sign > 0 else F.neg(lc)


def _roots_in(E, g):
    return [z for z in range(E.q) if peval(E, g, z) == 0]


def dpoly_root_check(fc: FiberCoeffs, alpha=None, max_extension=None) -> bool:
    """Every critical value -g(ρ), g'(ρ) = 0, is a root of D_g (g = f + α).

    Roots of g' are searched in F_q and, for n <= 4, also in F_{q^2}, F_{q^3}.
    """
    F, n = fc.field, fc.n
    a = [] if alpha is None else list(alpha.coeffs if isinstance(alpha, Poly) else alpha)
    g = padd(F, fc.f, a)
    D = shifted_disc(F, g)
    dg = pderiv(F, g)
    if not dg:
        return not D
    if max_extension is None:
        max_extension = 3 if n <= 4 else 1
    for m in range(1, max_extension + 1):
        E = F if m == 1 else extension_field(F, m)
        emb = None if m == 1 else embedding(F, E)
        lift = (lambda c: c) if emb is None else emb.__getitem__
        gE, dgE, DE = [lift(c) for c in g], [lift(c) for c in dg], [lift(c) for c in D]
        for rho in _roots_in(E, dgE):
            if peval(E, DE, E.neg(peval(E, gE, rho))) != 0:
                return False
    return True


@dataclass
class DegreeReport:
    q: int
    n: int
    checked: int = 0
    claimed: int = 0
    degree_ok: int = 0
    roots_ok: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.degree_ok == self.claimed and self.roots_ok == self.checked


def degree_structure_check(F: FieldSpec, n: int, max_extension: int = 1, budget=None) -> DegreeReport:
    """Exhaustive deg/lc of D_f over the a-space, and the critical-value roots."""
    blocks = F.q ** (n - 1)
    check_budget(blocks * n, budget, "degree check")
    rep = DegreeReport(F.q, n)
    for ai in range(blocks):
        fc = FiberCoeffs.from_index(F, n, ai)
        f = fc.f
        D = shifted_disc(F, f)
        rep.checked += 1
        want = expected_leading(F, n, f)
        if want is not None:
            rep.claimed += 1
            if deg(D) == want[0] and D[-1] == want[1]:
                rep.degree_ok += 1
            elif len(rep.failures) < WITNESS_CAP:
                rep.failures.append({"a": list(fc.a), "D": D, "expected": want})
        if dpoly_root_check(fc, max_extension=max_extension):
            rep.roots_ok += 1
        elif len(rep.failures) < WITNESS_CAP:
            rep.failures.append({"a": list(fc.a), "D": D, "roots": "critical value not a root"})
    return rep


# -- explicit small-degree formulas ---------------------------------------------------


def quadratic_formula_check(F: FieldSpec) -> bool:
    """D(t) = a^2 - 4t for f = x^2 + a x, every a."""
    four = F.from_int(4)
    for a in range(F.q):
        D = shifted_disc(F, [0, a, 1])
        want = [F.mul(a, a), F.neg(four)]
        while want and want[-1] == 0:
            want.pop()
        if D != want:
            return False
    return True


def cubic_formula_check(F: FieldSpec, disc_constant: int = 16) -> bool:
    """Check D(t) for f = x^3 + a x^2 + b x against the closed forms, all (a, b).

    If 3 does not divide q: D = (a²b² - 4b³) + (18ab - 4a³) t - 27 t² and
    disc_t D = disc_constant * (a² - 3b)³.  The true constant is +16 (expand
    (18ab - 4a³)² + 108(a²b² - 4b³)); -16 is the value sometimes quoted.
    If 3 | q: D = (a²b² - 4b³) - 4a³ t.
    """
    c = F.from_int
    mul, sub, pw = F.mul, F.sub, F.pow
    for a, b in itertools.product(range(F.q), repeat=2):
        D = shifted_disc(F, [0, b, a, 1])
        c0 = sub(mul(pw(a, 2), pw(b, 2)), mul(c(4), pw(b, 3)))
        if F.p == 3:
            want = [c0, F.neg(mul(c(4), pw(a, 3)))]
        else:
            c1 = sub(mul(c(18), mul(a, b)), mul(c(4), pw(a, 3)))
            want = [c0, c1, F.neg(c(27))]
        while want and want[-1] == 0:
            want.pop()
        if D != want:
            return False
        if F.p != 3:
            inner = sub(pw(a, 2), mul(c(3), b))
            if pdisc(F, D) != mul(F.from_int(disc_constant), pw(inner, 3)):
                return False
    return True


def det3(F: FieldSpec, m) -> int:
    """3x3 determinant by cofactor expansion along the first row."""
    mul, sub, add = F.mul, F.sub, F.add
    (a, b, c), (d, e, f), (g, h, i) = m
    return add(
        sub(mul(a, sub(mul(e, i), mul(f, h))), mul(b, sub(mul(d, i), mul(f, g)))),
        mul(c, sub(mul(d, h), mul(e, g))),
    )


def critical_matrix(F: FieldSpec, r1: int, r2: int):
    c = F.from_int
    mul, sub, pw = F.mul, F.sub, F.pow
    return [
        [mul(c(3), pw(r1, 2)), mul(c(2), r1), 1],
        [mul(c(3), pw(r2, 2)), mul(c(2), r2), 1],
        [sub(pw(r2, 3), pw(r1, 3)), sub(pw(r2, 2), pw(r1, 2)), sub(r2, r1)],
    ]


def det_identity_check(F: FieldSpec, trials=None, seed: int = 0) -> bool:
    """det M(ρ₁, ρ₂) = (ρ₁ - ρ₂)^4; all pairs when trials is None."""
    if trials is None:
        pairs = itertools.product(range(F.q), repeat=2)
    else:
        rng = random.Random(seed)
        pairs = []
        while len(pairs) < trials:
            r1, r2 = rng.randrange(F.q), rng.randrange(F.q)
            if r1 != r2:
                pairs.append((r1, r2))
    for r1, r2 in pairs:
        if det3(F, critical_matrix(F, r1, r2)) != F.pow(F.sub(r1, r2), 4):
            return False
    return True
