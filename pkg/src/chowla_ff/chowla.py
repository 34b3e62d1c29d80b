"""Autocorrelation sums C(α₁..α_r; n) of the Möbius function over M_n."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction

from .budget import check_budget
from .errors import ChowlaError, EvenCharacteristic, InvalidSpec
from .ffield import FieldSpec, field_from_q
from .fibers import fiber_coeff_list, shifted_disc
from .fpoly import Poly, padd, peval
from .mobius import mu_factor
from .parallel import chunk_ranges, ordered_map


@dataclass(frozen=True)
class CorrelationSpec:
    field: FieldSpec
    n: int
    shifts: tuple  # ((alpha: Poly, eps: int), ...)

    def __post_init__(self):
        validate_spec(self)

    @classmethod
    def build(cls, field: FieldSpec, n: int, alphas, eps) -> "CorrelationSpec":
        """alphas are Polys or coefficient lists (canonical indices, low degree first)."""
        alphas = list(alphas)
        eps = list(eps)
        if len(alphas) != len(eps):
            raise InvalidSpec(f"{len(alphas)} shifts but {len(eps)} exponents")
        shifts = []
        for a, e in zip(alphas, eps):
            if not isinstance(a, Poly):
                a = Poly.of(field, a)
            shifts.append((a, int(e)))
        return cls(field, n, tuple(shifts))

    @property
    def r(self) -> int:
        return len(self.shifts)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def alphas(self):
        return [a for a, _ in self.shifts]

    @property
    def eps(self):
        return [e for _, e in self.shifts]

    def describe(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "alphas": [list(a.coeffs) for a in self.alphas],
            "eps": self.eps,
        }


def validate_spec(spec: CorrelationSpec) -> None:
    F = spec.field
    if F.p == 2:
        raise EvenCharacteristic("q must be odd")
    if spec.n < 1:
        raise InvalidSpec("n must be at least 1")
    if not spec.shifts:
        raise InvalidSpec("need at least one shift")
    seen = set()
    for alpha, e in spec.shifts:
        if alpha.field != F:
            raise InvalidSpec("shift polynomial over a different field")
        if e not in (1, 2):
            raise InvalidSpec(f"exponent {e} not in {{1, 2}}")
        if alpha.degree >= spec.n:
            raise InvalidSpec(f"shift {alpha!r} has degree >= n = {spec.n}")
        if alpha.coeffs in seen:
            raise InvalidSpec(f"shift {alpha!r} repeated")
        seen.add(alpha.coeffs)
    if all(e == 2 for _, e in spec.shifts):
        raise InvalidSpec("exponents must not all be even")


@dataclass(frozen=True)
class TheoremBound:
    value: float  # rounded up
    ceiling: int
    trivial: bool


@dataclass(frozen=True)
class CorrelationResult:
    value: int
    q: int
    n: int
    r: int
    bound: float
    bound_ceiling: int
    trivial_bound: bool
    method: str

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.value, self.q**self.n)

    @property
    def within_bound(self) -> bool:
        return bound_holds(self.value, self.q, self.n, self.r, self.trivial_bound)

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "q": self.q,
            "n": self.n,
            "r": self.r,
            "value": self.value,
            "normalized": format_decimal(self.normalized),
            "bound": f"{self.bound:.6f}",
            "trivial_bound": self.trivial_bound,
            "within_bound": self.within_bound,
        }


# -- bound -------------------------------------------------------------------


def _bound_parts(q: int, n: int, r: int):
    """(X, Y) with bound = X*sqrt(q) + Y, both exact integers."""
    return 2 * r * n * q ** (n - 1), 3 * r * n * n * q ** (n - 1)


def theorem_bound_values(q: int, n: int, r: int) -> TheoremBound:
    if n == 1 or r == 1:
        return TheoremBound(float(q**n), q**n, True)
    x, y = _bound_parts(q, n, r)
    s = math.isqrt(x * x * q)
    ceil_root = s if s * s == x * x * q else s + 1
    with localcontext() as ctx:
        ctx.prec = 40  # > 80 bits
        exact = Decimal(x) * Decimal(q).sqrt() + y
        up = float(exact)
        if Decimal(up) < exact:
            up = math.nextafter(up, math.inf)
    return TheoremBound(up, ceil_root + y, False)


def theorem_bound(spec: CorrelationSpec) -> TheoremBound:
    """Right-hand side 2rn q^{n-1/2} + 3rn^2 q^{n-1}, rounded up.

    For n = 1 or r = 1 the theorem claims nothing; the trivial bound q^n is
    returned with ``trivial`` set.
    """
    return theorem_bound_values(spec.q, spec.n, spec.r)


def bound_holds(value: int, q: int, n: int, r: int, trivial: bool = False) -> bool:
    """|value| <= bound, decided in exact integer arithmetic."""
    if trivial or n == 1 or r == 1:
        return abs(value) <= q**n
    x, y = _bound_parts(q, n, r)
    lhs = abs(value) - y
    return lhs <= 0 or lhs * lhs <= x * x * q


# -- the two routes -------------------------------------------------------------


def _projected_cost(spec: CorrelationSpec) -> int:
    return spec.q**spec.n * spec.r


def _direct_range(args):
    spec, lo, hi = args
    F, n, q = spec.field, spec.n, spec.q
    shifts = [(list(a.coeffs), e) for a, e in spec.shifts]
    memo = {}
    total = 0
    for ai in range(lo, hi):
        f = fiber_coeff_list(F, n, ai)
        for t in range(q):
            f[0] = t
            prod = 1
            for alpha, e in shifts:
                g = padd(F, f, alpha)
                key = tuple(g)
                m = memo.get(key)
                if m is None:
                    m = memo[key] = mu_factor(F, g)
                if m == 0:
                    prod = 0
                    break
                if e & 1:
                    prod *= m
            total += prod
    return total


def _charsum_range(args):
    spec, lo, hi = args
    F, n = spec.field, spec.n
    shifts = [(list(a.coeffs), e) for a, e in spec.shifts]
    chi = F.chi_table
    mul, pw = F.mul, F.pow
    total = 0
    for ai in range(lo, hi):
        f = fiber_coeff_list(F, n, ai)
        ds = [(shifted_disc(F, padd(F, f, alpha)), e) for alpha, e in shifts]
        total += fiber_char_sum(F, ds, chi, mul, pw)
    return total


def fiber_char_sum(F: FieldSpec, ds, chi=None, mul=None, pw=None) -> int:
    """Σ_t χ₂(∏_j D_j(t)^{ε_j}) for [(D_j coefficient list, ε_j)]."""
    chi = chi or F.chi_table
    mul = mul or F.mul
    pw = pw or F.pow
    s = 0
    for t in range(F.q):
        prod = 1
        for D, e in ds:
            v = peval(F, D, t)
            prod = mul(prod, v if e == 1 else pw(v, e))
            if prod == 0:
                break
        s += chi[prod]
    return s


def charsum_sign(spec: CorrelationSpec) -> int:
    return -1 if (spec.n * sum(spec.eps)) & 1 else 1


def _run(spec, worker_fn, budget, workers, what):
    check_budget(_projected_cost(spec), budget, what)
    blocks = spec.q ** (spec.n - 1)
    parts = ordered_map(worker_fn, [(spec, lo, hi) for lo, hi in chunk_ranges(blocks, workers)], workers)
    return sum(parts)


def _result(spec, value, method) -> CorrelationResult:
    b = theorem_bound(spec)
    return CorrelationResult(value, spec.q, spec.n, spec.r, b.value, b.ceiling, b.trivial, method)


def correlation_direct(spec: CorrelationSpec, budget=None, workers: int = 1) -> CorrelationResult:
    """Σ_{F ∈ M_n} ∏ μ(F + α_j)^{ε_j} with μ from factor counting."""
    value = _run(spec, _direct_range, budget, workers, "direct correlation")
    return _result(spec, value, "direct")


def correlation_charsum(spec: CorrelationSpec, budget=None, workers: int = 1) -> CorrelationResult:
    """(-1)^{n Σε} Σ_a Σ_t χ₂(∏ D_{f+α_j}(t)^{ε_j}); discriminants and χ₂ only.

    Each μ^ε contributes (-1)^{nε}, so squared factors carry no sign.
    """
    if spec.field.p == 2:
        raise EvenCharacteristic("character-sum route needs q odd")
    value = _run(spec, _charsum_range, budget, workers, "character-sum correlation")
    value *= charsum_sign(spec)
    return _result(spec, value, "charsum")


def squarefree_tuple_count(spec: CorrelationSpec, budget=None) -> int:
    """#{F ∈ M_n : every F + α_j squarefree}."""
    check_budget(_projected_cost(spec), budget, "squarefree count")
    F, n, q = spec.field, spec.n, spec.q
    alphas = [list(a.coeffs) for a in spec.alphas]
    count = 0
    for ai in range(q ** (n - 1)):
        f = fiber_coeff_list(F, n, ai)
        for t in range(q):
            f[0] = t
            if all(mu_factor(F, padd(F, f, a)) != 0 for a in alphas):
                count += 1
    return count


# -- sweeps -------------------------------------------------------------------


SWEEP_COLUMNS = (
    "q",
    "n",
    "r",
    "C_direct",
    "C_charsum",
    "bound",
    "normalized",
    "normalized_bound",
    "wall_ms",
    "status",
)


def format_decimal(x: Fraction, digits: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(x.numerator) / Decimal(x.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


@dataclass
class SweepRow:
    q: int
    n: int
    r: int
    C_direct: object = None
    C_charsum: object = None
    bound: object = None
    normalized: object = None
    normalized_bound: object = None
    wall_ms: object = None
    status: str = "ok"

    def cells(self):
        def show(v):
            if v is None:
                return ""
            if isinstance(v, Fraction):
                return format_decimal(v)
            if isinstance(v, float):
                return f"{v:.6f}"
            return str(v)

        return [show(getattr(self, c)) for c in SWEEP_COLUMNS]


@dataclass(frozen=True)
class SweepTemplate:
    n: int
    r: int
    eps: tuple
    alphas_by_q: dict = None  # q -> [coefficient lists]; default constants 0..r-1

    def alphas_for(self, q: int):
        if self.alphas_by_q and q in self.alphas_by_q:
            return [list(a) for a in self.alphas_by_q[q]]
        if self.r > q:
            return None
        return [[j] for j in range(self.r)]


_ERROR_CODES = {
    "BudgetExceeded": "budget",
    "InvalidSpec": "invalid_spec",
    "EvenCharacteristic": "even_characteristic",
    "NotPrime": "not_prime_power",
    "BoundExceeded": "field_bound",
}


def error_code(exc: Exception) -> str:
    return _ERROR_CODES.get(type(exc).__name__, type(exc).__name__.lower())


def sweep_cell(template: SweepTemplate, q: int, budget=None, timing: bool = True) -> SweepRow:
    row = SweepRow(q, template.n, template.r)
    start = time.perf_counter()
    try:
        F = field_from_q(q)
        alphas = template.alphas_for(q)
        if alphas is None:
            row.status = "skipped"
            return row
        spec = CorrelationSpec.build(F, template.n, alphas, template.eps)
        direct = correlation_direct(spec, budget)
        charsum = correlation_charsum(spec, budget)
    except ChowlaError as exc:
        row.status = f"error:{error_code(exc)}"
        return row
    qn = q**template.n
    row.C_direct = direct.value
    row.C_charsum = charsum.value
    row.bound = direct.bound
    row.normalized = Fraction(direct.value, qn)
    row.normalized_bound = direct.bound / qn
    if timing:
        row.wall_ms = round((time.perf_counter() - start) * 1000)
    else:
        row.wall_ms = 0
    if direct.value != charsum.value:
        row.status = "error:mismatch"
    elif not direct.within_bound:
        row.status = "error:bound"
    return row


def _sweep_cell_args(args):
    return sweep_cell(*args)


def sweep(template: SweepTemplate, q_list, budget=None, workers: int = 1, timing: bool = True):
    """One SweepRow per q, ascending; per-cell failures become row statuses."""
    qs = sorted(set(q_list))
    return ordered_map(_sweep_cell_args, [(template, q, budget, timing) for q in qs], workers)
