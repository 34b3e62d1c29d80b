"""Identity suite behind ``verify`` and the curated ``selftest`` matrix."""

from __future__ import annotations

import io
import itertools
import random
import time
from dataclasses import dataclass

from .badset import (
    badset_scan,
    cubic_formula_check,
    degree_structure_check,
    det_identity_check,
    quadratic_formula_check,
    weil_scan,
)
from .chowla import (
    CorrelationSpec,
    SweepTemplate,
    bound_holds,
    correlation_charsum,
    correlation_direct,
    sweep,
)
from .errors import ConsistencyFailure
from .ffield import FieldSpec, field_from_q, odd_prime_powers
from .fpoly import mv_count_zeros, pdisc, random_multipoly
from .mobius import iter_monic, mobius_consistency_scan


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    counterexample: object = None
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f"{mark}  {self.name:<44} {self.detail}"
        if self.counterexample is not None and not self.passed:
            text += f"\n      counterexample: {self.counterexample}"
        return text


def _timed(name, fn):
    start = time.perf_counter()
    try:
        passed, detail, cex = fn()
    except ConsistencyFailure as exc:
        passed, detail, cex = False, str(exc), exc.counterexample
    return Check(name, passed, detail, cex, time.perf_counter() - start)


def eps_patterns(r: int):
    return [e for e in itertools.product((1, 2), repeat=r) if any(x == 1 for x in e)]


# -- individual checks ----------------------------------------------------------


def check_pellet(fields, max_deg, workers=1, budget=None):
    def run():
        total = 0
        for F in fields:
            for n in range(1, max_deg + 1):
                total += mobius_consistency_scan(F, n, budget=budget, workers=workers).total
        return True, f"{total} polynomials agree", None

    return run


def check_mu_sums(fields, degrees, workers=1, budget=None):
    def run():
        for F in fields:
            for n in degrees:
                rep = mobius_consistency_scan(F, n, budget=budget, workers=workers)
                want_sf = F.q**n - F.q ** (n - 1)
                if rep.mu_sum != 0 or rep.squarefree != want_sf:
                    return False, "", {"q": F.q, "n": n, "sum": rep.mu_sum, "squarefree": rep.squarefree}
        return True, f"q in {[F.q for F in fields]}, n in {list(degrees)}", None

    return run


def _equivalence_cells(fields, degrees, rs):
    for F in fields:
        for n in degrees:
            for r in rs:
                if r > F.q:
                    continue
                for eps in eps_patterns(r):
                    yield CorrelationSpec.build(F, n, [[j] for j in range(r)], eps)


def check_methods(fields, degrees, rs, workers=1, budget=None, with_bound=False):
    def run():
        cells = 0
        for spec in _equivalence_cells(fields, degrees, rs):
            d = correlation_direct(spec, budget, workers).value
            c = correlation_charsum(spec, budget, workers).value
            cells += 1
            if d != c:
                return False, "", dict(spec.describe(), direct=d, charsum=c)
            if with_bound and not bound_holds(d, spec.q, spec.n, spec.r):
                return False, "bound violated", dict(spec.describe(), value=d)
        return True, f"{cells} specs", None

    return run


def check_concrete():
    F = field_from_q(3)
    spec = CorrelationSpec.build(F, 2, [[0], [1]], [1, 1])
    d = correlation_direct(spec).value
    c = correlation_charsum(spec).value
    return d == -3 and c == -3, f"direct {d}, charsum {c}", None


def sweep_csv(template, qs, workers=1, budget=None) -> str:
    from .cli import write_sweep_csv

    buf = io.StringIO()
    write_sweep_csv(sweep(template, qs, budget=budget, workers=workers, timing=False), buf)
    return buf.getvalue()


def check_sweep_bound(qs, workers=1, budget=None):
    def run():
        rows = sweep(SweepTemplate(2, 2, (1, 2)), qs, budget=budget, workers=workers, timing=False)
        bad = [r for r in rows if r.status != "ok"]
        if bad:
            return False, "", {"q": bad[0].q, "status": bad[0].status}
        return True, f"{len(rows)} rows, q up to {max(qs)}", None

    return run


def check_badset(fields, degrees, budget=None, workers=1):
    def run():
        for F in fields:
            for n in degrees:
                rep = badset_scan(CorrelationSpec.build(F, n, [[0], [1]], [1, 1]), budget=budget, workers=workers)
                if not (rep.bounds_hold() and rep.cover_holds()):
                    return False, "", rep.as_dict()
        return True, f"n in {list(degrees)}", None

    return run


def check_badset_exact(odd_qs):
    def run():
        for q in odd_qs:
            rep = badset_scan(CorrelationSpec.build(field_from_q(q), 2, [[0], [1]], [1, 1]))
            if rep.count_A != 0:
                return False, "", {"q": q, "n": 2, "count_A": rep.count_A}
        rep = badset_scan(CorrelationSpec.build(field_from_q(7), 3, [[0], [1]], [1, 1]))
        if rep.count_A != 7:
            return False, "", {"q": 7, "n": 3, "count_A": rep.count_A}
        return True, "#A_2 = 0, #A_3(F_7) = 7", None

    return run


def check_weil(fields, n, budget=None):
    def run():
        good = 0
        for F in fields:
            for eps in eps_patterns(2):
                spec = CorrelationSpec.build(F, n, [[0], [1]], eps)
                rep = weil_scan(spec, budget=budget)
                good += rep.good
                if rep.passed != rep.good:
                    return False, "", dict(spec.describe(), failures=rep.failures)
                direct = correlation_direct(spec, budget).value
                if rep.reassembled != direct:
                    return False, "fiber reassembly", dict(spec.describe(), fibers=rep.reassembled, direct=direct)
        return True, f"{good} good fibers", None

    return run


def check_degrees(fields, degrees, max_extension=1, budget=None):
    def run():
        checked = 0
        for F in fields:
            for n in degrees:
                rep = degree_structure_check(F, n, max_extension=max_extension, budget=budget)
                checked += rep.checked
                if not rep.passed:
                    return False, "", {"q": F.q, "n": n, "failures": rep.failures}
        return True, f"{checked} fibers", None

    return run


def check_formulas(quad_fields, cubic_fields, char3_fields):
    def run():
        for F in quad_fields:
            if not quadratic_formula_check(F):
                return False, "quadratic", {"q": F.q}
        for F in list(cubic_fields) + list(char3_fields):
            if not cubic_formula_check(F):
                return False, "cubic", {"q": F.q}
        return True, "disc_t D = +16(a^2-3b)^3 (true sign)", None

    return run


def check_det(fields):
    def run():
        for F in fields:
            if not det_identity_check(F):
                return False, "", {"q": F.q}
        return True, f"q in {[F.q for F in fields]}", None

    return run


def check_schmidt(fields, seed=0, samples=100, max_vars=3, max_degree=4, budget=None):
    def run():
        rng = random.Random(seed)
        count = 0
        for F in fields:
            for m in range(1, max_vars + 1):
                for d in range(1, max_degree + 1):
                    for _ in range(samples):
                        h = random_multipoly(F, m, d, rng)
                        z = mv_count_zeros(h, budget)
                        count += 1
                        if z > h.total_degree * F.q ** (m - 1):
                            return False, "", {"q": F.q, "m": m, "terms": h.terms, "zeros": z}
        return True, f"{count} polynomials", None

    return run


def scaled(F: FieldSpec, f, lam):
    """Coefficients a_i -> a_i λ^{n-i} for monic f of degree n."""
    n = len(f) - 1
    return [F.mul(c, F.pow(lam, n - i)) for i, c in enumerate(f)]


def check_homogeneity(fields, max_deg):
    def run():
        for F in fields:
            for n in range(1, max_deg + 1):
                for f in iter_monic(F, n):
                    d = pdisc(F, f)
                    for lam in range(1, F.q):
                        if pdisc(F, scaled(F, f, lam)) != F.mul(F.pow(lam, n * (n - 1)), d):
                            return False, "", {"q": F.q, "f": f, "lambda": lam}
        return True, f"n <= {max_deg}", None

    return run


def check_determinism(qs, budget=None):
    def run():
        t = SweepTemplate(2, 2, (1, 2))
        one = sweep_csv(t, qs, workers=1, budget=budget)
        four = sweep_csv(t, qs, workers=4, budget=budget)
        return one == four, f"{len(one)} bytes", None if one == four else {"workers1": one, "workers4": four}

    return run


# -- suites ---------------------------------------------------------------------


def run_verify(F: FieldSpec, n: int, seed: int = 0, workers: int = 1, budget=None):
    """Every identity that makes sense at (F, n)."""
    checks = [
        ("Pellet = factorization, deg <= n", check_pellet([F], n, workers, budget)),
    ]
    if n > 1:
        checks.append(("sum mu = 0, #squarefree = q^n - q^(n-1)", check_mu_sums([F], [n], workers, budget)))
    checks.append(("direct = charsum, |C| <= bound (r = 2, 3)", check_methods([F], [n], [2, 3], workers, budget, True)))
    if n > 1:
        checks += [
            ("deg D_f, leading coeff, critical values", check_degrees([F], [n], budget=budget)),
            ("bad-set bounds and cover", check_badset([F], [n], budget, workers)),
            ("Weil bound on good fibers + reassembly", check_weil([F], n, budget)),
        ]
    checks.append(("D(t) closed forms n = 2, 3", check_formulas([F], [F] if F.p != 3 else [], [F] if F.p == 3 else [])))
    if F.q >= 5:
        checks.append(("det M(rho) = (rho1 - rho2)^4", check_det([F])))
    checks.append(("zero count <= d q^(m-1)", check_schmidt([F], seed, 20, budget=budget)))
    if n <= 4 and F.q**n <= 10**4:
        checks.append(("disc weighted homogeneity", check_homogeneity([F], n)))
    return [_timed(name, fn) for name, fn in checks]


def _fields(qs):
    return [field_from_q(q) for q in qs]


def run_selftest(quick: bool = False, seed: int = 0, budget=None):
    """The curated acceptance matrix; ``quick`` shrinks every axis for smoke runs."""
    if quick:
        qs_small, max_deg, sweep_qs = [3, 5], 3, [3, 5, 7, 9]
        qs_bad, weil_qs, lemma_qs = [3, 5], [5], [3]
    else:
        qs_small, max_deg, sweep_qs = [3, 5, 7, 9, 11], 5, odd_prime_powers(3, 81)
        qs_bad, weil_qs, lemma_qs = [3, 5, 7, 9, 11, 13], [5, 7, 9], [3, 5, 7, 9]
    eq_qs = [q for q in [3, 5, 7, 9] if not quick or q <= 5]
    checks = [
        ("1 Pellet equivalence", check_pellet(_fields(qs_small), max_deg, budget=budget)),
        ("2 sum mu = 0 and squarefree count", check_mu_sums(_fields(qs_small), range(2, max_deg + 1), budget=budget)),
        ("3 direct = charsum matrix", check_methods(_fields(eq_qs), [2, 3], [2, 3], budget=budget)),
        ("4 C(0,1;2) over F_3 = -3", check_concrete),
        ("5a Theorem bound on matrix", check_methods(_fields(eq_qs), [2, 3], [2, 3], budget=budget, with_bound=True)),
        ("5b Theorem bound on sweep n=2 r=2", check_sweep_bound(sweep_qs, budget=budget)),
        ("6a bad-set bounds n = 3, 4", check_badset(_fields(qs_bad), [3, 4], budget=budget)),
        ("6b #A_2 = 0, #A_3 = 7 over F_7", check_badset_exact(sweep_qs if not quick else [3, 5, 7])),
        ("7 Weil bound on good fibers", check_weil(_fields(weil_qs), 3, budget=budget)),
        ("8 degree structure of D_f", check_degrees(_fields([3, 5, 7, 9] if not quick else [3, 5]), [2, 3, 4], budget=budget)),
        ("9 closed forms for D(t)", check_formulas(_fields([3, 5, 7, 9]), _fields([5, 7]), _fields([9]))),
        ("10 determinant identity", check_det(_fields([5, 7, 9]))),
        ("11 zero-count lemma", check_schmidt(_fields(lemma_qs), seed, 100 if not quick else 10, budget=budget)),
        ("12 weighted homogeneity", check_homogeneity(_fields([3, 5, 7] if not quick else [3, 5]), 4)),
        ("13 sweep determinism, workers 1 vs 4", check_determinism(sweep_qs if not quick else [3, 5], budget)),
    ]
    return [_timed(name, fn) for name, fn in checks]
