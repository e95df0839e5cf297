"""Brute-force counting lab: measured counts next to analytic envelopes.

Counters are exact enumerations at desk scale.  Each has a second,
independently coded enumeration strategy used for cross-validation.  Envelope
constants are report columns, never thresholds.  Output is CSV only.
"""

from __future__ import annotations

import json
import os
import time
import zlib
import random
from dataclasses import dataclass

from .ff_core import DomainError, PrimeFieldCtx, iroot
from .poly_algebra import (BiPoly, Poly, RationalFn, is_square_free,
                           lagrange_basis, perfect_power_decompose, poly_gcd,
                           resultant_shifted)
from .algorithms import choose_m, compute_window

DEFAULT_BUDGET = 10 ** 8


class BudgetExceededError(RuntimeError):
    """The enumeration would exceed the operation budget."""


def _budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    try:
        return int(os.environ.get("POWERPROBE_BUDGET", DEFAULT_BUDGET))
    except ValueError:
        return DEFAULT_BUDGET


def _charge(estimate: int, budget: int | None):
    if estimate > _budget(budget):
        raise BudgetExceededError("budget: estimated %d ops" % estimate)


# ---------- value sets of rational functions ----------

def count_value_set_in_subgroup(psi: RationalFn, H: int, e: int,
                                ctx: PrimeFieldCtx, budget: int | None = None) -> int:
    """Number of distinct values psi(x), x = 1..H, landing in the order-e subgroup."""
    p = ctx.p
    if not 1 <= H <= p - 1:
        raise DomainError("H must lie in [1, p-1]")
    if (p - 1) % e != 0:
        raise DomainError("e must divide p - 1")
    _charge(H * (psi.degree + 2) + e, budget)
    values = set()
    for x in range(1, H + 1):
        v = psi.eval_at(x)
        if v is not None:
            values.add(v)
    sub = set(ctx.subgroup_elements(e))
    return len(values & sub)


def count_value_set_in_subgroup_alt(psi: RationalFn, H: int, e: int,
                                    ctx: PrimeFieldCtx, budget: int | None = None) -> int:
    """Second strategy: sorted-list dedup plus power test for membership."""
    p = ctx.p
    if not 1 <= H <= p - 1:
        raise DomainError("H must lie in [1, p-1]")
    if (p - 1) % e != 0:
        raise DomainError("e must divide p - 1")
    _charge(H * (psi.degree + 2) + e, budget)
    num, den = psi.num.coeffs, psi.den.coeffs
    seen = []
    for x in range(1, H + 1):
        dv = 0
        for c in reversed(den):
            dv = (dv * x + c) % p
        if dv == 0:
            continue
        nv = 0
        for c in reversed(num):
            nv = (nv * x + c) % p
        seen.append(nv * pow(dv, -1, p) % p)
    seen.sort()
    count = 0
    prev = None
    for v in seen:
        if v == prev:
            continue
        prev = v
        if v and pow(v, e, p) == 1:
            count += 1
    return count


def envelope_value_set(d: int, e: int, p: int, H: int, constant: float = 1.0) -> float:
    return constant * H ** 0.5 * max(d ** 1.5 * e / p ** 0.5,
                                     d ** (7.0 / 6.0) * e ** (1.0 / 3.0))


# ---------- curve points on products of subgroups ----------

def count_curve_points_on_subgroups(F: BiPoly, e1: int, e2: int,
                                    ctx: PrimeFieldCtx, budget: int | None = None) -> int:
    """Zeros of F(U, V) with U in the order-e1 and V in the order-e2 subgroup."""
    p = ctx.p
    if F.p != p:
        raise DomainError("mixed moduli")
    if F.is_zero:
        raise DomainError("zero polynomial")
    if (p - 1) % e1 or (p - 1) % e2:
        raise DomainError("subgroup orders must divide p - 1")
    _charge(e1 * e2 * (F.deg_u + 1) * (F.deg_v + 1), budget)
    g1 = ctx.subgroup_elements(e1)
    g2 = ctx.subgroup_elements(e2)
    return sum(1 for u in g1 for v in g2 if F(u, v) == 0)


def count_curve_points_on_subgroups_alt(F: BiPoly, e1: int, e2: int,
                                        ctx: PrimeFieldCtx, budget: int | None = None) -> int:
    """Second strategy: specialize U, then scan the V subgroup per row."""
    p = ctx.p
    if F.p != p:
        raise DomainError("mixed moduli")
    if F.is_zero:
        raise DomainError("zero polynomial")
    if (p - 1) % e1 or (p - 1) % e2:
        raise DomainError("subgroup orders must divide p - 1")
    _charge(e1 * e2 * (F.deg_u + 1) * (F.deg_v + 1), budget)
    count = 0
    width = F.deg_v + 1
    for u in ctx.subgroup_elements(e1):
        spec = [0] * width
        upow = 1
        for row in F.rows:
            for j, c in enumerate(row):
                spec[j] = (spec[j] + upow * c) % p
            upow = upow * u % p
        for v in ctx.subgroup_elements(e2):
            acc = 0
            for c in reversed(spec):
                acc = (acc * v + c) % p
            if acc == 0:
                count += 1
    return count


def envelope_curve_points(d: int, W: int, p: int, constant: float = 1.0) -> float:
    return constant * max(d * d * W / p, d ** (4.0 / 3.0) * W ** (1.0 / 3.0))


# ---------- shifted subgroup intersections ----------

def shifted_condition_holds(p: int, e: int, m: int) -> bool:
    """p >= (2m floor(e^(1/(2m+1))) + 2m + 2) e; vacuously true for m = 0."""
    if m == 0:
        return True
    return p >= (2 * m * iroot(e, 2 * m + 1) + 2 * m + 2) * e


def count_shifted_subgroup_intersection(e: int, shifts, scales, ctx: PrimeFieldCtx,
                                        budget: int | None = None) -> tuple[int, bool]:
    """Size of G inter (mu_1 G + xi_1) inter ... for the order-e subgroup G.

    Shifts must be pairwise distinct and nonzero, scales nonzero.  Also reports
    whether the size condition on p relative to e and m held.
    """
    p = ctx.p
    if (p - 1) % e != 0:
        raise DomainError("e must divide p - 1")
    shifts = [s % p for s in shifts]
    scales = [s % p for s in scales]
    if len(shifts) != len(scales):
        raise DomainError("shifts and scales must have equal length")
    if any(s == 0 for s in shifts):
        raise DomainError("shifts must be nonzero")
    if len(set(shifts)) != len(shifts):
        raise DomainError("shifts must be pairwise distinct")
    if any(s == 0 for s in scales):
        raise DomainError("scales must be nonzero")
    m = len(shifts)
    _charge(e * (m + 2), budget)
    sub = ctx.subgroup_elements(e)
    result = set(sub)
    for mu, xi in zip(scales, shifts):
        result &= {(mu * t + xi) % p for t in sub}
    return len(result), shifted_condition_holds(p, e, m)


def count_shifted_subgroup_intersection_alt(e: int, shifts, scales, ctx: PrimeFieldCtx,
                                            budget: int | None = None) -> int:
    """Second strategy: per-element membership through the power test."""
    p = ctx.p
    if (p - 1) % e != 0:
        raise DomainError("e must divide p - 1")
    shifts = [s % p for s in shifts]
    scales = [s % p for s in scales]
    if len(shifts) != len(scales):
        raise DomainError("shifts and scales must have equal length")
    if any(s == 0 for s in shifts) or len(set(shifts)) != len(shifts):
        raise DomainError("shifts must be distinct and nonzero")
    if any(s == 0 for s in scales):
        raise DomainError("scales must be nonzero")
    _charge(e * (len(shifts) + 2), budget)
    inv_scales = [pow(mu, -1, p) for mu in scales]
    count = 0
    for lam in ctx.subgroup_elements(e):
        ok = True
        for mu_inv, xi in zip(inv_scales, shifts):
            t = (lam - xi) * mu_inv % p
            if t == 0 or pow(t, e, p) != 1:
                ok = False
                break
        if ok:
            count += 1
    return count


def envelope_shifted_intersection(e: int, m: int, constant: float = 1.0) -> float:
    if m == 0:
        return constant * e
    return constant * e ** ((m + 1.0) / (2.0 * m + 1.0))


# ---------- interpolating polynomial counts ----------

def _interp_count_coeff(xs, As, e, d, p, budget):
    total = sum(p ** k for k in range(d + 1))
    _charge(total * len(xs), budget)
    import itertools
    count = 0
    for deg in range(d + 1):
        for lower in itertools.product(range(p), repeat=deg):
            f = Poly(p, lower + (1,))
            if all(pow(f(x), e, p) == a for x, a in zip(xs, As)):
                count += 1
    return count


def _interp_count_lambda(xs, As, e, d, ctx, budget):
    p = ctx.p
    if len(xs) < d + 1:
        raise DomainError("lambda strategy needs at least d + 1 nodes")
    roots = []
    for a in As:
        r = ctx.extract_roots(a, e)
        if not r:
            return 0
        roots.append(r)
    _charge(e ** (d + 1) * (d + 1) * (d + 1) + e ** (d + 1) * len(xs), budget)
    basis = lagrange_basis(p, xs[: d + 1])
    base_vals = [r[0] for r in roots]
    sub = ctx.subgroup_elements(e)
    import itertools
    count = 0
    rest = list(zip(xs[d + 1:], As[d + 1:]))
    for lam in itertools.product(sub, repeat=d + 1):
        f = Poly.zero(p)
        for c0, lam_i, L in zip(base_vals, lam, basis):
            f = f + (c0 * lam_i % p) * L
        if f.is_zero or not f.is_monic:
            continue
        if all(pow(f(x), e, p) == a for x, a in rest):
            count += 1
    return count


def _interp_validate(xs, As, e, ctx):
    p = ctx.p
    xs = [x % p for x in xs]
    As = [a % p for a in As]
    if len(xs) != len(As) or not xs:
        raise DomainError("need matching nonempty xs and As")
    if len(set(xs)) != len(xs):
        raise DomainError("xs must be pairwise distinct")
    if any(a == 0 for a in As):
        raise DomainError("As must be nonzero")
    if (p - 1) % e != 0:
        raise DomainError("e must divide p - 1")
    return xs, As


def count_interpolating_polynomials(xs, As, e: int, d: int, ctx: PrimeFieldCtx,
                                    budget: int | None = None) -> int:
    """Monic f of degree at most d with f(x_i)^e = A_i for all i.

    Enumerates either p^deg coefficient tuples or e^(d+1) root-of-unity
    labelings of interpolation values, whichever is cheaper within budget.
    """
    xs, As = _interp_validate(xs, As, e, ctx)
    p = ctx.p
    cost_coeff = sum(p ** k for k in range(d + 1)) * len(xs)
    cost_lambda = e ** (d + 1) * (d + 1) * (d + 1) if len(xs) >= d + 1 else None
    if cost_lambda is not None and cost_lambda < cost_coeff:
        return _interp_count_lambda(xs, As, e, d, ctx, budget)
    return _interp_count_coeff(xs, As, e, d, p, budget)


def count_interpolating_polynomials_alt(xs, As, e: int, d: int, ctx: PrimeFieldCtx,
                                        budget: int | None = None) -> int:
    """Second strategy: whichever enumeration the primary would not pick."""
    xs, As = _interp_validate(xs, As, e, ctx)
    p = ctx.p
    cost_coeff = sum(p ** k for k in range(d + 1)) * len(xs)
    cost_lambda = e ** (d + 1) * (d + 1) * (d + 1) if len(xs) >= d + 1 else None
    if cost_lambda is not None and cost_lambda < cost_coeff:
        return _interp_count_coeff(xs, As, e, d, p, budget)
    if cost_lambda is None:
        raise DomainError("lambda strategy needs at least d + 1 nodes")
    return _interp_count_lambda(xs, As, e, d, ctx, budget)


def envelope_interpolating_count(e: int, d: int, constant: float = 1.0,
                                 eps: float = 0.0) -> float:
    return constant * e ** (d - 0.5 + eps)


# ---------- sweep driver ----------

CSV_HEADER = "experiment,p,e,d,H,m,measured,envelope,ratio,status,ms"

EXPERIMENTS = ("curve_points", "interpolating_count", "shifted_intersection", "value_set")


@dataclass
class BoundReport:
    experiment: str
    p: int
    e: int
    d: int
    H: int | None
    m: int | None
    measured: int | None
    envelope: float | None
    ratio: float | None
    status: str
    ms: float

    def csv_row(self) -> str:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return "%.6g" % v
            return str(v)

        return ",".join([self.experiment, str(self.p), str(self.e), str(self.d),
                         fmt(self.H), fmt(self.m), fmt(self.measured),
                         fmt(self.envelope), fmt(self.ratio), self.status,
                         "%.1f" % self.ms])


def write_csv(reports, path) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in reports:
            fh.write(r.csv_row() + "\n")


_GRID_KEYS = {"primes", "e_divisor_policy", "d_range", "H_policy",
              "experiments", "constant", "seed"}


def load_grid(path) -> dict:
    with open(path) as fh:
        grid = json.load(fh)
    validate_grid(grid)
    return grid


def validate_grid(grid: dict) -> None:
    if not isinstance(grid, dict):
        raise DomainError("grid spec must be a JSON object")
    unknown = set(grid) - _GRID_KEYS
    if unknown:
        raise DomainError("unknown grid keys: %s" % ", ".join(sorted(unknown)))
    for exp in grid.get("experiments", ()):
        if exp not in EXPERIMENTS:
            raise DomainError("unknown experiment %r" % exp)
    dr = grid.get("d_range", [1, 1])
    if not (isinstance(dr, list) and len(dr) == 2 and all(isinstance(v, int) for v in dr)):
        raise DomainError("d_range must be [lo, hi]")


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _cell_es(p: int, policy) -> list[int]:
    if policy == "all" or policy is None:
        return _divisors(p - 1)
    if isinstance(policy, dict) and "max" in policy:
        return [e for e in _divisors(p - 1) if e <= policy["max"]]
    if isinstance(policy, list):
        for e in policy:
            if (p - 1) % e != 0:
                raise DomainError("e = %d does not divide p - 1 for p = %d" % (e, p))
        return sorted(policy)
    raise DomainError("bad e_divisor_policy")


def _cell_H(p: int, e: int, d: int, policy) -> int:
    if policy == "window" or policy is None:
        return compute_window(p, e, d).H
    if isinstance(policy, dict) and "fixed" in policy:
        return min(int(policy["fixed"]), p - 1)
    if policy == "sqrt_p":
        import math
        return max(1, math.isqrt(p))
    raise DomainError("bad H_policy")


def _draw_poly(rng, p, d, monic=True, square_free=False, avoid_roots=()):
    for _ in range(200):
        f = Poly(p, [rng.randrange(p) for _ in range(d)] + ([1] if monic else []))
        if f.degree != d:
            continue
        if square_free and not is_square_free(f):
            continue
        if avoid_roots and any(f(x) == 0 for x in avoid_roots):
            continue
        return f
    raise DomainError("no valid polynomial found")


def _draw_psi(rng, p, d, ctx):
    for _ in range(200):
        f = _draw_poly(rng, p, d)
        g = _draw_poly(rng, p, d)
        if poly_gcd(f, g).degree > 0:
            continue
        psi = RationalFn(f, g)
        if psi.is_constant:
            continue
        _, k = perfect_power_decompose(psi, ctx)
        if k == 1:
            return psi
    raise DomainError("no valid rational function found")


def _run_cell(exp, p, e, d, rng, ctx, constant, budget, H_policy):
    if exp == "value_set":
        H = _cell_H(p, e, d, H_policy)
        psi = _draw_psi(rng, p, d, ctx)
        measured = count_value_set_in_subgroup(psi, H, e, ctx, budget)
        return measured, envelope_value_set(d, e, p, H, constant), H, None
    if exp == "curve_points":
        f = _draw_poly(rng, p, d)
        g = _draw_poly(rng, p, max(0, d - 1)) if d > 1 else Poly.one(p)
        if poly_gcd(f, g).degree > 0:
            g = Poly.one(p)
        a = 1 + rng.randrange(p - 1)
        R = resultant_shifted(f, g, a)
        measured = count_curve_points_on_subgroups(R, e, e, ctx, budget)
        env = envelope_curve_points(max(1, R.total_degree), e * e, p, constant)
        return measured, env, None, None
    if exp == "shifted_intersection":
        m = next((mm for mm in range(1, 9) if shifted_condition_holds(p, e, mm)), 1)
        if m >= p:
            raise DomainError("not enough distinct shifts available")
        shifts = rng.sample(range(1, p), m)
        scales = [1 + rng.randrange(p - 1) for _ in range(m)]
        measured, _held = count_shifted_subgroup_intersection(e, shifts, scales, ctx, budget)
        return measured, envelope_shifted_intersection(e, m, constant), None, m
    if exp == "interpolating_count":
        m = choose_m(p, e, m_cap=8)
        xs = list(range(d * (m - 1) + 2))
        if xs[-1] >= p:
            raise DomainError("node range exceeds the field")
        f = _draw_poly(rng, p, d, square_free=True, avoid_roots=xs)
        As = [pow(f(x), e, p) for x in xs]
        measured = count_interpolating_polynomials(xs, As, e, d, ctx, budget)
        return measured, envelope_interpolating_count(e, d, constant), None, m
    raise DomainError("unknown experiment %r" % exp)


def sweep(grid: dict, budget: int | None = None) -> list[BoundReport]:
    """Run every grid cell; per-cell failures become error rows, never aborts."""
    validate_grid(grid)
    primes = sorted(grid.get("primes", []))
    experiments = sorted(grid.get("experiments", []))
    d_lo, d_hi = grid.get("d_range", [1, 1])
    constant = float(grid.get("constant", 1.0))
    base_seed = int(grid.get("seed", 0))
    e_policy = grid.get("e_divisor_policy", "all")
    H_policy = grid.get("H_policy", "window")
    ctxs: dict[int, PrimeFieldCtx] = {}
    reports = []
    for exp in experiments:
        for p in primes:
            ctx = ctxs.setdefault(p, PrimeFieldCtx(p))
            for e in _cell_es(p, e_policy):
                for d in range(d_lo, d_hi + 1):
                    tag = "%d:%s:%d:%d:%d" % (base_seed, exp, p, e, d)
                    rng = random.Random(zlib.crc32(tag.encode()))
                    t0 = time.perf_counter()
                    H = m = measured = envelope = ratio = None
                    try:
                        measured, envelope, H, m = _run_cell(
                            exp, p, e, d, rng, ctx, constant, budget, H_policy)
                        ratio = measured / envelope if envelope else None
                        status = "ok"
                    except BudgetExceededError:
                        status = "budget"
                    except Exception:
                        status = "error"
                    ms = (time.perf_counter() - t0) * 1000.0
                    reports.append(BoundReport(exp, p, e, d, H, m, measured,
                                               envelope, ratio, status, ms))
    reports.sort(key=lambda r: (r.experiment, r.p, r.e, r.d,
                                r.H if r.H is not None else -1,
                                r.m if r.m is not None else -1))
    return reports
