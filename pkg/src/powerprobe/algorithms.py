"""Identity testing and interpolation against e-th power oracles.

The interpolation pipeline follows three steps: collect answers on a short
window and pick shifted query pairs whose answer ratios admit e-th roots with
the right index congruence, enumerate candidate polynomials by solving small
full-rank linear systems assembled from those roots, then filter candidates
down to one via extra points, a square-free check and identity tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .ff_core import DomainError, PrimeFieldCtx, iroot
from .oracle import CachingOracle, LocalPowerOracle, PowerOracle
from .poly_algebra import Poly, is_square_free, lagrange_interpolate, poly_power_root


class AlgorithmError(RuntimeError):
    """Runtime failure of an algorithm (as opposed to bad arguments)."""


class WindowEmptyError(DomainError):
    pass


class NoValidMError(DomainError):
    pass


class DishonestOracleError(AlgorithmError):
    """Oracle answers are impossible for any monic polynomial of the stated degree."""


class InconsistentOracleError(AlgorithmError):
    """No candidate survived filtering."""


class AmbiguousCandidatesError(AlgorithmError):
    """More than one candidate survived filtering."""

    def __init__(self, msg, survivors=()):
        super().__init__(msg)
        self.survivors = list(survivors)


# ---------- query window ----------

@dataclass(frozen=True)
class WindowParams:
    """Identity-test window: H points, the tuning constant, and diagnostics."""

    H: int
    c1: Fraction
    cap: int
    cond_ed_holds: bool
    branch_ratio: int
    branch_root: int


def _as_fraction(c) -> Fraction:
    if isinstance(c, float):
        return Fraction(str(c))
    return Fraction(c)


def regime_condition_holds(p: int, e: int, d: int, c=1) -> bool:
    """Exact check of e <= c * min(p d^(-3/2), p^(3/2) d^(-7/2)), by squaring."""
    c = _as_fraction(c)
    num, den = c.numerator, c.denominator
    return (e * e * d ** 3 * den * den <= num * num * p * p
            and e * e * d ** 7 * den * den <= num * num * p ** 3)


def compute_window(p: int, e: int, d: int, c1=1, cap: int | None = None) -> WindowParams:
    """Window size H = min(cap, max(floor(c1 d^3 e^2 / p), floor(c1 (d^7 e^2)^(1/3)))).

    All arithmetic is exact (rational c1, integer cube root), so the floors are
    never off by one.  Also reports whether the regime condition
    e <= c1 * min(p d^(-3/2), p^(3/2) d^(-7/2)) holds.
    """
    if p < 2 or e < 1 or d < 1:
        raise DomainError("need p >= 2, e >= 1, d >= 1")
    c1 = _as_fraction(c1)
    if c1 <= 0:
        raise DomainError("c1 must be positive")
    if cap is None:
        cap = p - 1
    num, den = c1.numerator, c1.denominator
    b1 = (num * d ** 3 * e ** 2) // (den * p)
    b2 = iroot((num ** 3 * d ** 7 * e ** 2) // den ** 3, 3)
    H = min(cap, max(b1, b2))
    if H < 1:
        raise WindowEmptyError("window empty; increase c1 or shrink e")
    return WindowParams(H=H, c1=c1, cap=cap,
                        cond_ed_holds=regime_condition_holds(p, e, d, c1),
                        branch_ratio=b1, branch_root=b2)


# ---------- identity testing ----------

@dataclass(frozen=True)
class IdentityVerdict:
    different: bool
    witness: int | None
    queries: int
    window: WindowParams

    @property
    def name(self) -> str:
        return "different" if self.different else "indistinguishable_on_window"


def identity_test(oracle_f: PowerOracle, oracle_g: PowerOracle,
                  window: WindowParams) -> IdentityVerdict:
    """Compare two oracles on x = 1..H; first mismatch is the witness.

    Uses at most 2H queries.  Equal answers on the whole window yield the
    indistinguishable verdict; soundness of a Different verdict is immediate
    from the two recorded answers.
    """
    if oracle_f.p != oracle_g.p or oracle_f.e != oracle_g.e:
        raise DomainError("oracles must share p and e")
    if window.H >= oracle_f.p:
        raise DomainError("window exceeds the field")
    queries = 0
    for x in range(1, window.H + 1):
        af = oracle_f.query(x)
        ag = oracle_g.query(x)
        queries += 2
        if af != ag:
            return IdentityVerdict(True, x, queries, window)
    return IdentityVerdict(False, None, queries, window)


# ---------- interpolation: step 1 ----------

@dataclass(frozen=True)
class Pair:
    """Query pair (x, x+h) with the admissible root set of the answer ratio."""

    x: int
    h: int
    roots: tuple[int, ...]


@dataclass(frozen=True)
class PairGroup:
    h: int
    pairs: tuple[Pair, ...]


@dataclass
class Step1Result:
    n: int
    range_top: int
    answers: dict
    zeros: tuple[int, ...]
    d_rem: int
    known_factor: Poly
    adjusted: dict
    groups: tuple[PairGroup, ...]
    clean_regime: bool


def step1_collect(oracle: PowerOracle, d: int, n: int = 1,
                  ctx: PrimeFieldCtx | None = None) -> Step1Result:
    """Query x = 0..(2d-1)n^2+n and assemble shifted pairs with root sets.

    Zero answers are roots of the hidden polynomial; they are divided out and
    the pair search runs at the reduced degree over the same window.  Blocks
    [i n, (i+1) n] for i = 0..(2d-1)n are scanned for pairs (x, x+h) whose
    adjusted answer ratio has e-th roots of index divisible by n.  When
    n | (p-1)/e a nonempty root set certifies the congruence for the true
    ratio, so exactly 2*d_rem pairs under the smallest workable shift are
    returned; otherwise every supporting pair of every workable shift is kept
    and the caller unions candidates over shifts.
    """
    p, e = oracle.p, oracle.e
    if d < 1:
        raise DomainError("d must be positive")
    if n < 1 or (p - 1) % n != 0:
        raise DomainError("n must divide p - 1")
    top = (2 * d - 1) * n * n + n
    if top >= p:
        raise DomainError("query range must fit below p")
    if ctx is None:
        ctx = PrimeFieldCtx(p)
    answers = {x: oracle.query(x) for x in range(top + 1)}
    zeros = tuple(sorted(x for x, a in answers.items() if a == 0))
    if len(zeros) > d:
        raise DishonestOracleError("more zero answers than the degree allows")
    d_rem = d - len(zeros)
    known = Poly.from_roots(p, zeros)
    zero_set = set(zeros)
    adjusted = {}
    for x, a in answers.items():
        if x in zero_set:
            continue
        prod = 1
        for z in zeros:
            prod = prod * (x - z) % p
        adjusted[x] = a * pow(prod, -e, p) % p
    if d_rem == 0:
        return Step1Result(n, top, answers, zeros, 0, known, adjusted, (), True)

    clean = ((p - 1) // e) % n == 0
    need = 2 * d_rem
    groups: list[PairGroup] = []
    for h in range(1, n + 1):
        support: list[list[Pair]] = []
        for i in range((2 * d - 1) * n + 1):
            opts: list[Pair] = []
            for x in range(i * n, (i + 1) * n - h + 1):
                if x in zero_set or (x + h) in zero_set:
                    continue
                ratio = adjusted[x] * pow(adjusted[x + h], -1, p) % p
                roots = ctx.extract_roots(ratio, e, n)
                if roots:
                    opts.append(Pair(x, h, roots))
                    if clean:
                        break
            if opts:
                support.append(opts)
        if len(support) < need:
            continue
        if clean:
            pairs = tuple(blk[0] for blk in support[:need])
            groups = [PairGroup(h, pairs)]
            break
        seen: set[int] = set()
        flat: list[Pair] = []
        for blk in support:
            for pr in blk:
                if pr.x not in seen:
                    seen.add(pr.x)
                    flat.append(pr)
        groups.append(PairGroup(h, tuple(flat)))
    if not groups:
        raise DishonestOracleError("no shift has enough supported blocks")
    return Step1Result(n, top, answers, zeros, d_rem, known, adjusted,
                       tuple(groups), clean)


# ---------- interpolation: step 2 ----------

@dataclass
class RankLog:
    """Dichotomy bookkeeping for system extensions.

    Each extension event classifies every admissible y; if two or more keep
    the augmented rank, both endpoints of the affine row pencil must already
    lie in the row space (then every y keeps it).  Violations of that
    dichotomy are counted.
    """

    events: int = 0
    violations: int = 0
    multi_preserving: int = 0
    samples: list = field(default_factory=list)
    sample_cap: int = 0


@dataclass
class CandidateSet:
    polys: list[Poly]
    provenance: dict
    rank: RankLog


def _reduce_row(row, basis, p):
    row = list(row)
    for pivot, brow in basis:
        f = row[pivot]
        if f:
            row = [(a - f * b) % p for a, b in zip(row, brow)]
    return row


def _extend_basis(basis, row, pivot, p):
    inv = pow(row[pivot], -1, p)
    row = [c * inv % p for c in row]
    out = []
    for pv, br in basis:
        f = br[pivot]
        if f:
            br = [(a - f * b) % p for a, b in zip(br, row)]
        out.append((pv, br))
    out.append((pivot, row))
    out.sort()
    return out


def step2_candidates(group: PairGroup, d: int, p: int,
                     rank_log: RankLog | None = None) -> CandidateSet:
    """Enumerate monic degree-d polynomials consistent with some root choice.

    Backtracking over the group's pairs: each pair is either skipped or
    contributes one equation f(x) = y * f(x+h) for an admissible y, and only
    rank-increasing equations are kept.  Every time the system reaches full
    rank d it is solved and the solution recorded.  The result is exactly the
    set of monic degree-d polynomials recoverable from full-rank subsystems.
    """
    if rank_log is None:
        rank_log = RankLog()
    pairs = []
    for pr in group.pairs:
        xp = [pow(pr.x, k, p) for k in range(d + 1)]
        hp = [pow(pr.x + pr.h, k, p) for k in range(d + 1)]
        w_vec = [xp[k] for k in range(d)] + [(-xp[d]) % p]
        u_vec = [hp[k] for k in range(d)] + [(-hp[d]) % p]
        rows = {}
        for y in pr.roots:
            rows[y] = [(w - y * u) % p for w, u in zip(w_vec, u_vec)]
        pairs.append((pr, u_vec, w_vec, rows))

    found: dict[tuple, tuple] = {}

    def emit(basis, chosen):
        coeffs = [0] * d
        for pivot, brow in basis:
            coeffs[pivot] = brow[d]
        key = tuple(coeffs) + (1,)
        if key not in found:
            found[key] = (group.h, tuple(chosen))

    def walk(idx, basis, chosen):
        if len(basis) == d:
            emit(basis, chosen)
            return
        if idx == len(pairs) or len(basis) + (len(pairs) - idx) < d:
            return
        pr, u_vec, w_vec, rows = pairs[idx]
        preserving = 0
        extenders = []
        for y in pr.roots:
            red = _reduce_row(rows[y], basis, p)
            pivot = next((k for k in range(d) if red[k]), None)
            if pivot is not None:
                extenders.append((y, red, pivot))
            elif red[d] == 0:
                preserving += 1
        rank_log.events += 1
        if preserving >= 2:
            rank_log.multi_preserving += 1
            ured = _reduce_row(u_vec, basis, p)
            wred = _reduce_row(w_vec, basis, p)
            if any(ured) or any(wred):
                rank_log.violations += 1
                if len(rank_log.samples) < rank_log.sample_cap:
                    rank_log.samples.append((idx, pr, [b for b in basis]))
        walk(idx + 1, basis, chosen)
        for y, red, pivot in extenders:
            walk(idx + 1, _extend_basis(basis, red, pivot, p),
                 chosen + [(pr.x, y)])

    walk(0, [], [])
    polys = [Poly(p, c) for c in sorted(found)]
    return CandidateSet(polys, dict(found), rank_log)


# ---------- interpolation: step 3 ----------

def choose_m(p: int, e: int, m_cap: int = 64) -> int:
    """Smallest m >= 1 with p >= (2m floor(e^(1/(2m+1))) + 2m + 2) e."""
    for m in range(1, m_cap + 1):
        if p >= (2 * m * iroot(e, 2 * m + 1) + 2 * m + 2) * e:
            return m
    raise NoValidMError("no m <= %d works; p too small relative to e" % m_cap)


@dataclass
class Step3Stats:
    m: int
    filter_top: int
    candidates_in: int
    after_value_filter: int
    survivors: list[Poly] = field(default_factory=list)
    winners: list[Poly] = field(default_factory=list)


def step3_filter(candidates: list[Poly], oracle: PowerOracle, d: int,
                 window: WindowParams, m_cap: int = 64) -> tuple[Poly, Step3Stats]:
    """Keep candidates matching the oracle on d(m-1)+2 points, drop the ones
    that are not square-free, then identity-test the rest; exactly one must
    survive."""
    p, e = oracle.p, oracle.e
    m = choose_m(p, e, m_cap)
    top = d * (m - 1) + 1
    if top >= p:
        raise DomainError("filter range exceeds the field")
    answers = {x: oracle.query(x) for x in range(top + 1)}
    stage1 = [g for g in candidates
              if all(pow(g(x), e, p) == answers[x] for x in answers)]
    stage2 = [g for g in stage1 if is_square_free(g)]
    stats = Step3Stats(m=m, filter_top=top, candidates_in=len(candidates),
                       after_value_filter=len(stage1), survivors=stage2)
    for g in stage2:
        sim = LocalPowerOracle(p, e, g)
        verdict = identity_test(oracle, sim, window)
        if not verdict.different:
            stats.winners.append(g)
    if len(stats.winners) == 1:
        return stats.winners[0], stats
    if not stats.winners:
        raise InconsistentOracleError("inconsistent oracle: no candidate survives filtering")
    raise AmbiguousCandidatesError(
        "indistinguishable candidates: %d survive the window" % len(stats.winners),
        stats.winners)


# ---------- full pipeline ----------

@dataclass
class InterpolationResult:
    poly: Poly
    p: int
    e: int
    d: int
    n: int
    query_count: int
    window: WindowParams | None
    m: int | None
    zeros: tuple[int, ...]
    candidates: list[Poly]
    candidates_examined: int
    survivors: int
    rank_events: int
    rank_violations: int
    groups: int
    query_budget: int
    wall_time_ms: float


def interpolate(oracle: PowerOracle, d: int, n: int = 1, c1=1,
                m_cap: int = 64, ctx: PrimeFieldCtx | None = None) -> InterpolationResult:
    """Recover the hidden monic degree-d polynomial behind a power oracle.

    Queries are deduplicated internally, so the reported query count is the
    number of distinct points sent to the underlying oracle.
    """
    t0 = time.perf_counter()
    p, e = oracle.p, oracle.e
    if d < 1:
        raise DomainError("d must be positive")
    memo = oracle if isinstance(oracle, CachingOracle) else CachingOracle(oracle)

    if e == 1:
        points = [(x, memo.query(x)) for x in range(d + 1)]
        poly = lagrange_interpolate(p, points)
        if poly.degree != d or not poly.is_monic:
            raise InconsistentOracleError("answers do not match a monic degree-d polynomial")
        ms = (time.perf_counter() - t0) * 1000.0
        return InterpolationResult(poly, p, e, d, n, memo.query_count, None, None,
                                   (), [poly], 1, 1, 0, 0, 0, d + 1, ms)

    if ctx is None:
        ctx = PrimeFieldCtx(p)
    window = compute_window(p, e, d, c1)
    s1 = step1_collect(memo, d, n, ctx)
    rank = RankLog()
    if s1.d_rem == 0:
        candidates = [s1.known_factor]
    else:
        merged: dict[tuple, tuple] = {}
        for grp in s1.groups:
            cs = step2_candidates(grp, s1.d_rem, p, rank_log=rank)
            for cand in cs.polys:
                lifted = cand * s1.known_factor if s1.zeros else cand
                merged.setdefault(lifted.coeffs, cs.provenance[cand.coeffs])
        candidates = [Poly(p, c) for c in sorted(merged)]
    winner, s3 = step3_filter(candidates, memo, d, window, m_cap)
    budget = ((2 * d - 1) * n * n + n + d * (s3.m - 1) + 2
              + len(s3.survivors) * window.H)
    ms = (time.perf_counter() - t0) * 1000.0
    return InterpolationResult(winner, p, e, d, n, memo.query_count, window,
                               s3.m, s1.zeros, candidates, len(candidates),
                               len(s3.survivors), rank.events, rank.violations,
                               len(s1.groups), budget, ms)


def naive_power_interpolate(oracle: PowerOracle, d: int) -> Poly:
    """Reference cross-check: interpolate f^e from d*e+1 points, then take the
    e-th root; only valid when d*e < p."""
    p, e = oracle.p, oracle.e
    if d * e + 1 > p:
        raise DomainError("need d*e + 1 distinct points")
    points = [(x, oracle.query(x)) for x in range(d * e + 1)]
    big = lagrange_interpolate(p, points)
    if big.degree != d * e or not big.is_monic:
        raise InconsistentOracleError("answers do not match a monic power")
    return poly_power_root(big, e)
