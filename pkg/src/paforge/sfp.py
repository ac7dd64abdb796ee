"""Membership and enumeration for degree-budgeted families of sub-normalized
fractional maps.

A fraction f/g with exact degrees (s', t') and value count v belongs to the
length-q family for budgets (s, t) when s' <= s, t' <= t and
q - v <= min(s - s', t - t');  the length-(q+1) family for (s, t, a, b)
relaxes the bound by one when g has a root (the pole absorbs one collision)
and otherwise shifts the budgets to (s + a, t + b).

Two enumerators are provided: a brute-force oracle over all coefficient
tuples, and a fast scan that visits one normalized representative per
scale-and-shift orbit and expands orbits by linear coefficient transforms.
Both return identical, canonically sorted member sets.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Iterator, Optional, Sequence

import numpy as np

from .field import Field
from .fracpoly import FracPoly, ValueProfile, value_count
from .parallel import map_blocks, resolve_workers
from .poly import Poly, gcd

ORACLE_PAIR_CAP = 10**9
_CHUNK_PAIR_BUDGET = 1 << 19

#: Offset pairs admitted by the length-(q+1) maximization, in tie-break order.
OFFSET_CHOICES = ((0, 0), (1, -1), (-1, 1))


class Variant(str, Enum):
    Q = "q"
    Q_PLUS_1 = "q+1"


@lru_cache(maxsize=None)
def field_for_order(q: int) -> Field:
    """The field of order q (q must be a prime power)."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = q
    for f in range(2, int(q**0.5) + 1):
        if q % f == 0:
            p = f
            break
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return Field(p, k)


@dataclass(frozen=True)
class SfpQuery:
    """One enumeration cell: field, length variant, and degree budgets."""

    field: Field
    variant: Variant
    s: int
    t: int
    a: int = 0
    b: int = 0

    def __post_init__(self) -> None:
        q, s, t, a, b = self.field.q, self.s, self.t, self.a, self.b
        if s < 0 or t < 0:
            raise ValueError("degree budgets must be non-negative")
        if s + t > q - 2:
            raise ValueError(f"s+t = {s + t} exceeds q-2 = {q - 2}")
        if self.variant is Variant.Q:
            if a or b:
                raise ValueError("offsets apply only to the q+1 variant")
        else:
            if s + a < 0 or t + b < 0:
                raise ValueError("shifted budgets must be non-negative")
            for total in (s + t + a, s + t + b, s + t + a + b):
                if total > q - 2:
                    raise ValueError("shifted budget total exceeds q-2")

    @property
    def q(self) -> int:
        return self.field.q

    def distance(self) -> int:
        """Minimum distance guaranteed for the array built from this cell."""
        q, s, t = self.q, self.s, self.t
        if self.variant is Variant.Q:
            return q - s - t
        a, b = self.a, self.b
        return min(q - s - t, q - s - t - a - b, q + 1 - s - t - max(a, b))

    def length(self) -> int:
        return self.q if self.variant is Variant.Q else self.q + 1

    def describe(self) -> str:
        core = f"q={self.q},variant={self.variant.value},s={self.s},t={self.t}"
        if self.variant is Variant.Q_PLUS_1:
            core += f",a={self.a},b={self.b}"
        return core


@dataclass(frozen=True)
class SfpResult:
    """Canonically sorted members of one cell plus its distance guarantee."""

    query: SfpQuery
    members: tuple[FracPoly, ...]
    count: int
    guaranteed_distance: int
    elapsed: float

    def manifest(self, tool_version: str = "") -> dict:
        qq = self.query
        return {
            "q": qq.q,
            "variant": qq.variant.value,
            "s": qq.s,
            "t": qq.t,
            "a": qq.a,
            "b": qq.b,
            "count": self.count,
            "argmax": None,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
            "tool_version": tool_version,
        }


# -- membership ---------------------------------------------------------------


def _profile_member_q(prof: ValueProfile, q: int, s: int, t: int) -> bool:
    if not (prof.num_deg <= s and prof.den_deg <= t):
        return False
    return q - prof.v <= min(s - prof.num_deg, t - prof.den_deg)


def _profile_member_q1(
    prof: ValueProfile, q: int, s: int, t: int, a: int, b: int
) -> bool:
    if prof.has_pole:
        if not (prof.num_deg <= s and prof.den_deg <= t):
            return False
        return q - prof.v <= min(s - prof.num_deg, t - prof.den_deg) + 1
    if not (prof.num_deg <= s + a and prof.den_deg <= t + b):
        return False
    return q - prof.v <= min(s + a - prof.num_deg, t + b - prof.den_deg)


def _profile_member(prof: ValueProfile, query: SfpQuery) -> bool:
    if query.variant is Variant.Q:
        return _profile_member_q(prof, query.q, query.s, query.t)
    return _profile_member_q1(prof, query.q, query.s, query.t, query.a, query.b)


def member_q(
    phi: FracPoly, s: int, t: int, profile: Optional[ValueProfile] = None
) -> bool:
    """Length-q membership for budgets (s, t)."""
    prof = profile if profile is not None else value_count(phi)
    return _profile_member_q(prof, phi.field.q, s, t)


def member_q1(
    phi: FracPoly,
    s: int,
    t: int,
    a: int,
    b: int,
    profile: Optional[ValueProfile] = None,
) -> bool:
    """Length-(q+1) membership for budgets (s, t) and offsets (a, b)."""
    prof = profile if profile is not None else value_count(phi)
    return _profile_member_q1(prof, phi.field.q, s, t, a, b)


def is_member(
    phi: FracPoly, query: SfpQuery, profile: Optional[ValueProfile] = None
) -> bool:
    if query.variant is Variant.Q:
        return member_q(phi, query.s, query.t, profile)
    return member_q1(phi, query.s, query.t, query.a, query.b, profile)


# -- brute-force oracle -------------------------------------------------------


def _all_polys(field: Field, max_deg: int, monic: bool) -> Iterator[Poly]:
    q = field.q
    if monic:
        for d in range(max_deg + 1):
            for tail in itertools.product(range(q), repeat=d):
                yield Poly(field, tuple(tail) + (1,))
    else:
        for coeffs in itertools.product(range(q), repeat=max_deg + 1):
            yield Poly(field, coeffs)


def enumerate_oracle(query: SfpQuery) -> SfpResult:
    """Reference enumeration over every coefficient pair, no reductions.

    Value tables are precomputed once per polynomial; the pair loop applies
    the membership inequalities directly to the evaluated ratios.
    """
    started = time.perf_counter()
    F = query.field
    q = F.q
    fmax = query.s + max(query.a, 0)
    gmax = query.t + max(query.b, 0)
    work = q ** (fmax + gmax + 2)
    if work > ORACLE_PAIR_CAP:
        raise ValueError(f"oracle space {work} exceeds cap {ORACLE_PAIR_CAP}")
    points = list(F.elements())
    fs = [(f, [f.eval(a) for a in points]) for f in _all_polys(F, fmax, False)]
    members = []
    one = Poly.one(F)
    for g in _all_polys(F, gmax, monic=True):
        gvals = [g.eval(a) for a in points]
        ginv = [F.inv(v) if v else None for v in gvals]
        has_pole = None in ginv
        for f, fvals in fs:
            if f.is_zero():
                if g.coeffs != (1,):
                    continue
                phi = FracPoly(f, one)
                if is_member(phi, query):
                    members.append(phi)
                continue
            values = {
                F.mul(fv, gi) for fv, gi in zip(fvals, ginv) if gi is not None
            }
            prof = ValueProfile(
                v=len(values),
                has_pole=has_pole,
                num_deg=f.degree,
                den_deg=g.degree,
            )
            if not _profile_member(prof, query):
                continue
            if g.degree > 0 and gcd(f, g).degree != 0:
                continue
            members.append(FracPoly(f, g))
    members.sort(key=FracPoly.sort_key)
    return SfpResult(
        query, tuple(members), len(members), query.distance(),
        time.perf_counter() - started,
    )


# -- fast scan: normalized representatives + orbit expansion -----------------


@dataclass
class _OrbitRecord:
    """One orbit of fractions, summarized by its invariants."""

    num_deg: int
    den_deg: int
    m: int  # q - v
    has_pole: bool
    size: int
    member_rows: Optional[np.ndarray]  # (size, den_deg+1 + num_deg+1), den first


def _accepts(rec: _OrbitRecord, query: SfpQuery) -> bool:
    s2, t2, q = rec.num_deg, rec.den_deg, query.q
    s, t = query.s, query.t
    if query.variant is Variant.Q:
        return s2 <= s and t2 <= t and rec.m <= min(s - s2, t - t2)
    if rec.has_pole:
        return s2 <= s and t2 <= t and rec.m <= min(s - s2, t - t2) + 1
    sa, tb = s + query.a, t + query.b
    return s2 <= sa and t2 <= tb and rec.m <= min(sa - s2, tb - t2)


def _block_thresholds(
    queries: Sequence[SfpQuery], s2: int, t2: int
) -> tuple[int, int]:
    """Most permissive (pole, no-pole) slack over all queries for one block."""
    thr_pole = -1
    thr_nopole = -1
    for qq in queries:
        s, t = qq.s, qq.t
        if qq.variant is Variant.Q:
            if s2 <= s and t2 <= t:
                thr = min(s - s2, t - t2)
                thr_pole = max(thr_pole, thr)
                thr_nopole = max(thr_nopole, thr)
        else:
            if s2 <= s and t2 <= t:
                thr_pole = max(thr_pole, min(s - s2, t - t2) + 1)
            sa, tb = s + qq.a, t + qq.b
            if s2 <= sa and t2 <= tb:
                thr_nopole = max(thr_nopole, min(sa - s2, tb - t2))
    return thr_pole, thr_nopole


def _normalized_num_block(field: Field, s2: int) -> np.ndarray:
    """Coefficient rows of all normalized numerators of exact degree s2."""
    q = field.q
    if s2 == 0:
        return np.array([[1]], dtype=np.int16)
    free = s2 - 1 if s2 % field.p != 0 else s2
    n = q**free
    out = np.zeros((n, s2 + 1), dtype=np.int16)
    out[:, s2] = 1
    ids = np.arange(n)
    for j in range(free):
        out[:, j] = (ids // q**j) % q
    return out


def _monic_den_block(field: Field, t2: int) -> np.ndarray:
    """Coefficient rows of all monic denominators of exact degree t2."""
    q = field.q
    n = q**t2
    out = np.zeros((n, t2 + 1), dtype=np.int16)
    out[:, t2] = 1
    ids = np.arange(n)
    for j in range(t2):
        out[:, j] = (ids // q**j) % q
    return out


def _eval_rows(field: Field, coeffs: np.ndarray) -> np.ndarray:
    """Values of each coefficient row at every field element, shape (N, q)."""
    q = field.q
    if field.k == 1:
        p = field.p
        d = coeffs.shape[1]
        vand = np.empty((d, q), dtype=np.int64)
        for i in range(d):
            vand[i] = [pow(alpha, i, p) for alpha in range(q)]
        return ((coeffs.astype(np.int64) @ vand) % p).astype(np.int16)
    tabs = field.tables()
    mul, add = tabs["mul"], tabs["add"]
    vals = np.zeros((coeffs.shape[0], q), dtype=np.int16)
    alphas = np.arange(q, dtype=np.int16)
    for i in range(coeffs.shape[1] - 1, -1, -1):
        vals = add[mul[vals, alphas[None, :]], coeffs[:, i : i + 1]]
    return vals


@lru_cache(maxsize=None)
def _shift_tensor(field: Field, dmax: int) -> np.ndarray:
    """T[beta, i, j] = coeff of x^i in (x+beta)^j, for the orbit transforms."""
    q = field.q
    T = np.zeros((q, dmax + 1, dmax + 1), dtype=np.int16)
    for beta in range(q):
        bpow = [1]
        for _ in range(dmax):
            bpow.append(field.mul(bpow[-1], beta))
        for j in range(dmax + 1):
            for i in range(j + 1):
                c = field.scalar_int(comb(j, i))
                T[beta, i, j] = field.mul(c, bpow[j - i])
    return T


def _expand_orbit_rows(
    field: Field, fc: np.ndarray, gc: np.ndarray
) -> np.ndarray:
    """All distinct orbit images of one fraction as (den||num) rows, sorted."""
    q = field.q
    df, dg = len(fc) - 1, len(gc) - 1
    T = _shift_tensor(field, max(df, dg))
    if field.k == 1:
        p = field.p
        f_sh = (T[:, : df + 1, : df + 1].astype(np.int64) @ fc.astype(np.int64)) % p
        g_sh = (T[:, : dg + 1, : dg + 1].astype(np.int64) @ gc.astype(np.int64)) % p
        alphas = np.arange(1, q, dtype=np.int64)
        nums = (f_sh[:, None, :] * alphas[None, :, None]) % p
    else:
        tabs = field.tables()
        mul, add = tabs["mul"], tabs["add"]

        def table_matvec(mats: np.ndarray, vec: np.ndarray) -> np.ndarray:
            acc = np.zeros(mats.shape[:2], dtype=np.int16)
            for j in range(len(vec)):
                acc = add[acc, mul[mats[:, :, j], vec[j]]]
            return acc

        f_sh = table_matvec(T[:, : df + 1, : df + 1], fc)
        g_sh = table_matvec(T[:, : dg + 1, : dg + 1], gc)
        alphas = np.arange(1, q, dtype=np.int16)
        nums = mul[f_sh[:, None, :], alphas[None, :, None]]
    dens = np.broadcast_to(g_sh[:, None, :], (q, q - 1, dg + 1))
    rows = np.concatenate(
        [dens, np.broadcast_to(nums, (q, q - 1, df + 1))], axis=2
    ).reshape(q * (q - 1), dg + 1 + df + 1)
    return np.unique(rows.astype(np.int16), axis=0)


def _distinct_counts(ratios: np.ndarray) -> np.ndarray:
    """Distinct entries per row (sentinel counted like any other value)."""
    srt = np.sort(ratios, axis=-1)
    return (srt[..., 1:] != srt[..., :-1]).sum(axis=-1).astype(np.int32) + 1


def _tuple_gcd_is_one(field: Field, fc: Sequence[int], gc: Sequence[int]) -> bool:
    f = Poly(field, tuple(int(c) for c in fc))
    g = Poly(field, tuple(int(c) for c in gc))
    return gcd(f, g).degree == 0


def _scan_block(
    field: Field,
    s2: int,
    t2: int,
    thr_pole: int,
    thr_nopole: int,
    keep_rows: bool,
    workers: int,
) -> list[_OrbitRecord]:
    """Scan one exact-degree block and return its qualifying orbits."""
    q = field.q
    fblock = _normalized_num_block(field, s2)
    gblock = _monic_den_block(field, t2)
    fvals = _eval_rows(field, fblock)
    gvals = _eval_rows(field, gblock)
    pole = (gvals == 0).any(axis=1)
    inv_tab = np.zeros(q, dtype=np.int16)
    for aelem in range(1, q):
        inv_tab[aelem] = field.inv(aelem)
    ginv = inv_tab[gvals]

    nf = len(fblock)
    chunk = max(1, _CHUNK_PAIR_BUDGET // max(nf, 1))
    bounds = [(lo, min(lo + chunk, len(gblock))) for lo in range(0, len(gblock), chunk)]

    if field.k == 1:
        p = field.p

        def pair_m(lo: int, hi: int) -> np.ndarray:
            ratio = (
                fvals[:, None, :].astype(np.int32) * ginv[None, lo:hi, :]
            ) % p
            ratio = ratio.astype(np.int16)
            np.copyto(
                ratio,
                np.int16(q),
                where=np.broadcast_to((gvals[lo:hi] == 0)[None, :, :], ratio.shape),
            )
            v = _distinct_counts(ratio) - pole[None, lo:hi]
            return (q - v).astype(np.int32)

    else:
        mul = field.tables()["mul"]

        def pair_m(lo: int, hi: int) -> np.ndarray:
            ratio = mul[fvals[:, None, :], ginv[None, lo:hi, :]]
            np.copyto(
                ratio,
                np.int16(q),
                where=np.broadcast_to((gvals[lo:hi] == 0)[None, :, :], ratio.shape),
            )
            v = _distinct_counts(ratio) - pole[None, lo:hi]
            return (q - v).astype(np.int32)

    def scan_range(bound: tuple[int, int]) -> list[tuple[int, int, int]]:
        lo, hi = bound
        m = pair_m(lo, hi)
        thr = np.where(pole[None, lo:hi], thr_pole, thr_nopole)
        fi, gi = np.nonzero(m <= thr)
        return [(int(f), int(g) + lo, int(m[f, g])) for f, g in zip(fi, gi)]

    survivors: list[tuple[int, int, int]] = []
    for part in map_blocks(scan_range, bounds, workers):
        survivors.extend(part)

    # Coprimality, then orbit-level dedup keyed by the minimal orbit row.
    orbits: dict[bytes, _OrbitRecord] = {}
    for fi, gi, m in survivors:
        fc, gc = fblock[fi], gblock[gi]
        if s2 > 0 and t2 > 0 and not _tuple_gcd_is_one(field, fc, gc):
            continue
        rows = _expand_orbit_rows(field, fc, gc)
        key = rows[0].tobytes()
        if key not in orbits:
            orbits[key] = _OrbitRecord(
                num_deg=s2,
                den_deg=t2,
                m=int(m),
                has_pole=bool(pole[gi]),
                size=len(rows),
                member_rows=rows if keep_rows else None,
            )
    return [orbits[k] for k in sorted(orbits)]


def _scan_orbits(
    field: Field,
    queries: Sequence[SfpQuery],
    keep_rows: bool,
    workers: Optional[int] = None,
) -> list[_OrbitRecord]:
    """All orbits that any of the queries might count, by exact-degree block."""
    nworkers = resolve_workers(workers)
    smax = max(qq.s + max(qq.a, 0) for qq in queries)
    tmax = max(qq.t + max(qq.b, 0) for qq in queries)
    records: list[_OrbitRecord] = []
    for s2 in range(smax + 1):
        for t2 in range(tmax + 1):
            thr_pole, thr_nopole = _block_thresholds(queries, s2, t2)
            if thr_pole < 0 and thr_nopole < 0:
                continue
            records.extend(
                _scan_block(field, s2, t2, thr_pole, thr_nopole, keep_rows, nworkers)
            )
    return records


def _materialize(field: Field, rec: _OrbitRecord) -> list[FracPoly]:
    dg = rec.den_deg
    out = []
    for row in rec.member_rows:
        den = Poly(field, tuple(int(c) for c in row[: dg + 1]))
        num = Poly(field, tuple(int(c) for c in row[dg + 1 :]))
        out.append(FracPoly(num, den))
    return out


def enumerate_fast(query: SfpQuery, workers: Optional[int] = None) -> SfpResult:
    """Same member set as the oracle, via normalized representatives."""
    started = time.perf_counter()
    records = _scan_orbits(query.field, [query], keep_rows=True, workers=workers)
    members: list[FracPoly] = []
    for rec in records:
        if _accepts(rec, query):
            members.extend(_materialize(query.field, rec))
    members.sort(key=FracPoly.sort_key)
    return SfpResult(
        query, tuple(members), len(members), query.distance(),
        time.perf_counter() - started,
    )


# -- grid maximization --------------------------------------------------------


@dataclass(frozen=True)
class BestCount:
    """Winning cell of a fixed-budget-total maximization."""

    q: int
    k: int
    variant: Variant
    count: int
    s: int
    t: int
    a: int
    b: int
    cell_counts: tuple[tuple[tuple[int, int, int, int], int], ...]
    elapsed: float

    def query(self) -> SfpQuery:
        return SfpQuery(
            field_for_order(self.q), self.variant, self.s, self.t, self.a, self.b
        )

    def manifest(self, tool_version: str = "") -> dict:
        return {
            "q": self.q,
            "variant": self.variant.value,
            "s": self.s,
            "t": self.t,
            "a": self.a,
            "b": self.b,
            "count": self.count,
            "argmax": {"s": self.s, "t": self.t, "a": self.a, "b": self.b},
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
            "tool_version": tool_version,
        }


def grid_queries(q: int, k: int, variant: Variant) -> list[SfpQuery]:
    """All admissible cells with s + t = k (and the three offset choices)."""
    F = field_for_order(q)
    if variant is Variant.Q:
        if k > q - 2:
            raise ValueError(f"k = {k} exceeds q-2 = {q - 2}")
    else:
        if k + 1 > q - 2:
            raise ValueError(f"k+1 = {k + 1} exceeds q-2 = {q - 2}")
    out = []
    for s in range(0, k + 1):
        t = k - s
        if variant is Variant.Q:
            out.append(SfpQuery(F, variant, s, t))
            continue
        for a, b in OFFSET_CHOICES:
            try:
                out.append(SfpQuery(F, variant, s, t, a, b))
            except ValueError:
                continue
    return out


def best_count(
    q: int, k: int, variant: Variant, workers: Optional[int] = None
) -> BestCount:
    """Maximize the member count over all cells with s + t = k.

    Ties break toward the smallest s, then the offset order (0,0), (1,-1),
    (-1,1).
    """
    started = time.perf_counter()
    queries = grid_queries(q, k, variant)
    field = queries[0].field
    records = _scan_orbits(field, queries, keep_rows=False, workers=workers)
    counts: dict[SfpQuery, int] = {qq: 0 for qq in queries}
    for rec in records:
        for qq in queries:
            if _accepts(rec, qq):
                counts[qq] += rec.size
    def rank(qq: SfpQuery) -> tuple[int, int, int]:
        return (-counts[qq], qq.s, OFFSET_CHOICES.index((qq.a, qq.b)))
    best = min(queries, key=rank)
    cells = tuple(
        ((qq.s, qq.t, qq.a, qq.b), counts[qq]) for qq in queries
    )
    return BestCount(
        q, k, variant, counts[best], best.s, best.t, best.a, best.b,
        cells, time.perf_counter() - started,
    )


# -- permutation-polynomial baseline ------------------------------------------


@lru_cache(maxsize=None)
def _pp_degree_census(q: int) -> tuple[int, ...]:
    """counts[k] = permutation polynomials of reduced degree exactly k."""
    if q > 8:
        raise ValueError(f"full permutation enumeration infeasible for q = {q}")
    F = field_for_order(q)
    from .poly import interpolate

    counts = [0] * q
    for image in itertools.permutations(range(q)):
        poly = interpolate(F, list(zip(range(q), image)))
        counts[int(poly.degree)] += 1
    return tuple(counts)


def pp_count(q: int, d: int) -> int:
    """Permutation polynomials over GF(q) of degree <= d."""
    if d > q - 1:
        raise ValueError(f"degree bound {d} exceeds q-1 = {q - 1}")
    census = _pp_degree_census(q)
    return sum(census[: d + 1])
