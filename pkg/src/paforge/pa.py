"""Permutation arrays: Hamming distance, minimum-distance verification,
sharp transitivity checks, and the on-disk array format."""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .parallel import chunk_ranges, map_blocks, resolve_workers

Permutation = tuple[int, ...]

FULL_PAIR_CAP = 10**10
DEFAULT_SAMPLE_PAIRS = 10**6
SAMPLED_NOTE = "sampled check: evidence only, not an exhaustive proof"


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """Left-to-right application: (p o q)(x) = p[q[x]]."""
    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def moved_points(p: Sequence[int]) -> int:
    return sum(1 for i, j in enumerate(p) if i != j)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def hamming_distance(p: Sequence[int], r: Sequence[int]) -> int:
    """Number of points where two equal-length permutations disagree."""
    if len(p) != len(r):
        raise ValueError(f"length mismatch: {len(p)} vs {len(r)}")
    return sum(1 for a, b in zip(p, r) if a != b)


class PermArray:
    """A set of permutations of n points with a claimed minimum distance.

    Point n-1 encodes the extra symbol of length-(q+1) constructions when
    `infinity` is set; rows are stored as a dense integer matrix and are
    required to be pairwise distinct.
    """

    def __init__(
        self,
        rows: Union[np.ndarray, Iterable[Sequence[int]]],
        claimed_distance: int,
        provenance: str = "",
        infinity: bool = False,
    ) -> None:
        arr = np.asarray(rows)
        if arr.ndim != 2:
            raise ValueError("rows must form a 2-D array")
        n = arr.shape[1]
        dtype = np.uint8 if n <= 256 else np.uint16
        arr = arr.astype(dtype, copy=True)
        arr.setflags(write=False)
        if not (1 <= claimed_distance <= n):
            raise ValueError(f"claimed distance {claimed_distance} not in [1, {n}]")
        ref = np.arange(n, dtype=dtype)
        if not (np.sort(arr, axis=1) == ref).all():
            raise ValueError("some row is not a permutation")
        if len(np.unique(arr, axis=0)) != arr.shape[0]:
            raise ValueError("rows must be pairwise distinct")
        self.rows = arr
        self.n = n
        self.claimed_distance = claimed_distance
        self.provenance = provenance
        self.infinity = infinity

    @property
    def M(self) -> int:
        return int(self.rows.shape[0])

    def row(self, i: int) -> Permutation:
        return tuple(int(x) for x in self.rows[i])

    def __len__(self) -> int:
        return self.M

    def __repr__(self) -> str:
        return f"PermArray(n={self.n}, M={self.M}, d={self.claimed_distance})"


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a distance check.

    In FULL mode with a passing result, pairs_checked covers every pair and
    min_observed is the true minimum; a failing FULL check stops at the first
    violating pair in index order.  SAMPLED results are evidence only.
    """

    mode: str
    pairs_checked: int
    min_observed: int
    witness: tuple[int, int]
    passed: bool
    claimed_distance: int
    note: str = ""

    def to_json(self) -> str:
        payload = {
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "min_observed": self.min_observed,
            "witness": list(self.witness),
            "pass": self.passed,
            "claimed_distance": self.claimed_distance,
        }
        if self.note:
            payload["note"] = self.note
        return json.dumps(payload)


def _block_min(rows: np.ndarray, start: int, stop: int, cancel: threading.Event,
               bail_below: Optional[int]) -> tuple[int, tuple[int, int]]:
    """Exact min distance over pairs (i, j), start <= i < stop <= j."""
    best = rows.shape[1] + 1
    pair = (-1, -1)
    for i in range(start, stop):
        if cancel.is_set():
            break
        block = rows[i + 1:]
        if not len(block):
            continue
        d = (block != rows[i]).sum(axis=1)
        j = int(d.argmin())
        if d[j] < best:
            best = int(d[j])
            pair = (i, i + 1 + j)
            if bail_below is not None and best < bail_below:
                cancel.set()
                break
    return best, pair


def _first_violation(rows: np.ndarray, claimed: int) -> tuple[int, int, tuple[int, int]]:
    """First pair (lex order) with distance < claimed; returns pairs scanned."""
    checked = 0
    for i in range(rows.shape[0] - 1):
        block = rows[i + 1:]
        d = (block != rows[i]).sum(axis=1)
        bad = np.nonzero(d < claimed)[0]
        if len(bad):
            j = int(bad[0])
            checked += j + 1
            return int(d[j]), checked, (i, i + 1 + j)
        checked += len(block)
    raise AssertionError("no violation found on replay")


def min_distance(
    pa: PermArray,
    mode: str = "full",
    sample_pairs: int = DEFAULT_SAMPLE_PAIRS,
    seed: int = 0,
    workers: Optional[int] = None,
    pair_cap: int = FULL_PAIR_CAP,
) -> VerifyReport:
    """Verify the claimed minimum distance exhaustively or by sampling."""
    M = pa.M
    if M < 2:
        raise ValueError("need at least two rows to measure a distance")
    total_pairs = M * (M - 1) // 2
    claimed = pa.claimed_distance
    if mode == "full":
        if total_pairs > pair_cap:
            raise ValueError(
                f"{total_pairs} pairs exceed the full-verification cap {pair_cap}"
            )
        nworkers = resolve_workers(workers)
        cancel = threading.Event()
        blocks = chunk_ranges(M - 1, nworkers * 4)
        results = map_blocks(
            lambda b: _block_min(pa.rows, b[0], b[1], cancel, claimed),
            blocks,
            nworkers,
        )
        if cancel.is_set():
            # Deterministic witness: replay sequentially to the first violation.
            observed, checked, witness = _first_violation(pa.rows, claimed)
            return VerifyReport("FULL", checked, observed, witness, False, claimed)
        best, witness = pa.n + 1, (-1, -1)
        for b, w in results:
            if b < best:
                best, witness = b, w
        if best == 1:
            raise AssertionError(
                "observed distance 1: two permutations cannot differ in one point"
            )
        return VerifyReport("FULL", total_pairs, best, witness, best >= claimed, claimed)
    if mode == "sampled":
        if sample_pairs < 1:
            raise ValueError("sample_pairs must be >= 1")
        rng = np.random.Generator(np.random.PCG64(seed))
        best, witness = pa.n + 1, (-1, -1)
        remaining = sample_pairs
        while remaining > 0:
            chunk = min(remaining, 1 << 17)
            i = rng.integers(0, M, size=chunk)
            j = rng.integers(0, M - 1, size=chunk)
            j = j + (j >= i)
            d = (pa.rows[i] != pa.rows[j]).sum(axis=1)
            k = int(d.argmin())
            if d[k] < best:
                best = int(d[k])
                witness = (int(i[k]), int(j[k]))
            remaining -= chunk
        return VerifyReport(
            "SAMPLED", sample_pairs, best, witness, best >= claimed, claimed,
            note=SAMPLED_NOTE,
        )
    raise ValueError(f"unknown mode {mode!r}")


def exact_min_distance(pa: PermArray, workers: Optional[int] = None) -> int:
    """True minimum distance (no early exit); convenience over min_distance."""
    if pa.M < 2:
        raise ValueError("need at least two rows to measure a distance")
    nworkers = resolve_workers(workers)
    cancel = threading.Event()
    blocks = chunk_ranges(pa.M - 1, nworkers * 4)
    results = map_blocks(
        lambda b: _block_min(pa.rows, b[0], b[1], cancel, None), blocks, nworkers
    )
    return min(b for b, _ in results)


def _closure_spot_check(pa: PermArray) -> None:
    rows = {tuple(int(x) for x in r) for r in pa.rows}
    for p in rows:
        for q in rows:
            if compose(p, q) not in rows:
                raise ValueError("rows are not closed under composition")


def is_sharply_k_transitive(pa: PermArray, k: int, check_group: bool = True) -> bool:
    """Whether the rows (assumed a group) act sharply k-transitively.

    Equivalent by counting to: all k-prefixes of rows are distinct and
    M = n!/(n-k)!.  The group property is spot-checked for small M.
    """
    n = pa.n
    if k > n:
        raise ValueError(f"k={k} exceeds degree {n}")
    if check_group and pa.M <= 360:
        _closure_spot_check(pa)
    target = math.factorial(n) // math.factorial(n - k)
    if pa.M != target:
        return False
    prefixes = np.unique(pa.rows[:, :k], axis=0)
    return len(prefixes) == pa.M


def sharpness_matches_distance(pa: PermArray, k: int) -> bool:
    """Check that 'min distance >= n-k+1' and 'sharply k-transitive' agree
    for a group of order n!/(n-k)! given as rows."""
    n = pa.n
    target = math.factorial(n) // math.factorial(n - k)
    if pa.M != target:
        raise ValueError(f"row count {pa.M} is not n!/(n-k)! = {target}")
    lhs = exact_min_distance(pa) >= n - k + 1
    rhs = is_sharply_k_transitive(pa, k)
    return lhs == rhs


# -- file format -------------------------------------------------------------


def format_pa(pa: PermArray) -> str:
    inf = str(pa.n - 1) if pa.infinity else "none"
    head = (
        f"PA n={pa.n} M={pa.M} d={pa.claimed_distance} "
        f"inf={inf} provenance={pa.provenance}"
    )
    body = "\n".join(" ".join(str(int(x)) for x in row) for row in pa.rows)
    return head + "\n" + body + "\n"


def pa_to_json(pa: PermArray) -> str:
    payload = {
        "n": pa.n,
        "M": pa.M,
        "d": pa.claimed_distance,
        "inf": pa.n - 1 if pa.infinity else None,
        "provenance": pa.provenance,
        "rows": [[int(x) for x in row] for row in pa.rows],
    }
    return json.dumps(payload)


def write_pa(pa: PermArray, path: Union[str, Path]) -> None:
    """Write text format, or the JSON mirror for a .json suffix."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(pa_to_json(pa), encoding="utf-8")
    else:
        path.write_text(format_pa(pa), encoding="utf-8")


def _parse_header(line: str) -> dict[str, str]:
    if not line.startswith("PA "):
        raise ValueError("not a PA file: missing 'PA' header")
    fields: dict[str, str] = {}
    rest = line[3:]
    for key in ("n", "M", "d", "inf"):
        if not rest.startswith(f"{key}="):
            raise ValueError(f"malformed PA header near {rest[:20]!r}")
        val, _, rest = rest[len(key) + 1:].partition(" ")
        fields[key] = val
    if not rest.startswith("provenance="):
        raise ValueError("malformed PA header: missing provenance")
    fields["provenance"] = rest[len("provenance="):]
    return fields


def read_pa(path: Union[str, Path]) -> PermArray:
    """Parse either the text format or its JSON mirror."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return PermArray(
            payload["rows"],
            payload["d"],
            provenance=payload.get("provenance", ""),
            infinity=payload.get("inf") is not None,
        )
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty PA file")
    head = _parse_header(lines[0])
    n, m, d = int(head["n"]), int(head["M"]), int(head["d"])
    infinity = head["inf"] != "none"
    if infinity and head["inf"] != str(n - 1):
        raise ValueError(f"unsupported infinity point {head['inf']}")
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        row = [int(tok) for tok in line.split()]
        if len(row) != n:
            raise ValueError(f"row of length {len(row)}, expected {n}")
        rows.append(row)
    if len(rows) != m:
        raise ValueError(f"{len(rows)} rows, header says {m}")
    return PermArray(rows, d, provenance=head["provenance"], infinity=infinity)
