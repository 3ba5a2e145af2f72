"""Exponential sums over primes and complete or short Kloosterman-type sums.

The central object is the sum of e(a * inv(p) / q) over primes in the
dyadic window [x, 2x), where inv(p) is the inverse of p modulo q and
e(t) = exp(2*pi*i*t).  Complete sums over a full period (Kloosterman
sums) and short sums over an interval share the same phase machinery.

Every sum reduces its phase to an exact residue class first and then
indexes a unit-root table, so results are reproducible bit for bit, and
conjugate symmetry in the twist parameter holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accumulate import accumulation_bound, fsum_complex, unit_roots
from .arith import (
    MultiplicativeTables,
    PrimeTable,
    batch_inverses,
    memory_budget,
    mod_inverse,
    shared_prime_table,
    shared_tables,
)
from .errors import CapacityError, ConsistencyError
from .reports import BoundReport, make_report

#: Largest modulus a full twist scan (max over a) will attempt by default.
DEFAULT_SCAN_LIMIT = 10 ** 6

#: Matrix chunk size (cells) for vectorized twist scans; fixed so that
#: chunk boundaries never depend on worker counts or available memory.
_CHUNK_CELLS = 1 << 22

_WEIGHTS = ("unit", "von_mangoldt")


@dataclass(frozen=True)
class ExpSumQuery:
    """Parameters of a prime exponential sum: twist a, modulus q, window [x, 2x)."""

    a: int
    q: int
    x: float

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"need modulus >= 2, got {self.q}")
        if not self.x >= 2:
            raise ValueError(f"need x >= 2, got {self.x}")


@dataclass(frozen=True)
class ExpSumValue:
    """An accumulated sum plus enough metadata to judge its accuracy."""

    value: complex
    term_count: int
    weight_sum: float
    accumulation_error_bound: float

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def _phase_indices(ns, a: int, q: int, use_batch: bool) -> tuple[list[int], list[int]]:
    """Residues a*inv(n) mod q for the coprime entries of ns, with positions kept."""
    a_mod = a % q
    kept: list[int] = []
    idx: list[int] = []
    ns = [int(n) for n in ns]
    if use_batch:
        invs = batch_inverses(ns, q)
        for pos, inv in enumerate(invs):
            if inv is not None:
                kept.append(pos)
                idx.append(a_mod * inv % q)
    else:
        for pos, n in enumerate(ns):
            if math.gcd(n, q) == 1:
                kept.append(pos)
                idx.append(a_mod * mod_inverse(n, q) % q)
    return kept, idx


def inverse_phase_sum(ns, a: int, q: int, weights=None, use_batch: bool = True) -> ExpSumValue:
    """Sum of w_n * e(a * inv(n) / q) over the given integers.

    Entries sharing a factor with q are skipped.  weights is an optional
    sequence aligned with ns; omitted means unit weights.
    """
    if q < 2:
        raise ValueError(f"need modulus >= 2, got {q}")
    roots = unit_roots(q)
    kept, idx = _phase_indices(ns, a, q, use_batch)
    if not kept:
        return ExpSumValue(0j, 0, 0.0, 0.0)
    terms = roots[np.asarray(idx, dtype=np.intp)]
    if weights is None:
        weight_sum = float(len(kept))
    else:
        w = np.asarray(weights, dtype=np.float64)[np.asarray(kept, dtype=np.intp)]
        terms = terms * w
        weight_sum = math.fsum(np.abs(w).tolist())
    value = fsum_complex(terms.real.tolist(), terms.imag.tolist())
    return ExpSumValue(
        value=value,
        term_count=len(kept),
        weight_sum=weight_sum,
        accumulation_error_bound=accumulation_bound(weight_sum, value),
    )


def prime_sum(
    query: ExpSumQuery,
    weight: str = "unit",
    tables: MultiplicativeTables | None = None,
    use_batch: bool = True,
) -> ExpSumValue:
    """Exponential sum over the dyadic prime window of the query.

    Args:
        query: twist, modulus and window start.
        weight: "unit" sums over primes p ~ x; "von_mangoldt" sums
            Lambda(n) * e(a * inv(n) / q) over all n ~ x.
        tables: tables covering 2x; sieved on demand when omitted.
        use_batch: switch between batched and per-element inversion
            (both yield bitwise identical results; the flag exists so the
            equivalence stays testable).
    """
    if weight not in _WEIGHTS:
        raise ValueError(f"weight must be one of {_WEIGHTS}, got {weight!r}")
    need = int(math.ceil(2 * query.x))
    if tables is None:
        tables = shared_tables(need)
    table = tables.prime_table
    table.require_coverage(2 * query.x)
    if weight == "unit":
        ns = table.primes_between(query.x, 2 * query.x)
        return inverse_phase_sum(ns, query.a, query.q, use_batch=use_batch)
    lo, hi = int(math.ceil(query.x)), int(math.ceil(2 * query.x))
    window = np.arange(lo, hi, dtype=np.int64)
    pp = tables.vm_prime[window]
    sel = pp > 0
    ns = window[sel]
    weights = np.log(pp[sel].astype(np.float64))
    return inverse_phase_sum(ns, query.a, query.q, weights=weights, use_batch=use_batch)


def max_prime_sum(
    q: int,
    x: float,
    table: PrimeTable | None = None,
    scan_limit: int = DEFAULT_SCAN_LIMIT,
) -> tuple[int, float]:
    """Maximum of |prime_sum| over twists a coprime to q, with its argmax.

    Scans only 1 <= a <= q/2 and relies on exact conjugate symmetry for
    the upper half; ties go to the smallest a.  Cost is O(q * pi-range),
    so the modulus is checked against scan_limit first.
    """
    if q < 2:
        raise ValueError(f"need modulus >= 2, got {q}")
    if not x >= 2:
        raise ValueError(f"need x >= 2, got {x}")
    if q > scan_limit:
        raise CapacityError(f"modulus {q} exceeds the twist-scan limit {scan_limit}")
    if q >= 2 ** 31:
        raise CapacityError(f"modulus {q} too large for the vectorized twist scan")
    if table is None:
        table = shared_prime_table(int(math.ceil(2 * x)))
    table.require_coverage(2 * x)

    candidates = np.arange(1, q // 2 + 1, dtype=np.int64)
    candidates = candidates[np.gcd(candidates, q) == 1]
    primes = [int(p) for p in table.primes_between(x, 2 * x) if q % int(p) != 0]
    if not primes:
        return int(candidates[0]), 0.0
    invs = np.asarray(
        [v for v in batch_inverses(primes, q)], dtype=np.int64
    )
    roots = unit_roots(q)

    best_a, best_mag = int(candidates[0]), -1.0
    rows = max(1, _CHUNK_CELLS // max(1, len(invs)))
    for start in range(0, len(candidates), rows):
        chunk = candidates[start : start + rows]
        idx = (chunk[:, None] * invs[None, :]) % q
        mags = np.abs(roots[idx].sum(axis=1))
        j = int(mags.argmax())
        if mags[j] > best_mag:
            best_mag = float(mags[j])
            best_a = int(chunk[j])
    return best_a, best_mag


def kloosterman(a: int, b: int, q: int) -> float:
    """Complete sum of e((a*n + b*inv(n)) / q) over units n modulo q.

    The imaginary part must vanish (terms pair off under n -> q - n); it
    is asserted below 1e-9 and the real part is returned.
    """
    if q < 2:
        raise ValueError(f"need modulus >= 2, got {q}")
    roots = unit_roots(q)
    a_mod, b_mod = a % q, b % q
    re, im = [], []
    for n, inv in enumerate(batch_inverses(range(1, q + 1), q), start=1):
        if inv is None:
            continue
        t = roots[(a_mod * n + b_mod * inv) % q]
        re.append(t.real)
        im.append(t.imag)
    value = fsum_complex(re, im)
    if abs(value.imag) >= 1e-9:
        raise ConsistencyError(
            f"Kloosterman sum K({a},{b};{q}) has imaginary part {value.imag:.3e}"
        )
    return value.real


def kloosterman_grid(q: int) -> np.ndarray:
    """All Kloosterman sums modulo q at once: grid[a, b] for 0 <= a, b < q.

    Splits each term as e(a*n/q) * e(b*inv(n)/q) and contracts over n with
    a matrix product, which is how full-sweep checks stay fast.  Entries
    agree with kloosterman() to well below 1e-9.
    """
    if q < 2:
        raise ValueError(f"need modulus >= 2, got {q}")
    need = 3 * q * q * 16
    if need > memory_budget():
        raise CapacityError(f"Kloosterman grid for q={q} needs about {need} bytes")
    ns, invs = [], []
    for n, inv in enumerate(batch_inverses(range(1, q + 1), q), start=1):
        if inv is not None:
            ns.append(n)
            invs.append(inv)
    ns = np.asarray(ns, dtype=np.int64)
    invs = np.asarray(invs, dtype=np.int64)
    roots = unit_roots(q)
    twists = np.arange(q, dtype=np.int64)
    left = roots[(twists[:, None] * ns[None, :]) % q]
    right = roots[(twists[:, None] * invs[None, :]) % q]
    return left @ right.T


def short_inverse_sum(
    a: int, q: int, lower: float, upper: float, length_limit: int = 10 ** 7
) -> ExpSumValue:
    """Sum of e(a * inv(n) / q) over integers lower < n <= upper coprime to q."""
    if q < 2:
        raise ValueError(f"need modulus >= 2, got {q}")
    if not 0 <= lower <= upper:
        raise ValueError(f"need 0 <= lower <= upper, got ({lower}, {upper})")
    if upper - lower > length_limit:
        raise CapacityError(f"interval length {upper - lower} exceeds {length_limit}")
    ns = range(math.floor(lower) + 1, math.floor(upper) + 1)
    return inverse_phase_sum(ns, a, q, use_batch=True)


def weil_ratio(a: int, q: int, lower: float, upper: float) -> BoundReport:
    """Measured short inverse sum against its square-root cancellation core.

    The core is gcd(a, q) * ((upper - lower)/q + 1) + sqrt(q); the report
    carries the measured magnitude, both core terms, and their ratio.
    """
    value = short_inverse_sum(a, q, lower, upper)
    g = math.gcd(a, q)
    return make_report(
        name="weil-ratio",
        params={"a": a, "q": q, "lower": lower, "upper": upper},
        lhs=value.magnitude,
        rhs_terms={
            "gcd(a,q)*((Z-Y)/q+1)": g * ((upper - lower) / q + 1.0),
            "sqrt(q)": math.sqrt(q),
        },
        trivial_bound=float(max(0, math.floor(upper) - math.floor(lower))),
        extra={"terms": value.term_count},
    )
