"""Exact counting: unit-fraction equations, inverse congruences, square-full numbers.

Counts here are exact integers.  Each count has two independent routes, a
naive enumeration over tuples and a convolution over values or residues,
and the pair is kept side by side so they can be cross-checked instead of
trusting either one alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import batch_inverses
from .errors import CapacityError, ConsistencyError
from .parallel import pmap
from .reports import BoundReport, make_report

_METHODS = ("naive", "convolution")
_NAIVE_TUPLE_CAP = 4 * 10 ** 6
_STATE_CAP = 2 * 10 ** 7


def _check_method(method: str) -> None:
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")


@dataclass(frozen=True)
class CountResult:
    count: int
    method: str
    params: dict


def count_unit_fraction_solutions(k: int, N: int, method: str = "convolution") -> CountResult:
    """Number of 2k-tuples in [1, N]^2k whose unit-fraction halves agree.

    Counts ordered tuples (n_1, ..., n_2k) with
    1/n_1 + ... + 1/n_k = 1/n_{k+1} + ... + 1/n_2k, exactly, in rational
    arithmetic.  The naive method enumerates all tuples; convolution
    buckets the k-fold sums by reduced value and adds squared bucket sizes.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"need k in {{1, 2, 3}}, got {k}")
    if N < 0:
        raise ValueError(f"need N >= 0, got {N}")
    _check_method(method)
    params = {"k": k, "N": N}
    if N == 0:
        return CountResult(0, method, params)

    if method == "naive":
        if N ** (2 * k) > _NAIVE_TUPLE_CAP:
            raise CapacityError(f"naive enumeration of {N ** (2 * k)} tuples is over the cap")
        sums = _ordered_sums(k, N)
        count = sum(1 for s in sums for t in sums if s == t)
        return CountResult(count, method, params)

    if N ** k > _STATE_CAP:
        raise CapacityError(f"{N ** k} partial sums exceed the state cap")
    buckets: dict[Fraction, int] = {Fraction(0): 1}
    for _ in range(k):
        grown: dict[Fraction, int] = {}
        for value, mult in buckets.items():
            for n in range(1, N + 1):
                key = value + Fraction(1, n)
                grown[key] = grown.get(key, 0) + mult
        buckets = grown
    count = sum(mult * mult for mult in buckets.values())
    return CountResult(count, method, params)


def _ordered_sums(k: int, N: int) -> list[Fraction]:
    """All k-fold sums of unit fractions with parts in [1, N], in tuple order."""
    sums = [Fraction(0)]
    for _ in range(k):
        sums = [s + Fraction(1, n) for s in sums for n in range(1, N + 1)]
    return sums


def cross_check_unit_fractions(k: int, N: int) -> int:
    """Run both unit-fraction methods; raise if they disagree."""
    fast = count_unit_fraction_solutions(k, N, "convolution").count
    slow = count_unit_fraction_solutions(k, N, "naive").count
    if fast != slow:
        raise ConsistencyError(
            f"unit-fraction methods disagree at (k={k}, N={N}): {fast} vs {slow}"
        )
    return fast


def _is_squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


def count_squarefull(x: int) -> int:
    """Number of square-full integers in [1, x], exactly.

    Every square-full number is uniquely a^2 * b^3 with b squarefree, so
    the count is a sum of integer square roots over squarefree cubes; no
    sieve is needed and the cost is O(x^(1/3)) squarefree tests.
    """
    if x < 0:
        raise ValueError(f"need x >= 0, got {x}")
    total = 0
    b = 1
    while b * b * b <= x:
        if _is_squarefree(b):
            total += math.isqrt(x // (b * b * b))
        b += 1
    return total


def _coprime_inverses(M: int, q: int) -> np.ndarray:
    invs = [v for v in batch_inverses(range(1, M + 1), q) if v is not None]
    return np.asarray(invs, dtype=np.int64)


def _cyclic_convolve(u: np.ndarray, v: np.ndarray, q: int) -> np.ndarray:
    full = np.convolve(u, v)
    out = full[:q].copy()
    out[: len(full) - q] += full[q:]
    return out


def count_congruence_solutions(k: int, M: int, q: int, method: str = "convolution") -> CountResult:
    """Number of 2k-tuples of units m_i <= M whose inverse halves agree mod q.

    Counts ordered tuples (m_1, ..., m_2k), each coprime to q, with
    inv(m_1) + ... + inv(m_k) = inv(m_{k+1}) + ... + inv(m_2k) (mod q).
    """
    if not 1 <= k <= 4:
        raise ValueError(f"need 1 <= k <= 4, got {k}")
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    if q < 2:
        raise ValueError(f"need modulus >= 2, got {q}")
    _check_method(method)
    params = {"k": k, "M": M, "q": q}
    invs = _coprime_inverses(M, q)
    if len(invs) == 0:
        return CountResult(0, method, params)

    if method == "naive":
        if len(invs) ** k > _STATE_CAP:
            raise CapacityError(f"naive enumeration of {len(invs) ** k} sums is over the cap")
        sums = invs
        for _ in range(k - 1):
            sums = ((sums[:, None] + invs[None, :]) % q).ravel()
        _, mult = np.unique(sums, return_counts=True)
        count = int(sum(int(c) * int(c) for c in mult))
        return CountResult(count, method, params)

    if len(invs) ** (2 * k) >= 2 ** 62:
        raise CapacityError(f"bucket sizes for (k={k}, M={M}) would overflow the dense path")
    hist = np.bincount(invs, minlength=q).astype(np.int64)
    folded = hist
    for _ in range(k - 1):
        folded = _cyclic_convolve(folded, hist, q)
    count = int(np.dot(folded, folded))
    return CountResult(count, method, params)


def cross_check_congruence(k: int, M: int, q: int) -> int:
    """Run both congruence-count methods; raise if they disagree."""
    fast = count_congruence_solutions(k, M, q, "convolution").count
    slow = count_congruence_solutions(k, M, q, "naive").count
    if fast != slow:
        raise ConsistencyError(
            f"congruence-count methods disagree at (k={k}, M={M}, q={q}): {fast} vs {slow}"
        )
    return fast


def classify_tuple(ms) -> int:
    """Integer invariant F separating exact rational identities from congruences.

    For a 2k-tuple (m_1, ..., m_2k) let
    F = (prod m_i) * (1/m_1 + ... + 1/m_k - 1/m_{k+1} - ... - 1/m_2k),
    an exact integer.  F == 0 exactly when the unit-fraction identity
    holds; otherwise any modulus q coprime to every m_i for which the
    inverse congruence holds must divide F.
    """
    ms = [int(m) for m in ms]
    if len(ms) == 0 or len(ms) % 2 != 0:
        raise ValueError(f"need a nonempty tuple of even length, got {len(ms)} entries")
    if any(m < 1 for m in ms):
        raise ValueError("tuple entries must be positive")
    k = len(ms) // 2
    total = math.prod(ms)
    pos = sum(total // m for m in ms[:k])
    neg = sum(total // m for m in ms[k:])
    return pos - neg


def sum_congruence_counts(
    k: int, M: int, Q: int, method: str = "convolution", workers: int = 1
) -> BoundReport:
    """Sum of congruence counts over moduli q ~ Q, versus Q*M^k + M^(2k).

    The left side is the exact integer sum over Q <= q < 2Q; it is also
    exposed in extra["total"] without float rounding.
    """
    if Q < 2:
        raise ValueError(f"need Q >= 2, got {Q}")
    counts = pmap(
        lambda q: count_congruence_solutions(k, M, q, method).count,
        range(Q, 2 * Q),
        workers=workers,
    )
    total = sum(counts)
    return make_report(
        name="jcount-avg",
        params={"k": k, "M": M, "Q": Q},
        lhs=float(total),
        rhs_terms={"Q*M^k": float(Q * M ** k), "M^(2k)": float(M ** (2 * k))},
        extra={"total": total, "moduli": Q},
    )
