"""Bilinear forms with modular-inverse phases, and their averaged bounds.

A bilinear form here is W = sum over l ~ L, m ~ M with (lm, q) = 1 of
alpha_l * beta_m * e(a * inv(l*m) / q), optionally restricted to the
dyadic product window l*m ~ x.  Coefficients are normalized: construction
rejects |alpha| > 1 or |beta| > 1, so measured values can be compared
against bound cores directly.

The averaged reports sweep q over [Q, 2Q) and compare the measured sums
(maximal or at a fixed twist) with the monomials of the corresponding
square-root cancellation bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accumulate import accumulation_bound, fsum_complex, unit_roots
from .arith import inverse_table
from .errors import CapacityError
from .expsums import _CHUNK_CELLS, ExpSumValue
from .parallel import pmap
from .reports import BoundReport, make_report

_TERM_CAP = 5 * 10 ** 7
_COEFF_SLACK = 1.0 + 1e-12


def dyadic_window(start: float) -> np.ndarray:
    """Integers n with start <= n < 2*start, as an int64 array."""
    if not start > 0:
        raise ValueError(f"need a positive range start, got {start}")
    return np.arange(math.ceil(start), math.ceil(2 * start), dtype=np.int64)


def _check_coeffs(name: str, coeffs, window: np.ndarray):
    if coeffs is None:
        return None
    arr = np.asarray(coeffs)
    if arr.shape != window.shape:
        raise ValueError(
            f"{name} has length {arr.shape}, window needs {window.shape}"
        )
    if arr.size and np.abs(arr).max() > _COEFF_SLACK:
        raise ValueError(f"{name} entries must satisfy |coefficient| <= 1")
    return arr


@dataclass(frozen=True)
class BilinearSpec:
    """One bilinear form: ranges, coefficients, twist and modulus.

    alpha (on l ~ L) and beta (on m ~ M) are sequences aligned with the
    integer windows; None stands for unit coefficients, and a unit beta
    marks the form as Type I.  restrict_lm, when set to x, keeps only the
    pairs with x <= l*m < 2x.
    """

    L: float
    M: float
    a: int
    q: int
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    restrict_lm: float | None = None

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"need modulus >= 2, got {self.q}")
        object.__setattr__(self, "alpha", _check_coeffs("alpha", self.alpha, self.l_values))
        object.__setattr__(self, "beta", _check_coeffs("beta", self.beta, self.m_values))
        if self.restrict_lm is not None and not self.restrict_lm > 0:
            raise ValueError(f"restrict_lm must be positive, got {self.restrict_lm}")

    @property
    def l_values(self) -> np.ndarray:
        return dyadic_window(self.L)

    @property
    def m_values(self) -> np.ndarray:
        return dyadic_window(self.M)

    @property
    def is_type1(self) -> bool:
        return self.beta is None


def _restricted(l: int, ms: np.ndarray, beta, x: float | None):
    """The m values (and aligned beta entries) with l*m inside the product window."""
    if x is None:
        return ms, beta
    prod = l * ms
    mask = (prod >= x) & (prod < 2 * x)
    return ms[mask], (None if beta is None else beta[mask])


def bilinear_sum(spec: BilinearSpec) -> ExpSumValue:
    """Evaluate the bilinear form exactly as defined, term by term.

    Terms are accumulated with a correctly rounded sum in (l, m) order,
    so the result is deterministic and, for matching inputs, bitwise
    reproducible across equivalent call paths.
    """
    ls = spec.l_values
    ms = spec.m_values
    if len(ls) * len(ms) > _TERM_CAP:
        raise CapacityError(
            f"bilinear form has {len(ls) * len(ms)} candidate terms, cap is {_TERM_CAP}"
        )
    q = spec.q
    inv = inverse_table(q)
    roots = unit_roots(q)
    a_mod = spec.a % q

    re_parts, im_parts, w_parts = [], [], []
    count = 0
    for i, l in enumerate(ls):
        l = int(l)
        al = 1.0 if spec.alpha is None else spec.alpha[i]
        if al == 0:
            continue
        msub, bsub = _restricted(l, ms, spec.beta, spec.restrict_lm)
        if len(msub) == 0:
            continue
        iv = inv[(l % q) * (msub % q) % q]
        good = iv > 0
        if bsub is not None:
            bsub = bsub[good]
        iv = iv[good]
        if len(iv) == 0:
            continue
        idx = (a_mod * iv) % q
        coeff = al * (np.ones(len(iv)) if bsub is None else bsub)
        terms = coeff * roots[idx]
        re_parts.append(terms.real)
        im_parts.append(terms.imag)
        w_parts.append(np.abs(coeff))
        count += len(iv)
    if count == 0:
        return ExpSumValue(0j, 0, 0.0, 0.0)
    value = fsum_complex(
        np.concatenate(re_parts).tolist(), np.concatenate(im_parts).tolist()
    )
    weight_sum = math.fsum(np.concatenate(w_parts).tolist())
    return ExpSumValue(
        value=value,
        term_count=count,
        weight_sum=weight_sum,
        accumulation_error_bound=accumulation_bound(weight_sum, value),
    )


def _phase_histogram(q, ls, alpha, ms, beta, restrict):
    """Bucket the coefficients by the residue class of inv(l*m) modulo q.

    Returns (complex histogram of length q, sum of |alpha_l * beta_m| over
    the included pairs).
    """
    inv = inverse_table(q)
    h_re = np.zeros(q)
    h_im = np.zeros(q)
    has_im = False
    weight = 0.0
    for i, l in enumerate(ls):
        l = int(l)
        al = 1.0 if alpha is None else alpha[i]
        if al == 0:
            continue
        msub, bsub = _restricted(l, ms, beta, restrict)
        if len(msub) == 0:
            continue
        iv = inv[(l % q) * (msub % q) % q]
        good = iv > 0
        if bsub is not None:
            bsub = bsub[good]
        iv = iv[good]
        if len(iv) == 0:
            continue
        coeff = al * (np.ones(len(iv)) if bsub is None else np.asarray(bsub))
        coeff = np.asarray(coeff, dtype=np.complex128)
        h_re += np.bincount(iv, weights=coeff.real, minlength=q)
        if np.any(coeff.imag):
            has_im = True
            h_im += np.bincount(iv, weights=coeff.imag, minlength=q)
        weight += float(np.abs(coeff).sum())
    h = h_re + 1j * h_im if has_im else h_re.astype(np.complex128)
    return h, weight


def _max_abs_over_twists(h: np.ndarray, q: int) -> float:
    """max over units a of |sum_r h[r] e(a r / q)|, by chunked direct scan."""
    support = np.flatnonzero(h)
    if len(support) == 0:
        return 0.0
    vals = h[support]
    roots = unit_roots(q)
    twists = np.arange(1, q, dtype=np.int64)
    twists = twists[np.gcd(twists, q) == 1]
    best = 0.0
    rows = max(1, _CHUNK_CELLS // len(support))
    for start in range(0, len(twists), rows):
        chunk = twists[start : start + rows]
        idx = (chunk[:, None] * support[None, :]) % q
        mags = np.abs((roots[idx] * vals).sum(axis=1))
        best = max(best, float(mags.max()))
    return best


def _abs_at_twist(h: np.ndarray, q: int, a: int) -> float:
    support = np.flatnonzero(h)
    if len(support) == 0:
        return 0.0
    roots = unit_roots(q)
    idx = (a % q) * support % q
    return abs(complex((roots[idx] * h[support]).sum()))


def _sweep(Q, per_q, workers):
    qs = range(Q, 2 * Q)
    return pmap(per_q, qs, workers=workers)


def _validate_sweep(L, M, Q, require_below_q: bool):
    if Q < 2:
        raise ValueError(f"need Q >= 2, got {Q}")
    if not (L >= 1 and M >= 1):
        raise ValueError(f"need L, M >= 1, got ({L}, {M})")
    if require_below_q and not (L <= Q and M <= Q):
        raise ValueError(f"hypothesis 1 <= L, M <= Q violated: L={L}, M={M}, Q={Q}")


def type2_avg_max_report(
    L: float,
    M: float,
    Q: int,
    k: int,
    alpha=None,
    beta=None,
    workers: int = 1,
) -> BoundReport:
    """Sum over q ~ Q of the maximal twisted bilinear form, versus its bound core.

    The core, with the Hoelder parameter k in {1, 2, 3}, is
    Q^(1+1/2k) L^((2k-1)/2k) M^(1/2) + Q L^((2k-1)/2k) M.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"need k in {{1, 2, 3}}, got {k}")
    _validate_sweep(L, M, Q, require_below_q=True)
    ls, ms = dyadic_window(L), dyadic_window(M)
    alpha = _check_coeffs("alpha", alpha, ls)
    beta = _check_coeffs("beta", beta, ms)

    def per_q(q):
        h, weight = _phase_histogram(q, ls, alpha, ms, beta, None)
        return _max_abs_over_twists(h, q), weight

    results = _sweep(Q, per_q, workers)
    lhs = math.fsum(r[0] for r in results)
    trivial = math.fsum(r[1] for r in results)
    e = (2 * k - 1) / (2 * k)
    return make_report(
        name="type2-avg-max",
        params={"L": L, "M": M, "Q": Q, "k": k},
        lhs=lhs,
        rhs_terms={
            "Q^(1+1/2k)*L^((2k-1)/2k)*M^(1/2)": Q ** (1 + 1 / (2 * k)) * L ** e * M ** 0.5,
            "Q*L^((2k-1)/2k)*M": Q * L ** e * M,
        },
        trivial_bound=trivial,
        extra={"moduli": Q},
    )


def type2_fixed_a_report(
    a: int,
    L: float,
    M: float,
    Q: int,
    alpha=None,
    beta=None,
    workers: int = 1,
) -> BoundReport:
    """Sum over q ~ Q of the bilinear form at one fixed twist a > 0.

    The core is (1 + a/(L M Q))^(1/2) * (Q L M^(1/2) + Q^(1/2) L^(5/4) M^(3/2)).
    """
    if a < 1:
        raise ValueError(f"need a >= 1, got {a}")
    _validate_sweep(L, M, Q, require_below_q=True)
    ls, ms = dyadic_window(L), dyadic_window(M)
    alpha = _check_coeffs("alpha", alpha, ls)
    beta = _check_coeffs("beta", beta, ms)

    def per_q(q):
        h, weight = _phase_histogram(q, ls, alpha, ms, beta, None)
        return _abs_at_twist(h, q, a), weight

    results = _sweep(Q, per_q, workers)
    lhs = math.fsum(r[0] for r in results)
    trivial = math.fsum(r[1] for r in results)
    factor = math.sqrt(1.0 + a / (L * M * Q))
    return make_report(
        name="type2-fixed-a",
        params={"a": a, "L": L, "M": M, "Q": Q},
        lhs=lhs,
        rhs_terms={
            "Q*L*M^(1/2)": factor * Q * L * math.sqrt(M),
            "Q^(1/2)*L^(5/4)*M^(3/2)": factor * math.sqrt(Q) * L ** 1.25 * M ** 1.5,
        },
        trivial_bound=trivial,
        extra={"size_factor": factor},
    )


def type1_report(
    L: float,
    M: float,
    Q: int,
    a: int | None = None,
    alpha=None,
    workers: int = 1,
) -> BoundReport:
    """Sum over q ~ Q of the Type I form (unit beta), versus L*M + Q^(3/2)*L.

    With a = None the per-modulus maximum over twists is measured; with a
    fixed twist the sum at that twist is measured against the same core.
    """
    _validate_sweep(L, M, Q, require_below_q=False)
    ls, ms = dyadic_window(L), dyadic_window(M)
    alpha = _check_coeffs("alpha", alpha, ls)

    def per_q(q):
        h, weight = _phase_histogram(q, ls, alpha, ms, None, None)
        if a is None:
            return _max_abs_over_twists(h, q), weight
        return _abs_at_twist(h, q, a), weight

    results = _sweep(Q, per_q, workers)
    lhs = math.fsum(r[0] for r in results)
    trivial = math.fsum(r[1] for r in results)
    params = {"L": L, "M": M, "Q": Q}
    if a is not None:
        params["a"] = a
    return make_report(
        name="type1",
        params=params,
        lhs=lhs,
        rhs_terms={"L*M": L * M, "Q^(3/2)*L": Q ** 1.5 * L},
        trivial_bound=trivial,
    )
