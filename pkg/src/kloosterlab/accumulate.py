"""Accumulation helpers for complex exponential sums.

Phases are always reduced to rationals k/q in [0, 1) and looked up in a
unit-root table, so the per-term evaluation error does not grow with the
modulus.  Term streams are summed with math.fsum, which returns the
correctly rounded value of the exact real sum; the error bound attached
to a result therefore only has to cover per-term evaluation error plus
one final rounding.
"""

from __future__ import annotations

import math

import numpy as np

# Conservative per-term phase-evaluation error (argument scaling plus one
# exp call), relative to the term magnitude, and one final-rounding ulp.
# Together they keep the reported bound below term_count * 2**-48 for
# unit-weight sums.
TERM_EPS = 2.0 ** -50
ROUND_EPS = 2.0 ** -52


def unit_roots(q: int) -> np.ndarray:
    """Return the table e(k/q) = exp(2*pi*i*k/q) for k = 0 .. q-1.

    The upper half of the table is stored as the exact conjugate of the
    lower half, and the entry at q/2 (even q) is exactly -1, so conjugate
    symmetry of any sum indexed into this table holds bitwise rather than
    merely up to rounding.
    """
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    roots = np.empty(q, dtype=np.complex128)
    half = q // 2
    k = np.arange(half + 1)
    roots[: half + 1] = np.exp((2j * math.pi / q) * k)
    roots[0] = 1.0
    if q % 2 == 0:
        roots[half] = -1.0
    mirror = (q - 1) // 2
    if mirror >= 1:
        idx = np.arange(1, mirror + 1)
        roots[q - idx] = np.conj(roots[idx])
    return roots


def fsum_complex(re_terms, im_terms) -> complex:
    """Correctly rounded sum of a complex term stream given as two real streams."""
    return complex(math.fsum(re_terms), math.fsum(im_terms))


def accumulation_bound(weight_sum: float, value: complex) -> float:
    """Error bound for a compensated sum of terms of total weight weight_sum."""
    return weight_sum * TERM_EPS + abs(value) * ROUND_EPS
