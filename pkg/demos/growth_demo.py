#!/usr/bin/env python3
"""Measuring how the averaged maximum of prime sums grows.

Sweeps Q with x = Q, averages the worst-twist magnitude over moduli
q ~ Q, fits the growth exponent on a log-log scale, and prints the
exponent ladder the experiment is probing.
"""

import kloosterlab as kl

print("sweep with x = Q (slow part: full twist scans per modulus)")
print("  Q     sum of max |S_q|     trivial")
series = []
for Q in (128, 256, 512, 1024):
    rep = kl.avg_max_report(Q, float(Q), workers=4)
    series.append((Q, rep.lhs))
    print(f"  {Q:4d}  {rep.lhs:14.2f}  {rep.trivial_bound:14.2f}")

fit = kl.exponent_fit(series)
print(f"\nfitted exponent: {fit.slope:.4f}")
print(f"(the trivial bound grows like Q^2, the conjectured truth is Q^1.5)")

# The ladder of proven / conjectured exponents for sum over q~Q of
# max_a |S_q(a; x)| at x = Q, normalised as powers of Q.
print("\nexponent ladder at x = Q:")
Q = 1024.0
for row, value in kl.comparison_table(Q):
    print(f"  {row.label:22s} Q^{row.exponent}  = Q^{row.exponent_value:.4f} "
          f" -> {value:.3e} at Q={Q:.0f}")

# Fixed twist variant, averaged over moduli only.
rep = kl.fixed_a_avg_report(1, 256, 256.0, workers=4)
print(f"\nfixed a=1, Q=256, x=256: lhs = {rep.lhs:.2f}, "
      f"ratio = {rep.ratio:.4f}")
for key, val in rep.rhs_terms.items():
    print(f"  {key} = {val:.2f}")
