"""
Probing the concavity conjecture
================================

Midpoint concavity of f = S1 / sqrt(e2) on random pairs, and the sign of
dS/de_k at fixed trace. Any counterexample is stored with its inputs and
can be recomputed from the record alone.
"""

from e2entropy import probe_concavity, probe_ek_monotone
from e2entropy.lab import ek_derivatives, replay_counterexample

for n in (2, 3, 5, 8):
    for level in ("spectrum", "matrix"):
        rep = probe_concavity(n, 20000, level, seed=3)
        print(f"concavity N={n} {level:8s} worst margin {rep.worst_margin:.3e}, "
              f"counterexamples {rep.counterexample_count}")
        for rec in rep.counterexamples[:3]:
            print("  replayed margin", replay_counterexample(rec))

for n in (2, 3, 4):
    rep = probe_ek_monotone(n, 2000, seed=3)
    print(f"e_k monotone N={n}: worst dS/de_k {rep.worst_margin:.4f}, "
          f"{rep.resampled} near-degenerate draws replaced")

print("dS/de_k at (0.5, 0.3, 0.2):", ek_derivatives([0.5, 0.3, 0.2]))
