"""
Square-root growth lemmas
=========================

Two recurrences bound sequences whose increments are of order sqrt(a_n).
The first one holds with its stated constant.  The summed version does not:
already b_1 = C (a0 + sqrt(a0)) can exceed (1 + C) a0.  The sweep below
counts violations for random constants, then the smallest counterexample
is shown by hand.
"""

import numpy as np

from arithdyn.seqlem import lemma_sum_constant, lemma_sum_repaired_constant, sweep, verify_lemma_sum

res = sweep(trials=1000, n_max=1000, seed=0)
print("lemma 0 violations:       ", res.lemma0_violations)
print("summed lemma violations:  ", res.lemma_sum_violations, "of", res.trials)
print("  with max(C^2/4, 2C, 1+C):", res.lemma_sum_repaired_violations)
print("first offenders (a0, C, n):")
for a0, C, n in res.lemma_sum_examples:
    print(f"  {a0:.4f} {C:.4f} {n}")

rep = verify_lemma_sum(1.0, 2.0, 50, strict=False)
print("\na0=1, C=2: Ct =", lemma_sum_constant(2.0), " b_n/(n^2 a0) first terms:",
      np.round(rep.ratios[:4], 4))
print("repaired Ct =", lemma_sum_repaired_constant(2.0))
