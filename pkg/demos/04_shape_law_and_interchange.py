"""The insertion-shape law and stage interchangeability.

With zero-inclusive geometric entries of weight q_j per stage, the
insertion shape is distributed as a(q)^N s_l(q) #SSYT(l over N letters),
a law symmetric in the weights; reordering tandem stages therefore leaves
the joint output law unchanged.
"""

from collections import Counter

from dualq import (
    Seed,
    interchange_experiment,
    shape_law_experiment,
    shape_pmf,
    transition_prob,
)
from dualq.rsk import tableau_of, shape
import numpy as np

q = (0.3, 0.5)
N = 4
reps = 30_000

# simulate shapes directly to eyeball the law
gen = Seed(12).generator()
cols = [np.floor(np.log1p(-gen.random((reps, N))) / np.log(qj)).astype(int) for qj in q]
counts = Counter()
for r in range(reps):
    word = []
    for i in range(N):
        for j, c in enumerate(cols):
            word.extend([j + 1] * c[r, i])
    counts[shape(tableau_of(word))] += 1

print(f"shape law at q={q}, N={N} ({reps} samples)")
print(f"{'shape':<12}{'observed':>10}{'predicted':>11}")
for l, c in counts.most_common(8):
    print(f"{str(l):<12}{c / reps:>10.4f}{shape_pmf(l, q, N):>11.4f}")

print("\none-row growth probabilities from m=(2,):")
for l in [(2,), (3,), (3, 1), (4, 2)]:
    print(f"  -> {l}: {transition_prob((2,), l, q):.4f}")

# the packaged experiments run the statistics end to end
rep = shape_law_experiment(q, N, reps, Seed(0))
print(f"\nshape-law experiment verdict: {'pass' if rep.passed else 'FAIL'}")
for r in rep.results:
    print(f"  {r.name:<34} p={r.p_value:.4f}")

rep = interchange_experiment((0.3, 0.6), (1, 0), N, reps, Seed(0))
print(f"\ninterchange experiment (swap stages) verdict: "
      f"{'pass' if rep.passed else 'FAIL'}")
print(f"  mean D under both orders: {rep.diagnostics['mean_D']}")
print(f"  mean R under both orders: {rep.diagnostics['mean_R']}")
