"""
Two-qubit link gates and word compiling
=======================================

Linking numbers set the strength of a two-qubit interaction. Separately, a
short search over braid words approximates arbitrary single-qubit targets.
"""

import numpy as np

from knotgate.compiler import Compiler, coverage, haar_targets
from knotgate.fpgroup import format_word
from knotgate.linkgate import LinkGateSpec, entangling_power, evolve, scan_local_times
from knotgate.reps import fibonacci_rep

hopf = LinkGateSpec.from_catalog("hopf")
for t in np.linspace(0, np.pi / 2, 5):
    print(f"t={t:.3f}  lambda_min={entangling_power(evolve(hopf, t)):.4f}")

roots, _ = scan_local_times(hopf)
print("times where the gate is local:", np.round(roots, 6))

# compile a few random targets with words of length at most 10
fib = fibonacci_rep()
comp = Compiler(fib, 10)
for target in haar_targets(5, seed=1):
    r = comp.compile(target)
    print(f"{format_word(r.word):>12s}  dist={r.dist:.4f}")

# longer words cover more of SU(2)
for n in (4, 6, 8, 10):
    print(n, coverage(fib, 0.2, n, 200, seed=0).covered_fraction)
