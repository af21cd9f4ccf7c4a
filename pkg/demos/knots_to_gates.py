"""
From knot diagrams to braid gates
=================================

Read a planar diagram, reduce its group presentation, then look at the
representations that turn braid generators into single-qubit gates.
"""

import numpy as np

from knotgate.diagram import catalog, wirtinger_presentation
from knotgate.fpgroup import format_word, parse_word, simplify
from knotgate.reps import braid_defect, character_point, fibonacci_rep, kl_family, modular_images

# the trefoil diagram has three arcs, so three generators before reduction
trefoil = catalog("trefoil")
p = wirtinger_presentation(trefoil.pd)
print("Wirtinger:", p)
print("reduced:  ", simplify(p))

# the braid relation holds across the whole feasible range of the family
thetas = np.linspace(np.pi / 6, 5 * np.pi / 6, 9)
for theta in thetas:
    print(f"theta={theta:.3f}  braid defect={braid_defect(kl_family(theta)):.1e}")

# the Fibonacci member: both generators have trace 2cos(7pi/10)
fib = fibonacci_rep()
print("Fibonacci traces:", character_point(fib).coords())

# the same group acting on the upper half plane, with exact integers
for text in ("ab", "aba", "ababab"):
    print(format_word(parse_word(text)), "->", modular_images(parse_word(text)).tolist())
