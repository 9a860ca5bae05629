"""
Compatible families of 1-forms
==============================

The left-invariant form z^-1 dz on the simplicial pieces of the bar
construction is compatible with all face and degeneracy maps.  A small
perturbation in one degree is caught by the compatibility check.
"""
import numpy as np

from cayley_wrap.simplicial_forms import (
    canonical_A_family,
    canonical_B_family,
    check_compatibility,
    perturbed_family,
)

rng = np.random.default_rng(1)
for level in (1, 2, 3):
    for family in (canonical_A_family(level), canonical_B_family(level)):
        rep = check_compatibility(family, n_max=5, samples=5, rng=rng)
        print(f"level {level} {family.name:20s} max residual {rep.max_residual:.2e}  passed={rep.passed}")

bad = perturbed_family(canonical_A_family(2), 2)
rep = check_compatibility(bad, n_max=4, samples=3, rng=rng)
print("perturbed family passes?", rep.passed, "- failing checks:", sorted(rep.failures)[:4], "...")
