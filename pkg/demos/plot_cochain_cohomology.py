"""
Cochains on a finite set
========================

Alexander-Spanier style cochains on a finite point set with Cayley-Dickson
coefficients.  With a neighbourhood support the cohomology sees the shape of
the point cloud; the full complex is acyclic.
"""
import numpy as np

from cayley_wrap import Cochain, check_exactness, coboundary, cohomology_dims
from cayley_wrap.cochain import exp_sequence, neighbourhood_support

rng = np.random.default_rng(0)
f = Cochain.random(rng, 5, 1, 3)
print("max |d d f| =", coboundary(coboundary(f)).max_norm())

# eight points on a circle: a neighbourhood complex with one hole
theta = np.linspace(0, 2 * np.pi, 8, endpoint=False)
ring = np.c_[np.cos(theta), np.sin(theta)]
for eps in (0.5, 0.8, 1.5):
    dims = cohomology_dims(8, 0, 2, support=neighbourhood_support(ring, eps))
    print(f"eps={eps}: H^0, H^1, H^2 =", dims)

# the full complex on 12 points, octonion coefficients: only H^0 = R^8
print("full complex:", cohomology_dims(12, 3, 4))

# the linearised exponential sequence is exact
print(check_exactness(exp_sequence(3)))
