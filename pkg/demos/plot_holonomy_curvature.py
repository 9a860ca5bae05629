"""
Holonomy and curvature
======================

A connection is sampled on charts; holonomy around a discrete loop is the
ordered product of exponentials of the integrated 1-form.  Small square loops
give the curvature.
"""
import numpy as np

from cayley_wrap import CdNumber, cd_exp, curvature_estimate, curvature_form, format_cd, holonomy
from cayley_wrap.connection import Chart, DiscreteBundle, DiscreteLoop, loop_family

grid = np.array([[x, y] for x in np.linspace(-1.5, 1.5, 7) for y in np.linspace(-1.5, 1.5, 7)])


def bundle(level, w):
    return DiscreteBundle(level, 2, (Chart("0", grid),), {}, {"0": w})


# c dtheta on the punctured plane: the circle holonomy is exp(-2 pi c)
c = np.array([0.0, 0.3, 0.4, 0.0])


def angular(p):
    r2 = (p ** 2).sum(axis=1)
    out = np.zeros((len(p), 2, 4))
    out[:, 0] = (-p[:, 1] / r2)[:, None] * c
    out[:, 1] = (p[:, 0] / r2)[:, None] * c
    return out


th = np.linspace(0, 2 * np.pi, 10_001)
pts = np.c_[np.cos(th), np.sin(th)]
pts[-1] = pts[0]
h = holonomy(DiscreteLoop(pts, "0"), bundle(2, angular))
print("holonomy    ", format_cd(h))
print("exp(-2 pi c)", format_cd(cd_exp(CdNumber(2, -2 * np.pi * c))))


# a non-commuting connection: w = x i1 dx + x y i2 dy
def w(p):
    out = np.zeros((len(p), 2, 4))
    out[:, 0, 1] = p[:, 0]
    out[:, 1, 2] = p[:, 0] * p[:, 1]
    return out


b = bundle(2, w)
loop = loop_family(np.array([1.0, 0.0]), np.array([0.0, 1.0]), s=0.5, n_per_edge=64, y=[0.1, 0.2])
print("square loop holonomy", format_cd(holonomy(loop, b)))

# the plaquette curvature tends (first order in s) to dw = y i2 dx^dy plus a small
# i3 part from the commutator of w_x and w_y; Richardson extrapolation sharpens it
for s in (0.1, 0.05, 0.025):
    print(f"s={s:<6} K_01 =", format_cd(curvature_estimate(b, [0.1, 0.2], 0, 1, s)))
K = curvature_form(b, [0.1, 0.2], 0.025, extrapolate=True)
print("antisymmetric:", np.array_equal(K, -K.transpose(1, 0, 2)))
