"""
Cayley-Dickson arithmetic
=========================

Octonions are built from the reals by three doublings.  They are alternative
but not associative, and the exponential/logarithm pair still works along the
complex line through any imaginary direction.
"""
import numpy as np

from cayley_wrap import CdNumber, cd_exp, cd_ln, cd_mul, format_cd, k_defect
from cayley_wrap.algebra import generator, mul_arr
from cayley_wrap.twisted import component_decompose

# i_1 i_2 = i_3, and the product anticommutes
i1, i2, i4 = (generator(3, j) for j in (1, 2, 4))
print("i1 i2 =", format_cd(cd_mul(i1, i2)))
print("i2 i1 =", format_cd(cd_mul(i2, i1)))

# the associator of three independent units is a sign
lhs, rhs = cd_mul(cd_mul(i1, i2), i4), cd_mul(i1, cd_mul(i2, i4))
print("(i1 i2) i4 =", format_cd(lhs), "  i1 (i2 i4) =", format_cd(rhs))

# alternativity holds for random octonions, vectorised over many samples
rng = np.random.default_rng(0)
x, y = rng.normal(size=(2, 1000, 8))
print("max |x(xy) - (xx)y| =", np.abs(mul_arr(x, mul_arr(x, y)) - mul_arr(mul_arr(x, x), y)).max())

# exp and the principal logarithm
z = CdNumber(3, [0.2, 0.5, -1.0, 0.3, 0.0, 0.7, 0.1, -0.4])
print("Ln(exp z) - z =", (cd_ln(cd_exp(z)) - z).norm())

# the logarithm defect K(M, N) = Ln(exp M exp N) is (alpha+beta)u for commuting inputs
u = generator(2, 1)
print("K(0.3 i1, 0.5 i1) =", format_cd(k_defect(0.3 * u, 0.5 * u)))
print("K(0.5 i1, 0.5 i2) =", format_cd(k_defect(0.5 * u, 0.5 * generator(2, 2))))

# graded blocks from exact closed formulas reproduce the coefficients bit for bit
blocks = component_decompose(z)
print("blocks == coefficients:", [b.re for b in blocks] == list(z.coeffs))
