"""
Words in the bar construction
=============================

A word ``side;level;[times];head;letters`` is a point of a simplex labelled by
pure states (one generator times a real value).  Words multiply by merging
their time lists; the normal form drops identities and absorbs boundary
letters.
"""
import numpy as np

from cayley_wrap.bar import (
    face,
    format_word,
    inverse,
    mul,
    normalize,
    parse_word,
    project_a_to_b,
    random_word,
    total_product,
)

x = parse_word("A;2;[0.5];(1:1.0);(2:1.0)")
y = parse_word("A;2;[0.25];;(3:2.0)")
print("x      =", format_word(x))
print("y      =", format_word(y))
print("x * y  =", format_word(mul(x, y)))
print("x^-1   =", format_word(inverse(x)))
print("x x^-1 is the unit:", mul(x, inverse(x)).is_unit)

# identity letters and letters at t = 1 disappear in the normal form
print(format_word(normalize(parse_word("B;2;[0.25,0.5,1.0];;(0:1.0),(1:2.0),(3:1.0)"))))

# the projection to the B side forgets the head and is multiplicative
print("pi(x y) == pi(x) pi(y):", project_a_to_b(mul(x, y)) == mul(project_a_to_b(x), project_a_to_b(y)))

# the total product of a word is its image in the twisted group
print("T(x) =", total_product(x))

# faces merge neighbouring letters
rng = np.random.default_rng(3)
w = random_word(rng, "A", 2, n_letters=3)
print("w    =", format_word(w))
for j in range(len(w) + 1):
    print(f"d_{j} w =", format_word(normalize(face(j, w))))
