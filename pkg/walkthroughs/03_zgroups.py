"""Building Z-groups, comparing elements and separating them by formulas.

Run: python3 walkthroughs/03_zgroups.py
"""
from fractions import Fraction

from zrigid.models import builtin

g = builtin("G_exm")
print(g.describe())

# %% (1 + u)/2 is an element because 1 + u is even in every coordinate.
u = g.generator("u")
half = g.elem({}, 1, {"u": 1}, 2)
print("element:", half, " residue mod 2:", g.residue_elem(half, 2))

# %% u dominates every integer. d0 and u share a valuation level, so their real values
# (1 and sqrt(2)) decide between them.
d = g.d_unit("d0", Fraction(1, 1000))
print("u > 10^6:", g.compare(u, g.elem(a0=10 ** 6)) > 0)
print("u > d0/1000:", g.compare(u, d) > 0, " 2*d0 > u:", g.compare(g.d_unit("d0", 2), u) > 0)

# %% Every element splits into a divisible part and a part carrying all residues.
d_part, l_part = g.decompose(d + half)
print("d-part:", d_part, " l-part:", l_part)

# %% Distinct elements are either separated by a formula in one variable or have the same type.
print(g.separate(u, u + g.one()).to_json())
print(g.separate(d, d * 2).to_json())
