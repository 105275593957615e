"""The two coordinate systems of a model: profinite integers and a span of reals.

Run: python3 walkthroughs/02_profinite_and_reals.py
"""
from fractions import Fraction

from zrigid.profinite import divide_exact, from_integer, from_prime_component, is_divisible, residue
from zrigid.realspan import Gamma, RealSpan, LAURENT, mul_by_gamma, parse_real, sign

# %% u is 1 at the prime 2 and 0 at every other prime, so it is odd but divisible by 3.
u = from_prime_component(2, 1, 0)
print("u mod 6 =", residue(u, 6), " u mod 2 =", residue(u, 2), " u mod 3 =", residue(u, 3))
print("u is idempotent:", u * u == u)
print("u / 3 =", divide_exact(u, 3).to_json())

# %% For each prime p, exactly one of x, x+1, ..., x+p-1 is divisible by p.
x = from_prime_component(2, Fraction(1, 3), 5)
for p in (2, 3, 5, 7):
    print(f"p={p}: divisible shifts", [i for i in range(p) if is_divisible(x + from_integer(i), p)])

# %% Reals are exact Q-linear combinations; signs come from interval refinement.
print("sign(pi - 22/7) =", sign(parse_real("pi - 22/7")))
print("sign(pi - 333/106) =", sign(parse_real("pi - 333/106")))

# %% Multiplying by pi stays inside the Laurent span: pi/(pi-1) = 1 + 1/(pi-1).
print("pi * inv(pi-1) =", mul_by_gamma(parse_real("inv(pi-1)"), Gamma(1, 1), RealSpan(LAURENT)))
