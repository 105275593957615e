"""Deciding Presburger sentences and eliminating quantifiers.

Run: python3 walkthroughs/01_presburger.py
"""
from zrigid.presburger import decide_sentence, eliminate_quantifiers, eval_qf_int, normalize, parse

# %% Every integer is even or odd.
every_parity = parse("A x. E y. (x = 2*y | x = 2*y + 1)")
print("every integer has a parity:", decide_sentence(every_parity))

# %% But not every integer is even.
print("every integer is even:", decide_sentence(parse("A x. E y. x = 2*y")))

# %% Eliminating y from "x is even" leaves a congruence on x.
even = eliminate_quantifiers(parse("E y. x = 2*y"))
print("quantifier-free form of 'x is even':", even)
print("normal form:", normalize(even))
print("which of -3..3 are even:", [v for v in range(-3, 4) if eval_qf_int(even, {"x": v})])

# %% Normalization reduces congruences to one variable each, introducing case splits.
print("x + y == 0 (mod 2) becomes:", normalize(parse("x + y == 0 (mod 2)")))
