"""Checking witness automorphisms, and watching the checker reject impostors.

Run: python3 walkthroughs/05_witnesses.py
"""
import random

from zrigid.models import builtin
from zrigid.rigidity import adversarial_search, aut_from_gh, build_f_gamma, verify_automorphism

# %% On the Laurent model, x -> x + nu_D^-1((pi - 1) nu_1(x)) is an automorphism.
g = builtin("G_laurent")
f = build_f_gamma(g, "pi")
x = g.random_element(random.Random(0))
print("x      =", x)
print("f(x)   =", f.apply(g, x))
print("back   =", f.inverse(g).apply(g, f.apply(g, x)))
report = verify_automorphism(g, f, samples=50)
print("verified:", report.passed, report.checks)

# %% Doubling the divisible part respects addition and residues but not the order.
exm = builtin("G_exm")
report = verify_automorphism(exm, aut_from_gh(exm, 2))
print("doubling on G_exm:", report.checks, report.counterexample)

# %% Without the order the same map is a genuine automorphism.
unordered = builtin("G_exm_unordered")
print("doubling, unordered:", verify_automorphism(unordered, aut_from_gh(unordered, 2)).passed)

# %% A random search over candidate maps on the rigid model finds nothing but the identity.
result = adversarial_search(exm, count=200, seed=1)
print(f"{result.candidates} candidates, {len(result.passing)} non-identity survivors")
