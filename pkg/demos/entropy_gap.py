"""
How much randomness does the driving noise carry?
=================================================

Each map law has entropy h(N) per step, never below the chain's entropy
rate h(Y).  For chains whose rows are rearrangements of one another the gap
can be made as small as we like while keeping a synchronizing support.
"""

from fractions import Fraction

from syncwalk import (
    StochasticMatrix,
    chain_entropy,
    entropy_family,
    entropy_gap_floor,
    is_p_uniform,
    law_entropy,
    two_state_family,
)

# %%
# Symmetric two-state chain, p = 7/10.  Every map law puts the same mass eps
# on both constant maps; eps = 0 is not synchronizing.
p = Fraction(7, 10)
for eps in ("3/10", "1/10", "1/100", "1/1000", "1/10000"):
    _, hY, hN = two_state_family(p, Fraction(eps))
    print(f"eps={eps:>8}  h(N)-h(Y) = {hN - hY:.6f}")

# %%
# The general family for a p-uniform chain.
Q = StochasticMatrix([[0, "2/3", "1/3"], ["1/3", 0, "2/3"], ["2/3", "1/3", 0]])
print("p-uniform:", bool(is_p_uniform(Q)))
hY = chain_entropy(Q)
for n in (10, 100, 1000, 10_000):
    print(f"n={n:>6}  gap {law_entropy(entropy_family(Q, n)) - hY:.6f}")

# %%
# Rows that are not rearrangements of each other: the gap stays away from 0.
R = StochasticMatrix([["1/2", "1/2"], ["1/3", "2/3"]])
print("p-uniform:", bool(is_p_uniform(R)))
for step in (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10_000)):
    print(f"grid {float(step):g}: floor {entropy_gap_floor(R, step):.6f}")
