"""
Driving a three-state chain with random maps
============================================

A chain on three states steps forward with probability 2/3 and back with
probability 1/3.  Two different laws on maps reproduce it; only one of
them has a synchronizing support.
"""

from fractions import Fraction

from syncwalk import (
    MappingLaw,
    MappingTable,
    StochasticMatrix,
    compose,
    is_synchronizing,
    synchronizing_mapping_law,
    synchronizing_word,
    verify_mapping_law,
)

Q = StochasticMatrix([[0, "2/3", "1/3"], ["1/3", 0, "2/3"], ["2/3", "1/3", 0]])
print(Q)

# %%
# Maps are written by their 1-based images: (3, 3, 1) sends 1 and 2 to 3.
s1, s2, s3, s4 = (MappingTable.from_labels(v) for v in [(3, 3, 1), (2, 1, 2), (2, 3, 1), (3, 1, 2)])

mu1 = MappingLaw({s1: "1/3", s2: "1/3", s3: "1/3"})
mu2 = MappingLaw({s3: "2/3", s4: "1/3"})
print("mu1 drives Q:", verify_mapping_law(mu1, Q))
print("mu2 drives Q:", verify_mapping_law(mu2, Q))

# s3 and s4 are rotations, so no word in them ever merges two states
print("mu1 synchronizing:", is_synchronizing(mu1.support))
print("mu2 synchronizing:", is_synchronizing(mu2.support))

word = synchronizing_word({s1, s2})
print("word", [s.labels() for s in word], "maps everything to", compose(word).labels()[0])

# %%
# The general construction: color the support graph so the colors
# synchronize, peel off as much of that law as Q allows, and cover the rest
# with any mapping law.
mu, parts = synchronizing_mapping_law(Q, return_parts=True)
print("synchronizing coloring:", [c.labels() for c in parts["coloring"].colors])
print("eps =", parts["eps"])
for sigma, w in mu.items():
    print(f"  {sigma.labels()}  {w}")
assert verify_mapping_law(mu, Q) and is_synchronizing(mu.support)
assert sum(w for _, w in mu.items()) == Fraction(1)
