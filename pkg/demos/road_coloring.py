"""
Synchronizing colorings of a constant out-degree graph
======================================================
"""

from syncwalk import (
    AdjacencyMatrix,
    MappingTable,
    compose,
    find_synchronizing_coloring,
    is_synchronizing,
    synchronizing_word,
)
from syncwalk.coloring import enumerate_colorings

# Every vertex of a 3-cycle points at both other vertices.  Coloring the
# edges as the two rotations never synchronizes; other colorings do.
A = AdjacencyMatrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
colorings = list(enumerate_colorings(A))
for c in colorings:
    print([s.labels() for s in c.colors], is_synchronizing(c.colors))

# %%
# Cerny's automaton on 5 states: a rotation and one merge.
n = 5
rot = MappingTable([(x + 1) % n for x in range(n)])
merge = MappingTable([1 if x == 0 else x for x in range(n)])
B = AdjacencyMatrix.from_maps([rot, merge])
print(B.to_numpy())

word = synchronizing_word({rot, merge})
print("greedy reset word length", len(word), "; the shortest has", (n - 1) ** 2)
print("collapses to", compose(word)[0])

# %%
c = find_synchronizing_coloring(B, seed=0)
print("search returned", [s.labels() for s in c.colors])
