"""
Walking the Markov tree
=======================

Every Markov triple a^2 + b^2 + c^2 = 3abc is reached from (1,1,1) by
replacing one entry with its Vieta partner.
"""

from wallcross.markov import MarkovTriple, markov_tree_with_parents, mutate, neighbors

# the root has a single distinct neighbor, (1,1,2)
root = MarkovTriple(1, 1, 1)
print("neighbors of", root, "->", sorted(map(str, neighbors(root))))

# one mutation per slot; each result is again a neighbor of t
t = MarkovTriple(1, 2, 5)
for slot in (1, 2, 3):
    print(t, "slot", slot, "->", mutate(t, slot))
assert all(t in neighbors(mutate(t, s)) for s in (1, 2, 3))

# breadth-first tree to depth 5, printed as parent -> child
tree = markov_tree_with_parents(5)
for child, parent in sorted(tree.items(), key=lambda kv: (max(kv[0]), kv[0].astuple())):
    print(f"{str(parent):>14} -> {child}   weights {child.weights()}")
