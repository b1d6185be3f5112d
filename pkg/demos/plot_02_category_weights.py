"""
Category depths, general weights and the two topic sets
=======================================================

Breadth-first search from the area gives each subcategory a depth; the
general weight decays as exp(4 - depth).
"""

from fastkate import CategoryGraph, bfs_depths, candidate_set, contributive_set, general_weights

names = ["ai", "machine_learning", "robotics", "deep_learning", "neural_networks", "history"]
ids = {n: i for i, n in enumerate(names)}
edges = [("ai", "machine_learning"), ("ai", "robotics"),
         ("machine_learning", "deep_learning"), ("deep_learning", "neural_networks"),
         ("robotics", "deep_learning"),          # a second, equally short path
         ("neural_networks", "ai")]              # a cycle back to the root
graph = CategoryGraph.from_edges(len(names), [(ids[a], ids[b]) for a, b in edges])

depths = bfs_depths(graph, ids["ai"])
weights = general_weights(depths)
for t, d in sorted(depths.depth.items(), key=lambda kv: kv[1]):
    print(f"{names[t]:18s} depth {d}  weight {weights[t]:8.3f}")

# "history" is outside the tree: weight 0
print("history weight", weights[ids["history"]])

print("candidates (depth <= 3, area excluded):", sorted(names[t] for t in candidate_set(depths, 3)))
print("contributive (depth <= 1, area included):", sorted(names[t] for t in contributive_set(depths, 1)))
