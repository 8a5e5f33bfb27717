"""
Graphs, edges and finite universes
==================================

"""

from qnet.formats import parse_graph
from qnet.graphs import UniverseSpec, chain_names, enumerate_universe, induced_edges, make_graph

# a signed key in one name and its positive twin in another make an edge
g = parse_graph("{white.((3.l|8.rl)|-2), black.(2|4)}")
print(g, induced_edges(g))

# the chain used by the walk examples: node i is (i | -(i+1))
line = make_graph([("e", v) for v in chain_names(3)])
for a, b in sorted(induced_edges(line), key=str):
    print(a, "->", b)

# every check runs over an explicit, sorted list of graphs
u = enumerate_universe()
print(len(u), "graphs in the default universe")
print([str(x) for x in u.graphs[:6]])

small = enumerate_universe(UniverseSpec(keys=(1,), depth=0, max_systems=1))
print([str(x) for x in small])
