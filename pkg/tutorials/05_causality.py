"""
Causality checks on a three-node line
=====================================

"""

from qnet.checks import causality_verdict, is_causal
from qnet.dynamics import particle_step_M, walk_chain_universe
from qnet.graphs import chain_names
from qnet.hilbert import IDENTITY
from qnet.restrict import Disk, VertexSelect

chain = walk_chain_universe(3)
v = VertexSelect(chain_names(3)[1])

# a walker reaches v from one hop away, so radius 1 is enough...
print(is_causal(particle_step_M(), Disk(v, 1), v, chain, np_sector=True).status)
# ...and radius 0 is not
print(is_causal(particle_step_M(), v, v, chain, np_sector=True).status)

# Even the identity fails unrestricted when the effect region is smaller than
# the cause region: superpositions of graphs with different names see the
# difference.
w = VertexSelect(chain_names(3)[0])
r = is_causal(IDENTITY, Disk(w, 2), Disk(w, 1), chain)
print(r.status, r.witness["G"], r.witness["H"])
print(is_causal(IDENTITY, Disk(w, 2), Disk(w, 1), chain, np_sector=True).status)

# the verdict runs the direct and dual characterisations side by side
print(causality_verdict(particle_step_M(), Disk(v, 1), v, chain, np_sector=True).detail)
