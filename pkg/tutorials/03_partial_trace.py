"""
Tracing out part of a network
=============================

A restriction picks the systems we keep.  Tracing out the rest sums over
pairs of graphs whose discarded parts agree.
"""

import numpy as np

from qnet.dynamics import walk_chain_universe
from qnet.graphs import chain_names, enumerate_universe
from qnet.restrict import Disk, VertexSelect, comprehended
from qnet.sampling import random_density, random_np_density, rng_for
from qnet.tensor_trace import dense_partial_trace, partial_trace

u = enumerate_universe()
rho = random_density(u, rng_for(0))
chi = VertexSelect(u[1].systems[0].name)
reduced = partial_trace(rho, chi)
print("trace before", rho.trace().real, "after", reduced.trace().real)

# the reduced state is still positive
m = reduced.dense(u)
print("smallest eigenvalue", np.linalg.eigvalsh((m + m.conj().T) / 2).min())

# Nested traces only compose when the inner region comprehends the outer one.
chain = walk_chain_universe(3)
v = VertexSelect(chain_names(3)[0])
z1, z2 = Disk(v, 1), Disk(v, 2)
print("comprehended:", bool(comprehended(z1, z2, chain)))
print("comprehended on name-preserving states:", bool(comprehended(z1, z2, chain, np_only=True)))

sigma = random_np_density(chain, rng_for(1)).dense(chain)
nested = dense_partial_trace(dense_partial_trace(sigma, z2, chain), z1, chain)
direct = dense_partial_trace(sigma, z1, chain)
print("nested vs direct on a name-preserving state:", np.abs(nested - direct).max())
