"""
Writing a causal unitary as commuting local blocks
==================================================

One ancilla bit per system.  Each block K_v conjugates a bit flip at v by the
lifted unitary, and flipping every bit back recovers the unitary on the
all-zero sector.
"""

import numpy as np

from qnet.dynamics import (binary_chain_universe, block_decompose, block_decompose_no_ancilla,
                           coin_C, particle_step_M, walk_chain_universe)
from qnet.graphs import chain_names
from qnet.hilbert import Product

chain = walk_chain_universe(3)
u = Product([particle_step_M(), coin_C(np.pi / 5)])
res = block_decompose(u, chain, chain_names(3))
print("residual", res.residual, "block commutator", res.commutator_max)
for key, status in res.certificates.items():
    print(f"  {key}: {status}")

# The blocks of a moving walker reach one hop further than their own node,
# so they are checked against a region that keeps those systems when their
# ancilla bit is flipped.

# Without ancillas the spare bit is the choice between keys 2x and 2x+1.
bu, xs = binary_chain_universe(2)
res = block_decompose_no_ancilla(coin_C(0.3), bu, xs)
print("no-ancilla residual", res.residual)
