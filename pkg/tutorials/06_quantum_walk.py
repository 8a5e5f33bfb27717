"""
A quantum walk on a line
========================

"""

import numpy as np

from qnet.dynamics import coin_C, particle_step_M, walk_chain_universe
from qnet.formats import parse_graph
from qnet.graphs import chain_names, Graph, System
from qnet.hilbert import Product, is_unitary_on, ket

names = chain_names(4)
start = Graph([System(s, v) for s, v in zip(["R", "e", "e", "e"], names)])
step = Product([particle_step_M(), coin_C(np.pi / 4)])

psi = ket(start)
for t in range(6):
    top = sorted(psi.amps.items(), key=lambda kv: -abs(kv[1]))[:3]
    print(t, [(str(g), round(abs(a) ** 2, 3)) for g, a in top])
    psi = step.apply(psi)

# a right mover at the end of the line turns around
print(particle_step_M().apply(ket(parse_graph("{e.(1|-2), R.(2|-3)}"))))
print("unitary:", is_unitary_on(step, walk_chain_universe(4))[0])
