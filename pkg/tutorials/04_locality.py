"""
Local, strictly local, and the gap between them
===============================================

"""

from qnet.checks import dual_locality_check, is_local, is_strictly_local
from qnet.graphs import Graph, System, Universe
from qnet.hilbert import OperatorMatrix
from qnet.names import name
from qnet.restrict import Disk, VertexSelect


def graph(*names):
    return Graph(System("w", name(n)) for n in names)


# Node x, its neighbour, and a node two hops away.  "zero" is x alone, "one"
# is x with its neighbour, "two" is the far node.
zero, one, two = graph("(1|-2)"), graph("(1|-2)", "(2|-3)"), graph("(3|-4)")
u = Universe([graph("(1|-2)", "(3|-4)"), graph("(1|-2)", "(2|-3)", "(3|-4)")])
chi = Disk(VertexSelect(name("(1|-2)")), 2)

# Without the neighbour the far node is disconnected from x, so the disk
# around x in zero+two is just zero.  With it, the far node is inside.
print([str(chi(g)) for g in u.graphs])

a = OperatorMatrix.dyad(one, zero)
print("local:", is_local(a, chi, u).status)
print("dual check:", dual_locality_check(a, chi, u).status)

# A adds the neighbour, which pulls the far node into the region.  A is local,
# yet A'A is not, so A is not strictly local.
s = is_strictly_local(a, chi, u)
print("strictly local:", s.status)
print("witness:", s.witness)
