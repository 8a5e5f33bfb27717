"""Hand-built universes shared by several test files."""

from __future__ import annotations

from dataclasses import dataclass

from qnet.graphs import EMPTY, Graph, System, Universe
from qnet.hilbert import OperatorMatrix
from qnet.names import name
from qnet.restrict import Disk, FunctionRestriction, VertexSelect
from qnet.tensor_trace import LocalizedOperator

X = name("(1|-2)")
NEAR = name("(2|-3)")
FAR = name("(3|-4)")


def _g(*names) -> Graph:
    return Graph(System("w", u) for u in names)


@dataclass
class StrictnessExample:
    """x with a neighbour and a node two hops away.

    ``zero`` is x alone, ``one`` is x with its neighbour, ``two`` is the far
    node.  Inside ``zero ∪ two`` the far node is disconnected from x, so a
    radius-2 disk around x gives back ``zero``; inside ``one ∪ two`` it is two
    hops away, so ``one`` cannot be glued to ``two``.
    """

    universe: Universe
    chi: Disk
    zero: Graph
    one: Graph
    two: Graph
    zero_two: Graph
    one_two: Graph
    a: OperatorMatrix
    xi: FunctionRestriction
    u: LocalizedOperator


def _select_zero_or_one(one: Graph, zero: Graph):
    def fn(g: Graph):
        members = set(g.systems)
        if set(one.systems) <= members:
            return one.systems
        if set(zero.systems) <= members:
            return zero.systems
        return ()
    return fn


def strictness_example() -> StrictnessExample:
    zero, one, two = _g(X), _g(X, NEAR), _g(FAR)
    zero_two, one_two = _g(X, FAR), _g(X, NEAR, FAR)
    u = Universe([zero_two, one_two])
    chi = Disk(VertexSelect(X), 2)
    a = OperatorMatrix.dyad(one, zero)
    xi = FunctionRestriction(_select_zero_or_one(one, zero), "zero-or-one")
    swap = OperatorMatrix({(zero, one): 1.0, (one, zero): 1.0, (EMPTY, EMPTY): 1.0}, label="swap01")
    return StrictnessExample(u, chi, zero, one, two, zero_two, one_two, a, xi, LocalizedOperator(swap, xi))
