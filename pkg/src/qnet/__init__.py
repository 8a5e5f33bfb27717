"""Finite-universe toolkit for quantum dynamics on named graphs."""

from .names import (Join, Leaf, MalformedName, Name, Renaming, corresponds, descend, in_closure, join,
                    name, negate, normalize, overlaps, regions)
from .graphs import (EMPTY, DEFAULT_SPEC, Graph, SupportEscape, System, Universe, UniverseSpec,
                     UniverseTooLarge, WellNamednessViolation, chain_universe, enumerate_universe,
                     induced_edges, make_graph, pm_support, support)
from .hilbert import (IDENTITY, Operator, OperatorMatrix, StateVector, inner, is_name_preserving,
                      is_renaming_invariant, is_unitary_on, ket, operator_equal_on)
from .restrict import (EMPTY_R, FULL, AncillaSelect, Compose, Disk, Namewise, Not, Pointwise,
                       Restriction, StateSelect, Union, VertexSelect, commutes, comprehended,
                       validate_restriction)
from .tensor_trace import (LocalizedOperator, consistency, consistent_preserving, partial_trace,
                           partial_trace_tensored, tensor_operators, tensor_states)
from .checks import (causal_extension, causality_verdict, dual_causality_check, dual_locality_check,
                     extend_unitary, is_causal, is_local, is_strictly_local, locality_verdict,
                     tomography_reconstruct)
from .dynamics import (Coin, MergeSplit, ParticleStep, block_decompose, block_decompose_no_ancilla,
                       coin_C, merge_split_H, particle_step_M, quantum_merge_split_Hq, toggle_tau,
                       walk_chain_universe)
from .formats import ParseError, parse_graph, parse_name, parse_operator, parse_restriction, parse_universe
from .reports import CheckResult, LawReport, PreconditionFailed
from .laws import run_law

__version__ = "0.1.0"
