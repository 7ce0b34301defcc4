"""Containers, the tree monad and comodule representations of second-order functionals.

The submodules are layered: ``universe`` (finite type codes and values),
``container`` (containers and their morphisms), ``treemonad``,
``representation``, ``mendler`` (monads induced by weak Mendler-style
algebras), ``effects`` (IO, runners and state), ``pcont`` (propositional
containers), ``lawcheck`` (law suites) and ``cli``.
"""

from .container import Assignment, Container, ContainerMorphism, container
from .report import SuiteReport
from .representation import Representation, compose_reps, evaluate_rep
from .treemonad import TreeMonad
from .universe import BOOL, EMPTY, NAT, UNIT, UNIT_T, Fin, FunTable

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BOOL",
    "Container",
    "ContainerMorphism",
    "EMPTY",
    "Fin",
    "FunTable",
    "NAT",
    "Representation",
    "SuiteReport",
    "TreeMonad",
    "UNIT",
    "UNIT_T",
    "compose_reps",
    "container",
    "evaluate_rep",
]
