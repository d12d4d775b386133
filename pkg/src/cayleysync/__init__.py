"""Synchronizing automata that contain a Cayley graph: exact search and bounds."""
from .automaton import (
    Automaton,
    cerny_automaton,
    expansion_synchronizer,
    is_synchronizing,
    random_cayley_automaton,
    shortest_expanding_word,
    shortest_reset_word,
)
from .bounds import cerny_bound, m_lower, main_bound, rystsov_bound
from .cayley import CayleyGraph, diameter
from .groups import FiniteGroup, GeneratorSet, make_family
from .qlinalg import QSubspace
from .repr_chain import ChainReport, StandardRep, build_chain

__all__ = [
    "Automaton",
    "CayleyGraph",
    "ChainReport",
    "FiniteGroup",
    "GeneratorSet",
    "QSubspace",
    "StandardRep",
    "build_chain",
    "cerny_automaton",
    "cerny_bound",
    "diameter",
    "expansion_synchronizer",
    "is_synchronizing",
    "m_lower",
    "main_bound",
    "random_cayley_automaton",
    "rystsov_bound",
    "shortest_expanding_word",
    "shortest_reset_word",
]
