"""Exact membership certificates for lower central series terms of finite groups."""
from .certificate import Certificate, check, make_certificate, verify_certificate
from .exact import Rational, hermite_basis, lattice_member, solve_linear
from .group_ring import degree_of_function, dimension_subgroup, ideal_power_basis
from .groups import FiniteGroup, gamma, load_corpus, load_group
from .nilpotent import build_basis, coords, magnus_rho, mult_coords
from .similarity import FiniteModel, FreeNilpotentModel, r_similar, similarity_classes

__version__ = "0.1.0"
