"""Finite creatures, zoo prefixes, Ramsey homogenization, gauging fronts for
growth functions, and a finite generic-chain builder, with brute-force
checks of the comparison results that tie them together."""

from .creature import Creature, LabelSource, leaf, star, validate_creature
from .zoo import (Front, Witness, Zoo, apply_recipe, check_le, drop, ext_front, glue, limit,
                  roots_front, shrink, validate_prefix)
from .coloring import (BINARY, BRANCH, UNARY, Coloring, homogenize_creature, homogenize_zoo,
                       is_homogeneous_zoo, monochromatic_subset, ramsey)
from .growth import (HA, Affine, Expo, IndexSet, Power, Successor, Table, le_A, library,
                     orbit_set, sandwich_check)
from .gauge import (check_gauges, compare_functions, dichotomy, front_compare, gauge,
                    is_strong_zoo, make_strong, node_class)
from .lab import chain_compare, verify_crucial, verify_leq, verify_not
from .builder import ChainLog, Demand, demand, generic_builder, verify_chain_properties
from .generate import gen_zoo, random_zoo, seed_zoo, z1
from .kernels import BACKEND

__version__ = "0.1.0"
