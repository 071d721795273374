"""Sylow 2-subgroups of symmetric and alternating groups, built from binary
rooted tree automorphisms and verified by exhaustive enumeration."""

from .group_engine import (
    CapExceededError,
    EnumeratedGroup,
    GeneratorSet,
    generate,
)
from .perm_core import Permutation, legendre_nu2
from .sylow_builders import (
    boxtimes_group,
    decompose,
    parity_extension,
    s_alpha,
    s_beta,
    syl2_order,
    tau,
    tau_ij_word,
)
from .tree_core import Portrait

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "EnumeratedGroup",
    "GeneratorSet",
    "Permutation",
    "Portrait",
    "boxtimes_group",
    "decompose",
    "generate",
    "legendre_nu2",
    "parity_extension",
    "s_alpha",
    "s_beta",
    "syl2_order",
    "tau",
    "tau_ij_word",
    "__version__",
]
