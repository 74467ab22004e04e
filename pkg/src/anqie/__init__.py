"""Topological entropy of bounded sequences via block-complexity counting.

The package generates arithmetic test sequences, counts their distinct
sliding and aligned blocks exactly, turns the counts into entropy
estimates with saturation diagnostics, builds finite-range
eps-approximations, and verifies the exact combinatorial inequalities the
estimates rest on.
"""

from .seqcore import (Alphabet, DataError, JointSequence, NumericSequence,
                      SymbolicSequence, joint, load_sequence, recode,
                      save_raw_bytes, save_sequence, shift)
from .blockcount import (BlockProfile, FactorCounter, ProfileRow,
                         count_regular, count_sliding, default_m_max, profile)
from .entropy import EntropyReport, entropy_of, estimate, zigzag_lower_bound
from .quantize import (Codebook, PatternSet, approximate_orbit, build_codebook,
                       implify, implify_staged, quantize, separate)
from .generators import GeneratorSpec, KINDS, generate, resolve_theta, zigzag_map
from .laws import (LawVerdict, default_lattice, independence_check,
                   law_joint_domination, law_levelset, law_pointwise_function,
                   law_recode_invariance, law_shift_invariance, law_suite,
                   weyl_sums, weyl_sums_naive)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "DataError", "JointSequence", "NumericSequence",
    "SymbolicSequence", "joint", "load_sequence", "recode", "save_raw_bytes",
    "save_sequence", "shift",
    "BlockProfile", "FactorCounter", "ProfileRow", "count_regular",
    "count_sliding", "default_m_max", "profile",
    "EntropyReport", "entropy_of", "estimate", "zigzag_lower_bound",
    "Codebook", "PatternSet", "approximate_orbit", "build_codebook",
    "implify", "implify_staged", "quantize", "separate",
    "GeneratorSpec", "KINDS", "generate", "resolve_theta", "zigzag_map",
    "LawVerdict", "default_lattice", "independence_check",
    "law_joint_domination", "law_levelset", "law_pointwise_function",
    "law_recode_invariance", "law_shift_invariance", "law_suite",
    "weyl_sums", "weyl_sums_naive",
    "__version__",
]
