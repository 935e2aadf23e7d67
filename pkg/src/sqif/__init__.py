"""Integer factoring via prime-lattice CVP reduction with Ising-cube refinement.

The pipeline reduces factoring to closest-vector instances on randomized
prime lattices, approximates each with LLL plus Babai nearest-plane, refines
over the 2^m single-flip cube with an exact squared-distance Ising model
(exhaustive enumeration or a simulated QAOA circuit), accumulates smooth
relation pairs, and combines them over GF(2) into a congruence of squares.
"""

from .ising import (
    EnergySample,
    IsingHamiltonian,
    brute_force_low_energy,
    build_hamiltonian,
    energy,
    qaoa_sample,
)
from .lattice import (
    BabaiSolution,
    CvpInstance,
    ReducedBasis,
    babai_nearest_plane,
    build_cvp_instance,
    gram_schmidt,
    lattice_dimension,
    lll_reduce,
)
from .numtheory import FactorBase, SmoothDecomposition, factor_over_base, first_primes, primes_up_to
from .pipeline import (
    ConfigError,
    IterationTrace,
    PipelineConfig,
    RunReport,
    ScreeningError,
    factor,
    screen,
)
from .relations import PairLedger, SrPair, required_sr_pairs, test_sr_pair

__version__ = "0.1.0"

__all__ = [
    "BabaiSolution",
    "ConfigError",
    "CvpInstance",
    "EnergySample",
    "FactorBase",
    "IsingHamiltonian",
    "IterationTrace",
    "PairLedger",
    "PipelineConfig",
    "ReducedBasis",
    "RunReport",
    "ScreeningError",
    "SmoothDecomposition",
    "SrPair",
    "babai_nearest_plane",
    "brute_force_low_energy",
    "build_cvp_instance",
    "build_hamiltonian",
    "energy",
    "factor",
    "factor_over_base",
    "first_primes",
    "gram_schmidt",
    "lattice_dimension",
    "lll_reduce",
    "primes_up_to",
    "qaoa_sample",
    "required_sr_pairs",
    "screen",
    "test_sr_pair",
    "__version__",
]
