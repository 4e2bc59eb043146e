"""Higher-rank numerical ranges of unitary and normal matrices.

Computes ``Omega_k(U)`` as an explicit polygon, constructs rank-k
compression codes ``P U P = lam P`` and checks them as error-correcting
codes for binary unitary channels.
"""
from .codes import CompressionCode, construct_code, verify_compression
from .geometry import ConvexPolygon
from .omega import Classification, OmegaResult, classify, omega_k, omega_k_bruteforce
from .qec import BinaryUnitaryChannel, KrausChannel, build_recovery, kl_verify, simulate_roundtrip
from .spectrum import UnitarySpectrum, from_angles, from_matrix

__version__ = "0.1.0"

__all__ = [
    "BinaryUnitaryChannel",
    "Classification",
    "CompressionCode",
    "ConvexPolygon",
    "KrausChannel",
    "OmegaResult",
    "UnitarySpectrum",
    "build_recovery",
    "classify",
    "construct_code",
    "from_angles",
    "from_matrix",
    "kl_verify",
    "omega_k",
    "omega_k_bruteforce",
    "simulate_roundtrip",
    "verify_compression",
]
