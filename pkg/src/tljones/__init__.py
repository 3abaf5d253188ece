"""Braid group representations from Temperley-Lieb-Jones theory.

Builds the unitary sector representations of B(n) at a root of unity,
certifies that their images are dense in the projective unitary groups,
compiles qubit gates into braid words, and simulates the encoded
two-qubit-per-six-strands model against an exact reference.
"""

from .compiler import (
    BraidWord,
    CompiledBraid,
    GateTarget,
    braid_target,
    evaluate,
    gate_distance,
    search_compile,
    sk_compile,
)
from .density import DensityCertificate, certify_density
from .encsim import (
    Circuit,
    EncodedRegister,
    GateOp,
    MeasurementRecord,
    SimulationResult,
    apply_braid,
    encode,
    encode_amplitudes,
    measure_label,
    measure_sigma_z,
    reference_qcm,
    simulate_circuit,
)
from .errors import (
    DomainError,
    IntegrityError,
    LeakedQubitError,
    PrecisionError,
    ResourceError,
    TLJError,
)
from .fusion import FusionContext
from .jonesrep import SectorRep, sector_rep, verify_relations

__all__ = [
    "BraidWord",
    "Circuit",
    "CompiledBraid",
    "DensityCertificate",
    "DomainError",
    "EncodedRegister",
    "FusionContext",
    "GateOp",
    "GateTarget",
    "IntegrityError",
    "LeakedQubitError",
    "MeasurementRecord",
    "PrecisionError",
    "ResourceError",
    "SectorRep",
    "SimulationResult",
    "TLJError",
    "apply_braid",
    "braid_target",
    "certify_density",
    "encode",
    "encode_amplitudes",
    "evaluate",
    "gate_distance",
    "measure_label",
    "measure_sigma_z",
    "reference_qcm",
    "sector_rep",
    "search_compile",
    "simulate_circuit",
    "sk_compile",
    "verify_relations",
]

__version__ = "0.1.0"
