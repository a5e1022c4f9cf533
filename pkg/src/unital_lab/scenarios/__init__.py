from .diagonal import diagonal_reservoir_channel
from .nspin import NSpinConfig, nspin_commutator_decay, run_nspin
from .one_d import one_d_scatterer
from .three_lead import SpinState, ThreeLeadConfig, symmetric_three_lead_smatrix, three_lead_demon
from .tls_walk import TlsWalkConfig, tls_random_walk

__all__ = [
    "NSpinConfig",
    "SpinState",
    "ThreeLeadConfig",
    "TlsWalkConfig",
    "diagonal_reservoir_channel",
    "nspin_commutator_decay",
    "one_d_scatterer",
    "run_nspin",
    "symmetric_three_lead_smatrix",
    "three_lead_demon",
    "tls_random_walk",
]
