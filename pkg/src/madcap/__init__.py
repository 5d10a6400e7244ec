"""Information capacities of a two-qubit amplitude-damping channel with memory."""
from .capacity import (
    CapacityPoint,
    chi_lwb_g1,
    chi_lwb_g2,
    coherent_information,
    entanglement_assisted,
    holevo,
    q_lwb,
    q_upb,
)
from .channel import ChannelParams, apply_mu
from .optimize import OptimizerConfig

__all__ = [
    "CapacityPoint",
    "ChannelParams",
    "OptimizerConfig",
    "apply_mu",
    "chi_lwb_g1",
    "chi_lwb_g2",
    "coherent_information",
    "entanglement_assisted",
    "holevo",
    "q_lwb",
    "q_upb",
]
