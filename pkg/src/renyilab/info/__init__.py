"""Entropic functionals: entropies, relative entropies and conditional mutual informations."""

from renyilab.info.cmi import (
    classical_conditioning_value,
    renyi_cmi,
    renyi_cmi_optimized_check,
    renyi_cmi_petz,
    sandwiched_cmi,
    vn_cmi,
)
from renyilab.info.entropies import (
    renyi_conditional_entropy,
    renyi_entropy,
    renyi_mutual_info,
    renyi_relative_entropy,
    sandwiched_relative_entropy,
    spectrum,
    vn_conditional_entropy,
    vn_entropy,
    vn_mutual_info,
    vn_relative_entropy,
)
from renyilab.info.order import RenyiOrder, is_von_neumann

__all__ = [
    "RenyiOrder",
    "classical_conditioning_value",
    "is_von_neumann",
    "renyi_cmi",
    "renyi_cmi_optimized_check",
    "renyi_cmi_petz",
    "renyi_conditional_entropy",
    "renyi_entropy",
    "renyi_mutual_info",
    "renyi_relative_entropy",
    "sandwiched_cmi",
    "sandwiched_relative_entropy",
    "spectrum",
    "vn_cmi",
    "vn_conditional_entropy",
    "vn_entropy",
    "vn_mutual_info",
    "vn_relative_entropy",
]
