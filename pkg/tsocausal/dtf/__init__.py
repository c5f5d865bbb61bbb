"""
Delaying the future: the shift operator, the run transform, its independent
verification, and the solo and unpropagated constructions built on it.
"""

from .shift import shift, shifted_node, source_round
from .transform import dtf_transform
from .verify import check_shift_claims, local_equivalence, verify_dtf
from .constructions import solo_transform, unpropagated_transform

__all__ = [
    'shift', 'shifted_node', 'source_round', 'dtf_transform',
    'check_shift_claims', 'local_equivalence', 'verify_dtf',
    'solo_transform', 'unpropagated_transform',
]
