"""Unitary relay processing and subcarrier pairing for AF OFDM relaying."""

from .channel import (ChannelRealization, Geometry, InvalidTapProfile, PairingMetrics,
                      SystemParams, derive_relay_gain, frequency_response,
                      generate_channel, pairing_metrics)
from .pairing import (SizeLimitError, assignment_pairing, brute_force_pairing,
                      sorted_pairing)
from .perm import InvalidPermutation, Permutation
from .rate import (RateBreakdown, UnitarityError, pair_sinr, rate_general,
                   rate_pairing)
from .unitary import (ascend_rate, directional_derivative, haar_random,
                      psd_det_bound_check, unitary_2x2)

__version__ = "0.1.0"
