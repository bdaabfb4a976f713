# %% [markdown]
# Searching over all unitary relay matrices, not just permutations.
#
# Coordinate ascent with 2x2 rotations from random Haar starts never beats
# the sorted permutation, and the best restart reaches it.

# %%
import numpy as np

from relaylab.pairing import sorted_pairing
from relaylab.rate import rate_pairing
from relaylab.unitary import (ascend_restarts, directional_derivative,
                              random_skew_hermitian)

from relaylab.channel import Geometry, generate_channel, pairing_metrics
from relaylab.experiments import power_from_snr

rng = np.random.default_rng(11)
geo = Geometry(20.0, 8.0, 12.0, 2.0, 2)
for n in (2, 3, 4):
    params = power_from_snr(10.0, geo, n, direct_path=True)
    ch = generate_channel(geo, params, rng)
    m = pairing_metrics(params, ch)
    perm = sorted_pairing(m, True)
    opt = rate_pairing(perm, m, True).total_bits
    runs = ascend_restarts(params, ch, 8, rng)
    print(f"n={n} pairing {opt:.6f}  best ascent {runs[0].rate:.6f}  "
          f"worst restart {runs[-1].rate:.6f}")

# %% [markdown]
# The sorted permutation is a stationary point: derivatives along random
# skew-Hermitian directions vanish.

# %%
worst = max(abs(directional_derivative(perm.matrix(), random_skew_hermitian(n, rng),
                                       params, ch)) for _ in range(20))
print(f"max |directional derivative| = {worst:.2e}")
