# %% [markdown]
# Sorted pairing versus exhaustive search on random frequency-selective channels.

# %%
from relaylab.verify import verify_lemma

# each trial checks the relay-only and the direct-path setting
for n in range(2, 8):
    report = verify_lemma(n, trials=100, seed=7)
    print(f"n={n} checked={report.checked} failures={len(report.failures)}")

# %% [markdown]
# With a direct path the input key becomes q2 / (1 + snr_sd). Ignoring the
# direct path while pairing can only lose rate.

# %%
import numpy as np

from relaylab.experiments import evaluate_schemes, power_from_snr
from relaylab.channel import Geometry, generate_channel

rng = np.random.default_rng(3)
geo = Geometry(20.0, 6.0, 16.0, 2.0, 11)
params = power_from_snr(14.0, geo, 64, direct_path=True)
losses = []
for _ in range(200):
    r = evaluate_schemes(params, generate_channel(geo, params, rng), rng)
    losses.append((r["optimal_sp"] - r["sp_ignore_direct"]) / 64)
print(f"mean loss from ignoring the direct path: {np.mean(losses):.4f} bits/subcarrier, "
      f"min {np.min(losses):.2e}")
