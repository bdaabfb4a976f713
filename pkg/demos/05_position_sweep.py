# %% [markdown]
# Rate against relay position at fixed SNR. The pairing gain shrinks as the
# relay moves towards the destination.

# %%
from pathlib import Path

from relaylab.config import load_config
from relaylab.experiments import run_position_sweep

cfg = load_config(Path(__file__).parent.parent / "configs" / "fig3_position.json").scenario()
res = run_position_sweep(cfg)

# %%
_, opt = res.curve("optimal_sp")
_, base = res.curve("no_sp")
for v, a, b in zip(res.sweep_values, opt, base):
    print(f"d_sr/d_rd={v:6.3f}  optimal_sp {a:.4f}  no_sp {b:.4f}  gap {a - b:.4f}")
