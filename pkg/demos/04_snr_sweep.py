# %% [markdown]
# Rate per subcarrier against SNR for the four schemes (shipped config).
#
# Set RELAYLAB_THREADS to spread trials over threads; results do not change.

# %%
from pathlib import Path

from relaylab.config import load_config
from relaylab.experiments import run_snr_sweep, snr_gain_db

cfg = load_config(Path(__file__).parent.parent / "configs" / "fig2_snr.json").scenario()
res = run_snr_sweep(cfg)

# %%
print("snr_db " + " ".join(f"{s:>16}" for s in res.schemes))
for v in res.sweep_values:
    row = {r.scheme: r.mean_rate_per_subcarrier for r in res.rows if r.sweep_value == v}
    print(f"{v:6.1f} " + " ".join(f"{row[s]:16.4f}" for s in res.schemes))

# %%
for at in (10.0, 12.0, 14.0):
    print(f"SNR gain of optimal_sp over no_sp at {at:g} dB: "
          f"{snr_gain_db(res, 'optimal_sp', 'no_sp', at):.2f} dB")
