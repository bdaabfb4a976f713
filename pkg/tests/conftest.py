import numpy as np
import pytest

from relaylab import ChannelRealization, SystemParams, pairing_metrics
from relaylab.channel import Geometry, generate_channel
from relaylab.experiments import power_from_snr


@pytest.fixture
def toy_t1():
    """N=2, unit noise, d_s=[1,1], |h1|=[2,1], |h2|=[1,3], P_r=7 so d_r=1."""
    params = SystemParams(2, 1.0, 1.0, 2.0, 7.0, [1.0, 1.0])
    channel = ChannelRealization.relay_only([2.0, 1.0], [1.0, 3.0])
    return params, channel


@pytest.fixture
def toy_t2():
    """Toy T1 plus a direct path h0=[1,2], i.e. snr_sd=[1,4]."""
    params = SystemParams(2, 1.0, 1.0, 2.0, 7.0, [1.0, 1.0], direct_path=True)
    channel = ChannelRealization([1.0, 2.0], [2.0, 1.0], [1.0, 3.0])
    return params, channel


def random_setup(rng, n, direct, snr_db=None, taps=None):
    """Random geometry/SNR draw with a frequency-selective channel."""
    if snr_db is None:
        snr_db = rng.uniform(0, 20)
    ratio = np.exp(rng.uniform(np.log(0.1), np.log(10)))
    if taps is None:
        taps = int(rng.integers(1, min(n, 11) + 1))
    geo = Geometry(20.0, 20 * ratio / (1 + ratio), 20 / (1 + ratio), 2.0, taps)
    params = power_from_snr(snr_db, geo, n, direct)
    channel = generate_channel(geo, params, rng)
    return params, channel, pairing_metrics(params, channel)


@pytest.fixture
def make_random():
    return random_setup


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, name, ok, detail=""):
        line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip()
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
