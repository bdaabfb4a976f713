"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is repeated in the terminal
summary under "acceptance criteria".
"""

import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from relaylab.cli import main
from relaylab.config import load_config
from relaylab.experiments import run_position_sweep, run_snr_sweep, snr_gain_db
from relaylab.pairing import brute_force_pairing, sorted_pairing
from relaylab.perm import Permutation
from relaylab.rate import rate_general, rate_pairing
from relaylab.unitary import (ascend_restarts, directional_derivative, gram_matrix,
                              haar_random, psd_det_bound_check, random_skew_hermitian)

from conftest import random_setup

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_1_lemma_exactness(acceptance_log):
    t0 = time.perf_counter()
    worst, cases = 0.0, 0
    for n in range(2, 8):
        rng = np.random.default_rng([1, n])
        for _ in range(200):
            for direct in (False, True):
                _, _, m = random_setup(rng, n, direct)
                fast = rate_pairing(sorted_pairing(m, direct), m, direct).total_bits
                worst = max(worst, rel(fast, brute_force_pairing(m, direct)[1]))
                cases += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 120
    acceptance_log(1, "sorted pairing exactness", ok,
                   f"{cases} cases, worst rel gap {worst:.2e} (<=1e-9), {elapsed:.1f}s (<120s)")
    assert ok


def test_2_closed_form_matches_logdet(acceptance_log):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 17))
        direct = bool(rng.integers(2))
        params, ch, m = random_setup(rng, n, direct)
        perm = Permutation(rng.permutation(n))
        worst = max(worst, rel(rate_pairing(perm, m, direct).total_bits,
                               rate_general(perm.matrix(), params, ch)))
    ok = worst <= 1e-10
    acceptance_log(2, "closed form vs log-det", ok,
                   f"500 instances, worst rel gap {worst:.2e} (<=1e-10)")
    assert ok


def test_3_theorem_desk_scale(acceptance_log):
    over, short, deriv = -np.inf, {}, 0.0
    for n in (2, 3, 4):
        short[n] = 0.0
        for c in range(50):
            for direct in (False, True):
                rng = np.random.default_rng([3, n, c, int(direct)])
                params, ch, m = random_setup(rng, n, direct)
                perm = sorted_pairing(m, direct)
                opt = rate_pairing(perm, m, direct).total_bits
                runs = ascend_restarts(params, ch, 8, rng)
                over = max(over, max(r.rate for r in runs) - opt)
                short[n] = max(short[n], opt - runs[0].rate)
                for _ in range(20):
                    s = random_skew_hermitian(n, rng)
                    deriv = max(deriv, abs(directional_derivative(perm.matrix(), s, params, ch)))
    ok = (over <= 1e-6 and short[2] <= 1e-4 and short[3] <= 1e-3 and short[4] <= 1e-3
          and deriv <= 1e-6)
    acceptance_log(3, "unitary optimality of pairing", ok,
                   f"max excess {over:.1e} (<=1e-6), best-restart shortfall "
                   f"N2 {short[2]:.1e} (<=1e-4) N3 {short[3]:.1e} N4 {short[4]:.1e} (<=1e-3), "
                   f"max |derivative| {deriv:.1e} (<=1e-6)")
    assert ok


def test_4_determinant_bound(acceptance_log):
    rng = np.random.default_rng(4)
    passed = 0
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        q = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        passed += psd_det_bound_check(gram_matrix(p, haar_random(n, rng), q))
    eq_gap = 0.0
    for n in range(1, 9):
        for _ in range(20):
            a = np.diag(rng.exponential(size=n) * rng.uniform(0.1, 10))
            lhs = np.linalg.det(np.eye(n) + a)
            rhs = (1 + a[-1, -1]) * np.linalg.det(np.eye(n - 1) + a[:-1, :-1])
            eq_gap = max(eq_gap, abs(lhs - rhs) / lhs)
    ok = passed == 1000 and eq_gap <= 1e-12
    acceptance_log(4, "determinant bound", ok,
                   f"{passed}/1000 true, diagonal equality rel gap {eq_gap:.1e} (<=1e-12)")
    assert ok


@pytest.fixture(scope="module")
def fig2():
    cfg = load_config(CONFIGS / "fig2_snr.json").scenario()
    t0 = time.perf_counter()
    res = run_snr_sweep(cfg)
    return cfg, res, time.perf_counter() - t0


def test_5_snr_sweep(fig2, acceptance_log):
    cfg, res, elapsed = fig2
    assert (cfg.n_subcarriers, cfg.taps_per_link, cfg.trials) == (128, (11, 11, 11), 500)
    g = cfg.geometry
    assert (g.d_sd, g.d_sr, g.d_rd, g.pathloss_exp) == (20, 6, 16, 2)
    assert cfg.snr_db_list == tuple(float(x) for x in range(0, 21, 2))
    x, best = res.curve("optimal_sp")
    dominates = all(np.all(best >= res.curve(s)[1]) for s in res.schemes)
    gains = [snr_gain_db(res, "optimal_sp", "no_sp", at) for at in (10.0, 12.0, 14.0)]
    in_band = all(0.3 <= gval <= 2.0 for gval in gains)
    ok = dominates and in_band and elapsed < 600
    acceptance_log(5, "SNR sweep", ok,
                   "optimal_sp dominates at every point: "
                   f"{dominates}; SNR gain over no_sp at 10/12/14 dB = "
                   + "/".join(f"{gval:.2f}" for gval in gains)
                   + f" dB (in [0.3, 2.0]); {elapsed:.0f}s (<600s)")
    assert ok


def test_6_position_sweep(acceptance_log):
    cfg = load_config(CONFIGS / "fig3_position.json").scenario()
    assert cfg.snr_db_fixed == 14.0
    res = run_position_sweep(cfg)
    x, opt = res.curve("optimal_sp")
    _, none = res.curve("no_sp")
    gap = opt - none
    ok = gap[-1] < 0.25 * gap[0]
    acceptance_log(6, "position sweep", ok,
                   f"gap at ratio {x[0]:g}: {gap[0]:.4f}, at ratio {x[-1]:g}: {gap[-1]:.4f} "
                   f"({gap[-1] / gap[0]:.1%} < 25%)")
    assert ok


def test_7_determinism(tmp_path, monkeypatch, capsys, acceptance_log):
    runs = {}
    for threads in ("1", "8"):
        monkeypatch.setenv("RELAYLAB_THREADS", threads)
        for rep in range(2):
            d = tmp_path / f"t{threads}_{rep}"
            d.mkdir()
            # relative paths so the echoed "wrote ..." lines match across runs
            monkeypatch.chdir(d)
            files = {
                "pair.json": ["pair", str(CONFIGS / "fig2_snr.json"), "--direct"],
                "snr.csv": ["sweep", "snr", str(CONFIGS / "fig2_snr.json"), "--trials", "40"],
                "position.csv": ["sweep", "position", str(CONFIGS / "fig3_position.json"),
                                 "--trials", "40"],
            }
            for name, argv in files.items():
                assert main(argv + ["--out", name]) == 0
            assert main(["verify", "lemma", "--n", "5", "--trials", "20"]) == 0
            (d / "stdout.txt").write_text(capsys.readouterr().out)
            runs[(threads, rep)] = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
    reference = runs[("1", 0)]
    ok = all(r == reference for r in runs.values())
    acceptance_log(7, "determinism", ok,
                   f"{len(reference)} outputs byte-identical over 2 runs x threads 1/8: {ok}")
    assert ok


def test_8_rearrangement(acceptance_log):
    rng = np.random.default_rng(8)
    violations, checked = 0, 0
    for n in range(1, 7):
        perms = np.array(list(itertools.permutations(range(n))))
        for _ in range(100):
            a, b = rng.exponential(size=n), rng.exponential(size=n)
            best = np.prod(1 + np.sort(a) * np.sort(b))
            values = np.prod(1 + a[None, :] * b[perms], axis=1)
            violations += int(np.sum(values > best * (1 + 1e-12)))
            checked += 1
    ok = violations == 0
    acceptance_log(8, "rearrangement property", ok,
                   f"{checked} (a, b) pairs, n<=6 exhaustive, {violations} violations")
    assert ok
