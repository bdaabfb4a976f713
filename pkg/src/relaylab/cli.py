"""``relaylab`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .channel import generate_channel, pairing_metrics
from .config import ConfigError, load_config, parse_config
from .experiments import power_from_snr, run_position_sweep, run_snr_sweep, substream
from .io import sweep_to_csv
from .pairing import BRUTE_FORCE_LIMIT, sorted_pairing
from .rate import rate_pairing
from .verify import verify_bound, verify_lemma, verify_theorem

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relaylab", description=(
        "Optimal subcarrier pairing for amplify-and-forward OFDM relaying."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pair", help="optimal pairing for one channel")
    p.add_argument("config", help="JSON config file")
    p.add_argument("--direct", action="store_true",
                   help="destination also combines the direct source path")
    p.add_argument("--out", help="write the JSON report here (default: stdout)")

    v = sub.add_parser("verify", help="randomized optimality checks")
    v.add_argument("check", choices=("lemma", "theorem", "bound"))
    v.add_argument("--n", type=int, default=None,
                   help="subcarriers (lemma: 6, theorem: 2; bound: max size, 8)")
    v.add_argument("--trials", type=int, default=None,
                   help="random cases (lemma 200, theorem 50, bound 1000)")
    v.add_argument("--restarts", type=int, default=8, help="Haar restarts per case (theorem)")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=None,
                   help="tolerance (lemma 1e-9 relative, theorem 1e-6, bound 1e-12)")
    v.add_argument("--only", type=int, default=None, metavar="INDEX",
                   help="replay a single case index")

    s = sub.add_parser("sweep", help="Monte-Carlo scheme comparison, CSV output")
    s.add_argument("axis", choices=("snr", "position"))
    s.add_argument("config", help="JSON config file")
    s.add_argument("--out", help="CSV path (default: config 'output')")
    s.add_argument("--seed", type=int, help="override master_seed")
    s.add_argument("--trials", type=int, help="override trials")
    s.add_argument("--snr-db", type=_float_list, help="override snr_db_list, e.g. 0,5,10")
    s.add_argument("--ratios", type=_float_list, help="override position_ratio_list")
    return parser


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_pair(args) -> int:
    cfg = load_config(args.config)
    direct = bool(args.direct)
    channel = cfg.channel_obj()
    params = cfg.system_params(direct)
    if params is None:
        params = power_from_snr(cfg.snr_db_fixed, cfg.geometry_obj(), cfg.n_subcarriers, direct)
    if channel is None:
        channel = generate_channel(cfg.geometry_obj(), params, substream(cfg.master_seed, 0, 0))
    elif not direct:
        channel = type(channel).relay_only(channel.h1, channel.h2)
    metrics = pairing_metrics(params, channel)
    perm = sorted_pairing(metrics, direct)
    rate = rate_pairing(perm, metrics, direct)

    print(f"direct path: {'yes' if direct else 'no'}   N = {metrics.n}")
    print(f"map (1-based): {perm.one_based()}")
    print(f"{'input':>6} {'output':>6} {'sinr':>14} {'bits':>12}")
    for pr in rate.per_pair:
        print(f"{pr.i + 1:>6} {pr.j + 1:>6} {pr.sinr:>14.6g} {pr.bits:>12.6f}")
    print(f"total rate: {rate.total_bits:.6f} bits   per subcarrier: {rate.per_subcarrier:.6f}")

    report = {
        "schema_version": 1,
        "direct_path": direct,
        "n_subcarriers": metrics.n,
        "map": perm.one_based(),
        "pairs": [{"input": pr.i + 1, "output": pr.j + 1, "sinr": pr.sinr, "bits": pr.bits}
                  for pr in rate.per_pair],
        "total_bits": rate.total_bits,
        "bits_per_subcarrier": rate.per_subcarrier,
    }
    text = json.dumps(report, indent=2) + "\n"
    out = args.out or cfg.output
    if out:
        _write_text(out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_VERIFY_DEFAULTS = {"lemma": (6, 200), "theorem": (2, 50), "bound": (8, 1000)}


def cmd_verify(args) -> int:
    n_default, trials_default = _VERIFY_DEFAULTS[args.check]
    n = n_default if args.n is None else args.n
    trials = trials_default if args.trials is None else args.trials
    if n < 1 or trials < 1 or args.restarts < 1 or args.seed < 0:
        print("error: --n, --trials, --restarts must be positive and --seed nonnegative",
              file=sys.stderr)
        return EXIT_USAGE
    extra = {} if args.tol is None else {"tol": args.tol}
    if args.check == "lemma":
        if n > BRUTE_FORCE_LIMIT:
            print(f"error: --n {n} exceeds the enumeration limit {BRUTE_FORCE_LIMIT}",
                  file=sys.stderr)
            return EXIT_USAGE
        report = verify_lemma(n, trials, args.seed, only=args.only, **extra)
    elif args.check == "theorem":
        if n < 2:
            print("error: theorem check needs --n >= 2", file=sys.stderr)
            return EXIT_USAGE
        report = verify_theorem(n, trials, args.restarts, args.seed, only=args.only, **extra)
    else:
        report = verify_bound(n, trials, args.seed, only=args.only, **extra)

    print(f"{report.name}: n={n} seed={args.seed} checked={report.checked} "
          f"failures={len(report.failures)}")
    for f in report.failures:
        print(f"FAIL index={f.index} digest={f.digest}: {f.detail}")
        replay = f"relaylab verify {args.check} --n {n} --seed {args.seed} --only {f.index}"
        if args.check == "theorem":
            replay += f" --restarts {args.restarts}"
        print(f"  replay: {replay}")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.snr_db is not None:
        updates["snr_db_list"] = args.snr_db
    if args.ratios is not None:
        updates["position_ratio_list"] = args.ratios
    if updates:
        merged = cfg.model_dump(exclude_none=True) | updates
        cfg = parse_config(json.dumps(merged), args.config)
    out = args.out or cfg.output
    if not out:
        print("error: no output path (use --out or set 'output' in the config)", file=sys.stderr)
        return EXIT_USAGE
    parent = os.path.dirname(os.path.abspath(out))
    if not os.path.isdir(parent):
        print(f"I/O error: output directory {parent} does not exist", file=sys.stderr)
        return EXIT_IO
    scenario = cfg.scenario()
    if args.axis == "snr":
        result = run_snr_sweep(scenario)
    else:
        result = run_position_sweep(scenario)
    _write_text(out, sweep_to_csv(result))
    print(f"wrote {len(result.rows)} rows to {out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"pair": cmd_pair, "verify": cmd_verify, "sweep": cmd_sweep}[args.command]
    try:
        return handler(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
