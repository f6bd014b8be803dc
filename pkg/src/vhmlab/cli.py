"""Command-line front end: ``vhm-lab {check,sweep,kms,spectrum} --config PATH``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
configuration or I/O error.
"""
import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .checks import run_check, run_kms, run_spectrum, run_sweep
from .config import ConfigError, config_from_dict
from .model import write_flow_csv

CONFIG_HELP = """\
configuration (one JSON object):
  M, mu, N            required; mu > 0, N >= 1
  omega               list of M frequencies >= mu, or
  omega_rule          "ladder" (sqrt(mu^2 + k^2)) or "harmonic" (k mu)
  seed                required unless "randomized": false
  source              {"v": [...]} (numbers or [re, im]) or {"profile": name};
                      default v = 0.3 in every mode
  tolerances          per-check overrides, e.g. {"kms_pointwise": 1e-12}
  betas               increasing inverse temperatures, default [1,2,5,10,20,50]
  t_points, t_max     KMS time grid, default 64 points on [0, 2 pi]
  samples             FFT length of the ground-state test, default 256
  random_instances    random draws per randomized check, default 20
  sweep               {"profile": "mild"|"critical"|"severe" (default severe),
                       "mu", "lambdas" (default 10..200 step 10),
                       "overlap_level" (default 0.01),
                       "extend_to_threshold" (default true)}
  spectrum_g          dressing argument for the spectrum command
                      (default: g = 0 plus random draws)
"""


def build_parser():
    p = argparse.ArgumentParser(
        prog="vhm-lab",
        description="Verification runs for the van Hove model.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("command", choices=["check", "sweep", "kms", "spectrum"])
    p.add_argument("--config", required=True, metavar="PATH", help="JSON configuration file")
    p.add_argument("--output", default="./out", metavar="DIR", help="output directory (default ./out)")
    p.add_argument("--tolerance-scale", type=float, default=1.0, metavar="FLOAT",
                   help="multiplies every default tolerance (default 1)")
    p.add_argument("--seed", type=int, default=None, metavar="INT", help="overrides the config seed")
    p.add_argument("--quiet", action="store_true", help="print nothing on success")
    return p


def _load(args):
    with open(args.config) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: not valid JSON ({exc})") from exc
    if isinstance(raw, dict) and args.seed is not None:
        raw = dict(raw, seed=args.seed)
    cfg = config_from_dict(raw)
    if not args.tolerance_scale > 0:
        raise ConfigError("--tolerance-scale must be > 0")
    return dataclasses.replace(cfg, output=args.output)


def _write_report(report, out):
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    (out / "report.json").write_text(text)


def _summary(report):
    lines = []
    for rec in sorted(report.records, key=lambda r: r.name):
        mark = "PASS" if rec.passed else "FAIL"
        rel = "<" if rec.bound == "upper" else ">"
        lines.append(f"{mark}  {rec.name:28s} {rec.measured:.3e} {rel} {rec.tolerance:.1e}")
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "sweep":
            rows, report = run_sweep(cfg, args.tolerance_scale)
            write_flow_csv(rows, out / "flow.csv")
        else:
            runner = {"check": run_check, "kms": run_kms, "spectrum": run_spectrum}[args.command]
            report = runner(cfg, args.tolerance_scale)
        _write_report(report, out)
    except (ConfigError, OSError) as exc:
        print(f"vhm-lab: error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet or not report.passed:
        print(_summary(report))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
