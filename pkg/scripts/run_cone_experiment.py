#!/usr/bin/env python3
"""Run the cone benchmark: BP vs. regularized reconstruction, full and 50% pulses.

Produces four result rows (two methods x two sampling fractions) and
prints them as a table.  Products for each fraction land in their own
subdirectory of --out.
"""

import argparse
import csv
import re
import sys
from pathlib import Path

from bpinsar.cli import main as cli_main
from bpinsar.config import default_config_text


def build_config(base_text: str, fraction: float) -> str:
    """Return base_text with the sampling fraction replaced."""
    text, count = re.subn(
        r"(?m)^fraction\s*=.*$", f"fraction = {fraction}", base_text
    )
    if count != 1:
        raise SystemExit(
            f"expected exactly one 'fraction =' line in the base config, found {count}"
        )
    return text


def run_pipeline(config_path: Path, out_dir: Path, threads: int | None) -> None:
    for command in ("simulate", "bp", "reconstruct", "evaluate"):
        argv = [command, "--config", str(config_path), "--out", str(out_dir)]
        if threads is not None:
            argv += ["--threads", str(threads)]
        code = cli_main(argv)
        if code != 0:
            raise SystemExit(f"{command} failed with exit code {code}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--config",
        metavar="PATH",
        default=None,
        help="base config file (default: built-in cone defaults)",
    )
    parser.add_argument(
        "--out",
        metavar="DIR",
        default="runs/cone_experiment",
        help="output root; one subdirectory per sampling fraction",
    )
    parser.add_argument(
        "--threads", metavar="N", type=int, default=None, help="worker thread count"
    )
    args = parser.parse_args(argv)

    if args.config is not None:
        base_text = Path(args.config).read_text()
    else:
        base_text = default_config_text()

    out_root = Path(args.out)
    rows = []
    for fraction, label in ((1.0, "full"), (0.5, "half")):
        run_dir = out_root / label
        run_dir.mkdir(parents=True, exist_ok=True)
        config_path = run_dir / "config.ini"
        config_path.write_text(build_config(base_text, fraction))
        print(f"== sampling fraction {fraction:.2f} -> {run_dir}", flush=True)
        run_pipeline(config_path, run_dir, args.threads)
        with open(run_dir / "evaluation.csv", newline="") as handle:
            rows.extend(csv.DictReader(handle))

    header = ("method", "sampling_fraction", "rmse_rad", "mean_coherence", "residue_count")
    widths = [max(len(h), *(len(r[h]) for r in rows)) for h in header]
    print()
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(row[h].ljust(w) for h, w in zip(header, widths)))

    by_key = {(r["method"], r["sampling_fraction"]): float(r["rmse_rad"]) for r in rows}
    ok = all(
        by_key[("proposed", frac)] < by_key[("bp", frac)]
        for frac in {r["sampling_fraction"] for r in rows}
    )
    print()
    verdict = "yes" if ok else "NO"
    print(f"regularized reconstruction beats BP at every fraction: {verdict}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
