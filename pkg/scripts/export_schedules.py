#!/usr/bin/env python3
"""Write the pulse timing tables of every gate to CSV and JSON files."""
import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from spinforge.config import PhysicalConfig
from spinforge.timing import DERIVE_CONSTANTS, SHARED_CONSTANTS, gate_timing_table

GATES = ("not", "cz", "cnot", "ccnot", "cccnot")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="schedules", help="output directory")
    parser.add_argument(
        "--mode", choices=[DERIVE_CONSTANTS, SHARED_CONSTANTS], default=DERIVE_CONSTANTS
    )
    parser.add_argument("--omega", type=float, default=1.0)
    args = parser.parse_args()

    cfg = PhysicalConfig.natural_units(omega=args.omega, b0=args.omega)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for gate in GATES:
        schedule = gate_timing_table(gate, cfg, mode=args.mode)
        (out / f"{gate}.csv").write_text(schedule.to_csv_text())
        (out / f"{gate}.json").write_text(
            json.dumps(schedule.to_json_dict(), indent=2, sort_keys=True) + "\n"
        )
        total = schedule.totals["T"]
        print(f"{gate:8s} windows={len(schedule.solutions):2d} T={total:.6f} s")
    print(f"written to {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
