#!/usr/bin/env python3
"""Print the pulse-vs-ideal fidelity report for every component gate."""
import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from spinforge.config import PhysicalConfig
from spinforge.gates import audit_components, flagged_components


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit the JSON list")
    args = parser.parse_args()

    cfg = PhysicalConfig.natural_units()
    reports = audit_components(cfg)
    if args.json:
        print(json.dumps([r.to_json_dict() for r in reports], indent=2))
    else:
        print(f"{'component':<26s} {'fidelity':>18s} {'phase (rad)':>14s} {'max dev':>12s}")
        for r in reports:
            print(
                f"{r.gate_label:<26s} {r.fidelity:>18.15f} "
                f"{r.global_phase_rad:>+14.2e} {r.max_abs_dev:>12.2e}"
            )
    flagged = flagged_components(reports)
    if flagged:
        print(f"\nFLAGGED: {len(flagged)} component(s) deviate from the ideal layer")
        for r in flagged:
            print(f"  {r.gate_label}: F = {r.fidelity!r}")
        return 1
    print(f"\nall {len(reports)} components agree with the ideal layer")
    return 0


if __name__ == "__main__":
    sys.exit(main())
