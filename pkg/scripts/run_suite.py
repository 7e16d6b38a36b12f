"""
Batch runner for the acceptance suite
Runs every check over the catalog and saves results
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import pandas as pd

from ms_monotonicity.cli import RunConfig, run
from ms_monotonicity.errors import MonotonicityError
from ms_monotonicity.geometry import Point2

RESULTS = Path('results/suite')

# name -> RunConfig overrides
RUNS = {
    'scan_crack_tip': dict(command='scan', model_source='crack_tip', center=Point2(1.0, 0.0)),
    'scan_crack_tip_at_tip': dict(command='scan', model_source='crack_tip', center=Point2(0.0, 0.0), r_steps=200),
    'scan_interface': dict(command='scan', model_source='planar_interface', r_steps=200),
    'scan_propeller': dict(command='scan', model_source='propeller', center=Point2(0.3, 0.2), r_steps=200),
    'scan_smooth': dict(command='scan', model_source='smooth_quadratic', r_max=5.0, r_steps=200),
    'dlms_crack_tip': dict(command='dlms', model_source='crack_tip', center=Point2(1.0, 0.0)),
    'prop31_propeller': dict(command='prop31', model_source='propeller', center=Point2(0.3, 0.2), r_steps=200),
    'slice_crack_tip': dict(command='slice', model_source='crack_tip', center=Point2(0.0, 0.0), r_steps=200),
    'slice_propeller': dict(command='slice', model_source='propeller', center=Point2(0.0, 0.0), r_steps=200),
    'sharpness': dict(command='sharpness'),
    'competitor_crack_tip': dict(command='competitor', model_source='crack_tip', center=Point2(1.0, 0.0),
                                 r_min=0.1, r_max=5.0, r_steps=40),
    'twopoint': dict(command='twopoint'),
    'equilibrium_crack_tip': dict(command='equilibrium', model_source='crack_tip'),
    'equilibrium_propeller': dict(command='equilibrium', model_source='propeller'),
}


def main():
    print("="*60)
    print("MONOTONICITY ACCEPTANCE SUITE")
    print("="*60)
    print(f"\nRunning {len(RUNS)} checks...\n")

    results = []

    for i, (name, overrides) in enumerate(RUNS.items(), 1):
        print(f"[{i}/{len(RUNS)}] {name}...", end=' ')
        config = RunConfig(out_path=RESULTS / f"{name}.csv", **overrides)
        try:
            status = run(config, quiet=True)
            print("✓" if status == 0 else "✗ (verdict failed)")
            results.append({'check': name, 'command': config.command, 'model': config.model_source,
                            'status': status, 'output': str(config.output)})
        except MonotonicityError as e:
            print(f"❌ FAILED: {e}")
            results.append({'check': name, 'command': config.command, 'model': config.model_source,
                            'status': -1, 'output': ''})

    df = pd.DataFrame(results)
    RESULTS.mkdir(parents=True, exist_ok=True)
    df.to_csv(RESULTS / 'suite_summary.csv', index=False)
    print("\n💾 Results saved")

    print("\n" + "="*60)
    print("SUMMARY")
    print("="*60)
    passed = int((df['status'] == 0).sum())
    print(f"Checks: {len(df)}")
    print(f"Passed: {passed}")

    if passed == len(df):
        print("\n✅ Complete!")
        return 0
    print("\n✗ Failing checks: " + ", ".join(df.loc[df['status'] != 0, 'check']))
    return 1


if __name__ == "__main__":
    sys.exit(main())
