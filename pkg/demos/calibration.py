"""
Type-I error of the test
========================

Draw null graphs, run the two-sided test at several levels and compare the
rejection rate with alpha.  The Bonferroni split makes the test
conservative, so the rates land below alpha.
"""

import sys

from dcsbm_tw.montecarlo import ExperimentConfig, calibration_rates, null_calibration

n = int(sys.argv[1]) if len(sys.argv) > 1 else 500
trials = int(sys.argv[2]) if len(sys.argv) > 2 else 500

res = null_calibration(ExperimentConfig("null_calibration", n, trials, seed=3))
for alpha, rate in calibration_rates(res, n).items():
    print(f"alpha = {alpha:<5} empirical rate = {rate:.3f}")

print()
print(res.tables["calibration"])
