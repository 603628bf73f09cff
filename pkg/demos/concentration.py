"""
How fast the degree-product estimate settles
============================================

For a fixed null model, the worst error of d_i d_j / sum(d) over 100 probe
pairs shrinks like n^-1/2: multiplied by sqrt(n) it stays roughly flat.
"""

from dcsbm_tw.montecarlo import ExperimentConfig, concentration_experiment

res = concentration_experiment(ExperimentConfig("concentration", (500, 1000, 2000, 4000), 20, seed=1))
for n, med in res.metrics["median_scaled_error"].items():
    print(f"n = {n:<5} median sqrt(n) * max error = {med:.3f}")

print()
print(res.tables["coverage"])
