"""
Bulk spectrum under the null
============================

One graph with a single community, n = 3000.  After centering by the
degree-product estimate and scaling by n^-1/2, the eigenvalue histogram
sits on the semicircle density on [-2, 2].
"""

import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dcsbm_tw.model import generate_null_experiment, sample_adjacency
from dcsbm_tw.spectra import esd, ks_distance_to_semicircle, semicircle_pdf, symmetric_eigenvalues
from dcsbm_tw.transform import estimated_transform, scale

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3000
params = generate_null_experiment(n, seed=1)
A = sample_adjacency(params, seed=2)
print(f"n = {n}, edges = {A.edges().shape[0]}")

B = scale(estimated_transform(A))
spectrum = symmetric_eigenvalues(B.entries)
print(f"lambda_1 = {spectrum.lambda_max:.4f}, lambda_n = {spectrum.lambda_min:.4f}")
print(f"KS distance to the semicircle law: {ks_distance_to_semicircle(spectrum):.4f}")

hist = esd(spectrum, bins=60)
x = np.linspace(-2.2, 2.2, 400)
plt.bar(hist.centers, hist.density, width=np.diff(hist.edges), alpha=0.5, label="eigenvalues")
plt.plot(x, semicircle_pdf(x), "k", label="semicircle")
plt.legend()
plt.savefig("semicircle.png", dpi=120)
print("wrote semicircle.png")
