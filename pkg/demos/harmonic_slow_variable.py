"""
Slow and fast directions of a harmonic potential
================================================

With U = x1^2 / 2 + 25 x2^2 / 2 the x2 direction relaxes 25 times faster.
The leading eigenvectors depend on x1 only, and the second one is a
parabola in the first.
"""

import numpy as np

from dmapx import recipes
from dmapx.oracles import tensor_spectrum

res = recipes.harmonic()
doc = res.summary

# %%
# Eigenvalue products mu1^i mu2^j of the separable problem for the alpha = 0
# chain. The top ones are all powers of mu1, so the x2 modes stay out of the
# leading part of the map. The recipe itself runs alpha = 1/2.

for value, idx in tensor_spectrum(doc["taus"], doc["epsilon"], 6):
    print(f"{value:.4f}  multi-index {idx}")

# %%
# What the computed map shows.

print("computed lambdas:", np.round(doc["lambdas"], 4))
print("|corr(psi_1, x1)| after 5% density trim:", round(abs(doc["corr_psi1_x1"]), 4))
print("psi_2 ~ a psi_1^2 + b psi_1 + c, R^2 =", round(doc["parabola_fit"]["r2"], 4))
