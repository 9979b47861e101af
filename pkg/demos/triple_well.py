"""
Three wells and a triangle
==========================

Samples of a three-well potential at inverse temperature 2, confined to
[-2.5, 2.5]^2. In the plane of the first two nontrivial eigenvectors the
three wells sit at the corners of a triangle, and k-means on that plane
recovers the well membership.
"""

import numpy as np

from dmapx import recipes

res = recipes.triplewell()
doc = res.summary
print("wells:", np.round(doc["wells"], 4).tolist())
print("points per well:", doc["well_counts"])
print("lambdas:", np.round(doc["lambdas"], 4))

# %%
# Corners of the triangle: the mean (psi_1, psi_2) of each well.

psi = res.dmap.spectrum.psi[:, 1:3]
truth = res.extra["truth"]
for w in range(3):
    print(f"well {w}: centre {np.round(psi[truth == w].mean(axis=0), 3)}")

print("k-means purity:", round(doc["kmeans_purity"], 4))
