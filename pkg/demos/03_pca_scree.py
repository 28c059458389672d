"""PCA on data of known intrinsic rank: eigenvalues, scree, component counts."""

import numpy as np

from ransomkit.engineering import components_for_variance, fit_pca, scree, transform

rng = np.random.default_rng(0)

# 40-dimensional data that actually lives in a 5-dimensional subspace
rank = 5
basis = np.linalg.qr(rng.normal(size=(40, rank)))[0]
coords = rng.normal(size=(200, rank)) * np.array([9.0, 6.0, 4.0, 2.0, 1.0])
X = coords @ basis.T + 0.001 * rng.normal(size=(200, 40))

model = fit_pca(X)
print("top eigenvalues:", np.round(model.eigenvalues[:8], 4))
print("explained variance ratio:", np.round(model.explained_variance_ratio[:8], 4))

print("\nscree series (first 8 points):")
for component, cumulative in scree(model)[:8]:
    bar = "#" * int(cumulative * 40)
    print(f"  {component:3d} {cumulative:8.5f} {bar}")

for threshold in (0.9, 0.99, 0.999):
    k = components_for_variance(model, threshold)
    print(f"components for {threshold:.1%} variance: {k}")

Z = transform(model, X)
print("\nprojection variances match the eigenvalues:",
      np.allclose(Z.var(axis=0), model.eigenvalues, atol=1e-8))
