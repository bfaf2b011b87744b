"""
Monte Carlo checks: consistency and normality
=============================================

With a known ground truth we can watch the estimation error shrink as the
number of slices grows (beta = 1/T), and check that the centred, scaled
estimate looks Gaussian across independent replicates (beta = T^-0.6). The
run sizes here are small so the script finishes in well under a minute; the
command line ``simplexpred validate`` runs the full-size versions.
"""

from simplexpred import SyntheticConfig, consistency_experiment, normality_experiment

config = SyntheticConfig(immigration=0.5)

print("T     mean |g_est - g|")
for T, err in consistency_experiment(config, [25, 100, 400], replicates=20):
    print(f"{T:<5} {err:.4f}")

stat, p, var = normality_experiment(config, T=150, replicates=100)
print(f"\nKS statistic {stat:.3f}, p-value {p:.3f}, variance of sqrt(T)(g_est - g): {var:.3f}")
