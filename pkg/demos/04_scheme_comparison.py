"""Paired Monte Carlo comparison of the four pointing schemes.

Run: python demos/04_scheme_comparison.py  (about a minute)
"""
import numpy as np

from ra_cellfree import ExperimentConfig, SystemParams, empirical_cdf, run_monte_carlo

config = ExperimentConfig(params=SystemParams(num_aps=30, num_users=10), trials=20, master_seed=7)
result = run_monte_carlo(config)

for scheme in config.schemes:
    rates = np.array([x for r in result.select(scheme) for x in r.per_user_rate])
    cdf = dict(empirical_cdf(rates, [0.01, 2.0, 10.0]))
    print(f"{scheme:10s} mean sum rate {result.mean_sum_rate(scheme):7.2f}  "
          f"P(rate<=0.01)={cdf[0.01]:.2f}  P(rate<=2)={cdf[2.0]:.2f}  P(rate<=10)={cdf[10.0]:.2f}")
