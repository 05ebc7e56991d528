"""Excess hinge risk of the averaged estimate against its bound, with baselines.

Sixteen symmetric decision stumps are aggregated on a fixed 32-atom law.
Because the law is finite, the risk of every estimate is computed exactly
and the batch optimum comes from a linear program, so the only noise in the
table is Monte Carlo noise over replicates.
"""

from smdagg import ExperimentConfig, run_experiment

T_GRID = [10, 100, 1000]

print(f"{'algorithm':<10}{'t':>6}{'excess':>10}{'stderr':>9}{'bound':>9}{'misclass':>10}")
for algorithm in ("smd", "eg", "sgd"):
    cfg = ExperimentConfig(algorithm=algorithm, replicates=50, t_grid=T_GRID, seed=1)
    for r in run_experiment(cfg):
        print(f"{r.algorithm:<10}{r.t:>6}{r.excess:>10.4f}{r.stderr:>9.4f}"
              f"{r.bound:>9.4f}{r.misclassification:>10.4f}")

# The last iterate of EG usually beats its own average here: the problem has
# a sharp (hinge) optimum that a sequence of Gibbs points approaches quickly.
# Projected SGD with unit steps keeps jumping between vertices, which is why
# its excess stalls; the bound column only certifies the mirror-descent rows.

# Knowing the horizon buys the constant sqrt(2) / 2 over the anytime schedule.
fixed = run_experiment(ExperimentConfig(schedule="fixed", replicates=50, t_grid=[1000], seed=1))
print(f"\nfixed horizon, t=1000: excess {fixed[0].excess:.4f}, bound {fixed[0].bound:.4f}")
