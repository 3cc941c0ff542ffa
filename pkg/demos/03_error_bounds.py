"""Evaluate the finite-sample error bounds and invert them.

The q-error bound maps an information count n_k to a high-probability
ceiling on the sup-norm gap between the Q table planned in the estimated
model and the true optimum.  Inverting it answers the planning question:
how many informative samples buy a given accuracy.
"""

import numpy as np

import greybox_mdp as gm

model = gm.build_queue()
spec = model.spec

lip = gm.estimate_lipschitz(spec, num_pairs=5_000,
                            rng=np.random.default_rng(0))
print(f"sampled Lipschitz constant: {lip.value:.2f} "
      f"(over {lip.pairs_sampled} parameter pairs)")

sigma = gm.plug_in_sigma(spec.true_params[spec.active])
print(f"plug-in sigma_mu: {sigma:.4f}  "
      f"(worst case for 4 parameters: {gm.worst_case_sigma(4):.1f})")

inputs = gm.BoundInputs(gamma=spec.gamma, num_pairs=spec.num_pairs,
                        delta=0.1, lipschitz=lip.value, sigma_mu=sigma,
                        info_count=10_000)
print()
print(gm.bound_report(inputs, num_params=int(spec.active.sum()),
                      target_eps=0.5))

print()
print("samples needed per accuracy target:")
for eps in (1.0, 0.5, 0.1):
    need = gm.samples_for_accuracy(eps, gamma=inputs.gamma,
                                   num_pairs=inputs.num_pairs,
                                   delta=inputs.delta,
                                   lipschitz=inputs.lipschitz,
                                   sigma_mu=inputs.sigma_mu)
    back = gm.q_error_bound(gm.BoundInputs(
        gamma=inputs.gamma, num_pairs=inputs.num_pairs, delta=inputs.delta,
        lipschitz=inputs.lipschitz, sigma_mu=inputs.sigma_mu,
        info_count=need))
    print(f"  eps={eps:<5g} n={need:>12d}  bound at n: {back:.6f}")

print("\nthe q-level numbers are huge because the Lipschitz constant is a")
print("global worst case over the whole parameter cube; the parameter-level")
print("bound below is the part that tracks practice")

# Monte-Carlo check of the mean parameter-error bound at n = 400.
bound = gm.mean_param_error_bound(sigma, 400)
errors = []
for seed in range(100):
    batch = gm.generative_collect(model, 1_000,
                                  np.random.default_rng(seed))
    est = gm.EstimatorState.fresh(spec.num_params)
    gm.apply_batch(est, spec, batch, mode="strict")
    mu = gm.estimates(est, spec)
    errors.append(float(np.linalg.norm(mu - spec.true_params)))
print(f"\nmean L2 parameter error over 100 runs: {np.mean(errors):.4f} "
      f"(bound at n=400: {bound:.4f})")
