"""Q-learning against the true environment, with a model-based shadow.

Tabular Q-learning needs no model at all, which makes it the natural
baseline for the model estimators.  The observer hook lets an entry-wise
estimator consume the exact experience stream the learner generates, so
the comparison at each checkpoint is between two uses of one dataset:
bootstrapped value updates versus estimate-then-plan.
"""

import numpy as np

import greybox_mdp as gm

model = gm.build_gridworld(gm.GridConfig())
q_star = gm.policy_iteration(model.mdp)[1]

steps = 200_000
checkpoints = (10_000, 50_000, 100_000, 200_000)

spec = gm.entrywise_spec(model.mdp, model.spec.terminal_states)
est = gm.EstimatorState.fresh(spec.num_params)


def observer(z_chunk, next_chunk):
    gm.update_entrywise_batch(est, spec, z_chunk, next_chunk)


shadow_errors = {}


def on_checkpoint(step, q, visit_counts):
    q_hat = gm.policy_iteration(spec.reconstruct(gm.estimates(est, spec)))[1]
    shadow_errors[step] = gm.sup_norm_diff(q_hat, q_star)


result = gm.q_learning(
    model.mdp, steps, np.random.default_rng(7),
    start_state=model.start_state,
    terminal_states=model.spec.terminal_states,
    reference_q=q_star,
    checkpoints=checkpoints,
    observer=observer,
    on_checkpoint=on_checkpoint)

print("epsilon-greedy Q-learning on the gridworld")
print(f"{'step':>8} {'ql q error':>12} {'shadow model q error':>22}")
for step, err in zip(result.trace_steps, result.trace_errors):
    print(f"{step:>8} {err:>12.4f} {shadow_errors[step]:>22.4f}")

print()
print(f"final ql q error: {result.trace_errors[-1]:.4f}")
print("the shadow model plans from the identical experience, so any gap")
print("is the price of bootstrapping rather than of different data")
