# %% [markdown]
# # Holistic versus sequential step optimization
#
# Both approaches pick the remaining current-step time T_s0, the next
# step time T_s1 and the placement p so that the next two step ends land
# near the symmetric-gait target.  The holistic version searches all three
# jointly; the sequential one fixes T_s0 first and then gets p in closed
# form from weighted least squares, clipped to the step-length limit.

# %%
from lipstep import CostWeights, GaitTarget, LipParams, StepBounds, holistic_optimize, sequential_optimize

p = LipParams()
tgt = GaitTarget(T_sd=0.8, xd_d=1.0)
bounds = StepBounds(T_min=0.6, T_max=2.0, L_max=0.5)
T_elap = bounds.T_min  # an immediate step is allowed


def show(s, w):
    for fn in (holistic_optimize, sequential_optimize):
        o = fn(s, tgt, bounds, w, p, T_elap)
        T0, T1, pl = o.params
        print(f"  {fn.__name__:20s} T_s0={T0:.4f} T_s1={T1:.4f} p={pl:+.4f} cost={o.cost:.5f}")


# %% [markdown]
# Neighbouring states across the critical line.  The backward one needs
# a quick short step back; the forward one keeps walking.

# %%
for s in [(0.03, -0.12), (0.04, -0.12)]:
    print(s)
    show(s, CostWeights())

# %% [markdown]
# A hard backward shove saturates the placement.  With position-heavy
# weights the sequential answer commits to a short step that the
# holistic search avoids.

# %%
print("identity weights")
show((0.35, -1.90), CostWeights())
print("position-weighted diag(50, 1)")
show((0.35, -1.90), CostWeights.uniform(50.0, 1.0))
