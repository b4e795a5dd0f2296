# %% [markdown]
# # Solve time
#
# The sequential approach replaces a three-dimensional search by two
# scalar searches and a closed-form placement.  We time both on the
# states seen along the backward-push simulation.

# %%
from lipstep import benchmark, run_simulation
from lipstep.config import load_config

cfg = load_config("backward_push")
tr = run_simulation(cfg.scenario)
states = [(s.x_world - s.foot_world, s.xd) for s in tr.samples][::4]
elaps = [s.t_elap for s in tr.samples][::4]

res = benchmark(states, cfg.problem, 1, elaps)
for k in ("holistic", "sequential"):
    st = res[k]
    print(f"{k:10s} mean {1e3 * st.mean:7.3f} ms  median {1e3 * st.median:7.3f} ms  p95 {1e3 * st.p95:7.3f} ms")
print(f"holistic / sequential = {res['ratio']:.1f}")
