# %% [markdown]
# # The linear inverted pendulum
#
# The CoM moves at constant height over a point foot, so its horizontal
# motion obeys xdd = (g/z_c) x.  Here we propagate a few states, look at
# the conserved orbital energy and split the state plane along the
# critical line x + T_c*xd = 0.

# %%
import numpy as np

from lipstep import (
    GaitTarget,
    LipParams,
    classify_motion,
    critical_offset,
    desired_final_state,
    orbital_energy,
    propagate,
)

p = LipParams(z_c=1.0, g=9.81)
print("time constant T_c =", round(p.T_c, 5))

# %% [markdown]
# A symmetric step starts at [-x_d, xd_d] and ends at [x_d, xd_d].

# %%
tgt = GaitTarget(T_sd=0.8, xd_d=1.0)
xd = desired_final_state(tgt, p)
print("step-end target:", xd)
print("after one nominal step:", propagate((-xd.x, xd.xd), tgt.T_sd, p))

# %% [markdown]
# Orbital energy stays put along a trajectory.

# %%
s = (0.05, -0.4)
for t in np.linspace(0.0, 1.0, 5):
    st = propagate(s, t, p)
    print(f"t={t:.2f}  x={st.x:+.4f}  xd={st.xd:+.4f}  E={orbital_energy(st, p):+.6f}")

# %% [markdown]
# Two states one centimetre apart sit on opposite sides of the critical
# line: one falls back, the other passes over the foot.

# %%
for s in [(0.03, -0.12), (0.04, -0.12)]:
    print(s, "offset", round(critical_offset(s, p), 4), classify_motion(s, p).name)
