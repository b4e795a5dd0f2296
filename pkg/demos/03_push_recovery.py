# %% [markdown]
# # Push recovery in closed loop
#
# The bundled scenarios walk at 0.5 m/s and receive a 0.3 s shove.  The
# controller re-plans every 10 ms and steps when the planned remaining
# time drops below one control tick.

# %%
from lipstep import run_simulation, settling_time
from lipstep.config import load_config

for name in ("backward_push", "forward_push"):
    sc = load_config(name).scenario
    tr = run_simulation(sc)
    push = sc.pushes[0]
    print(f"{name}: fell={tr.fell}, steps={len(tr.step_events)}")
    prev = 0.0
    for e in tr.step_events:
        tag = "  <- recovery" if e.t > push.t_start and prev < push.t_stop + 1.0 else ""
        print(f"   step at {e.t:5.2f} s  duration {e.t - prev:.2f}  p={e.p:+.3f}{tag}")
        prev = e.t
    t_s = settling_time(tr, sc)
    print(f"   velocity settled {t_s - push.t_stop:.2f} s after the push" if t_s else "   never settled")
