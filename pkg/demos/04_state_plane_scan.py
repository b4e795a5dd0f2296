# %% [markdown]
# # Scanning the state plane
#
# A coarse scan around the critical line shows where the two approaches
# disagree and where the optimal parameters jump between neighbouring
# states.  The full default grid (81 x 81) works the same way, it just
# takes a few minutes.

# %%
import numpy as np

from lipstep import GridSpec, ProblemConfig, compare_costs, detect_critical, scan_grid

gs = GridSpec(x_lo=-0.2, x_hi=0.4, x_step=0.05, v_lo=-2.0, v_hi=0.5, v_step=0.25)
cfg = ProblemConfig()
cells = scan_grid(gs, cfg)
print("grid shape", gs.shape)

# %%
cmp = compare_costs(cells)
print(f"cells where sequential is worse by > 1e-6: {cmp.n_above} ({100 * cmp.fraction_above:.1f}%)")
for x, v, d in cmp.worst[:5]:
    print(f"  x={x:+.2f} xd={v:+.2f}  diff={d:.4f}")

# %% [markdown]
# Jumps in the holistic parameters; the map marks energy-induced cells
# with E and step-limit cells with B.

# %%
ridge = detect_critical(cells, gs.shape, cfg.lip, cfg.bounds.L_max)
grid = np.full(gs.shape, ".")
for (i, j), k in zip(ridge.cells, ridge.kinds):
    grid[i, j] = "E" if k == "energy" else "B"
for v, row in zip(gs.vs[::-1], grid[::-1]):
    print(f"{v:+.2f} " + " ".join(row))
print("x from", gs.xs[0], "to", gs.xs[-1])
