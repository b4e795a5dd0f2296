"""Brute-force reference solutions, written independently of the library solvers.

Everything here is plain enumeration on numpy grids built from the LIP
closed form; nothing calls the golden-section, Nelder-Mead or
least-squares code under test.
"""

import numpy as np

DEFAULT_XS = np.round(np.arange(-0.4, 0.4 + 1e-9, 0.01), 12)
DEFAULT_VS = np.round(np.arange(-2.0, 2.0 + 1e-9, 0.05), 12)


def lip_flow(x, v, T, Tc):
    C, S = np.cosh(T / Tc), np.sinh(T / Tc)
    return x * C + Tc * v * S, x / Tc * S + v * C


def werr(x, v, goal, W):
    return W[0] * (x - goal[0]) ** 2 + W[1] * (v - goal[1]) ** 2


def stage1_grid(s, goal, W, Tc, lo, hi, n=100_000):
    """Returns ``(T_best, cost_best, cell_width)`` over ``n`` equispaced durations."""
    T = np.linspace(lo, hi, n)
    c = werr(*lip_flow(s[0], s[1], T, Tc), goal, W)
    i = int(np.argmin(c))
    return T[i], c[i], T[1] - T[0]


def next_end(v1, P, T1, Tc):
    # next step starts at -P with velocity v1
    return lip_flow(-P, v1, T1, Tc)


def stage2_grid(v1, goal, W, Tc, T_lo, T_hi, L_max, n=1000, zooms=3):
    """Exhaustive (T_s1, p) search on an n x n grid.

    The placement valley narrows sharply for long steps (its width shrinks
    like 1/cosh^2), so each duration row is refined by a few nested local
    enumerations in p before the rows are compared.  Returns
    ``(T_best, p_best, cost_best, dT, dp)`` with the coarse cell sizes.
    """
    T = np.linspace(T_lo, T_hi, n)[:, None]
    P = np.linspace(-L_max, L_max, n)[None, :]
    c = werr(*next_end(v1, P, T, Tc), goal, W)
    pb = P[0, np.argmin(c, axis=1)]
    h = 2 * L_max / (n - 1)
    rows = np.arange(n)
    for _ in range(zooms):
        Pz = np.clip(pb[:, None] + np.linspace(-h, h, 21)[None, :], -L_max, L_max)
        cz = werr(*next_end(v1, Pz, T, Tc), goal, W)
        pb = Pz[rows, np.argmin(cz, axis=1)]
        h /= 10
    cr = werr(*next_end(v1, pb, T[:, 0], Tc), goal, W)
    i = int(np.argmin(cr))
    return T[i, 0], pb[i], cr[i], (T_hi - T_lo) / (n - 1), 2 * L_max / (n - 1)


def holistic_grid_min(s, goal, W1, W2, Tc, lo, hi, n=101):
    """Minimum combined cost on an n^3 grid over the box ``lo``..``hi``."""
    T0 = np.linspace(lo[0], hi[0], n)[:, None, None]
    T1 = np.linspace(lo[1], hi[1], n)[None, :, None]
    P = np.linspace(lo[2], hi[2], n)[None, None, :]
    x1, v1 = lip_flow(s[0], s[1], T0, Tc)
    x2, v2 = next_end(v1, P, T1, Tc)
    c = werr(x1, v1, goal, W1) + werr(x2, v2, goal, W2)
    return float(c.min())


def random_grid_states(seed, n):
    rng = np.random.default_rng(seed)
    return [(float(rng.choice(DEFAULT_XS)), float(rng.choice(DEFAULT_VS))) for _ in range(n)]
