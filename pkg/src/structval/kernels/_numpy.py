"""Pure numpy implementations of the table kernels.

These are the reference versions; the numba module mirrors each function
with an explicit-loop body.
"""
import numpy as np


def closure_mask(table, seed):
    """Smallest subset containing ``seed`` and 0 that is closed under the table."""
    mask = seed.copy()
    mask[0] = True
    while True:
        idx = np.flatnonzero(mask)
        prod = table[np.ix_(idx, idx)].ravel()
        new = mask.copy()
        new[prod] = True
        if new.sum() == mask.sum():
            return mask
        mask = new


def extend_hom(table_g, table_b, gens, imgs, k, fixed, proj, want, out):
    """Propagate images of ``gens[:k]`` over the subgroup they generate.

    ``out`` must be filled with -1.  Returns False on the first
    multiplicativity conflict or constraint failure.
    """
    out[0] = 0
    if fixed[0] > 0:
        return False
    g = gens[:k]
    im = imgs[:k]
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        # every edge x -> x*g_j with expected image out[x]*im_j
        ys = table_g[np.ix_(frontier, g)].ravel()
        vals = table_b[np.ix_(out[frontier], im)].ravel()
        seen = out[ys] >= 0
        if np.any(out[ys[seen]] != vals[seen]):
            return False
        ys, vals = ys[~seen], vals[~seen]
        if ys.size == 0:
            break
        uniq, first = np.unique(ys, return_index=True)
        # duplicates among the fresh targets must agree as well
        if np.any(vals != vals[first][np.searchsorted(uniq, ys)]):
            return False
        uvals = vals[first]
        f = fixed[uniq]
        if np.any((f >= 0) & (f != uvals)):
            return False
        w = want[uniq]
        if np.any((w >= 0) & (proj[uvals] != w)):
            return False
        out[uniq] = uvals
        frontier = uniq
    return True


def hom_witness(mapping, table_g, table_b):
    lhs = mapping[table_g]
    rhs = table_b[np.ix_(mapping, mapping)]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return int(bad[0, 0]), int(bad[0, 1])
    return -1, -1


def right_action_witness(action, table):
    """First (x, g, h) with (x^g)^h != x^(gh), or (-1, -1, -1)."""
    if action.shape[0] == 0:
        return -1, -1, -1
    lhs = action[action]                # [x, g, h] -> (x^g)^h
    rhs = action[:, table]              # [x, g, h] -> x^(gh)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return int(bad[0, 0]), int(bad[0, 1]), int(bad[0, 2])
    return -1, -1, -1


def orbit_labels(action):
    """Label each point by the smallest point of its orbit."""
    if action.shape[0] == 0:
        return np.arange(0, dtype=np.int64)
    # the orbit of x is exactly the row {x^g}
    return action.min(axis=1).astype(np.int64)
