"""numba versions of the table kernels (same signatures as ``_numpy``)."""
import numpy as np
from numba import njit


@njit(cache=True)
def closure_mask(table, seed):
    n = table.shape[0]
    mask = seed.copy()
    mask[0] = True
    stack = np.empty(n, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)
    top = 0
    count = 0
    for i in range(n):
        if mask[i]:
            members[count] = i
            count += 1
            stack[top] = i
            top += 1
    while top > 0:
        top -= 1
        a = stack[top]
        for j in range(count):
            b = members[j]
            for c in (table[a, b], table[b, a]):
                if not mask[c]:
                    mask[c] = True
                    members[count] = c
                    count += 1
                    stack[top] = c
                    top += 1
    return mask


@njit(cache=True)
def extend_hom(table_g, table_b, gens, imgs, k, fixed, proj, want, out):
    n = table_g.shape[0]
    out[0] = 0
    if fixed[0] > 0:
        return False
    queue = np.empty(n, dtype=np.int64)
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for j in range(k):
            y = table_g[x, gens[j]]
            val = table_b[out[x], imgs[j]]
            if out[y] >= 0:
                if out[y] != val:
                    return False
                continue
            if fixed[y] >= 0 and fixed[y] != val:
                return False
            if want[y] >= 0 and proj[val] != want[y]:
                return False
            out[y] = val
            queue[tail] = y
            tail += 1
    return True


@njit(cache=True)
def _hom_witness(mapping, table_g, table_b):
    n = table_g.shape[0]
    for a in range(n):
        for b in range(n):
            if mapping[table_g[a, b]] != table_b[mapping[a], mapping[b]]:
                return a, b
    return -1, -1


def hom_witness(mapping, table_g, table_b):
    a, b = _hom_witness(mapping, table_g, table_b)
    return int(a), int(b)


@njit(cache=True)
def _right_action_witness(action, table):
    m, n = action.shape
    for x in range(m):
        for g in range(n):
            xg = action[x, g]
            for h in range(n):
                if action[xg, h] != action[x, table[g, h]]:
                    return x, g, h
    return -1, -1, -1


def right_action_witness(action, table):
    x, g, h = _right_action_witness(action, table)
    return int(x), int(g), int(h)


@njit(cache=True)
def orbit_labels(action):
    m, n = action.shape
    labels = np.empty(m, dtype=np.int64)
    for x in range(m):
        best = action[x, 0]
        for g in range(1, n):
            if action[x, g] < best:
                best = action[x, g]
        labels[x] = best
    return labels
