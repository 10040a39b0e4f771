"""Numba kernel backend: same contracts as numpy_impl, jitted loops."""

import numpy as np
from numba import njit


@njit(cache=True)
def _enumerate(n, ascending):
    a0 = np.zeros(1, dtype=np.uint64)
    a1 = np.ones(1, dtype=np.uint64)
    for k in range(n - 1):
        bit = np.uint64(1) << np.uint64(k + 1)
        if ascending[k]:
            n0 = a0.shape[0] + a1.shape[0]
            b0 = np.empty(n0, dtype=np.uint64)
            b0[: a0.shape[0]] = a0
            b0[a0.shape[0]:] = a1
            b1 = a1 | bit
        else:
            b0 = a0
            n1 = a0.shape[0] + a1.shape[0]
            b1 = np.empty(n1, dtype=np.uint64)
            b1[: a0.shape[0]] = a0 | bit
            b1[a0.shape[0]:] = a1 | bit
        a0, a1 = b0, b1
    out = np.empty(a0.shape[0] + a1.shape[0], dtype=np.uint64)
    out[: a0.shape[0]] = a0
    out[a0.shape[0]:] = a1
    return np.sort(out)


@njit(cache=True)
def _sweep(masks, order0, lower, upper):
    out = masks.copy()
    for i in range(out.shape[0]):
        m = out[i]
        for j in range(order0.shape[0]):
            p = order0[j]
            bit = np.uint64(1) << np.uint64(p)
            lo = lower[p]
            up = upper[p]
            if m & bit == np.uint64(0):
                if m & lo == lo:
                    m |= bit
            elif m & up == np.uint64(0):
                m ^= bit
        out[i] = m
    return out


def enumerate_ideal_masks(n, ascending):
    return _enumerate(n, np.asarray(ascending, dtype=np.bool_))


def toggle_sweep(masks, order0, lower, upper):
    return _sweep(
        np.ascontiguousarray(masks, dtype=np.uint64),
        np.asarray(order0, dtype=np.int64),
        np.asarray(lower, dtype=np.uint64),
        np.asarray(upper, dtype=np.uint64),
    )
