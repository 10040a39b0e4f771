"""Pure-numpy kernel backend."""

import numpy as np


def enumerate_ideal_masks(n, ascending):
    """All downward-closed bitmasks of the zigzag, sorted ascending.

    ``ascending[k]`` says whether the cover between elements k+1 and k+2
    (1-based) points up.  Ideals of a fence are exactly the bit strings where
    an ascending step forbids 01-violations (member above a non-member) and a
    descending step the mirror image, so a left-to-right DP on (mask, last
    bit) enumerates them without touching the other 2^n subsets.
    """
    a0 = np.zeros(1, dtype=np.uint64)   # partial masks with element k absent
    a1 = np.ones(1, dtype=np.uint64)    # partial masks with element k present
    for k in range(n - 1):
        bit = np.uint64(1 << (k + 1))
        if ascending[k]:
            # element k+2 in the ideal forces element k+1 in it
            a0, a1 = np.concatenate([a0, a1]), a1 | bit
        else:
            # element k+1 in the ideal forces element k+2 in it
            a0, a1 = a0, np.concatenate([a0 | bit, a1 | bit])
    return np.sort(np.concatenate([a0, a1]))


def toggle_sweep(masks, order0, lower, upper):
    """Apply the toggle at each element of ``order0`` (0-based) to every mask.

    ``lower[p]``/``upper[p]`` are the cover masks of element p+1.  Returns a
    new array; input is unchanged.
    """
    out = masks.copy()
    for p in order0:
        bit = np.uint64(1 << int(p))
        lo = np.uint64(lower[p])
        up = np.uint64(upper[p])
        absent = (out & bit) == 0
        can_in = absent & ((out & lo) == lo)
        can_out = ~absent & ((out & up) == 0)
        np.bitwise_xor(out, bit, out=out, where=can_in | can_out)
    return out
