"""Pure-numpy fallback for the decode kernels; bit-identical to the compiled
versions (same tie-breaking toward the smaller value)."""

import numpy as np


def nearest_indices(values, ys):
    values = np.asarray(values)
    ys = np.asarray(ys)
    if len(values) == 1:
        return np.zeros(len(ys), dtype=np.int64)
    pos = np.searchsorted(values, ys)
    pos = np.clip(pos, 1, len(values) - 1)
    left = values[pos - 1]
    right = values[pos]
    take_left = (ys - left) <= (right - ys)
    idx = np.where(take_left, pos - 1, pos)
    # samples below the first point
    idx[ys <= values[0]] = 0
    return idx.astype(np.int64)


def count_decode_errors(values, sent, noise):
    values = np.asarray(values)
    sent = np.asarray(sent)
    ys = values[sent] + np.asarray(noise)
    return int(np.count_nonzero(nearest_indices(values, ys) != sent))
