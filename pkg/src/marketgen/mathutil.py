"""Small numeric helpers shared across modules."""

import numpy as np


def sigmoid(x):
    """Numerically stable logistic function via tanh.

    Saturates to exactly 0.0 / 1.0 for |x| beyond ~38, which is fine for
    sampling probabilities and activations (no log is ever taken of these
    values downstream).
    """
    out = np.tanh(np.multiply(x, 0.5))
    out += 1.0
    out *= 0.5
    return out
