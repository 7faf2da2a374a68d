"""Hierarchical Bayesian total-variation deblurring (IAS, VB and Gibbs)."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401


def to_image(stacked, rows, cols):
    """Reshape a column-stacked vector into a rows x cols array."""
    import numpy as np

    return np.asarray(stacked).reshape((cols, rows)).T


def from_image(image):
    """Stack a 2-D array column by column."""
    import numpy as np

    return np.asarray(image, dtype=float).T.reshape(-1)
