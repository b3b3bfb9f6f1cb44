"""This module defines types specific to the limes_toolkit package."""

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
"""A dense float64 array. Points of every space are flat arrays of this type."""
