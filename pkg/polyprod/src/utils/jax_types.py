from typing import Union

import numpy as np
from jaxtyping import Array, Bool, Float, Int

Arr = Union[np.ndarray, Array]

# vertex positions of a straight-line drawing
Coords = Float[Arr, "n 2"]
# one row per candidate 2-coloring, one column per vertex
ColoringBits = Int[Arr, "k n"]
# one row per candidate 2-coloring, one column per edge
EdgeMask = Bool[Arr, "k m"]
