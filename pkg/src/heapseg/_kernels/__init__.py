"""Hot numeric loops, selectable between a numba and a pure-numpy backend.

Both backends execute the same IEEE-754 operation sequences, so their
outputs are bit-identical; the numba one is just faster. Selection:

  HEAPSEG_NUMBA=0   force the numpy backend
  HEAPSEG_NUMBA=1   force the numba backend (raise if numba is unusable)
  unset             numba if it imports cleanly, numpy otherwise
"""

import os

_flag = os.environ.get("HEAPSEG_NUMBA", "").strip()

if _flag == "0":
    from heapseg._kernels import numpy_backend as _impl

    BACKEND = "numpy"
else:
    try:
        from heapseg._kernels import numba_backend as _impl

        BACKEND = "numba"
    except Exception:
        if _flag:
            raise
        from heapseg._kernels import numpy_backend as _impl

        BACKEND = "numpy"

raster_triangles = _impl.raster_triangles
footprint_accumulate = _impl.footprint_accumulate
inpaint_pass = _impl.inpaint_pass
region_grow_labels = _impl.region_grow_labels

__all__ = [
    "BACKEND",
    "footprint_accumulate",
    "inpaint_pass",
    "raster_triangles",
    "region_grow_labels",
]
