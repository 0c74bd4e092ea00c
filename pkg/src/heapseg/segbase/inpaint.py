"""Depth hole filling by iterated 8-neighbor averaging."""

from __future__ import annotations

import logging

import numpy as np

from heapseg._kernels import inpaint_pass
from heapseg.core.image import DepthImage

logger = logging.getLogger(__name__)


def inpaint_depth(img: DepthImage) -> DepthImage:
    """Fill invalid pixels with the mean of their valid 8-neighbors.

    Jacobi iteration: each pass fills every invalid pixel that has at least
    one valid neighbor, then repeats on the result until nothing is invalid
    or 10 * max(W, H) passes have run. Valid input pixels pass through
    unchanged; an all-invalid image is returned unchanged with a warning.
    """
    invalid = int(np.count_nonzero(~img.valid))
    if invalid == 0:
        return img
    if invalid == img.data.size:
        logger.warning("inpaint: image has no valid pixels, returning it unchanged")
        return img
    src = img.data.astype(np.float64)
    dst = np.empty_like(src)
    remaining = invalid
    for _ in range(10 * max(img.width, img.height)):
        remaining = inpaint_pass(src, dst)
        src, dst = dst, src
        if remaining == 0:
            break
    if remaining:
        logger.warning("inpaint: %d pixels still invalid at the iteration cap", remaining)
    return DepthImage(src.astype(np.float32))
