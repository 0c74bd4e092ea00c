"""16-bit PNG depth codec and zero padding."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image, UnidentifiedImageError

from heapseg.core.image import DepthImage
from heapseg.errors import DepthFormatError, DepthRangeError

MAX_LEVEL = 65535


def write_depth_png(img: DepthImage, depth_scale: float) -> bytes:
    """Encode depth as 16-bit grayscale PNG, one level per 1/depth_scale m.

    Level = round(depth * depth_scale); level 0 marks invalid pixels.
    """
    if depth_scale <= 0:
        raise ValueError(f"depth_scale must be positive, got {depth_scale}")
    levels = np.rint(img.data.astype(np.float64) * depth_scale)
    over = levels > MAX_LEVEL
    if over.any():
        row, col = np.unravel_index(int(np.argmax(over)), over.shape)
        raise DepthRangeError(
            f"depth {float(img.data[row, col])} m at pixel (row {row}, col {col}) "
            f"exceeds the encodable {MAX_LEVEL / depth_scale} m"
        )
    buf = io.BytesIO()
    Image.fromarray(levels.astype(np.uint16)).save(buf, format="PNG")
    return buf.getvalue()


def read_depth_png(data: bytes, depth_scale: float) -> DepthImage:
    """Decode :func:`write_depth_png` output back to meters."""
    if depth_scale <= 0:
        raise ValueError(f"depth_scale must be positive, got {depth_scale}")
    try:
        with Image.open(io.BytesIO(data)) as im:
            arr = np.asarray(im)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DepthFormatError(f"not a readable PNG: {exc}") from None
    if arr.ndim != 2 or not np.issubdtype(arr.dtype, np.integer):
        raise DepthFormatError(
            f"expected a single-channel integer image, got {arr.dtype} {arr.shape}"
        )
    if arr.size and (int(arr.max()) > MAX_LEVEL or int(arr.min()) < 0):
        raise DepthFormatError("pixel levels outside the 16-bit range")
    return DepthImage((arr.astype(np.float64) / depth_scale).astype(np.float32))


def pad_image(img: DepthImage, width: int, height: int) -> DepthImage:
    """Grow the canvas to width x height; source stays at the origin.

    New pixels are invalid (0).
    """
    if width < img.width or height < img.height:
        raise ValueError(
            f"target {width}x{height} is smaller than source {img.width}x{img.height}"
        )
    out = np.zeros((height, width), dtype=np.float32)
    out[: img.height, : img.width] = img.data
    return DepthImage(out)
