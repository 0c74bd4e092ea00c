"""Depth rendering and ground-truth mask extraction."""

from heapseg.render.masks import extract_modal_masks
from heapseg.render.raster import (
    RenderSettings,
    clip_triangles_near,
    render_depth,
    render_empty_bin,
    render_object_isolated,
)

__all__ = [
    "RenderSettings",
    "clip_triangles_near",
    "extract_modal_masks",
    "render_depth",
    "render_empty_bin",
    "render_object_isolated",
]
