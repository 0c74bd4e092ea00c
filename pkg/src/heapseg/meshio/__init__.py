from heapseg.meshio.backing import augment_with_backing
from heapseg.meshio.database import ModelDatabase, ModelEntry
from heapseg.meshio.obj import load_obj
from heapseg.meshio.stable import center_of_mass, compute_stable_poses
from heapseg.meshio.stl import load_stl

__all__ = [
    "ModelDatabase",
    "ModelEntry",
    "augment_with_backing",
    "center_of_mass",
    "compute_stable_poses",
    "load_obj",
    "load_stl",
]
