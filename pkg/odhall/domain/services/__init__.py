"""Domain services: spectral substrate, dyadic analysis and the two model systems."""

from odhall.domain.entities import ModelKind

from .hallmhd import HallMhdModel
from .model_base import ModelInterface
from .oldroyd import OldroydModel

MODEL_TYPES = {
    ModelKind.OLDROYD: OldroydModel,
    ModelKind.HALLMHD: HallMhdModel,
}


def build_model(kind, grid, params, workspace=None) -> ModelInterface:
    """Instantiate the model system of the given kind."""
    return MODEL_TYPES[ModelKind(kind)](grid, params, workspace)


__all__ = [
    "HallMhdModel",
    "MODEL_TYPES",
    "ModelInterface",
    "OldroydModel",
    "build_model",
]
