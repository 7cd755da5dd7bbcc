from typing import Any

from laguerre.models.schemas import RunConfig


def run_metadata(cfg: RunConfig, **extra: Any) -> dict[str, Any]:
    """Every effective parameter of the run, in a stable order"""
    metadata: dict[str, Any] = cfg.model_dump(by_alias=True, mode="python")
    metadata.pop("verbose", None)
    metadata.pop("output", None)
    metadata.update(extra)
    return metadata
