"""Runtime knobs for serving and generation."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AdapterConfig:
    """How to load and drive the translation model.

    model is a local artifact directory (or None in passthrough mode);
    max_length caps generated token count; beams=1 is greedy decoding,
    which is what makes serving deterministic.
    """

    model: str | None = None
    max_length: int = 64
    beams: int = 1
    device: str = "cpu"

    def __post_init__(self):
        if self.max_length <= 0:
            raise ValueError(f"max_length must be positive, got {self.max_length}")
        if self.beams < 1:
            raise ValueError(f"beams must be at least 1, got {self.beams}")
