"""Wire models for the control API."""
from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field


class LinacAxisCommand(BaseModel):
    target: Literal["linac_axis"]
    axis: Literal["gantry", "collimator", "couch_rotation", "couch_vertical",
                  "couch_longitudinal", "couch_lateral"]
    value: float
    client_tick: int = 0


class ElectrolysisCommand(BaseModel):
    target: Literal["electrolysis"]
    action: Literal["start", "stop", "reset", "set_speed"]
    n: Optional[int] = None
    seed: Optional[int] = None
    speed: Optional[float] = None
    client_tick: int = 0


class HydraulicsCommand(BaseModel):
    target: Literal["hydraulics"]
    action: Literal["push", "set_load"]
    displacement: Optional[float] = None
    mass: Optional[float] = None
    client_tick: int = 0


class SceneFieldCommand(BaseModel):
    target: Literal["scene_field"]
    scene: str
    path: Union[str, List[int]]
    field: str
    value: Union[float, str, List[float]]
    client_tick: int = 0


class AttachmentCommand(BaseModel):
    target: Literal["attachment"]
    name: str
    client_tick: int = 0


Command = Annotated[
    Union[LinacAxisCommand, ElectrolysisCommand, HydraulicsCommand,
          SceneFieldCommand, AttachmentCommand],
    Field(discriminator="target"),
]


class CommandAck(BaseModel):
    status: Literal["queued"]
    apply_tick: int


class ErrorResponse(BaseModel):
    error: str
    detail: str = ""
