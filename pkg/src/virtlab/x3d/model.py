"""Document model for the X3D subset used by the lab scenes.

Nodes carry typed fields with defaults filled in at parse time, so the
rest of the engine never has to special-case absent attributes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union


class NodeKind(Enum):
    Scene = "Scene"
    Group = "Group"
    Transform = "Transform"
    Shape = "Shape"
    Appearance = "Appearance"
    Material = "Material"
    FrictionalSurface = "FrictionalSurface"
    Sphere = "Sphere"
    Cylinder = "Cylinder"
    Box = "Box"
    DeviceInfo = "DeviceInfo"
    HLHapticsDevice = "HLHapticsDevice"
    DynamicTransform = "DynamicTransform"
    Inline = "Inline"


@dataclass(frozen=True)
class SFFloat:
    value: float


@dataclass(frozen=True)
class SFVec3f:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class SFRotation:
    """Axis-angle rotation; the axis is normalized on construction."""

    x: float
    y: float
    z: float
    angle: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if n == 0.0:
            raise ValueError("rotation axis must have nonzero length")
        if abs(n - 1.0) > 1e-12:
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)


@dataclass(frozen=True)
class SFMatrix4:
    """16 floats, row-major homogeneous transform."""

    values: tuple

    def __post_init__(self):
        if len(self.values) != 16:
            raise ValueError("SFMatrix4 needs 16 values")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @staticmethod
    def identity() -> "SFMatrix4":
        return SFMatrix4((1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1))


@dataclass(frozen=True)
class SFString:
    value: str


@dataclass(frozen=True)
class SFColor:
    r: float
    g: float
    b: float


@dataclass(frozen=True)
class MFFloat:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


FieldValue = Union[SFFloat, SFVec3f, SFRotation, SFMatrix4, SFString, SFColor, MFFloat]


# Legal fields and their defaults, per node kind.  Kinds missing a field
# entry here reject that attribute at parse time (with a diagnostic).
FIELD_SCHEMAS: dict[NodeKind, dict[str, FieldValue]] = {
    NodeKind.Scene: {},
    NodeKind.Group: {},
    NodeKind.Transform: {
        "translation": SFVec3f(0.0, 0.0, 0.0),
        "rotation": SFRotation(0.0, 0.0, 1.0, 0.0),
    },
    NodeKind.Shape: {},
    NodeKind.Appearance: {},
    NodeKind.Material: {
        "diffuseColor": SFColor(0.8, 0.8, 0.8),
    },
    NodeKind.FrictionalSurface: {
        "stiffness": SFFloat(300.0),
        "staticFriction": SFFloat(0.0),
        "dynamicFriction": SFFloat(0.0),
    },
    NodeKind.Sphere: {"radius": SFFloat(1.0)},
    NodeKind.Cylinder: {"radius": SFFloat(1.0), "height": SFFloat(2.0)},
    NodeKind.Box: {"size": SFVec3f(2.0, 2.0, 2.0)},
    NodeKind.DeviceInfo: {},
    NodeKind.HLHapticsDevice: {
        "positionCalibration": SFMatrix4.identity(),
    },
    NodeKind.DynamicTransform: {
        "translation": SFVec3f(0.0, 0.0, 0.0),
        "rotation": SFRotation(0.0, 0.0, 1.0, 0.0),
        "mass": SFFloat(1.0),
        "inertiaTensor": MFFloat((0.1, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0, 0.0, 0.1)),
    },
    NodeKind.Inline: {"url": SFString("")},
}

# Variable-length fields and their canonical arity.  Wrong arity is padded
# (with the last entry of the default) or truncated, with a diagnostic,
# instead of failing the parse.
MF_CANONICAL_ARITY: dict[str, int] = {"inertiaTensor": 9}

# containerField defaults by child kind; "children" everywhere else.
DEFAULT_CONTAINER_FIELD: dict[NodeKind, str] = {
    NodeKind.Appearance: "appearance",
    NodeKind.Material: "material",
    NodeKind.FrictionalSurface: "surface",
    NodeKind.Sphere: "geometry",
    NodeKind.Cylinder: "geometry",
    NodeKind.Box: "geometry",
    NodeKind.HLHapticsDevice: "device",
}

GROUPING_KINDS = {
    NodeKind.Scene,
    NodeKind.Group,
    NodeKind.Transform,
    NodeKind.DynamicTransform,
    NodeKind.HLHapticsDevice,
}


def default_container_field(kind: NodeKind) -> str:
    return DEFAULT_CONTAINER_FIELD.get(kind, "children")


class DiagnosticCode(Enum):
    UnknownNode = "UnknownNode"
    UnknownField = "UnknownField"
    BadFieldCount = "BadFieldCount"
    DanglingRoute = "DanglingRoute"
    DuplicateDef = "DuplicateDef"
    IllegalContainerField = "IllegalContainerField"
    NonPositiveDimension = "NonPositiveDimension"
    NonPositiveMass = "NonPositiveMass"


@dataclass(frozen=True)
class Diagnostic:
    code: DiagnosticCode
    message: str
    where: str = ""


@dataclass(frozen=True)
class Route:
    from_node: str
    from_field: str
    to_node: str
    to_field: str


@dataclass
class Node:
    kind: NodeKind
    fields: dict = field(default_factory=dict)
    children: list = field(default_factory=list)  # list of (containerField, Node)
    def_name: Optional[str] = None

    def child_nodes(self) -> Iterator["Node"]:
        for _, child in self.children:
            yield child

    def add(self, child: "Node", container_field: Optional[str] = None) -> "Node":
        cf = container_field or default_container_field(child.kind)
        self.children.append((cf, child))
        return self


def make_node(kind: NodeKind, def_name: Optional[str] = None, **field_values) -> Node:
    """Build a node with schema defaults, overridden by keyword fields."""
    fields = dict(FIELD_SCHEMAS[kind])
    for name, value in field_values.items():
        if name not in fields:
            raise KeyError(f"{kind.value} has no field {name!r}")
        fields[name] = value
    return Node(kind=kind, fields=fields, def_name=def_name)


@dataclass
class Document:
    root: Node
    routes: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list, compare=False)

    @property
    def defs(self) -> dict[str, Node]:
        out: dict[str, Node] = {}
        for node in self.walk():
            if node.def_name is not None and node.def_name not in out:
                out[node.def_name] = node
        return out

    def walk(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed([c for _, c in node.children]))

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())


def documents_equal(a: Document, b: Document) -> bool:
    """Structural equality: nodes, fields, and routes; diagnostics ignored."""
    return a.root == b.root and a.routes == b.routes
