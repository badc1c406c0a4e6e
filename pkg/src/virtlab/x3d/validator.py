"""Structural validation of parsed scene documents.

Validation never raises; problems come back as diagnostic records.
"""
from __future__ import annotations

from .model import (
    Diagnostic,
    DiagnosticCode,
    Document,
    Node,
    NodeKind,
    SFFloat,
    SFVec3f,
    default_container_field,
)

# containerField values accepted beyond a child's default: the haptic
# stylus subtree hangs off HLHapticsDevice under "stylus".
_EXTRA_CONTAINER_FIELDS = {
    (NodeKind.Group, NodeKind.HLHapticsDevice): {"stylus"},
    (NodeKind.Transform, NodeKind.HLHapticsDevice): {"stylus"},
}


def _check_dimensions(node: Node, where: str, out: list) -> None:
    positive_fields = {
        NodeKind.Sphere: ["radius"],
        NodeKind.Cylinder: ["radius", "height"],
    }
    for name in positive_fields.get(node.kind, []):
        value = node.fields[name]
        if isinstance(value, SFFloat) and value.value <= 0:
            out.append(Diagnostic(
                DiagnosticCode.NonPositiveDimension,
                f"{node.kind.value}.{name} must be > 0, got {value.value}", where))
    if node.kind is NodeKind.Box:
        size = node.fields["size"]
        if isinstance(size, SFVec3f) and min(size.x, size.y, size.z) <= 0:
            out.append(Diagnostic(
                DiagnosticCode.NonPositiveDimension,
                f"Box.size components must be > 0, got "
                f"({size.x}, {size.y}, {size.z})", where))
    if node.kind is NodeKind.DynamicTransform:
        mass = node.fields["mass"]
        if isinstance(mass, SFFloat) and mass.value <= 0:
            out.append(Diagnostic(
                DiagnosticCode.NonPositiveMass,
                f"DynamicTransform.mass must be > 0, got {mass.value}", where))


def validate(doc: Document) -> list:
    """Return diagnostics for structural problems; an empty list means clean."""
    out: list = []

    seen_defs: dict[str, int] = {}
    for node in doc.walk():
        if node.def_name is not None:
            seen_defs[node.def_name] = seen_defs.get(node.def_name, 0) + 1
    for name, count in seen_defs.items():
        if count > 1:
            out.append(Diagnostic(
                DiagnosticCode.DuplicateDef,
                f"DEF {name!r} used {count} times", name))

    defs = doc.defs
    for route in doc.routes:
        for end, node_name, field_name in (
                ("fromNode", route.from_node, route.from_field),
                ("toNode", route.to_node, route.to_field)):
            node = defs.get(node_name)
            if node is None:
                out.append(Diagnostic(
                    DiagnosticCode.DanglingRoute,
                    f"ROUTE {end} {node_name!r} does not exist", node_name))
            elif field_name not in node.fields:
                out.append(Diagnostic(
                    DiagnosticCode.DanglingRoute,
                    f"ROUTE {end} {node_name!r} has no field {field_name!r}",
                    node_name))

    def walk_with_parent(node: Node):
        for cf, child in node.children:
            yield node, cf, child
            yield from walk_with_parent(child)

    for parent, cf, child in walk_with_parent(doc.root):
        legal = {default_container_field(child.kind)}
        legal |= _EXTRA_CONTAINER_FIELDS.get((child.kind, parent.kind), set())
        if cf not in legal:
            out.append(Diagnostic(
                DiagnosticCode.IllegalContainerField,
                f"{child.kind.value} under {parent.kind.value} cannot use "
                f"containerField={cf!r}", child.def_name or child.kind.value))

    for node in doc.walk():
        _check_dimensions(node, node.def_name or node.kind.value, out)

    return out
