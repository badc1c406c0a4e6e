"""Canonical XML serialization for parsed scene documents."""
from __future__ import annotations

from .model import (
    Document,
    FIELD_SCHEMAS,
    FieldValue,
    MFFloat,
    Node,
    SFColor,
    SFFloat,
    SFMatrix4,
    SFRotation,
    SFString,
    SFVec3f,
    default_container_field,
)


def _num(v: float) -> str:
    # repr() gives the shortest string that round-trips the float
    return repr(float(v))


def _field_text(value: FieldValue) -> str:
    if isinstance(value, SFFloat):
        return _num(value.value)
    if isinstance(value, SFVec3f):
        return " ".join(_num(v) for v in (value.x, value.y, value.z))
    if isinstance(value, SFColor):
        return " ".join(_num(v) for v in (value.r, value.g, value.b))
    if isinstance(value, SFRotation):
        return " ".join(_num(v) for v in (value.x, value.y, value.z, value.angle))
    if isinstance(value, SFMatrix4):
        return " ".join(_num(v) for v in value.values)
    if isinstance(value, MFFloat):
        return " ".join(_num(v) for v in value.values)
    if isinstance(value, SFString):
        return value.value
    raise TypeError(f"unserializable field value {value!r}")  # pragma: no cover


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _write_node(node: Node, parent_kind, lines: list, indent: int,
                container_field: str) -> None:
    pad = "  " * indent
    attrs = []
    if node.def_name is not None:
        attrs.append(f'DEF="{_escape(node.def_name)}"')
    defaults = FIELD_SCHEMAS[node.kind]
    for name in sorted(node.fields):
        value = node.fields[name]
        if defaults.get(name) == value:
            continue  # defaults are implicit
        attrs.append(f'{name}="{_escape(_field_text(value))}"')
    if container_field != default_container_field(node.kind):
        attrs.append(f'containerField="{_escape(container_field)}"')
    head = node.kind.value + ("" if not attrs else " " + " ".join(attrs))
    if node.children:
        lines.append(f"{pad}<{head}>")
        for cf, child in node.children:
            _write_node(child, node.kind, lines, indent + 1, cf)
        lines.append(f"{pad}</{node.kind.value}>")
    else:
        lines.append(f"{pad}<{head}/>")


def serialize_x3d(doc: Document) -> str:
    """Serialize a document to canonical XML.

    Default-valued fields are omitted; numbers use the shortest
    representation that parses back to the identical float.
    """
    lines: list = []
    root = doc.root
    pad = ""
    attrs = ""
    if root.def_name is not None:
        attrs = f' DEF="{_escape(root.def_name)}"'
    if root.children or doc.routes:
        lines.append(f"{pad}<{root.kind.value}{attrs}>")
        for cf, child in root.children:
            _write_node(child, root.kind, lines, 1, cf)
        for r in doc.routes:
            lines.append(
                f'  <ROUTE fromNode="{_escape(r.from_node)}" '
                f'fromField="{_escape(r.from_field)}" '
                f'toNode="{_escape(r.to_node)}" toField="{_escape(r.to_field)}"/>')
        lines.append(f"{pad}</{root.kind.value}>")
    else:
        lines.append(f"{pad}<{root.kind.value}{attrs}/>")
    return "\n".join(lines) + "\n"
