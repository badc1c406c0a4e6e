"""Parser for the X3D XML subset.

Only the XML encoding is accepted; classic-VRML text is rejected with a
distinct error.  Unknown elements and attributes are skipped with
diagnostics so third-party content degrades gracefully.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Optional

from .model import (
    Diagnostic,
    DiagnosticCode,
    Document,
    FIELD_SCHEMAS,
    FieldValue,
    MF_CANONICAL_ARITY,
    MFFloat,
    Node,
    NodeKind,
    Route,
    SFColor,
    SFFloat,
    SFMatrix4,
    SFRotation,
    SFString,
    SFVec3f,
    default_container_field,
)


class X3DParseError(Exception):
    """Base class for fatal parse failures."""


class MalformedMarkup(X3DParseError):
    pass


class ClassicVRMLNotSupported(X3DParseError):
    pass


class FieldTypeError(X3DParseError):
    pass


class BadFieldCount(X3DParseError):
    pass


def _floats(text: str, field_name: str) -> list[float]:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            out.append(float(tok))
        except ValueError:
            raise FieldTypeError(f"{field_name}: {tok!r} is not a number") from None
    return out


def _parse_field(field_name: str, default: FieldValue, text: str,
                 diagnostics: list, where: str) -> FieldValue:
    if isinstance(default, SFString):
        return SFString(text)
    if isinstance(default, SFFloat):
        vals = _floats(text, field_name)
        if len(vals) != 1:
            raise BadFieldCount(f"{field_name}: expected 1 value, got {len(vals)}")
        return SFFloat(vals[0])
    if isinstance(default, SFVec3f):
        vals = _floats(text, field_name)
        if len(vals) != 3:
            raise BadFieldCount(f"{field_name}: expected 3 values, got {len(vals)}")
        return SFVec3f(*vals)
    if isinstance(default, SFColor):
        vals = _floats(text, field_name)
        if len(vals) != 3:
            raise BadFieldCount(f"{field_name}: expected 3 values, got {len(vals)}")
        return SFColor(*vals)
    if isinstance(default, SFRotation):
        vals = _floats(text, field_name)
        if len(vals) != 4:
            raise BadFieldCount(f"{field_name}: expected 4 values, got {len(vals)}")
        try:
            return SFRotation(*vals)
        except ValueError as exc:
            raise FieldTypeError(f"{field_name}: {exc}") from None
    if isinstance(default, SFMatrix4):
        vals = _floats(text, field_name)
        if len(vals) != 16:
            raise BadFieldCount(f"{field_name}: expected 16 values, got {len(vals)}")
        return SFMatrix4(tuple(vals))
    if isinstance(default, MFFloat):
        vals = _floats(text, field_name)
        arity = MF_CANONICAL_ARITY.get(field_name)
        if arity is not None and len(vals) != arity:
            diagnostics.append(Diagnostic(
                DiagnosticCode.BadFieldCount,
                f"{field_name}: expected {arity} values, got {len(vals)}; "
                f"padded/truncated to {arity}",
                where,
            ))
            pad = default.values[-1] if default.values else 0.0
            vals = (vals + [pad] * arity)[:arity]
        return MFFloat(tuple(vals))
    raise FieldTypeError(f"unsupported field type for {field_name}")  # pragma: no cover


def _parse_node(elem: ET.Element, diagnostics: list) -> Optional[Node]:
    tag = elem.tag
    try:
        kind = NodeKind(tag)
    except ValueError:
        diagnostics.append(Diagnostic(
            DiagnosticCode.UnknownNode, f"unknown node kind {tag!r}; skipped", tag))
        return None

    schema = FIELD_SCHEMAS[kind]
    fields = dict(schema)
    def_name = None
    where = tag
    for attr, text in elem.attrib.items():
        if attr == "DEF":
            def_name = text
            where = f"{tag} DEF={text}"
        elif attr == "containerField":
            continue
        elif attr in schema:
            fields[attr] = _parse_field(attr, schema[attr], text, diagnostics, where)
        else:
            diagnostics.append(Diagnostic(
                DiagnosticCode.UnknownField,
                f"{tag} has no field {attr!r}; ignored", where))

    node = Node(kind=kind, fields=fields, def_name=def_name)
    for child_elem in elem:
        if child_elem.tag == "ROUTE":
            continue  # collected globally
        child = _parse_node(child_elem, diagnostics)
        if child is None:
            continue
        cf = child_elem.attrib.get("containerField",
                                   default_container_field(child.kind))
        node.children.append((cf, child))
    return node


def parse_x3d(text: str) -> Document:
    """Parse an X3D XML document into a :class:`Document`.

    Diagnostics for recoverable oddities (unknown nodes/fields, padded
    variable-length fields) are recorded on the returned document.
    """
    stripped = text.lstrip()
    if stripped.startswith("#VRML") or stripped.startswith("#X3D"):
        raise ClassicVRMLNotSupported(
            "classic VRML encoding is not supported; use the XML encoding")
    try:
        root_elem = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedMarkup(str(exc)) from None

    diagnostics: list = []
    if root_elem.tag == "X3D":
        scene_elem = root_elem.find("Scene")
        if scene_elem is None:
            raise MalformedMarkup("<X3D> root without a <Scene> child")
    elif root_elem.tag == "Scene":
        scene_elem = root_elem
    else:
        raise MalformedMarkup(
            f"expected <X3D> or <Scene> root, got <{root_elem.tag}>")

    root = _parse_node(scene_elem, diagnostics)
    assert root is not None  # Scene is a known kind

    routes = []
    for route_elem in scene_elem.iter("ROUTE"):
        try:
            routes.append(Route(
                from_node=route_elem.attrib["fromNode"],
                from_field=route_elem.attrib["fromField"],
                to_node=route_elem.attrib["toNode"],
                to_field=route_elem.attrib["toField"],
            ))
        except KeyError as exc:
            raise MalformedMarkup(f"ROUTE missing attribute {exc}") from None

    return Document(root=root, routes=routes, diagnostics=diagnostics)
