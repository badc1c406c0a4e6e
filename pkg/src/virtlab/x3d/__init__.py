from .model import (
    Diagnostic,
    DiagnosticCode,
    Document,
    FIELD_SCHEMAS,
    FieldValue,
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
    documents_equal,
    make_node,
)
from .parser import (
    BadFieldCount,
    ClassicVRMLNotSupported,
    FieldTypeError,
    MalformedMarkup,
    X3DParseError,
    parse_x3d,
)
from .serializer import serialize_x3d
from .validator import validate

__all__ = [
    "BadFieldCount",
    "ClassicVRMLNotSupported",
    "Diagnostic",
    "DiagnosticCode",
    "Document",
    "FIELD_SCHEMAS",
    "FieldTypeError",
    "FieldValue",
    "MFFloat",
    "MalformedMarkup",
    "Node",
    "NodeKind",
    "Route",
    "SFColor",
    "SFFloat",
    "SFMatrix4",
    "SFRotation",
    "SFString",
    "SFVec3f",
    "X3DParseError",
    "default_container_field",
    "documents_equal",
    "make_node",
    "parse_x3d",
    "serialize_x3d",
    "validate",
]
