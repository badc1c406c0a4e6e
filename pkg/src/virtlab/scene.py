"""Scene runtime: transform hierarchy evaluation and routed field updates.

Documents are treated as immutable values; `apply_update` returns a new
document with the change and any route-propagated side effects applied.
"""
from __future__ import annotations

import copy
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .x3d.model import Document, FieldValue, Node, NodeKind, SFRotation, SFVec3f

NodePath = Union[str, Sequence[int]]


class PathNotFound(Exception):
    pass


class TypeMismatch(Exception):
    pass


@dataclass(frozen=True)
class FieldUpdate:
    path: NodePath
    field: str
    value: FieldValue
    tick: int = 0


def axis_angle_matrix(axis, angle: float) -> np.ndarray:
    """Rotation about a unit axis by `angle` radians (Rodrigues), as 4x4."""
    x, y, z = axis
    c, s = math.cos(angle), math.sin(angle)
    t = 1.0 - c
    m = np.eye(4)
    m[:3, :3] = [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
    return m


def translation_matrix(v) -> np.ndarray:
    m = np.eye(4)
    m[:3, 3] = v
    return m


def local_matrix(node: Node) -> np.ndarray:
    """Local transform of a node; identity for non-transform kinds."""
    if node.kind not in (NodeKind.Transform, NodeKind.DynamicTransform):
        return np.eye(4)
    t: SFVec3f = node.fields["translation"]
    r: SFRotation = node.fields["rotation"]
    return translation_matrix((t.x, t.y, t.z)) @ axis_angle_matrix(
        (r.x, r.y, r.z), r.angle)


def _find_chain(doc: Document, path: NodePath) -> list:
    """Resolve a path (DEF name or index path) to the root→node chain."""
    if isinstance(path, str):
        def search(node: Node, chain: list) -> Optional[list]:
            chain = chain + [node]
            if node.def_name == path:
                return chain
            for _, child in node.children:
                found = search(child, chain)
                if found is not None:
                    return found
            return None

        chain = search(doc.root, [])
        if chain is None:
            raise PathNotFound(f"no node with DEF {path!r}")
        return chain

    chain = [doc.root]
    node = doc.root
    for i in path:
        if not 0 <= i < len(node.children):
            raise PathNotFound(f"index path {tuple(path)} does not resolve")
        node = node.children[i][1]
        chain.append(node)
    return chain


def find_node(doc: Document, path: NodePath) -> Node:
    return _find_chain(doc, path)[-1]


def world_transform(doc: Document, path: NodePath) -> np.ndarray:
    """Composed transform of all Transform/DynamicTransform ancestors,
    including the addressed node itself."""
    m = np.eye(4)
    for node in _find_chain(doc, path):
        m = m @ local_matrix(node)
    return m


def transform_point(m: np.ndarray, p) -> np.ndarray:
    v = m @ np.array([p[0], p[1], p[2], 1.0])
    return v[:3]


def apply_update(doc: Document, update: FieldUpdate) -> Document:
    """Apply a whole-field replacement and fire matching routes.

    Routes propagate breadth-first in document order; each route fires at
    most once per update, so cycles terminate.
    """
    new_doc = copy.deepcopy(doc)
    node = find_node(new_doc, update.path)
    if update.field not in node.fields:
        raise TypeMismatch(f"{node.kind.value} has no field {update.field!r}")
    if type(node.fields[update.field]) is not type(update.value):
        raise TypeMismatch(
            f"{update.field}: expected {type(node.fields[update.field]).__name__}, "
            f"got {type(update.value).__name__}")
    node.fields[update.field] = update.value

    defs = new_doc.defs
    fired = set()
    queue = deque([(node.def_name, update.field)])
    while queue:
        src_name, src_field = queue.popleft()
        if src_name is None:
            continue
        for idx, route in enumerate(new_doc.routes):
            if idx in fired:
                continue
            if route.from_node != src_name or route.from_field != src_field:
                continue
            src = defs.get(route.from_node)
            dst = defs.get(route.to_node)
            if src is None or dst is None or route.to_field not in dst.fields:
                continue  # dangling routes are a validator concern
            value = src.fields[route.from_field]
            if type(dst.fields[route.to_field]) is not type(value):
                continue
            fired.add(idx)
            dst.fields[route.to_field] = value
            queue.append((route.to_node, route.to_field))
    return new_doc
