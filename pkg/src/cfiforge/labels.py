"""Canonical serialization and ordering of opaque labels.

Every unordered index set (edges, gate ids, matrix row indices) is turned
into a sequence by one comparator: the lexicographic order of the labels'
canonical JSON serializations.
"""

from __future__ import annotations

import json
from typing import Any, Hashable, Iterable


def to_jsonable(label: Any) -> Any:
    """Convert tuples and frozensets into JSON lists, recursively."""
    if isinstance(label, (str, int, bool)) or label is None:
        return label
    if isinstance(label, (tuple, list)):
        return [to_jsonable(x) for x in label]
    if isinstance(label, (frozenset, set)):
        return sorted((to_jsonable(x) for x in label), key=_dump)
    raise TypeError(f"label of type {type(label).__name__} is not serializable")


def from_jsonable(obj: Any) -> Hashable:
    """Inverse of :func:`to_jsonable` for tuple-shaped labels."""
    if isinstance(obj, list):
        return tuple(from_jsonable(x) for x in obj)
    return obj


def _dump(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def serialize(label: Any) -> str:
    """Canonical serialization used for ordering and for stable ids."""
    return _dump(to_jsonable(label))


def label_key(label: Any) -> str:
    return serialize(label)


def sort_labels(labels: Iterable[Any]) -> list:
    """Sort labels by the global comparator."""
    return sorted(labels, key=serialize)


def display(label: Any) -> str:
    """Human-facing form: strings as-is, everything else serialized."""
    return label if isinstance(label, str) else serialize(label)
