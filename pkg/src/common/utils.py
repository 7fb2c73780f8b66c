import collections.abc
import math
from typing import Any

import numpy as np


def recursively_make_hashable(value: Any) -> Any:
    """
    Recursively converts mutable collections (dict, list, set, ndarray)
    into hashable, canonical counterparts (tuple of sorted items for
    dicts, tuple for lists and arrays, frozenset for sets).
    Numpy scalars are unwrapped so equal parameters give equal keys.
    """
    if isinstance(value, dict):
        return tuple(
            sorted(
                (k, recursively_make_hashable(v)) for k, v in value.items()
            )
        )
    elif isinstance(value, (list, tuple)):
        return tuple(recursively_make_hashable(item) for item in value)
    elif isinstance(value, np.ndarray):
        return tuple(recursively_make_hashable(item) for item in value.tolist())
    elif isinstance(value, set):
        return frozenset(recursively_make_hashable(item) for item in value)
    elif isinstance(value, np.generic):
        return value.item()

    if not isinstance(value, collections.abc.Hashable):
        raise TypeError(
            f"Value of type {type(value)} is not hashable and not handled: {value!r}"
        )
    return value


def to_jsonable(value: Any) -> Any:
    """
    Converts numpy containers and scalars into plain Python values that
    json.dumps accepts. Non-finite floats become None.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    elif isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    elif isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    elif isinstance(value, np.generic):
        value = value.item()

    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_cell_key(overrides: dict) -> str:
    """Stable directory-safe key for one sweep cell, e.g. alpha=0.5_m=1"""
    parts = []
    for key, value in recursively_make_hashable(overrides):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        parts.append(f"{key}={value}")
    return "_".join(parts)
