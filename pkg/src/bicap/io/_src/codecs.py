"""JSON encodings of :mod:`bicap` values.

Vertices are encoded as ``[level, pos]`` (tree) or ``[[lx, px], [ly, py]]``
(bitree); integers are written exactly, so very deep vertices round-trip.
Sparse maps are lists of ``[vertex, value]`` pairs in lexicographic order.

"""

__all__ = ["to_json", "from_json", "decode_node", "dumps", "load_json", "dump_json"]

import dataclasses
import json
import math
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import equinox as eqx
from jaxtyping import Array
from plum import dispatch

from bicap.bitree import AnyNode, Node1, Node2, NodeSet, TreeShape
from bicap.bridge import BidiscAtom
from bicap.potential import AbstractNodeMap, PotentialField

# ===================================================================
# Encoding


@dispatch
def to_json(obj: Node1, /) -> Any:
    """A JSON-ready rendering of ``obj``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, NodeSet, TreeShape
    >>> from bicap.io import to_json
    >>> to_json(Node2(Node1(1, 0), Node1(0, 0)))
    [[1, 0], [0, 0]]
    >>> to_json(NodeSet([Node1(2, 3)], kind="downset"))
    {'kind': 'downset', 'nodes': [[2, 3]]}
    >>> to_json(TreeShape(4))
    {'depth': 4, 'ndim': 2}

    """
    return [obj.level, obj.pos]


@dispatch
def to_json(obj: Node2, /) -> Any:  # noqa: F811
    return [to_json(obj.x), to_json(obj.y)]


@dispatch
def to_json(obj: TreeShape, /) -> Any:  # noqa: F811
    return {"depth": obj.depth, "ndim": obj.ndim}


@dispatch
def to_json(obj: NodeSet, /) -> Any:  # noqa: F811
    return {"kind": obj.kind, "nodes": [to_json(n) for n in obj.nodes]}


@dispatch
def to_json(obj: AbstractNodeMap, /) -> Any:  # noqa: F811
    return {
        "shape": to_json(obj.shape),
        "entries": [[to_json(n), v] for n, v in obj.items()],
    }


@dispatch
def to_json(obj: PotentialField, /) -> Any:  # noqa: F811
    return {
        "shape": to_json(obj.shape),
        "values": [[to_json(n), v] for n, v in obj.items()],
    }


@dispatch
def to_json(obj: BidiscAtom, /) -> Any:  # noqa: F811
    return {"z1": list(obj.z1), "z2": list(obj.z2), "mass": obj.mass}


@dispatch
def to_json(obj: eqx.Module, /) -> Any:  # noqa: F811
    """Field by field; fields hidden from ``repr`` are left out."""
    return {
        f.name: to_json(getattr(obj, f.name))
        for f in dataclasses.fields(obj)
        if f.repr
    }


@dispatch
def to_json(obj: Array, /) -> Any:  # noqa: F811
    return obj.tolist()


@dispatch
def to_json(obj: Mapping, /) -> Any:  # type: ignore[type-arg]  # noqa: F811
    return {str(k): to_json(v) for k, v in obj.items()}


@dispatch
def to_json(obj: list | tuple, /) -> Any:  # type: ignore[type-arg]  # noqa: F811
    return [to_json(v) for v in obj]


@dispatch
def to_json(obj: bool | int | str | None, /) -> Any:  # noqa: F811, FBT001
    return obj


@dispatch
def to_json(obj: float, /) -> Any:  # noqa: F811
    # JSON has no infinities; keep them readable
    return obj if math.isfinite(obj) else repr(obj)


# ===================================================================
# Decoding


def decode_node(obj: Sequence[Any], /) -> AnyNode:
    """Inverse of :func:`to_json` on vertices.

    Examples
    --------
    >>> from bicap.io import decode_node
    >>> decode_node([[1, 0], [2, 3]])
    Node2(x=Node1(level=1, pos=0), y=Node1(level=2, pos=3))

    """
    if len(obj) != 2:  # noqa: PLR2004
        msg = f"a vertex is [level, pos] or a pair of those, got {obj!r}"
        raise ValueError(msg)
    first, second = obj
    if isinstance(first, Sequence):
        return Node2(decode_node(first), decode_node(second))  # type: ignore[arg-type]
    if not (isinstance(first, int) and isinstance(second, int)):
        msg = f"vertex coordinates must be integers, got {obj!r}"
        raise ValueError(msg)
    return Node1(first, second)


@dispatch
def from_json(cls: type[TreeShape], obj: Mapping, /) -> TreeShape:  # type: ignore[type-arg]
    """Decode a JSON record into ``cls``.

    Examples
    --------
    >>> from bicap.bitree import NodeSet
    >>> from bicap.io import from_json
    >>> from_json(NodeSet, {"kind": "exact", "nodes": [[[1, 0], [1, 0]]]}).nodes
    (Node2(x=Node1(level=1, pos=0), y=Node1(level=1, pos=0)),)

    """
    return cls(int(obj["depth"]), ndim=int(obj.get("ndim", 2)))


@dispatch
def from_json(cls: type[NodeSet], obj: Mapping, /) -> NodeSet:  # type: ignore[type-arg]  # noqa: F811
    return cls([decode_node(n) for n in obj["nodes"]], kind=obj.get("kind", "exact"))


@dispatch
def from_json(  # noqa: F811
    cls: type[AbstractNodeMap],
    obj: Mapping,  # type: ignore[type-arg]
    /,
) -> AbstractNodeMap:
    shape = from_json(TreeShape, obj["shape"])
    return cls(shape, [(decode_node(n), float(v)) for n, v in obj["entries"]])


@dispatch
def from_json(cls: type[BidiscAtom], obj: Mapping, /) -> BidiscAtom:  # type: ignore[type-arg]  # noqa: F811
    return BidiscAtom.from_(dict(obj))


@dispatch
def from_json(cls: type[BidiscAtom], obj: list, /) -> list[BidiscAtom]:  # type: ignore[type-arg]  # noqa: F811
    """An atom list ``[{"z1": ..., "z2": ..., "mass": ...}, ...]``."""
    return [BidiscAtom.from_(dict(item)) for item in obj]


# ===================================================================
# Files


def dumps(obj: Any, /) -> str:
    """Deterministic JSON text for ``obj``."""
    return json.dumps(to_json(obj), indent=2) + "\n"


def dump_json(obj: Any, path: str | Path, /) -> Path:
    out = Path(path)
    out.write_text(dumps(obj), encoding="utf-8")
    return out


def load_json(path: str | Path, /) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
