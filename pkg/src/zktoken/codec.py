"""Canonical encodings.

Two encodings live here:

* ``encode`` - the tagged binary form hashed by circuits (witness hashes,
  public-input bindings, delivery hashes). Every value carries a one-byte
  type tag, integers are fixed-width 32-byte big-endian, byte strings and
  sequences are length-prefixed, dataclass fields follow declaration order.
  ``None`` encodes as the lone tag ``0x00``, so optional fields carry an
  implicit presence flag.
* ``to_json`` / ``from_json`` - the JSON form used for envelopes, transaction
  logs and snapshots. Integers and byte strings become ``0x`` hex strings;
  decoding is driven by the dataclass type hints.
"""

from __future__ import annotations

import dataclasses
import json
import types
import typing
from typing import Any, Union

U256_MAX = (1 << 256) - 1

_T_NONE = b"\x00"
_T_BOOL = b"\x01"
_T_INT = b"\x02"
_T_BYTES = b"\x03"
_T_STR = b"\x04"
_T_SEQ = b"\x05"
_T_STRUCT = b"\x06"
_T_MAP = b"\x07"


def u256(value: int) -> bytes:
    if not 0 <= value <= U256_MAX:
        raise ValueError(f"value out of uint256 range: {value}")
    return value.to_bytes(32, "big")


def _len8(n: int) -> bytes:
    return n.to_bytes(8, "big")


def encode(value: Any) -> bytes:
    if value is None:
        return _T_NONE
    if isinstance(value, bool):
        return _T_BOOL + (b"\x01" if value else b"\x00")
    if isinstance(value, int):
        return _T_INT + u256(value)
    if isinstance(value, (bytes, bytearray)):
        return _T_BYTES + _len8(len(value)) + bytes(value)
    if isinstance(value, str):
        raw = value.encode("utf-8")
        return _T_STR + _len8(len(raw)) + raw
    if isinstance(value, (list, tuple)):
        return _T_SEQ + _len8(len(value)) + b"".join(encode(v) for v in value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        name = type(value).__name__.encode()
        fields = dataclasses.fields(value)
        body = b"".join(encode(getattr(value, f.name)) for f in fields)
        return _T_STRUCT + _len8(len(name)) + name + _len8(len(fields)) + body
    if isinstance(value, dict):
        items = sorted((encode(k), encode(v)) for k, v in value.items())
        return _T_MAP + _len8(len(items)) + b"".join(k + v for k, v in items)
    raise TypeError(f"cannot canonically encode {type(value).__name__}")


class Record:
    """Mixin for frozen dataclasses: lists passed to tuple fields become tuples."""

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):  # type: ignore[arg-type]
            value = getattr(self, f.name)
            if isinstance(value, list):
                object.__setattr__(self, f.name, tuple(value))


# -- JSON ------------------------------------------------------------------


def _hex(value: int | bytes) -> str:
    if isinstance(value, int):
        return hex(value)
    return "0x" + value.hex()


def to_json(value: Any) -> Any:
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return _hex(value)
    if isinstance(value, (bytes, bytearray)):
        return _hex(bytes(value))
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return [to_json(v) for v in sorted(value)]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_json(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {_key(k): to_json(v) for k, v in value.items()}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _key(k: Any) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, int):
        return hex(k)
    raise TypeError(f"unsupported mapping key {k!r}")


def _parse_int(data: Any) -> int:
    if isinstance(data, bool):
        raise ValueError("boolean is not an integer")
    if isinstance(data, int):
        return data
    if isinstance(data, str):
        return int(data, 16) if data.lower().startswith("0x") else int(data)
    raise ValueError(f"expected integer, got {data!r}")


def _parse_bytes(data: Any) -> bytes:
    if not isinstance(data, str):
        raise ValueError(f"expected hex string, got {data!r}")
    return bytes.fromhex(data[2:] if data.lower().startswith("0x") else data)


def from_json(tp: Any, data: Any) -> Any:
    """Rebuild a value of annotated type ``tp`` from its JSON form."""
    origin = typing.get_origin(tp)
    if origin is Union or origin is types.UnionType:
        args = typing.get_args(tp)
        if data is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        if len(inner) != 1:
            raise TypeError(f"ambiguous union {tp}")
        return from_json(inner[0], data)
    if origin in (list, tuple):
        if not isinstance(data, list):
            raise ValueError(f"expected list for {tp}, got {data!r}")
        args = typing.get_args(tp)
        item = args[0] if args else Any
        items = [from_json(item, d) for d in data]
        return tuple(items) if origin is tuple else items
    if origin is dict:
        kt, vt = typing.get_args(tp)
        if not isinstance(data, dict):
            raise ValueError(f"expected object for {tp}")
        return {from_json(kt, k): from_json(vt, v) for k, v in data.items()}
    if tp is Any:
        return data
    if tp is int:
        return _parse_int(data)
    if tp is bytes:
        return _parse_bytes(data)
    if tp is str:
        if not isinstance(data, str):
            raise ValueError(f"expected string, got {data!r}")
        return data
    if tp is bool:
        if not isinstance(data, bool):
            raise ValueError(f"expected bool, got {data!r}")
        return data
    if dataclasses.is_dataclass(tp):
        if not isinstance(data, dict):
            raise ValueError(f"expected object for {tp.__name__}")
        hints = typing.get_type_hints(tp)
        kwargs = {}
        for f in dataclasses.fields(tp):
            if f.name in data:
                kwargs[f.name] = from_json(hints[f.name], data[f.name])
            elif f.default is dataclasses.MISSING and f.default_factory is dataclasses.MISSING:
                raise ValueError(f"{tp.__name__}: missing field {f.name!r}")
        return tp(**kwargs)
    raise TypeError(f"unsupported type {tp!r}")


def dumps(value: Any) -> str:
    """Canonical JSON text: fixed field order, no insignificant whitespace."""
    return json.dumps(to_json(value), separators=(",", ":"))
