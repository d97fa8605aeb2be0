"""Keyword search over relational data, returning trails of linked rows."""

import json

from ._dbtrail import (
    Engine,
    Error,
    NotFoundError,
    ParseError,
    ValidationError,
    build_index,
    convert_dblp,
    normalize_query,
    tokenize,
)

__all__ = [
    "Engine",
    "Error",
    "NotFoundError",
    "ParseError",
    "ValidationError",
    "build_index",
    "convert_dblp",
    "normalize_query",
    "tokenize",
    "reply_json",
]


def reply_json(reply):
    """Decodes the body of a row/backlinks/stats reply, raising on a non-200 status."""
    if reply["status"] != 200:
        raise Error(f"HTTP {reply['status']}: {reply['body']}")
    return json.loads(reply["body"])
