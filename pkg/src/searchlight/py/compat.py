# flake8: noqa
from __future__ import annotations

from typing import TYPE_CHECKING

import sys

__all__ = (
    "Self",
    "json",
    "JSONDecodeError",
    "cache",
    "dumps",
    "loads",
)

if TYPE_CHECKING:
    from typing import TypeVar

    from typing_extensions import Self

    import orjson as json
    from json import JSONDecodeError

    F = TypeVar("F")

    def cache(func: F) -> F: ...

else:
    from functools import cache
    from json import JSONDecodeError

    if sys.version_info >= (3, 11):
        from typing import Self

    else:
        from typing_extensions import Self

    try:
        import orjson as json
    except (ImportError, ModuleNotFoundError):
        import json


def dumps(obj: object) -> bytes:
    """Serialize `obj` to JSON bytes with sorted keys and indentation.

    Note:
        `orjson` returns bytes natively; the stdlib fallback is encoded to match so
        callers never branch on the backend.
    """
    if json.__name__ == "orjson":
        return json.dumps(
            obj,
            option=json.OPT_INDENT_2 | json.OPT_SORT_KEYS | json.OPT_SERIALIZE_NUMPY,
        )
    return json.dumps(obj, indent=2, sort_keys=True).encode()


def loads(val: bytes | str) -> object:
    """Deserialize JSON from bytes or text using the available backend."""
    return json.loads(val)
