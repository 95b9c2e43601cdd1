"""Components for Python compatibility.

Notes:
    The functionality here lets us support multiple versions of Python and both JSON
    backends (`orjson` when the `json` extra is installed, the stdlib otherwise)
    without branching at every call site.
"""
