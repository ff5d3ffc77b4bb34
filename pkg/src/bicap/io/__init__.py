""":mod:`bicap.io`: JSON encodings of bicap values."""

__all__ = ["to_json", "from_json", "decode_node", "dumps", "dump_json", "load_json"]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.io", RUNTIME_TYPECHECKER):
    from ._src.codecs import decode_node, dump_json, dumps, from_json, load_json, to_json
