"""
Subcommand families. Each module exposes ``register(subparsers)`` which adds
its parsers and binds a handler through ``set_defaults(handler=...)``;
handlers take the parsed namespace and return an exit code.
"""

from app.commands import claims, groups, symbolic

COMMAND_MODULES = [claims, groups, symbolic]
