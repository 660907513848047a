"""Exception taxonomy shared by all kreinkit modules.

The split mirrors the CLI exit codes: precondition and certification
failures map to exit code 1, schema/IO problems map to exit code 2.
"""


class KreinKitError(Exception):
    """Base class for all kreinkit errors."""


class PreconditionError(KreinKitError):
    """An operation was called outside its mathematical domain."""


class CertificationError(KreinKitError):
    """A computed object failed its own numerical certificate."""


class SchemaError(KreinKitError):
    """Malformed JSON input or a wire-format violation."""
