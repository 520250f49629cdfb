"""Error taxonomy for figure rendering."""


class InputError(Exception):
    """Input file missing, malformed, or insufficient for the figure."""


class MissingColumnError(InputError):
    """A requested column is absent from the delimited input."""


class SnapshotFormatError(InputError):
    """Snapshot file violates the text-snapshot contract."""
