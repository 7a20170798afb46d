"""Single source of the artifact version (recorded in every metadata file)."""

__version__ = "0.1.0"
