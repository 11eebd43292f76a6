class ExtractionError(Exception):
    """Raised when inputs cannot be turned into a valid embedding store."""
