class ConfigurationError(ValueError):
    """Raised when a scan spec, ensemble spec, or config document is invalid."""
