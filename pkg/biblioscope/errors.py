"""Exceptions raised by biblioscope."""


class BiblioscopeError(Exception):
    """Generic biblioscope error."""

    def __init__(self, message="Biblioscope error"):
        """Init BiblioscopeError."""
        super().__init__(message)
        self.message = message


class ConfigurationError(BiblioscopeError):
    """Exception raised when a configuration or map file is invalid."""

    def __init__(self, message="Invalid configuration", path=None,
                 line=None):
        """Init ConfigurationError.

        :param message: error message
        :param path: configuration file that caused the error
        :param line: line number in the file, if known
        """
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class InputError(BiblioscopeError):
    """Exception raised when input files or stores can not be used."""

    def __init__(self, message="Invalid input"):
        """Init InputError."""
        super().__init__(message)


class RecordRejectedError(InputError):
    """Exception raised when a tagged record can not become a document."""

    def __init__(self, message="Record rejected", location=None):
        """Init RecordRejectedError.

        :param message: error message
        :param location: ``(file name, line number)`` of the record
        """
        super().__init__(message)
        self.location = location


class StoreIntegrityError(InputError):
    """Exception raised when a corpus store fails verification."""

    def __init__(self, message="Corpus store is inconsistent"):
        """Init StoreIntegrityError."""
        super().__init__(message)


class IndicatorError(BiblioscopeError):
    """Exception raised when an indicator can not be computed."""

    def __init__(self, message="Indicator can not be computed"):
        """Init IndicatorError."""
        super().__init__(message)


class BasemapError(BiblioscopeError):
    """Exception raised when a basemap file is invalid."""

    def __init__(self, message="Invalid basemap", line=None):
        """Init BasemapError.

        :param message: error message
        :param line: line number of the offending basemap row
        """
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OverlayError(BiblioscopeError):
    """Exception raised when there is nothing to project on a basemap."""

    def __init__(self, message="Nothing to project"):
        """Init OverlayError."""
        super().__init__(message)
