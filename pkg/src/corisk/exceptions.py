class CoriskError(Exception):
    """Base class for pipeline errors."""

    exit_code = 2


class DataError(CoriskError):
    """Input data is missing, malformed or empty."""


class ConfigError(CoriskError):
    exit_code = 1


class NetworkError(CoriskError):
    """Transport failure; retryable.  Carries the URL that failed."""

    exit_code = 3
    retryable = True

    def __init__(self, url: str, reason: str = ""):
        self.url = url
        super().__init__(f"network error fetching {url}: {reason}" if reason else f"network error fetching {url}")


class HTTPStatusError(NetworkError):
    retryable = False

    def __init__(self, url: str, status: int):
        self.status = status
        CoriskError.__init__(self, f"HTTP {status} for {url}")
        self.url = url


class CacheError(CoriskError):
    exit_code = 2


class ParseError(DataError):
    def __init__(self, accession_id: str, reason: str):
        self.accession_id = accession_id
        super().__init__(f"{accession_id}: {reason}")


class UndefinedCorrelationError(DataError):
    """No lag produced a defined correlation (too few pairs or constant input)."""
