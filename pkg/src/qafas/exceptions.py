"""Error types raised across the package."""


class QafasError(ValueError):
    """Base class for invalid inputs."""


class InvalidResolutionError(QafasError):
    pass


class InvalidQuantizerError(QafasError):
    pass


class InvalidDimensionError(QafasError):
    pass


class InvalidRequestError(QafasError):
    pass


class SearchTooLargeError(QafasError):
    """Exhaustive search would exceed the configured subset cap."""

    def __init__(self, n_antennas, k, n_subsets, cap):
        self.n_antennas = n_antennas
        self.k = k
        self.n_subsets = n_subsets
        self.cap = cap
        super().__init__(
            f"exhaustive search over C({n_antennas}, {k}) = {n_subsets} subsets "
            f"exceeds cap {cap}"
        )


class ConfigError(QafasError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class EmptyTableError(QafasError):
    pass
