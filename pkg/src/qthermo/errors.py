"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


class NumericsError(RuntimeError):
    """A numerical routine left its validated operating regime."""
