"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the admissible range of an operation."""


class IntegrationError(RuntimeError):
    """The radial integration failed; carries the last computed state."""

    def __init__(self, message, r=None, value=None):
        super().__init__(message)
        self.r = r
        self.value = value

    def payload(self):
        return {"error": str(self), "r": self.r, "value": self.value}


class ZeroNotFoundError(IntegrationError):
    """No sign change of the profile before the integration cutoff."""
