class GrasscodeError(Exception):
    pass


class CapExceeded(GrasscodeError):
    """A requested object is larger than the configured cap."""


class VerificationError(GrasscodeError):
    """A code or design failed a property it was required to have."""


class UnverifiedInput(VerificationError):
    """A conversion was handed an input that does not verify."""


class FieldError(GrasscodeError, ValueError):
    pass
