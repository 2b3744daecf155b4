"""Exception hierarchy shared by all modules."""


class SagnacDepolError(ValueError):
    """Base class for every error raised by this package."""


class NormalizationError(SagnacDepolError):
    pass


class NonPhysicalStateError(SagnacDepolError):
    pass


class NonPhysicalProcessError(SagnacDepolError):
    pass


class ParameterError(SagnacDepolError):
    pass


class DegenerateInputError(SagnacDepolError):
    pass


class ChannelValidationError(SagnacDepolError):
    pass


class InsufficientDataError(SagnacDepolError):
    pass


class IncompleteProbeError(SagnacDepolError):
    pass
