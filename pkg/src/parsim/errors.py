"""Exception hierarchy shared by the engine modules."""


class SimulationError(Exception):
    """Base class for all engine errors."""


class UnknownEntityError(SimulationError):
    pass


class UnknownAttributeError(SimulationError):
    pass


class TypeMismatchError(SimulationError):
    pass


class RangeViolationError(SimulationError):
    pass


class UnknownParameterError(SimulationError):
    pass


class UnknownModelError(SimulationError):
    pass


class RasterFormatError(SimulationError):
    pass


class TimelineError(SimulationError):
    pass


class ChannelError(SimulationError):
    pass


class ExportError(SimulationError):
    pass
