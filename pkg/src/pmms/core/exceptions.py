from typing import Optional


class PmmsException(Exception):
    """
    Base exception for the simulator.
    """

    pass


class ConfigurationException(PmmsException):
    """
    Raised when configuration is invalid or cannot be loaded.
    """

    pass


class DomainException(PmmsException):
    """
    Raised when a model is evaluated outside its domain (e.g. a non-positive distance).
    """

    pass


class UnstableQueueException(PmmsException):
    """
    Raised when the arrival rate reaches or exceeds the service rate.
    """

    pass


class HistoryParseException(PmmsException):
    """
    Raised when a history file line cannot be parsed.
    """

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PathValidationException(PmmsException):
    """
    Raised when a path breaks adjacency or AP/region incidence.
    """

    pass


class PathGenerationException(PmmsException):
    """
    Raised when the mobility walk cannot produce a path within its move budget.
    """

    pass


class ReservationDeniedException(PmmsException):
    """
    Raised when an AP has no free buffer left to reserve.
    """

    pass


class DuplicateReservationException(PmmsException):
    """
    Raised when a first-stage reservation already exists for the same (mn, ap).
    """

    pass


class ProtocolOrderException(PmmsException):
    """
    Raised when a second-stage reservation arrives without a live first stage.
    """

    pass


class LedgerInvariantException(PmmsException):
    """
    Raised when the buffer conservation identity does not hold.
    """

    pass


class ExperimentException(PmmsException):
    """
    Raised when an experiment cannot be resolved or run.
    """

    pass


class ReportIOException(PmmsException):
    """
    Raised when a report cannot be written or read back.
    """

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


def map_to_exit_code(exc: Exception) -> int:
    """
    Map simulator exceptions to CLI exit codes.

    Args:
        exc: The exception to map

    Returns:
        1 for configuration errors, 2 for every other failure
    """
    exception_mapping = {
        ConfigurationException: 1,
    }

    for exc_type, code in exception_mapping.items():
        if isinstance(exc, exc_type):
            return code

    return 2
