"""Exception hierarchy shared by all slicqt modules."""


class SlicqtError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SlicqtError, ValueError):
    """An argument lies outside the domain of an operation."""


class FrameError(SlicqtError, ValueError):
    """A Gabor frame cannot be built in the painless regime."""


class ShapeError(SlicqtError, ValueError):
    """Array or coefficient layout does not match what was expected."""


class FormatError(SlicqtError, ValueError):
    """A file is malformed or uses an unsupported encoding."""


class ConsistencyError(SlicqtError, ValueError):
    """Related waveforms disagree in length, rate or channel count."""


class AudioIOError(SlicqtError, OSError):
    """A file could not be found, read or written."""


class DatasetError(SlicqtError):
    """No usable stem sets were found."""
