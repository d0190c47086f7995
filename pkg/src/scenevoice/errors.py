"""Exception hierarchy shared across the package."""


class SceneVoiceError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SceneVoiceError):
    """A raster, file, or record does not satisfy an operation's input contract."""


class InvalidParameterError(SceneVoiceError):
    """A parameter value is outside an operation's accepted domain."""


class DegenerateHistogramError(SceneVoiceError):
    """Histogram-based threshold selection has no valid split (constant image)."""


class BackendUnavailableError(SceneVoiceError):
    """A detector backend failed to respond (spawn failure, timeout, bad reply)."""


class EngineUnavailableError(SceneVoiceError):
    """An external OCR engine failed (spawn failure, timeout, nonzero exit)."""


class SinkClosedError(SceneVoiceError):
    """An utterance was submitted to a speech sink after shutdown."""


class ConfigurationError(SceneVoiceError):
    """A configuration value is malformed (bad template, bad config file)."""
