from typing import Optional


class LabError(Exception):
    """Base class for every error raised by the lab's numerical modules"""

    pass


class ConfigError(LabError):
    """Raised when a run configuration is missing, malformed or inconsistent"""

    pass


class PipelineError(LabError):
    """Wraps a numerical failure with the module it came from"""

    def __init__(self, message: str, module: str, cause: Optional[Exception] = None):
        super().__init__(f"[{module}] {message}")
        self.module = module
        self.cause = cause
