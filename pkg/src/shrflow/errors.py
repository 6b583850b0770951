"""Exception hierarchy shared by all analysis stages.

Two error families matter to callers: ``ValidationError`` (bad inputs or
configuration, CLI exit code 2) and ``NumericalError`` (the math broke on
inputs that passed validation, CLI exit code 3).
"""


class ShrError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ShrError):
    """Input data or configuration violates a documented precondition."""


class NumericalError(ShrError):
    """A numerical procedure failed on otherwise valid input."""


class NonFiniteError(ValidationError):
    def __init__(self, channel, frame, epoch=None):
        self.channel = int(channel)
        self.frame = int(frame)
        self.epoch = None if epoch is None else int(epoch)
        where = f"channel {self.channel}, frame {self.frame}"
        if self.epoch is not None:
            where += f", epoch {self.epoch}"
        super().__init__(f"non-finite value at {where}")


class TooShortError(ValidationError):
    pass


class LabelMismatchError(ValidationError):
    pass


class OrderBelowGlobalError(ValidationError):
    pass


class TooEarlyError(ValidationError):
    pass


class TooLateError(ValidationError):
    pass


class InconsistentModelsError(ValidationError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class InvalidCouplingError(ValidationError):
    pass


class UnstableSpecError(ValidationError):
    pass


class AllRowsDegenerateError(NumericalError):
    """Every row of the lagged matrix had zero variance; nothing to analyze."""


class NumericalFailureError(NumericalError):
    """A matrix factorization did not converge."""


class NotConvergedError(NumericalError):
    """Power iteration hit its iteration cap before the direction settled.

    Usually means the two largest singular values are nearly tied; callers
    may fall back to a full decomposition.
    """

    def __init__(self, iterations, last_delta):
        self.iterations = int(iterations)
        self.last_delta = float(last_delta)
        super().__init__(
            f"power iteration did not converge after {self.iterations} "
            f"iterations (last direction change {self.last_delta:.3e})"
        )


class PipelineError(ShrError):
    """Wraps a stage failure with the name of the stage that raised it."""

    def __init__(self, stage, cause):
        self.stage = str(stage)
        self.cause = cause
        super().__init__(f"stage '{self.stage}' failed: {cause}")
