"""Exception types shared across the toolkit."""


class FrameToolkitError(Exception):
    """Base class for all toolkit errors."""


class SpecMismatch(FrameToolkitError):
    """Operands belong to different algebras."""


class SpaceMismatch(FrameToolkitError):
    """Operands belong to different module spaces."""


class ShapeMismatch(FrameToolkitError):
    """Operator shapes are incompatible for the requested operation."""


class NotPositive(FrameToolkitError):
    """A positive (semi)definite input was required."""


class NotSelfAdjoint(FrameToolkitError):
    """A self-adjoint input was required."""


class NotCommutative(FrameToolkitError):
    """The operation is only defined over commutative algebras."""


class EmptyFamily(FrameToolkitError):
    """A frame family must contain at least one member."""


class NotAFrame(FrameToolkitError):
    """A construction was handed an input that fails its frame check."""


class NotSurjective(FrameToolkitError):
    """A surjective operator was required."""


class NotInjectiveClosedRange(FrameToolkitError):
    """A family member fails the injectivity / closed-range rank test."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"member {index} is not injective with closed range")


class UnknownProfile(FrameToolkitError):
    """Unknown instance-generation profile name."""


class ParseError(FrameToolkitError):
    """Input file is not syntactically valid."""


class ValidationError(FrameToolkitError):
    """Input file parsed but violates the instance schema."""
