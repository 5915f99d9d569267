"""Exception hierarchy.

The CLI maps these onto exit codes: input errors exit 1, infeasibility exits 2,
resource and numerical failures exit 3.
"""


class ContractError(Exception):
    """Base class for every error raised by this package."""


class InputError(ContractError, ValueError):
    """Malformed or out-of-range input."""


class PreconditionError(ContractError, ValueError):
    """Input is well formed but violates an operation's precondition (e.g. MLR)."""


class NotImplementableError(ContractError):
    """The requested target action cannot be implemented by any contract."""


class ResourceError(ContractError):
    """A configured size or node budget was exceeded."""


class NumericalError(ContractError):
    """The LP engine failed to converge or lost feasibility."""


class FitError(ContractError):
    """Learning-curve fit failed."""


class DegenerateFitError(FitError):
    """Fitted curve has no decreasing term (b <= 0).

    The flat fallback model is attached as ``model``.
    """

    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model
