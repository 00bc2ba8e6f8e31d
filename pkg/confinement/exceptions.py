class ConfinementError(Exception):
    """Base class for every error raised by the confinement package"""


class GridError(ConfinementError, ValueError):
    """Box or mesh parameters that cannot describe a valid grid"""


class PotentialError(ConfinementError, ValueError):
    """Unknown potential family or bad family parameters"""


class QuadratureError(ConfinementError):
    """Integration over mismatched grids or of unnormalized states"""


class ManifestError(ConfinementError):
    """Reference manifest missing or malformed"""


class NumericalError(ConfinementError):
    """A computation broke down numerically (exit status 4 on the CLI)"""


class PivotError(NumericalError):
    def __init__(self, row: int, pivot: float, guard: float):
        self.row = row
        self.pivot = pivot
        self.guard = guard
        super().__init__(
            f"zero pivot at row {row} (|{pivot:.3e}| <= {guard:.3e}); reduce dtau"
        )


class CollapseError(NumericalError):
    """The state vanished, e.g. the trial lies in the span of lower states"""


class OracleError(NumericalError):
    """The reference eigensolver failed its residual check"""


class StateSolveError(NumericalError):
    """Failure of one state in a ladder; ``completed`` holds the states below it"""

    def __init__(self, state_index: int, cause: Exception, completed=()):
        self.state_index = state_index
        self.cause = cause
        self.completed = list(completed)
        super().__init__(f"state {state_index}: {cause}")
