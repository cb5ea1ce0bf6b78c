"""
Exception hierarchy for the Ising lab.

Input problems subclass ValueError so callers that only know the builtin
contract keep working.
"""


class LabError(Exception):
    """Base class for all lab errors"""

    pass


class DomainError(LabError, ValueError):
    """Face set is not a connected, simply connected polyomino"""

    def __init__(self, message: str, cell: tuple[int, int] | None = None):
        super().__init__(message if cell is None else f"{message} (cell {cell})")
        self.cell = cell


class BoundaryConditionError(LabError, ValueError):
    """Marks or arc labels do not describe admissible boundary conditions"""

    pass


class SourceError(LabError, ValueError):
    """Sources are not distinct decorated vertices of the domain"""

    pass


class SiteError(LabError, ValueError):
    """Observable requested at a site where it is not defined"""

    pass


class EnumerationCapExceeded(LabError):
    """Exhaustive enumeration refused: too many edges"""

    def __init__(self, n_edges: int, cap: int):
        super().__init__(
            f"Exhaustive enumeration refused: domain has {n_edges} full edges, cap is {cap}"
        )
        self.n_edges = n_edges
        self.cap = cap


class ToleranceViolation(LabError):
    """An identity check exceeded its tolerance"""

    def __init__(self, check: str, defect: float, tol: float, site=None):
        where = "" if site is None else f" at {site}"
        super().__init__(f"{check}: defect {defect:.3e} exceeds {tol:.1e}{where}")
        self.check = check
        self.defect = defect
        self.tol = tol
        self.site = site


class SingularSystemError(LabError):
    """Continuum linear system is numerically singular"""

    def __init__(self, condition_number: float):
        super().__init__(f"Linear system is singular (condition number {condition_number:.3e})")
        self.condition_number = condition_number


class EvaluationError(LabError, ValueError):
    """Evaluation at a pole, branch point or outside the domain"""

    pass
