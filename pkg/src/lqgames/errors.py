"""Exception hierarchy shared across the library."""


class LqGamesError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(LqGamesError):
    """Inputs have mutually inconsistent shapes."""


class IndefiniteWeight(LqGamesError):
    """A cost weight violates its definiteness requirement."""


class SingularStageSystem(LqGamesError):
    """The per-stage coupled gain system is rank-deficient beyond the
    conditioning floor, so a unique feedback Nash equilibrium does not
    exist at that stage."""

    def __init__(self, stage: int, rcond: float):
        self.stage = stage
        self.rcond = rcond
        super().__init__(
            f"stage {stage}: coupled gain system has reciprocal condition "
            f"{rcond:.3e} below the 1e-12 floor"
        )


class InvalidParams(LqGamesError):
    """A scalar parameter is outside its admissible range."""


class ConfigError(LqGamesError):
    """A run configuration failed to parse or validate.

    ``path`` names the offending location in the config tree.  ``kind``
    distinguishes structural problems ("parse": syntax, ragged matrices,
    unknown keys, wrong types) from semantically invalid values ("value"),
    so the CLI can exit with distinct codes.
    """

    def __init__(self, path: str, message: str, kind: str = "parse"):
        self.path = path
        self.kind = kind
        super().__init__(f"{path}: {message}")


class SweepCellError(LqGamesError):
    """Failure inside one sweep grid cell, with its coordinates attached."""

    def __init__(self, rho: float, sigma0: float, cause: Exception):
        self.rho = rho
        self.sigma0 = sigma0
        self.cause = cause
        super().__init__(f"sweep cell (rho={rho}, sigma0={sigma0}): {cause}")
