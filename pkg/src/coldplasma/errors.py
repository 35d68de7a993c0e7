"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """Invalid call pattern or configuration (CLI exit status 2)."""


class SimpleWaveError(ValueError):
    """The first integral C is constant over the data (simple wave); such
    data are outside the scope of the smoothness certificate and of the
    blow-up search (CLI exit status 3)."""


class IntegratorFailure(RuntimeError):
    """The integrated state became non-finite (CLI exit status 4).

    Attributes
    ----------
    rho0 : float
        Lagrangian label of the failing characteristic.
    theta : float
        Time of the last valid state.
    state : numpy.ndarray
        Last valid ``(rho, P, E, p_bar, q)``.
    """

    def __init__(self, rho0, theta, state):
        self.rho0 = float(rho0)
        self.theta = float(theta)
        self.state = state
        super().__init__(
            f"non-finite state on characteristic rho0={self.rho0:.6g} "
            f"after theta={self.theta:.6g}"
        )
