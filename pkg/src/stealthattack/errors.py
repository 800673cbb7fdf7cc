"""Exception hierarchy.  Everything derives from ``ValueError`` so callers that
only care about "bad input" can catch that."""


class StealthAttackError(ValueError):
    pass


class InvalidParametersError(StealthAttackError):
    """System parameters violate a modelling assumption (stability, r > 0, ...)."""


class InfeasibleAttackError(StealthAttackError):
    """Attack coefficient T outside the admissible range (|T| >= 1 or beyond the budget)."""


class DegenerateAttackError(StealthAttackError):
    """S = 0: the transmitted sequence is identically zero and the KL rate diverges."""


class DomainError(StealthAttackError):
    """Argument outside the domain of a boundary parameterization."""


class DegenerateSystemError(StealthAttackError):
    """a = 0 (or p = 0): every attack leaves the estimation error unchanged."""


class InvalidBracketError(StealthAttackError):
    pass
