"""Exception hierarchy shared by every chsh_games module."""


class ChshGamesError(ValueError):
    """Base class for user-facing errors raised by the library."""


class ArityError(ChshGamesError):
    """Arity, player count or index outside the supported range."""


class ExpressionSyntaxError(ChshGamesError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(ChshGamesError):
    pass


class NotUnitaryError(ChshGamesError):
    pass


class NormError(ChshGamesError):
    pass


class ResourceError(ChshGamesError):
    """Unknown resource name or resource incompatible with the game."""


class ConfigError(ChshGamesError):
    pass


class ParityFormError(ChshGamesError):
    """The answer-side function is neither the n-bit XOR nor its negation."""
