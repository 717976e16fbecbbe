"""Exception hierarchy shared by all modules."""


class LorentzGlueError(Exception):
    """Base class for every error raised by the package."""


# model spaces
class ModelSpaceError(LorentzGlueError, ValueError):
    pass


class CoordinateOffModel(ModelSpaceError):
    """Ambient coordinates do not lie on the model hyperquadric."""


class NoUniqueGeodesic(ModelSpaceError):
    """The pair lies outside a common normal region."""


class LegNotTimelike(ModelSpaceError):
    pass


class SizeBoundViolated(ModelSpaceError):
    pass


class ReverseTriangleViolated(ModelSpaceError):
    pass


class UnrealizableTriple(ModelSpaceError):
    pass


class GridTooCoarse(ModelSpaceError):
    pass


class SturmNotApplicable(ModelSpaceError):
    """The differential inequality (or a boundary condition) fails, so no conclusion can be drawn."""


# finite spaces
class NotCausal(LorentzGlueError, ValueError):
    pass


class SpaceFormatError(LorentzGlueError, ValueError):
    """Malformed space or gluing document."""


# amalgamation
class NotABijection(LorentzGlueError, ValueError):
    pass


class TooLarge(LorentzGlueError, ValueError):
    pass


class InvalidChain(LorentzGlueError, ValueError):
    pass


class NotChronological(LorentzGlueError, ValueError):
    pass


class HypothesesNotMet(LorentzGlueError, ValueError):
    pass


# comparison
class OffSide(LorentzGlueError, ValueError):
    pass


class NoRealizingCurve(LorentzGlueError, ValueError):
    pass


class ConfigInfeasible(LorentzGlueError, ValueError):
    pass


class ParameterOutOfRange(LorentzGlueError, ValueError):
    pass


class SubtriangleDegenerate(LorentzGlueError, ValueError):
    pass


class SideMismatch(LorentzGlueError, ValueError):
    pass
