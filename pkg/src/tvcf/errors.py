"""Exception hierarchy. Every error carries a stable machine-readable code."""


class TVCFError(Exception):
    code = "TVCF_ERROR"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value if isinstance(value, (int, float, str, bool, type(None))) else str(value)
        return out


class DomainError(TVCFError, ValueError):
    code = "DOMAIN_ERROR"


class ZeroDenominator(TVCFError, ZeroDivisionError):
    code = "ZERO_DENOMINATOR"


class DegreeOutOfRange(TVCFError, ValueError):
    code = "DEGREE_OUT_OF_RANGE"


class NotInClassD(TVCFError, ValueError):
    code = "NOT_IN_CLASS_D"


class DegenerateCoefficient(TVCFError, ValueError):
    code = "DEGENERATE_COEFFICIENT"


class BoundaryCondition(TVCFError, ValueError):
    code = "BOUNDARY_CONDITION"


class NoConvergence(TVCFError, ArithmeticError):
    code = "NO_CONVERGENCE"


class RowExhausted(TVCFError, IndexError):
    code = "ROW_EXHAUSTED"


class DegenerateInput(TVCFError, ValueError):
    code = "DEGENERATE_INPUT"


class UnsupportedResidual(TVCFError, KeyError):
    code = "UNSUPPORTED_RESIDUAL"

    def __str__(self):
        return self.args[0] if self.args else ""
