"""Exception types raised across the package.

Every error that carries a counterexample stores it on ``witness``.
"""


class StructvalError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


# finite groups
class NotNormal(StructvalError):
    pass


class InvalidGroup(StructvalError):
    pass


# group structures
class ShapeMismatch(StructvalError):
    pass


class NotAMorphism(StructvalError):
    pass


class NotClosed(StructvalError):
    pass


class SubgroupTooSmall(StructvalError):
    pass


class TargetMismatch(StructvalError):
    pass


class NotCommuting(StructvalError):
    pass


# partitions and embedding problems
class PreconditionViolated(StructvalError):
    pass


class NotACover(StructvalError):
    pass


class NoSection(StructvalError):
    pass


class NotIsomorphicLift(StructvalError):
    pass


class LiftNotIso(StructvalError):
    pass


class InvalidPartition(StructvalError):
    pass


# valuations and p-adics
class ZeroInput(StructvalError, ValueError):
    pass


class PrimeMismatch(StructvalError, ValueError):
    pass


class DivisionByZero(StructvalError, ZeroDivisionError):
    pass


class PrecisionExhausted(StructvalError, ArithmeticError):
    pass


class NotMonic(StructvalError, ValueError):
    pass


class HypothesisViolated(StructvalError):
    def __init__(self, message="", clause=None, valuations=None):
        super().__init__(message, witness=valuations)
        self.clause = clause
        self.valuations = valuations or {}


class DegenerateDerivative(StructvalError):
    pass


class OutsideBall(StructvalError):
    pass


class NotMember(StructvalError):
    pass


# block approximation
class InvalidProblem(StructvalError, ValueError):
    pass


class PreimageMismatch(StructvalError):
    pass


class NotAHomomorphism(StructvalError):
    pass


class InvalidStructure(StructvalError):
    pass


# input files
class MalformedInput(StructvalError, ValueError):
    def __init__(self, message="", line=None, source=None):
        where = f"{source or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + message, witness={"line": line})
        self.line = line
