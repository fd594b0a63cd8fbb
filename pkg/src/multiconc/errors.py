"""Exception hierarchy.

Three families map onto the CLI exit codes: malformed input
(:class:`ValidationError`, exit 1), well-formed input that violates a
theorem's hypotheses (:class:`PreconditionError`, exit 2), and a failed
certificate (:class:`CertificationFailure`, exit 3), which can only mean a
bug since every certified inequality is unconditional.
"""


class MulticoncError(Exception):
    pass


class ValidationError(MulticoncError, ValueError):
    pass


class PreconditionError(MulticoncError, ValueError):
    pass


class CertificationFailure(MulticoncError, AssertionError):
    pass


class TriangleViolation(ValidationError):
    def __init__(self, i, j, k, excess):
        self.indices = (i, j, k)
        self.excess = excess
        super().__init__(f"TriangleViolation({i},{j},{k}): d[{i},{j}] exceeds "
                         f"d[{i},{k}] + d[{k},{j}] by {excess:.3g}")


class AsymmetricDistance(ValidationError):
    def __init__(self, i, j, residual):
        self.indices = (i, j)
        self.residual = residual
        super().__init__(f"AsymmetricDistance({i},{j}): |d[i,j] - d[j,i]| = {residual:.3g}")


class BadDistance(ValidationError):
    pass


class BadMeasure(ValidationError):
    def __init__(self, message, index=None):
        self.index = index
        super().__init__(f"BadMeasure: {message}")


class NotStochastic(ValidationError):
    def __init__(self, row, residual):
        self.row = row
        self.residual = residual
        super().__init__(f"NotStochastic: row {row} off by {residual:.3g}")


class NotReversible(ValidationError):
    def __init__(self, i, j, residual):
        self.indices = (i, j)
        self.residual = residual
        super().__init__(f"NotReversible({i},{j}): detailed-balance residual {residual:.3g}")


class DisconnectedGraph(ValidationError):
    def __init__(self, unreachable):
        self.unreachable = unreachable
        super().__init__(f"DisconnectedGraph: state {unreachable} unreachable from state 0")


class DimensionMismatch(ValidationError):
    pass


class EmptySet(ValidationError):
    pass


class OverlappingSets(ValidationError):
    def __init__(self, i, j):
        self.indices = (i, j)
        super().__init__(f"OverlappingSets: sets {i} and {j} intersect")


class ZeroSeparation(ValidationError):
    pass


class DegenerateBasis(ValidationError):
    pass


class NegativeInput(ValidationError):
    pass


class BadExponent(ValidationError):
    pass


class OutOfRangeEntry(ValidationError):
    def __init__(self, index, value):
        self.index = index
        super().__init__(f"OutOfRangeEntry: a[{index}] = {value!r} not in [0, 1]")


class BadPartition(ValidationError):
    pass


class BadParameters(ValidationError):
    pass


class NotLipschitz(ValidationError):
    def __init__(self, x, y, ratio):
        self.pair = (x, y)
        self.ratio = ratio
        super().__init__(f"{type(self).__name__}: |f({x}) - f({y})| / d = {ratio:.6g} > 1")


class NotLipschitzOnA(NotLipschitz):
    pass


class NotAnExtension(ValidationError):
    def __init__(self, x, gap):
        self.index = x
        super().__init__(f"NotAnExtension: g({x}) differs from f({x}) by {gap:.3g}")


class OverlappingIntervals(ValidationError):
    pass


class NotInDeltaK(PreconditionError):
    def __init__(self, constraint, margin):
        self.constraint = constraint
        self.margin = margin
        super().__init__(f"NotInDeltaK: constraint {constraint} violated (margin {margin:.3g})")


class RadiusTooLarge(PreconditionError):
    def __init__(self, r, limit):
        self.r = r
        self.limit = limit
        super().__init__(f"RadiusTooLarge: r = {r!r} exceeds the admissible {limit!r}")


class NoFeasibleFamily(PreconditionError):
    pass
