"""Exception hierarchy.

Errors fall in four families, which the command line maps to exit codes:
``InputError`` (2), ``Unsolvable`` (1), ``BudgetError`` (3).  ``CertificationFailed``
is a guard against internal bugs, except in acyclic synthesis where it is the
documented rejection path.
"""


def _show(word):
    sep = "" if all(len(x) == 1 for x in word) else ","
    return sep.join(word)


class WmgError(Exception):
    """Base class for every error raised by this package."""


class InputError(WmgError):
    pass


class Unsolvable(WmgError):
    """The instance has no solution of the requested kind."""


class BudgetError(WmgError):
    pass


# -- input / precondition errors ------------------------------------------

class EmptyWord(InputError):
    pass


class PreconditionViolated(InputError):
    pass


class NotTotallyReachable(PreconditionViolated):
    def __init__(self, unreachable):
        self.unreachable = tuple(unreachable)
        super().__init__(f"states not reachable from the initial state: {', '.join(self.unreachable)}")


class NotDeterministic(InputError):
    pass


class DuplicatePlace(InputError):
    pass


class SelfLoopPlace(InputError):
    pass


class NotEnabled(InputError):
    def __init__(self, transition, place):
        self.transition = transition
        self.place = place
        super().__init__(f"{transition} is not enabled (blocked by place {place})")


class NotCoprime(InputError):
    pass


class OrderViolated(InputError):
    pass


class BelowThreshold(InputError):
    pass


class LabelAbsent(InputError):
    pass


class OutOfTheoremScope(InputError):
    pass


class NotWmg(InputError):
    pass


class NotConnected(InputError):
    pass


class ParseError(InputError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


# -- negative answers -----------------------------------------------------

class NotPrimeParikh(Unsolvable):
    pass


class NotARotation(Unsolvable):
    def __init__(self, word, canonical):
        self.word = tuple(word)
        self.canonical = tuple(canonical)
        super().__init__(f"word is not a rotation of the canonical word {_show(self.canonical)}")


class InconsistentDistances(Unsolvable):
    def __init__(self, state):
        self.state = state
        super().__init__(f"paths to state {state} have different Parikh vectors")


class NoSemiflow(Unsolvable):
    pass


class NoSolution(Unsolvable):
    pass


class NoMarkingMatches(Unsolvable):
    pass


class PropertyBViolated(Unsolvable):
    def __init__(self, report):
        self.report = report
        super().__init__("property b violated: " + "; ".join(f"{name} at {where}" for name, where in report.witnesses))


class PropertyCViolated(Unsolvable):
    pass


class NonConvex(Unsolvable):
    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"state set is not lattice-convex, missing point {self.witness}")


class NoRegionExists(Unsolvable):
    def __init__(self, state, label):
        self.state = state
        self.label = label
        super().__init__(f"no WMG-region prevents {label} at state {state}")


class PairConditionFailed(Unsolvable):
    def __init__(self, pair, reason):
        self.pair = tuple(pair)
        self.reason = reason
        super().__init__(f"pair {{{','.join(self.pair)}}}: {reason}")


class CertificationFailed(WmgError):
    def __init__(self, message, divergence=None):
        self.divergence = divergence
        super().__init__(message)


# -- budgets --------------------------------------------------------------

class CycleBudgetExceeded(BudgetError):
    pass


class BoundExceeded(BudgetError):
    def __init__(self, bound):
        self.bound = bound
        super().__init__(f"more than {bound} reachable states")


class SearchSpaceTooLarge(BudgetError):
    pass
