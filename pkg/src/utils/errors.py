"""
Exception hierarchy shared by the services and the command-line layer.

Services raise these with a readable message; the view layer maps them to
process exit codes (see EXIT_CODES).
"""

from fractions import Fraction


EXIT_OK = 0
EXIT_VERDICT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3


class InputError(ValueError):
    """Malformed or out-of-range user input (exit code 2)."""


class NoSolution(ValueError):
    """Right-hand side lies outside the column span of the matrix."""


class UnweightedInput(ValueError):
    """An operation that needs a weight grading received an unweighted algebra."""


class WeightMismatch(ValueError):
    """A nonzero structure constant violates weight(k) = weight(i) + weight(j)."""

    def __init__(self, i: int, j: int, k: int):
        self.i, self.j, self.k = i, j, k
        super().__init__(
            f"Bracket [e{i}, e{j}] has a nonzero component on e{k}, "
            f"but the weights are not additive"
        )


class JacobiFailure(ValueError):
    """
    The Jacobi identity fails on the basis triple (i, j, k).

    Attributes:
        i, j, k: 0-based basis indices, i < j < k
        defect: sparse vector [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]
    """

    def __init__(self, i: int, j: int, k: int, defect: dict[int, Fraction]):
        self.i, self.j, self.k = i, j, k
        self.defect = dict(defect)
        shown = {idx: str(c) for idx, c in sorted(self.defect.items())}
        super().__init__(f"Jacobi identity fails on ({i}, {j}, {k}): defect {shown}")


class ArityBoundInsufficient(ValueError):
    """Generation could not certify that arities beyond the bound contribute nothing."""

    def __init__(self, arity_bound: int, required: int, degree: int):
        self.arity_bound = arity_bound
        self.required = required
        self.degree = degree
        super().__init__(
            f"Degree {degree} may need operations up to arity {required}, "
            f"but only arity {arity_bound} was computed"
        )


class InvariantViolation(RuntimeError):
    """An identity the library relies on failed; this is an implementation bug (exit code 3)."""


class StasheffViolation(InvariantViolation):
    """
    The transferred operations fail the Stasheff identity of arity n.

    Attributes:
        n: total arity of the failing identity
        inputs: basis tuple (cohomology basis indices) where the sum is nonzero
        defect: sparse vector of the nonzero sum
    """

    def __init__(self, n: int, inputs: tuple[int, ...], defect: dict[int, Fraction]):
        self.n = n
        self.inputs = tuple(inputs)
        self.defect = dict(defect)
        shown = {idx: str(c) for idx, c in sorted(self.defect.items())}
        super().__init__(f"Stasheff identity of arity {n} fails on {self.inputs}: {shown}")
