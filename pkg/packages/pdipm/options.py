"""Interior-point solver options."""

from dataclasses import dataclass

from packages.scenario.validation import ValidationError


@dataclass
class SolverOptions:
    """
    Termination and step-control settings.

    Stops when the scaled residual norms are at most eps_feas and the
    duality measure is at most eps_gap. Steps are cut to gamma times the
    distance to the boundary; the perturbation is sigma_c times the duality
    measure. check_directions re-substitutes every direction into the
    linearized system and logs a warning when it misses.
    """

    eps_feas: float = 1e-8
    eps_gap: float = 1e-8
    max_iters: int = 100
    gamma: float = 0.95
    sigma_c: float = 0.1
    check_directions: bool = False


def validate_solver_options(options: SolverOptions) -> dict[str, str]:
    """
    Check option ranges.

    Raises:
        ValidationError: If any option is out of range (contains errors dict)
    """
    errors = {}
    if not options.eps_feas > 0:
        errors["eps_feas"] = "Feasibility tolerance must be positive"
    if not options.eps_gap > 0:
        errors["eps_gap"] = "Gap tolerance must be positive"
    if not isinstance(options.max_iters, int) or options.max_iters < 1:
        errors["max_iters"] = "Iteration limit must be a positive integer"
    if not 0 < options.gamma < 1:
        errors["gamma"] = "Fraction to boundary must be between 0 and 1 (exclusive)"
    if not 0 < options.sigma_c < 1:
        errors["sigma_c"] = "Centering parameter must be between 0 and 1 (exclusive)"
    if errors:
        raise ValidationError(errors)
    return errors
