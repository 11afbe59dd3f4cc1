"""Closed-form error predictions from the compression ratio."""

import math

LN3 = math.log(3)


def _clip(value: float) -> float:
    return min(1.0, max(0.0, value))


def predicted_error(constants: int, kappa: float) -> float:
    """Expected test error of a random model with `constants` constants at compression `kappa`."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return _clip(LN3 / 2 * constants / kappa)


def symmetric_constant(d: int) -> float:
    """ln(3) d^2 - 2 ln(d!), the error-compression product of a d x d grid with row and column symmetry."""
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    return LN3 * d * d - 2 * math.lgamma(d + 1)


def predicted_error_symmetric(d: int, kappa: float) -> float:
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return _clip(symmetric_constant(d) / kappa)
