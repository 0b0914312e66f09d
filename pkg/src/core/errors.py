#!/usr/bin/env python3
"""
Susceptibility Errors
Exception hierarchy shared by the library modules and the CLI
"""

from typing import Optional


class SusceptibilityError(Exception):
    """Base class for every error raised by the susceptibility library"""


class DomainError(SusceptibilityError, ValueError):
    """A parameter lies outside the domain where the model is defined"""


class ConfigError(SusceptibilityError):
    """The YAML defaults file is missing or malformed"""


class UsageError(SusceptibilityError):
    """Invalid command-line configuration"""

    def __init__(self, message: str, flag: Optional[str] = None):
        self.flag = flag
        if flag:
            message = f"--{flag.replace('_', '-')}: {message}"
        super().__init__(message)


class EvaluationAtPole(SusceptibilityError):
    """A kernel was evaluated on top of one of its denominator roots"""


class DegenerateContour(SusceptibilityError):
    """A kernel pole sits on the real axis, so the contour cannot be closed"""


class ToleranceNotReached(SusceptibilityError):
    """Adaptive quadrature ran out of subdivisions before converging"""


class SingularResolvent(SusceptibilityError):
    """A drift matrix is singular at the requested frequency"""


class SweepError(SusceptibilityError):
    """A sweep point failed; carries the probe detuning that failed"""

    def __init__(self, omega: float, cause: Exception):
        self.omega = omega
        self.cause = cause
        super().__init__(f"evaluation failed at omega={omega!r}: {cause}")
