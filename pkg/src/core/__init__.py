# Core modules for nonlinear susceptibility evaluation

__version__ = "1.0.0"
