"""Large-dimension quasi-exact solvability of anharmonic oscillators in exact arithmetic."""

__version__ = "0.1.0"
