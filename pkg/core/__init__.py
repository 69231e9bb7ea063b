"""Physical component models of the wind energy conversion chain."""

__all__ = ["aero", "config", "drivetrain", "geometry", "grid", "machine"]
