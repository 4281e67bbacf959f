"""Shortest generalized billiard trajectories in disk-polygons."""
__version__ = "0.1.0"
