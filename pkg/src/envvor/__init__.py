"""Exact 2D Voronoi diagrams via randomized divide-and-conquer of envelopes.

The package computes nearest- and farthest-site Voronoi diagrams of several
site/distance families (points, power diagrams of disks, two-point
triangle-area sites, Moebius sites) as labeled planar arrangements, and
applies the machinery to minimum-width annuli of point sets.
"""

from envvor.numeric import (
    COUNTERS,
    IncompatibleExtensions,
    Interval,
    Rational,
    SqrtExt,
    make_scalar,
    rational_str,
    scalar_cmp,
    sign_two_roots,
    sqrtext_compare,
    sqrtext_sign,
    to_interval,
)

__version__ = "0.1.0"
