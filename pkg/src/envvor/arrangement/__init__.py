"""Planar arrangements: sweep construction, DCEL, zone insertion, overlay."""

from envvor.arrangement.dcel import (
    Arrangement,
    Face,
    Halfedge,
    Vertex,
    locate,
    sweep_construct,
    validate,
)
