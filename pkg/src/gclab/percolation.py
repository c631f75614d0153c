"""Edge percolation on multigraphs via independent red/blue edge coloring.

Coloring each edge red with probability p and keeping the red subgraph is
the same as deleting each edge independently; the blue subgraph is what was
deleted. Conditioned on the red degree sequence, the two subgraphs are
independent configuration-model draws, which is what makes the thinned
degree law the right predictor for the percolated graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configuration import DegreeSequence, MultiGraph, conf_distance
from .distributions import Distribution, check_probability, thin


@dataclass(frozen=True)
class ColoredGraph:
    """A multigraph plus one red/blue flag per edge row."""

    base: MultiGraph
    red: np.ndarray

    def __post_init__(self):
        if self.red.shape != (self.base.num_edges,):
            raise ValueError("need exactly one color flag per edge")
        self.red.setflags(write=False)

    @property
    def red_count(self) -> int:
        return int(self.red.sum())


def color_edges(graph: MultiGraph, p: float, rng: np.random.Generator) -> ColoredGraph:
    """Color each edge red with probability p, independently."""
    check_probability(p)
    red = rng.random(graph.num_edges) < p
    return ColoredGraph(graph, red)


def split(colored: ColoredGraph):
    """Red and blue subgraphs on the shared vertex set, with their degrees.

    Returns (red_graph, blue_graph, red_degrees, blue_degrees); the degree
    sequences add up vertexwise to the degrees of the base graph.
    """
    base = colored.base
    red_graph = MultiGraph(base.n, base.edges[colored.red])
    blue_graph = MultiGraph(base.n, base.edges[~colored.red])
    return (
        red_graph,
        blue_graph,
        DegreeSequence(red_graph.degrees()),
        DegreeSequence(blue_graph.degrees()),
    )


def percolate(graph: MultiGraph, p: float, rng: np.random.Generator) -> MultiGraph:
    """Keep each edge independently with probability p (the red subgraph)."""
    colored = color_edges(graph, p, rng)
    return MultiGraph(graph.n, graph.edges[colored.red])


def thinned_sequence_distance(
    ds_red: DegreeSequence, dist: Distribution, p: float
) -> float:
    """Configuration distance between the retained degrees and thin(dist, p).

    This is the quantity whose concentration makes percolation reducible to
    the plain model: the percolated graph is a configuration draw from its
    own (random) degree sequence, which stays close to the thinned law.
    """
    return conf_distance(ds_red, thin(dist, p))
