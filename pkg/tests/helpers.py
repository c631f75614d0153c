"""Independent oracles and corpus generators shared by the test modules.

The oracles here deliberately avoid the production code paths: tree-size
probabilities come from explicit enumeration of preorder offspring sequences,
survival probabilities from polynomial root finding, and matching laws from
recursive enumeration of perfect matchings.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from gclab.configuration import DegreeSequence, MultiGraph
from gclab.distributions import Distribution, mean, offspring, supercriticality


# ---------------------------------------------------------------------------
# branching-process oracles


def enumerate_tree_size_probs(dist: Distribution, k_max: int) -> np.ndarray:
    """Pr(tree has exactly k vertices) for k=1..k_max by explicit enumeration.

    A rooted ordered tree with k vertices corresponds to exactly one preorder
    offspring sequence (c_1, ..., c_k) with sum k-1 whose prefixes satisfy
    c_1 + ... + c_j >= j for j < k. The root count follows the degree law,
    every later count the offspring law; the sequence probability is the
    product of the atom probabilities.
    """
    z = offspring(dist)
    root_pmf = {int(v): float(p) for v, p in zip(dist.support, dist.probs)}
    z_pmf = {int(v): float(p) for v, p in zip(z.support, z.probs)}
    z_values = sorted(z_pmf)
    out = np.zeros(k_max)
    for k in range(1, k_max + 1):
        total = 0.0
        root_choices = [v for v in root_pmf if v <= k - 1]
        if k == 1:
            out[0] = root_pmf.get(0, 0.0)
            continue
        for c_root in root_choices:
            for rest in product(z_values, repeat=k - 1):
                if c_root + sum(rest) != k - 1:
                    continue
                running = c_root
                ok = True
                for j, c in enumerate(rest, start=2):
                    if running < j - 1:
                        ok = False
                        break
                    running += c
                if ok and running >= k - 1:
                    prob = root_pmf[c_root]
                    for c in rest:
                        prob *= z_pmf[c]
                    total += prob
        out[k - 1] = total
    return out


def survival_oracle(dist: Distribution) -> tuple[float, float]:
    """(x_plus, rho) via numpy root finding on the extinction polynomial.

    The extinction probability is the smallest root in [0, 1] of
    y = sum_i Pr(Z=i) y^i; this solver never iterates, so it is an
    independent check of the fixed-point path.
    """
    z = offspring(dist)
    coeffs = np.zeros(max(int(z.support[-1]), 1) + 1)
    coeffs[z.support] = z.probs
    coeffs[1] -= 1.0
    roots = np.roots(coeffs[::-1])
    real = [r.real for r in roots if abs(r.imag) < 1e-7 and -1e-9 <= r.real <= 1 + 1e-9]
    y = min(min(real), 1.0) if real else 1.0
    y = max(y, 0.0)
    x_plus = 1.0 - y
    rho = 1.0 - float(np.dot(dist.probs, y ** dist.support.astype(float)))
    return x_plus, rho


# ---------------------------------------------------------------------------
# matching / multigraph law oracles


def all_matchings(items: list[int]):
    """Yield every perfect matching of the given even-sized list."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        head = (first, partner)
        for tail in all_matchings(rest[:i] + rest[i + 1 :]):
            yield (head,) + tail


def matching_key(pairs) -> tuple:
    """Canonical form of a matching: pairs sorted inside and between."""
    return tuple(sorted(tuple(sorted(map(int, p))) for p in pairs))


def multigraph_key(graph: MultiGraph) -> tuple:
    """Canonical form of a multigraph-on-labeled-vertices: sorted edge rows."""
    return tuple(sorted(tuple(sorted(map(int, row))) for row in graph.edges))


def stub_owner(ds: DegreeSequence) -> np.ndarray:
    return np.repeat(np.arange(len(ds), dtype=np.int64), ds.degrees)


def exact_multigraph_law(ds: DegreeSequence) -> dict[tuple, float]:
    """Distribution of the contracted multigraph under the uniform matching."""
    owner = stub_owner(ds)
    stubs = list(range(2 * ds.size))
    law: dict[tuple, float] = {}
    matchings = list(all_matchings(stubs))
    weight = 1.0 / len(matchings)
    for matching in matchings:
        edges = [(int(owner[a]), int(owner[b])) for a, b in matching]
        key = tuple(sorted(tuple(sorted(e)) for e in edges))
        law[key] = law.get(key, 0.0) + weight
    return law


# ---------------------------------------------------------------------------
# randomized corpora


def random_distribution(
    rng: np.random.Generator,
    max_value: int = 8,
    max_atoms: int = 5,
    require_degree3: bool = False,
    criticality_margin: float | None = None,
) -> Distribution:
    """A random finite-support law; optional supercriticality-margin filter."""
    while True:
        n_atoms = int(rng.integers(2, max_atoms + 1))
        values = rng.choice(max_value + 1, size=n_atoms, replace=False)
        if require_degree3 and not (values >= 3).any():
            continue
        probs = rng.dirichlet(np.ones(n_atoms))
        if probs.min() < 1e-6:
            continue
        dist = Distribution(list(zip(values.tolist(), probs.tolist())))
        if mean(dist) <= 0.0:
            continue
        if criticality_margin is not None:
            if abs(supercriticality(dist)) <= criticality_margin:
                continue
        return dist


def random_multigraph(rng: np.random.Generator, n: int, m: int) -> MultiGraph:
    """Arbitrary multigraph: m endpoints pairs drawn uniformly (loops allowed)."""
    edges = rng.integers(0, n, size=(m, 2))
    return MultiGraph(n, edges)


def partitions(total: int, largest: int | None = None):
    """Non-increasing positive integer partitions of ``total``."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    for head in range(min(total, largest), 0, -1):
        for rest in partitions(total - head, head):
            yield (head,) + rest
