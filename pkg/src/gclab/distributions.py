"""Finitely supported probability distributions on the non-negative integers.

A ``Distribution`` stores an exact finite list of (value, probability) atoms.
Restricting to finite support turns every quantity used elsewhere in the
package (means, size-biased laws, offspring laws, thinnings, criticality
functionals) into an exact finite sum; callers who want Poisson-like laws
truncate first and let the constructor renormalize.
"""

from __future__ import annotations

import json
from math import comb

import numpy as np

from .errors import BadProbability, SpecParseError, ZeroMean

# Raw masses must land in [1 - SUM_SLACK, 1 + SUM_SLACK] before renormalization.
SUM_SLACK = 1e-9


class Distribution:
    """Probability mass function with finite support on {0, 1, 2, ...}.

    ``support`` and ``probs`` are parallel arrays with support strictly
    increasing and all probabilities positive (zero atoms are dropped).
    Construction renormalizes the masses to sum to 1 and records the mass
    that was missing from the raw input in ``truncated_mass``.

    Instances are immutable after construction and safe to share across
    threads; random draws go through a caller-owned ``numpy`` generator.
    """

    __slots__ = ("support", "probs", "truncated_mass", "_cdf")

    def __init__(self, masses):
        pairs = sorted((int(v), float(p)) for v, p in masses)
        values = [v for v, _ in pairs]
        if len(values) != len(set(values)):
            raise ValueError("duplicate support values")
        if any(v < 0 for v in values):
            raise ValueError("support values must be non-negative")
        if any(p < 0.0 for _, p in pairs):
            raise ValueError("probabilities must be non-negative")
        total = sum(p for _, p in pairs)
        if not (1.0 - SUM_SLACK <= total <= 1.0 + SUM_SLACK):
            raise ValueError(f"masses sum to {total!r}, outside the allowed window")
        kept = [(v, p) for v, p in pairs if p > 0.0]
        if not kept:
            raise ValueError("distribution needs at least one positive atom")
        self.support = np.array([v for v, _ in kept], dtype=np.int64)
        self.probs = np.array([p for _, p in kept], dtype=np.float64) / total
        self.truncated_mass = max(0.0, 1.0 - total)
        self._cdf = None
        self.support.setflags(write=False)
        self.probs.setflags(write=False)

    @classmethod
    def _from_arrays(cls, support, probs) -> "Distribution":
        """Internal constructor for derived laws; renormalizes exactly."""
        out = cls.__new__(cls)
        probs = np.asarray(probs, dtype=np.float64)
        support = np.asarray(support, dtype=np.int64)
        keep = probs > 0.0
        support, probs = support[keep], probs[keep]
        order = np.argsort(support)
        out.support = support[order]
        out.probs = probs[order] / probs.sum()
        out.truncated_mass = 0.0
        out._cdf = None
        out.support.setflags(write=False)
        out.probs.setflags(write=False)
        return out

    @property
    def masses(self) -> list[tuple[int, float]]:
        return [(int(v), float(p)) for v, p in zip(self.support, self.probs)]

    @property
    def max_support(self) -> int:
        return int(self.support[-1])

    def pmf(self, value: int) -> float:
        idx = np.searchsorted(self.support, value)
        if idx < len(self.support) and self.support[idx] == value:
            return float(self.probs[idx])
        return 0.0

    def dense(self, length: int | None = None) -> np.ndarray:
        """Probability vector indexed by value, length max_support+1 by default."""
        if length is None:
            length = self.max_support + 1
        out = np.zeros(length, dtype=np.float64)
        inside = self.support < length
        out[self.support[inside]] = self.probs[inside]
        return out

    def __repr__(self):
        atoms = ", ".join(f"{v}: {p:.6g}" for v, p in self.masses)
        return f"Distribution({{{atoms}}})"

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return (
            self.support.shape == other.support.shape
            and bool(np.all(self.support == other.support))
            and bool(np.all(self.probs == other.probs))
        )

    def __hash__(self):
        return hash((self.support.tobytes(), self.probs.tobytes()))


def mean(dist: Distribution) -> float:
    """E(D) as an exact finite sum."""
    return float(np.dot(dist.support, dist.probs))


def size_biased(dist: Distribution) -> Distribution:
    """The law of the degree seen at a random edge endpoint: Pr = i*r_i / E(D)."""
    mu = mean(dist)
    if mu <= 0.0:
        raise ZeroMean("size-biasing needs E(D) > 0")
    return Distribution._from_arrays(dist.support, dist.support * dist.probs / mu)


def offspring(dist: Distribution) -> Distribution:
    """Size-biased law minus one: onward edges after following an edge in."""
    biased = size_biased(dist)
    return Distribution._from_arrays(biased.support - 1, biased.probs)


def thin(dist: Distribution, p: float) -> Distribution:
    """Binomial(D, p) mixture: each of D items kept independently with prob p."""
    check_probability(p)
    dense = np.zeros(dist.max_support + 1, dtype=np.float64)
    for j, r_j in zip(dist.support, dist.probs):
        j = int(j)
        for i in range(j + 1):
            dense[i] += r_j * comb(j, i) * p**i * (1.0 - p) ** (j - i)
    return Distribution._from_arrays(np.arange(len(dense)), dense)


def joint_thinning_matrix(dist: Distribution, p: float) -> np.ndarray:
    """Matrix with entry (i, j) = r_j * C(j,i) * p^i * (1-p)^(j-i) for i <= j.

    Row sums over j give the thinned pmf; column sums over i recover r_j.
    """
    check_probability(p)
    size = dist.max_support + 1
    out = np.zeros((size, size), dtype=np.float64)
    for j, r_j in zip(dist.support, dist.probs):
        j = int(j)
        for i in range(j + 1):
            out[i, j] = r_j * comb(j, i) * p**i * (1.0 - p) ** (j - i)
    return out


def supercriticality(dist: Distribution) -> float:
    """E(D(D-2)); a giant component exists in the limit iff this is positive."""
    s = dist.support.astype(np.float64)
    return float(np.dot(s * (s - 2.0), dist.probs))


def sample(dist: Distribution, rng: np.random.Generator, size=None):
    """Draw from the distribution; deterministic given the generator state.

    Returns a plain int when ``size`` is None, else an int64 array.
    """
    if dist._cdf is None:
        cdf = np.cumsum(dist.probs)
        cdf[-1] = 1.0
        dist._cdf = cdf
    idx = np.searchsorted(dist._cdf, rng.random(size), side="right")
    values = dist.support[idx]
    if size is None:
        return int(values)
    return values


def from_json_doc(doc) -> Distribution:
    """Build a Distribution from the spec document {"masses": [[v, p], ...]}."""
    if not isinstance(doc, dict) or "masses" not in doc:
        raise SpecParseError('expected an object with a "masses" key')
    masses = doc["masses"]
    if not isinstance(masses, list) or not masses:
        raise SpecParseError('"masses" must be a non-empty list of [value, probability]')
    pairs = []
    for entry in masses:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise SpecParseError(f"bad mass entry {entry!r}; want [value, probability]")
        pairs.append((entry[0], entry[1]))
    try:
        return Distribution(pairs)
    except (ValueError, TypeError) as exc:
        raise SpecParseError(str(exc)) from exc


def load_spec(path) -> Distribution:
    """Read a JSON distribution spec from disk."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON in {path}: {exc}") from exc
    return from_json_doc(doc)


def to_json_doc(dist: Distribution) -> dict:
    return {"masses": [[v, p] for v, p in dist.masses]}


def check_probability(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise BadProbability(f"probability {p!r} outside [0, 1]")
