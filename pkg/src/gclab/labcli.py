"""Command-line lab: seeded experiments comparing simulation to theory.

Subcommands
-----------
analyze        closed-form report for a distribution spec (no simulation)
giant          giant/small-component fractions vs. their predicted limits
sweep          percolation curve over a retention-probability grid
local-census   local property counts vs. the limit-tree probability

Every stochastic run records its seed; per-trial generators are spawned as
``SeedSequence(entropy=master_seed, spawn_key=(trial, ...))``, a keyed hash
of the master seed, so results do not depend on scheduling or parallelism.
Serialized output is byte-identical across repeated runs with equal flags.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import branching, census, configuration, distributions, percolation
from .census import (
    ComponentSizeAtLeast,
    ComponentSizeExactly,
    Conjunction,
    LocalProperty,
    MaxDegreeBall,
    RootDegree,
)
from .distributions import Distribution
from .errors import (
    BadProbability,
    DegenerateDistribution,
    Exhausted,
    GCLabError,
    NoThreshold,
    SpecParseError,
    UnboundedRadius,
    ZeroMean,
)

DEGENERATE_CAVEAT = (
    "no mass on degrees >= 3: survival quantities are degenerate "
    "(laws supported inside {0, 1, 2} yield only paths and cycles, no giant)"
)


@dataclass
class ExperimentRecord:
    """One seeded run: what was measured next to what theory predicts."""

    experiment: str
    params: dict
    observed: dict
    predicted: dict = field(default_factory=dict)
    runtime_ms: int = 0

    def __post_init__(self):
        for key in self.observed:
            self.predicted.setdefault(key, None)

    def to_json_dict(self) -> dict:
        # runtime_ms intentionally omitted: serialized output must be
        # byte-identical across runs of the same invocation.
        return {
            "experiment": self.experiment,
            "params": self.params,
            "observed": self.observed,
            "predicted": self.predicted,
        }


def trial_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent substream for one trial; stable under any scheduling."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))
    )


def parse_property_spec(text: str) -> LocalProperty:
    """Parse a property spec like ``root_degree:3`` or ``max_degree_ball:4,2``.

    Conjunctions join clauses with ``&``. Properties without a finite radius
    (anything asking about infinite components) are rejected.
    """
    clauses = [c.strip() for c in text.split("&") if c.strip()]
    if not clauses:
        raise SpecParseError("empty property spec")
    parts = [_parse_property_clause(c) for c in clauses]
    return parts[0] if len(parts) == 1 else Conjunction(tuple(parts))


def _parse_property_clause(clause: str) -> LocalProperty:
    name, _, arg = clause.partition(":")
    name = name.strip().lower()
    if name in ("component_infinite", "component_at_least_infinity"):
        raise UnboundedRadius("infinite-component predicates have no finite radius")
    try:
        if name == "root_degree":
            return RootDegree(int(arg))
        if name == "component_exactly":
            return ComponentSizeExactly(int(arg))
        if name == "component_at_least":
            return ComponentSizeAtLeast(int(arg))
        if name == "max_degree_ball":
            delta_text, t_text = arg.split(",")
            return MaxDegreeBall(int(delta_text), int(t_text))
    except (ValueError, TypeError) as exc:
        raise SpecParseError(f"bad property arguments in {clause!r}") from exc
    raise SpecParseError(f"unknown property {name!r}")


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(dist: Distribution, k_max: int = 20) -> dict:
    """Closed-form summary: moments, survival, small-tree masses, threshold."""
    report: dict = {
        "mean_degree": distributions.mean(dist),
        "supercriticality": distributions.supercriticality(dist),
        "truncated_mass": dist.truncated_mass,
        "caveat": None,
    }
    mu = distributions.mean(dist)
    if mu <= 0.0:
        report.update(
            {
                "mean_offspring": None,
                "x_plus": None,
                "rho": None,
                "rho_k": None,
                "p_c": None,
                "giant_degree_fractions": None,
                "caveat": "E(D) = 0: nothing to analyze beyond moments",
            }
        )
        return report
    report["mean_offspring"] = distributions.mean(distributions.offspring(dist))
    table = branching.rho_k_table(dist, k_max)
    report["rho_k"] = [float(x) for x in table.rho_k]
    report["rho_k_tail"] = table.tail
    try:
        report["p_c"] = branching.critical_percolation(dist)
    except NoThreshold:
        report["p_c"] = None
    try:
        solution = branching.solve_x_plus(dist)
    except DegenerateDistribution:
        report.update(
            {
                "x_plus": None,
                "rho": None,
                "giant_degree_fractions": None,
                "caveat": DEGENERATE_CAVEAT,
            }
        )
        return report
    report["x_plus"] = solution.x_plus
    report["rho"] = solution.rho
    report["solver_iterations"] = solution.iterations
    report["solver_residual"] = solution.residual
    report["giant_degree_fractions"] = {
        str(d): dist.pmf(d) * (1.0 - (1.0 - solution.x_plus) ** d)
        for d in dist.support.tolist()
    }
    return report


# ---------------------------------------------------------------------------
# giant


def cmd_giant(
    dist: Distribution,
    n: int,
    trials: int,
    seed: int,
    simple: bool = False,
    max_attempts: int = 200,
    k_small: int = 10,
) -> list[ExperimentRecord]:
    """Sample graphs, take the component census, and pair it with the limits."""
    try:
        predicted_rho = branching.rho(dist)
    except (DegenerateDistribution, ZeroMean):
        predicted_rho = None
    try:
        table = branching.rho_k_table(dist, k_small)
        predicted_rho_k = [float(x) for x in table.rho_k]
    except ZeroMean:
        predicted_rho_k = [None] * k_small
    records = []
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        start = time.perf_counter()
        ds = configuration.sample_degree_sequence(dist, n, rng)
        if simple:
            graph = configuration.sample_simple(ds, rng, max_attempts)
        else:
            graph = configuration.to_multigraph(configuration.sample_pairing(ds, rng))
        cen = census.components(graph)
        observed = {
            "L1_over_n": cen.largest / n,
            "L2_over_n": cen.second_largest / n,
        }
        predicted = {"L1_over_n": predicted_rho, "L2_over_n": 0.0}
        for k in range(1, k_small + 1):
            observed[f"N{k}_over_n"] = cen.vertices_in_components_of_size(k) / n
            predicted[f"N{k}_over_n"] = predicted_rho_k[k - 1]
        elapsed_ms = int(1000 * (time.perf_counter() - start))
        records.append(
            ExperimentRecord(
                experiment="giant",
                params={"n": n, "trial": trial, "seed": seed, "simple": simple},
                observed=observed,
                predicted=predicted,
                runtime_ms=elapsed_ms,
            )
        )
    return records


# ---------------------------------------------------------------------------
# percolation sweep


def _predicted_rho_thinned(dist: Distribution, p: float) -> float:
    thinned = distributions.thin(dist, p)
    try:
        return branching.rho(thinned)
    except (DegenerateDistribution, ZeroMean):
        return 0.0


def cmd_percolation_sweep(
    dist: Distribution,
    n: int,
    p_grid: list[float],
    trials: int,
    seed: int,
) -> list[ExperimentRecord]:
    """Percolate one graph per trial over the whole grid of retention probs.

    The graph stream is keyed by the trial alone (so the p = 1 column matches
    ``giant`` runs with the same master seed); each grid point colors edges
    from its own substream keyed by (trial, 1 + grid index).
    """
    for p in p_grid:
        distributions.check_probability(p)
    predictions = {p: _predicted_rho_thinned(dist, p) for p in p_grid}
    records = []
    for trial in range(trials):
        rng_graph = trial_rng(seed, trial)
        ds = configuration.sample_degree_sequence(dist, n, rng_graph)
        graph = configuration.to_multigraph(configuration.sample_pairing(ds, rng_graph))
        for index, p in enumerate(p_grid):
            rng_color = trial_rng(seed, trial, 1 + index)
            start = time.perf_counter()
            colored = percolation.color_edges(graph, p, rng_color)
            red_graph, _, red_degrees, _ = percolation.split(colored)
            cen = census.components(red_graph)
            distance = percolation.thinned_sequence_distance(red_degrees, dist, p)
            elapsed_ms = int(1000 * (time.perf_counter() - start))
            records.append(
                ExperimentRecord(
                    experiment="sweep",
                    params={"n": n, "trial": trial, "seed": seed, "p": p},
                    observed={
                        "L1_over_n": cen.largest / n,
                        "L2_over_n": cen.second_largest / n,
                        "conf_distance_red": distance,
                    },
                    predicted={
                        "L1_over_n": predictions[p],
                        "L2_over_n": 0.0,
                        "conf_distance_red": None,
                    },
                    runtime_ms=elapsed_ms,
                )
            )
    return records


# ---------------------------------------------------------------------------
# local census


def cmd_local_census(
    dist: Distribution,
    n: int,
    property_spec: str,
    seed: int,
    samples: int = 100_000,
) -> ExperimentRecord:
    """Count a local property over one sampled graph and in its giant only."""
    prop = parse_property_spec(property_spec)
    rng_graph = trial_rng(seed, 0)
    start = time.perf_counter()
    ds = configuration.sample_degree_sequence(dist, n, rng_graph)
    graph = configuration.to_multigraph(configuration.sample_pairing(ds, rng_graph))
    cen = census.components(graph)
    mask = census.property_mask(graph, prop, cen)
    whole = int(mask.sum())
    giant = int((mask & cen.giant_mask()).sum())
    rng_tree = trial_rng(seed, 1)
    estimate, half_width = branching.tree_property_probability(dist, prop, samples, rng_tree)
    predicted_whole_closed = None
    predicted_giant_closed = None
    if isinstance(prop, RootDegree):
        predicted_whole_closed = dist.pmf(prop.d)
        try:
            predicted_giant_closed = branching.giant_degree_fraction(dist, prop.d)
        except (DegenerateDistribution, ZeroMean):
            predicted_giant_closed = None
    elapsed_ms = int(1000 * (time.perf_counter() - start))
    return ExperimentRecord(
        experiment="local-census",
        params={
            "n": n,
            "seed": seed,
            "property": property_spec,
            "mc_samples": samples,
            "mc_half_width": half_width,
        },
        observed={
            "whole_fraction": whole / n,
            "giant_fraction": giant / n,
        },
        predicted={
            "whole_fraction": estimate,
            "giant_fraction": predicted_giant_closed,
            "whole_fraction_closed": predicted_whole_closed,
        },
        runtime_ms=elapsed_ms,
    )


# ---------------------------------------------------------------------------
# serialization

_CSV_COLUMNS = {
    "giant": ["trial", "seed", "n", "simple"],
    "sweep": ["p", "trial", "seed", "n"],
    "local-census": ["n", "seed", "property", "mc_samples", "mc_half_width"],
}


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records: list[ExperimentRecord]) -> str:
    """Fixed, versioned CSV: params columns, then observed, then predicted."""
    if not records:
        return "# gclab v1 empty\n"
    kind = records[0].experiment
    param_cols = _CSV_COLUMNS.get(kind, sorted(records[0].params))
    obs_cols = list(records[0].observed)
    pred_cols = [f"pred_{c}" for c in records[0].predicted]
    columns = param_cols + obs_cols + pred_cols
    lines = [f"# gclab {kind} v1 columns: {','.join(columns)}"]
    lines.append(",".join(columns))
    for rec in records:
        row = [_format_value(rec.params.get(c)) for c in param_cols]
        row += [_format_value(rec.observed.get(c)) for c in obs_cols]
        row += [_format_value(rec.predicted.get(c[5:])) for c in pred_cols]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def records_to_json(records: list[ExperimentRecord]) -> str:
    return json.dumps([r.to_json_dict() for r in records], sort_keys=True, indent=2) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# argument parsing / entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gclab",
        description="Configuration-model giant-component laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default=1):
        p.add_argument("--dist", required=True, help="path to a JSON distribution spec")
        p.add_argument("--n", type=int, default=100_000, help="number of vertices")
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=0, help="master seed (u64)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_analyze = sub.add_parser("analyze", help="closed-form report, no simulation")
    p_analyze.add_argument("--dist", required=True)
    p_analyze.add_argument("--kmax", type=int, default=20)
    p_analyze.add_argument("--out", default=None)

    p_giant = sub.add_parser("giant", help="giant/small component experiment")
    common(p_giant, trials_default=5)
    p_giant.add_argument("--simple", action="store_true", help="reject until simple")
    p_giant.add_argument("--max-attempts", type=int, default=200)
    p_giant.add_argument("--kmax", type=int, default=10, help="small-component range")

    p_sweep = sub.add_parser("sweep", help="percolation sweep over a p grid")
    common(p_sweep, trials_default=1)
    p_sweep.add_argument(
        "--p",
        required=True,
        help="comma-separated retention probabilities, e.g. 0.4,0.5,0.6",
    )

    p_local = sub.add_parser("local-census", help="local property count experiment")
    common(p_local, trials_default=1)
    p_local.add_argument(
        "--property",
        required=True,
        help="root_degree:D | component_exactly:K | component_at_least:K | "
        "max_degree_ball:DELTA,T (join clauses with &)",
    )
    p_local.add_argument("--samples", type=int, default=100_000, help="tree MC samples")
    return parser


def _parse_grid(text: str) -> list[float]:
    try:
        grid = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise SpecParseError(f"bad probability grid {text!r}") from exc
    if not grid:
        raise SpecParseError("empty probability grid")
    return grid


def run(args) -> int:
    dist = distributions.load_spec(args.dist)
    if args.command == "analyze":
        report = cmd_analyze(dist, args.kmax)
        _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
        return 0
    if args.command == "giant":
        records = cmd_giant(
            dist,
            args.n,
            args.trials,
            args.seed,
            simple=args.simple,
            max_attempts=args.max_attempts,
            k_small=args.kmax,
        )
    elif args.command == "sweep":
        records = cmd_percolation_sweep(
            dist, args.n, _parse_grid(args.p), args.trials, args.seed
        )
    elif args.command == "local-census":
        records = [
            cmd_local_census(dist, args.n, args.property, args.seed, args.samples)
        ]
    else:  # pragma: no cover - argparse enforces the choices
        raise SpecParseError(f"unknown command {args.command!r}")
    text = records_to_csv(records) if args.format == "csv" else records_to_json(records)
    _emit(text, args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except Exhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SpecParseError, UnboundedRadius, BadProbability) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GCLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
