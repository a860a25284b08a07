"""Randomized search for discrepancies between the flawed DPs and the oracles.

A discrepancy at any cell (I, h) — the DP costing strictly more than the
exact optimum — certifies that (I, h) lacks optimal substructure.  The
reverse direction (DP costing *less*) is impossible because the DPs only
ever build valid trees; if it is observed, the artifact itself is broken
and :class:`FeasibilityError` is raised.

Campaigns are fully deterministic: trial t derives its seed as
``base_seed + t``, so any reported discrepancy replays from its
(seed, trial, cell) triple alone.
"""
from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .hw import HwTable, hw_solve
from .model import (
    Instance,
    Interval,
    gbst_cost,
    gbst_validate,
    twcst_cost,
    twcst_validate,
)
from .oracle import DEFAULT_GBST_LIMIT, DEFAULT_TWCST_LIMIT, GbstOracle, TwcstOracle
from .spuler import SpulerTable, spuler_solve

__all__ = [
    "GBSPLIT",
    "TWCST",
    "FeasibilityError",
    "CampaignConfig",
    "Discrepancy",
    "InjectedCase",
    "CampaignReport",
    "random_instance",
    "audit_subproblems",
    "campaign",
    "replay_trial",
]

GBSPLIT = "gbsplit"
TWCST = "twcst"


class FeasibilityError(AssertionError):
    """A flawed-DP cost fell below the exact optimum: an artifact bug."""


def random_instance(
    n: int, wmax: int, seed: int, zero_weight_prob: float = 0.25
) -> Instance:
    """Deterministic random instance: n keys, weights in 0..wmax.

    Zero weights get dedicated probability mass on top of the uniform draw;
    both known counterexamples hinge on zero- and low-weight keys.
    """
    if n < 1 or wmax < 1:
        raise ValueError("need n >= 1 and wmax >= 1")
    rng = random.Random(1_000_003 * (1_000_003 * n + wmax) + seed)
    weights = tuple(
        0 if rng.random() < zero_weight_prob else rng.randint(0, wmax)
        for _ in range(n)
    )
    labels = tuple(f"K{k:03d}" for k in range(1, n + 1))
    return Instance(labels, weights)


@dataclass(frozen=True)
class Discrepancy:
    """One cell where the flawed DP is strictly worse than the reference."""

    instance: Instance
    i: int
    j: int
    h: int
    flawed_cost: int
    oracle_cost: int
    whole_instance: bool
    certified: str = "oracle"  # "witness" when measured against a witness tree
    trial: Optional[int] = None
    seed: Optional[int] = None
    name: Optional[str] = None

    @property
    def gap(self) -> int:
        return self.flawed_cost - self.oracle_cost

    def describe(self) -> str:
        where = self.name if self.name is not None else f"trial={self.trial}"
        return (
            f"{where} cell=({self.i},{self.j},{self.h}) "
            f"flawed={self.flawed_cost} reference={self.oracle_cost} "
            f"gap={self.gap} cert={self.certified}"
            + (" whole-instance" if self.whole_instance else "")
        )


@dataclass(frozen=True)
class CampaignConfig:
    model: str
    n_min: int = 2
    n_max: int = 8
    wmax: int = 16
    trials: int = 100
    base_seed: int = 0
    holes_max: Optional[int] = None
    zero_weight_prob: float = 0.25
    gbst_limit: int = DEFAULT_GBST_LIMIT
    twcst_limit: int = DEFAULT_TWCST_LIMIT

    def __post_init__(self):
        if self.model not in (GBSPLIT, TWCST):
            raise ValueError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        limit = self.gbst_limit if self.model == GBSPLIT else self.twcst_limit
        if self.n_max > limit:
            raise ValueError(f"n_max {self.n_max} exceeds the oracle limit {limit}")

    @property
    def oracle_limit(self) -> int:
        return self.gbst_limit if self.model == GBSPLIT else self.twcst_limit


@dataclass(frozen=True)
class InjectedCase:
    """A hand-picked leading trial; the witness tree is the reference when
    the instance is too large for the oracle."""

    name: str
    instance: Instance
    witness_tree: object = None


@dataclass(frozen=True)
class CampaignReport:
    config: CampaignConfig
    trials_run: int
    checked_cells: int
    discrepancies: tuple[Discrepancy, ...]
    oracle_refusals: tuple[str, ...] = ()

    @property
    def max_gap(self) -> int:
        return max((d.gap for d in self.discrepancies), default=0)

    @property
    def whole_instance_hits(self) -> tuple[Discrepancy, ...]:
        return tuple(d for d in self.discrepancies if d.whole_instance)

    def summary_lines(self) -> list[str]:
        cfg = self.config
        lines = [
            f"model={cfg.model} trials={self.trials_run} seed={cfg.base_seed} "
            f"n=[{cfg.n_min},{cfg.n_max}] wmax={cfg.wmax} cells={self.checked_cells}"
        ]
        lines.extend(d.describe() for d in self.discrepancies)
        lines.append(f"max_gap={self.max_gap}")
        lines.append(f"whole_instance_discrepancies={len(self.whole_instance_hits)}")
        status = "PASS" if not self.discrepancies else "FAIL"
        lines.append(
            f"fuzz.discrepancy_count: expected=0 actual={len(self.discrepancies)} "
            f"status={status}"
        )
        return lines


def _audit_gbsplit(
    inst: Instance, holes_max: Optional[int], limit: int
) -> tuple[list[Discrepancy], int]:
    table = HwTable(inst)
    oracle = GbstOracle(inst, limit)
    found: list[Discrepancy] = []
    checked = 0
    n = inst.n
    for i, j, h in table.cells():
        if holes_max is not None and h > holes_max:
            continue
        flawed = table.cost(i, j, h)
        exact = oracle.opt_star_cost(Interval(i, j), h)
        checked += 1
        if flawed < exact:
            raise FeasibilityError(
                f"hw cost {flawed} below optimum {exact} at ({i},{j},{h})"
            )
        if flawed > exact:
            found.append(
                Discrepancy(
                    instance=inst,
                    i=i,
                    j=j,
                    h=h,
                    flawed_cost=flawed,
                    oracle_cost=exact,
                    whole_instance=(i == 1 and j == n and h == 0),
                )
            )
    return found, checked


def _audit_twcst(
    inst: Instance, holes_max: Optional[int], limit: int
) -> tuple[list[Discrepancy], int]:
    table = SpulerTable(inst)
    oracle = TwcstOracle(inst, limit)
    found: list[Discrepancy] = []
    checked = 0
    n = inst.n
    for i, j, h in table.cells():
        if holes_max is not None and h > holes_max:
            continue
        flawed = table.cost(i, j, h)
        exact = oracle.opt_star_cost(Interval(i, j), h)
        checked += 1
        if flawed < exact:
            raise FeasibilityError(
                f"spuler cost {flawed} below optimum {exact} at ({i},{j},{h})"
            )
        if flawed > exact:
            found.append(
                Discrepancy(
                    instance=inst,
                    i=i,
                    j=j,
                    h=h,
                    flawed_cost=flawed,
                    oracle_cost=exact,
                    whole_instance=(i == 1 and j == n and h == 0),
                )
            )
    return found, checked


def audit_subproblems(
    model: str,
    inst: Instance,
    holes_max: Optional[int] = None,
    oracle_limit: Optional[int] = None,
) -> list[Discrepancy]:
    """Compare the flawed DP against the oracle at every (i, j, h) cell.

    Returns all strict-gap cells, largest gap first.  Oracle size refusals
    propagate to the caller.
    """
    if model == GBSPLIT:
        found, _ = _audit_gbsplit(inst, holes_max, oracle_limit or DEFAULT_GBST_LIMIT)
    elif model == TWCST:
        found, _ = _audit_twcst(inst, holes_max, oracle_limit or DEFAULT_TWCST_LIMIT)
    else:
        raise ValueError(f"unknown model {model!r}")
    found.sort(key=lambda d: (-d.gap, d.i, d.j, d.h))
    return found


def _witness_check(
    model: str, inst: Instance, witness, trial: int, name: str
) -> Discrepancy | None:
    full = inst.full_interval()
    if model == GBSPLIT:
        verdict = gbst_validate(witness, full, (), inst)
        if not verdict:
            raise ValueError(f"witness tree for {name} invalid: {verdict.violations}")
        flawed = hw_solve(inst, full, 0).cost
        reference = gbst_cost(witness, inst)
    else:
        verdict = twcst_validate(witness, full, (), inst)
        if not verdict:
            raise ValueError(f"witness tree for {name} invalid: {verdict.violations}")
        flawed = spuler_solve(inst, full, 0).cost
        reference = twcst_cost(witness, inst)
    if flawed > reference:
        return Discrepancy(
            instance=inst,
            i=1,
            j=inst.n,
            h=0,
            flawed_cost=flawed,
            oracle_cost=reference,
            whole_instance=True,
            certified="witness",
            trial=trial,
            name=name,
        )
    return None


def campaign(
    cfg: CampaignConfig, injected: Sequence[InjectedCase] = ()
) -> CampaignReport:
    """Run injected cases first, then cfg.trials seeded random audits.

    Oracle refusals (instances beyond the configured limit) are recorded,
    not fatal; such cases fall back to witness-tree comparison at the whole
    instance when a witness is supplied.
    """
    discrepancies: list[Discrepancy] = []
    refusals: list[str] = []
    checked = 0
    trial = 0

    for case in injected:
        if case.instance.n <= cfg.oracle_limit:
            audit = _audit_gbsplit if cfg.model == GBSPLIT else _audit_twcst
            found, inst_checked = audit(case.instance, cfg.holes_max, cfg.oracle_limit)
            found.sort(key=lambda d: (-d.gap, d.i, d.j, d.h))
            discrepancies.extend(
                dataclasses.replace(d, trial=trial, name=case.name) for d in found
            )
            checked += inst_checked
        else:
            refusals.append(
                f"trial {trial} ({case.name}): n={case.instance.n} exceeds oracle "
                f"limit {cfg.oracle_limit}; witness comparison only"
            )
            if case.witness_tree is not None:
                hit = _witness_check(
                    cfg.model, case.instance, case.witness_tree, trial, case.name
                )
                if hit is not None:
                    discrepancies.append(hit)
            checked += 1
        trial += 1

    for _ in range(cfg.trials):
        seed = cfg.base_seed + trial
        found, inst_checked = _run_random_trial(cfg, trial, seed)
        discrepancies.extend(found)
        checked += inst_checked
        trial += 1

    return CampaignReport(
        config=cfg,
        trials_run=trial,
        checked_cells=checked,
        discrepancies=tuple(discrepancies),
        oracle_refusals=tuple(refusals),
    )


def _run_random_trial(
    cfg: CampaignConfig, trial: int, seed: int
) -> tuple[list[Discrepancy], int]:
    rng = random.Random(seed)
    n = rng.randint(cfg.n_min, cfg.n_max)
    inst = random_instance(n, cfg.wmax, seed, cfg.zero_weight_prob)
    if cfg.model == GBSPLIT:
        found, checked = _audit_gbsplit(inst, cfg.holes_max, cfg.gbst_limit)
    else:
        found, checked = _audit_twcst(inst, cfg.holes_max, cfg.twcst_limit)
    found.sort(key=lambda d: (-d.gap, d.i, d.j, d.h))
    tagged = [dataclasses.replace(d, trial=trial, seed=seed) for d in found]
    return tagged, checked


def replay_trial(cfg: CampaignConfig, trial: int) -> list[Discrepancy]:
    """Re-run one random trial of a campaign from its (seed, trial) pair."""
    return _run_random_trial(cfg, trial, cfg.base_seed + trial)[0]
