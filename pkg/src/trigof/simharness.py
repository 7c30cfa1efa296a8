"""Seeded Monte-Carlo studies: null-level calibration and power snapshots.

A study is a list of cells, each naming a null family/estimator/mask, a
sample size and (for power snapshots) the family actually generating the
data.  Every replication draws its own generator from the key
(seed, cell index, replication index), so results are bit-identical across
reruns and independent of how replications are scheduled across workers.
"""

from __future__ import annotations

import configparser
import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import _batch, families
from .errors import (DomainError, EstimationError, SamplingError,
                     SingularityError, TrigofError)
from .estimate import KnownMask
from .gof import run_test

__all__ = ["CellConfig", "StudyConfig", "CellReport", "StudyReport",
           "level_study", "power_snapshot", "run_study", "load_config",
           "report_rows", "write_report"]


@dataclass(frozen=True)
class CellConfig:
    name: str
    family: str
    kind: str = "ml"
    theta: tuple = ()
    n: int = 100
    known: tuple = ()            # ((param, value), ...)
    data_family: Optional[str] = None
    data_theta: tuple = ()

    def mask(self) -> Optional[KnownMask]:
        if not self.known:
            return None
        return KnownMask.from_names(self.family, dict(self.known))

    @property
    def is_alternative(self) -> bool:
        return self.data_family is not None


@dataclass(frozen=True)
class StudyConfig:
    cells: tuple[CellConfig, ...]
    reps: int = 1000
    alpha: float = 0.05
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.reps < 100:
            raise DomainError("a study needs reps >= 100")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")


@dataclass(frozen=True)
class CellReport:
    name: str
    family: str
    kind: str
    n: int
    reps: int
    rejections: int
    failed: int
    rate: float
    se: float
    ok: bool
    wall_time: float = field(compare=False, default=0.0)


@dataclass(frozen=True)
class StudyReport:
    cells: tuple[CellReport, ...]
    reps: int
    alpha: float
    seed: int


def _draw(cell: CellConfig, seed: int, cell_index: int, rep: int) -> np.ndarray:
    fam = cell.data_family if cell.is_alternative else cell.family
    theta = cell.data_theta if cell.is_alternative else cell.theta
    ss = np.random.SeedSequence([seed, cell_index, rep])
    return families.sample(fam, theta, cell.n, ss)


def _run_cell(cell: CellConfig, cfg: StudyConfig, cell_index: int) -> CellReport:
    t0 = time.perf_counter()
    q = -2.0 * math.log(cfg.alpha)
    mask = cell.mask()
    rejections = 0
    failed = 0
    ok = True
    try:
        if _batch.supports(cell.family, cell.kind, mask):
            blocks = _split(cfg.reps, cfg.workers)
            if cfg.workers > 1 and len(blocks) > 1:
                jobs = [(cell, cell_index, cfg.seed, cfg.alpha, lo, hi, q)
                        for lo, hi in blocks]
                with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                    parts = list(pool.map(_block_worker, jobs))
            else:
                parts = [_block_worker((cell, cell_index, cfg.seed, cfg.alpha, lo, hi, q))
                         for lo, hi in blocks]
            for rj, fl in parts:
                rejections += rj
                failed += fl
        else:
            for r in range(cfg.reps):
                x = _draw(cell, cfg.seed, cell_index, r)
                try:
                    res = run_test(cell.family, cell.kind, mask, x)
                except (EstimationError, SingularityError, SamplingError, DomainError):
                    failed += 1
                    continue
                rejections += res.tn > q
    except TrigofError:
        ok = False
    done = cfg.reps - failed
    rate = rejections / done if done else math.nan
    se = math.sqrt(rate * (1.0 - rate) / done) if done else math.nan
    if failed > 0.01 * cfg.reps:
        ok = False
    return CellReport(cell.name, cell.family, cell.kind, cell.n, cfg.reps,
                      rejections, failed, rate, se, ok,
                      time.perf_counter() - t0)


def _split(reps: int, workers: int) -> list[tuple[int, int]]:
    if workers <= 1:
        return [(0, reps)]
    size = max(256, math.ceil(reps / (4 * workers)))
    return [(lo, min(lo + size, reps)) for lo in range(0, reps, size)]


def _block_worker(args):
    cell, cell_index, seed, alpha, lo, hi, q = args
    mask = cell.mask()
    rejections = 0
    failed = 0
    chunk = 256
    r = lo
    while r < hi:
        m = min(chunk, hi - r)
        X = np.stack([_draw(cell, seed, cell_index, r + j) for j in range(m)])
        tn = _batch.batch_tn(cell.family, cell.kind, mask, X)
        rejections += int(np.sum(tn > q))
        r += m
    return rejections, failed


def run_study(cfg: StudyConfig) -> StudyReport:
    reports = tuple(_run_cell(cell, cfg, i) for i, cell in enumerate(cfg.cells))
    return StudyReport(reports, cfg.reps, cfg.alpha, cfg.seed)


def level_study(cfg: StudyConfig) -> StudyReport:
    """Null rejection rates: every cell must sample from its own null."""
    for cell in cfg.cells:
        if cell.is_alternative:
            raise DomainError(f"cell {cell.name!r} carries an alternative; "
                              "use power_snapshot")
    return run_study(cfg)


def power_snapshot(cfg: StudyConfig) -> StudyReport:
    """Rejection rates of the null test against designated alternatives."""
    if not any(cell.is_alternative for cell in cfg.cells):
        raise DomainError("power_snapshot needs at least one alternative cell")
    return run_study(cfg)


# ---------------------------------------------------------------------------
# declarative config files (INI sections: [study], [cell:<name>])
# ---------------------------------------------------------------------------

def _parse_theta(text: str) -> tuple:
    return tuple(float(v) for v in text.replace(" ", "").split(",") if v)


def _parse_known(text: str) -> tuple:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, value = chunk.partition("=")
        out.append((name.strip(), float(value)))
    return tuple(out)


def load_config(path) -> StudyConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise DomainError(f"could not read study config {path!r}")
    study = parser["study"] if parser.has_section("study") else {}
    cells = []
    for section in parser.sections():
        if not section.startswith("cell:"):
            continue
        raw = parser[section]
        if "family" not in raw:
            raise DomainError(f"section [{section}] needs a family")
        cells.append(CellConfig(
            name=section.split(":", 1)[1],
            family=raw["family"].strip(),
            kind=raw.get("estimator", "ml").strip().lower(),
            theta=_parse_theta(raw.get("theta", "")),
            n=int(raw.get("n", 100)),
            known=_parse_known(raw.get("known", "")),
            data_family=(raw.get("data_family") or None),
            data_theta=_parse_theta(raw.get("data_theta", "")),
        ))
    if not cells:
        raise DomainError("study config defines no cells")
    return StudyConfig(
        cells=tuple(cells),
        reps=int(study.get("reps", 1000)),
        alpha=float(study.get("alpha", 0.05)),
        seed=int(study.get("seed", 0)),
        workers=int(study.get("workers", 1)),
    )


def report_rows(report: StudyReport) -> list[dict]:
    return [asdict(cell) for cell in report.cells]


def write_report(report: StudyReport, csv_path=None, json_path=None) -> None:
    rows = report_rows(report)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    if json_path:
        summary = {
            "reps": report.reps,
            "alpha": report.alpha,
            "seed": report.seed,
            "cells": rows,
        }
        with open(json_path, "w") as fh:
            json.dump(summary, fh, indent=2)
