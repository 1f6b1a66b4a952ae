"""Experiment engine: configured trials, stability-check policy, CSV/plot output.

A trial generates one matrix, factors it with the requested method, measures
the orthogonality defect and relative residual, and (for the two-pass
methods) evaluates the per-block stability checks.  Under the ``strict``
policy a failed check aborts the run; under ``warn`` the row records the
failure and the sweep continues.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import BoundContext, check_assumptions
from .core import (
    BlockPartition,
    QRFactorization,
    orthogonality_defect,
    relative_residual,
)
from .drivers import bcgs, bcgs2, cgs, cgs2, mgs
from .errors import AssumptionFailureError
from .generators import gen_hilbert_like, gen_lauchli, gen_svd_spectrum
from .localqr import local_qr
from .mmio import read_matrix_market

THREADS_ENV = "BGS_THREADS"

METHODS = ("cgs", "mgs", "cgs2", "bcgs", "bcgs2", "householder")
GENERATORS = ("svd-spectrum", "lauchli", "hilbert-like", "file")
POLICIES = ("strict", "warn")

_BLOCK_METHODS = {"bcgs", "bcgs2"}
_CHECKED_METHODS = {"cgs2", "bcgs2"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: method, problem sizes, generator, policy, trial count."""

    method: str
    m: int
    n: int
    block_width: int | None = None
    blocks: tuple[int, ...] | None = None
    generator: str = "svd-spectrum"
    kappa: float = 1.0
    seed: int = 0
    policy: str = "warn"
    trials: int = 1
    input_path: str | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.generator not in GENERATORS:
            raise ValueError(
                f"unknown generator {self.generator!r}; choose from {GENERATORS}"
            )
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}; choose from {POLICIES}")
        if not 1 <= self.n <= self.m:
            raise ValueError(f"need 1 <= n <= m, got m={self.m}, n={self.n}")
        if self.kappa < 1.0:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        has_blocking = self.block_width is not None or self.blocks is not None
        if self.method in _BLOCK_METHODS and not has_blocking:
            raise ValueError(f"method {self.method!r} needs --block or --blocks")
        if self.method not in _BLOCK_METHODS and has_blocking:
            raise ValueError(f"method {self.method!r} does not take a block width")
        if self.block_width is not None and self.blocks is not None:
            raise ValueError("give either a block width or an explicit partition")
        if self.generator == "file" and self.input_path is None:
            raise ValueError("the file generator needs an input path")

    def partition(self) -> BlockPartition | None:
        if self.blocks is not None:
            part = BlockPartition(self.blocks)
            part.validate_total(self.n)
            return part
        if self.block_width is not None:
            return BlockPartition.uniform(self.n, self.block_width)
        return None


@dataclass(frozen=True)
class ReportRow:
    """One trial's measurements."""

    method: str
    m: int
    n: int
    p: int
    kappa_measured: float
    defect: float
    rel_residual: float
    assumptions_passed: bool
    wall_time_seconds: float


def _generate(config: ExperimentConfig, trial_seed: int) -> np.ndarray:
    if config.generator == "svd-spectrum":
        return gen_svd_spectrum(config.m, config.n, config.kappa, trial_seed)
    if config.generator == "lauchli":
        # kappa maps to the perturbation size: eps_val = 1 / kappa.
        return gen_lauchli(config.n, 1.0 / config.kappa)
    if config.generator == "hilbert-like":
        return gen_hilbert_like(config.m, config.n)
    return read_matrix_market(config.input_path)


def _measured_kappa(a: np.ndarray) -> float:
    sv = np.linalg.svd(a, compute_uv=False)
    smallest = sv[min(a.shape) - 1]
    if smallest == 0.0:
        return math.inf
    return float(sv[0] / smallest)


def _run_trial(config: ExperimentConfig, index: int) -> ReportRow:
    a = _generate(config, config.seed + index)
    m, n = a.shape
    part = config.partition()
    p = part.max_width if part is not None else (n if config.method == "householder" else 1)

    start = time.perf_counter()
    if config.method == "householder":
        res = local_qr(a)
        factorization = QRFactorization(res.q, res.r)
        trace = None
    else:
        if config.method == "cgs":
            trace = cgs(a)
        elif config.method == "mgs":
            trace = mgs(a)
        elif config.method == "cgs2":
            trace = cgs2(a)
        elif config.method == "bcgs":
            trace = bcgs(a, part)
        else:
            trace = bcgs2(a, part)
        factorization = trace.factorization
    wall = time.perf_counter() - start

    if trace is not None:
        defect = trace.per_block[-1].defect
    else:
        defect = orthogonality_defect(factorization.q)
    resid = relative_residual(a, factorization)

    assumptions_passed = True
    if config.method in _CHECKED_METHODS:
        ctx = BoundContext(m=m, p=p, n=n)
        verdicts = check_assumptions(trace, ctx)
        failing = [v for v in verdicts if not v.either_passed]
        assumptions_passed = not failing
        if failing and config.policy == "strict":
            worst = failing[0]
            raise AssumptionFailureError(
                f"trial {index}: stability checks failed at block {worst.block_index}: "
                f"check A {worst.check_a_lhs:.3e} > {worst.check_a_rhs:.3e}, "
                f"check B {worst.check_b_lhs:.3e} > {worst.check_b_rhs:.3e}",
                block_index=worst.block_index,
            )

    return ReportRow(
        method=config.method,
        m=m,
        n=n,
        p=p,
        kappa_measured=_measured_kappa(a),
        defect=defect,
        rel_residual=resid,
        assumptions_passed=assumptions_passed,
        wall_time_seconds=wall,
    )


def run(config: ExperimentConfig, verify_contracts: bool = False) -> list[ReportRow]:
    """Run every trial of a configuration; rows come back in trial order.

    ``BGS_THREADS`` caps trial parallelism (default 1).  With
    ``verify_contracts`` the defect and residual of each passing two-pass row
    are checked against their growth-function bounds.
    """
    threads = max(1, int(os.environ.get(THREADS_ENV, "1") or "1"))
    indices = range(config.trials)
    if threads == 1 or config.trials == 1:
        rows = [_run_trial(config, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_trial, config, i) for i in indices]
            rows = [f.result() for f in futures]
    if verify_contracts:
        verify_report_contracts(rows)
    return rows


def verify_report_contracts(rows: list[ReportRow], d1: float = 1.0) -> None:
    """Assert the measured defect and residual against their bounds.

    Applies to two-pass rows whose stability checks all passed; the bounds
    carry the safety factor 10 used throughout the test suite.
    """
    for row in rows:
        if row.method not in _CHECKED_METHODS or not row.assumptions_passed:
            continue
        ctx = BoundContext(m=row.m, p=row.p, d1=d1, n=row.n)
        blocks = -(-row.n // row.p)
        t_last = (blocks - 1) * row.p
        defect_bound = 10.0 * ctx.eps * ctx.f1(t_last)
        resid_bound = 10.0 * ctx.eps * ctx.f2(t_last, blocks)
        if not row.defect <= defect_bound:
            raise AssertionError(
                f"defect {row.defect:.3e} exceeds bound {defect_bound:.3e} "
                f"for {row.method} m={row.m} n={row.n} p={row.p}"
            )
        if not row.rel_residual <= resid_bound:
            raise AssertionError(
                f"residual {row.rel_residual:.3e} exceeds bound {resid_bound:.3e} "
                f"for {row.method} m={row.m} n={row.n} p={row.p}"
            )


_CSV_HEADER = (
    "method,m,n,p,kappa_measured,defect,rel_residual,assumptions_passed,wall_time_seconds"
)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def emit_csv(rows: list[ReportRow], path) -> None:
    """Write one row per trial; floats carry 17 significant digits."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_CSV_HEADER + "\n")
        for row in rows:
            fh.write(
                f"{row.method},{row.m},{row.n},{row.p},{_fmt(row.kappa_measured)},"
                f"{_fmt(row.defect)},{_fmt(row.rel_residual)},"
                f"{'true' if row.assumptions_passed else 'false'},"
                f"{_fmt(row.wall_time_seconds)}\n"
            )


def parse_csv(path) -> list[ReportRow]:
    """Read back a file written by :func:`emit_csv`, recovering exact floats."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != _CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 9:
                raise ValueError(f"{path}: bad row {line!r}")
            rows.append(
                ReportRow(
                    method=parts[0],
                    m=int(parts[1]),
                    n=int(parts[2]),
                    p=int(parts[3]),
                    kappa_measured=float(parts[4]),
                    defect=float(parts[5]),
                    rel_residual=float(parts[6]),
                    assumptions_passed=parts[7] == "true",
                    wall_time_seconds=float(parts[8]),
                )
            )
    return rows


def emit_plotdata(rows: list[ReportRow], path) -> None:
    """Write (kappa, defect) pairs, one series per method, blank-line separated."""
    methods = []
    for row in rows:
        if row.method not in methods:
            methods.append(row.method)
    with open(path, "w", encoding="ascii") as fh:
        for i, method in enumerate(methods):
            if i:
                fh.write("\n")
            fh.write(f"# {method}\n")
            for row in rows:
                if row.method == method:
                    fh.write(f"{_fmt(row.kappa_measured)} {_fmt(row.defect)}\n")
