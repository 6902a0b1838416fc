"""Loss-in-precision experiments on random p-adic systems.

Each trial draws dense homogeneous generators whose coefficients are
uniform residues modulo p^l (the Haar measure on Z_p truncated at
precision l) and runs the capped driver up to the Macaulay bound. The loss
of an output coefficient is the number of absolute p-adic digits it lost,
``max(0, l - precision)``. A setting row reports the largest such loss over
all trials and the mean over all output coefficients of all trials. A
trial that runs out of precision counts as a failure.

The largest per-step sum of pivot valuations is kept alongside; it is the
quantity bounded by the minor valuations and is generally larger.
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import PrecisionError
from .mf5 import run_driver
from .poly import HomogeneousPoly, TropicalOrder, monomials_of_degree
from .scalars import CappedScalar


@dataclass
class ExperimentConfig:
    degrees: list
    primes: list = field(default_factory=lambda: [2])
    weights: list = field(default_factory=list)  # empty: the zero weight only
    trials: int = 20
    precision: int = 30
    seed: int = 0
    n: int | None = None
    degree_bound: object = "macaulay"
    tiebreak: str = "grevlex"
    algorithm: str = "naive"
    carry: str = "reduced"
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n is None:
            self.n = len(self.degrees)
        if not self.weights:
            self.weights = [[0] * self.n]
        for w in self.weights:
            if len(w) != self.n:
                raise ValueError(f"weight {w} does not have {self.n} entries")
        if self.carry not in ("reduced", "raw"):
            raise ValueError(f"unknown carry mode {self.carry!r}")

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        if "prime" in data:
            data["primes"] = [data.pop("prime")]
        if "weight" in data:
            data["weights"] = [data.pop("weight")]
        return cls(**data)

    def bound(self) -> int:
        if self.degree_bound == "macaulay":
            if len(self.degrees) != self.n:
                raise ValueError("the Macaulay bound needs as many generators as variables")
            return sum(d - 1 for d in self.degrees) + 1
        return int(self.degree_bound)


@dataclass
class TrialResult:
    prime: int
    weight: tuple
    trial: int
    loss: int | None  # largest coefficient loss
    failed: bool
    error: str | None = None
    loss_sum: int = 0
    coefficients: int = 0
    pivot_loss: int | None = None


@dataclass
class SettingRow:
    degrees: list
    weight: list
    D: int
    prime: int
    trials: int
    max_loss: int | None
    mean_loss: Fraction | None
    failures: int
    losses: list
    max_pivot_loss: int | None = None

    def as_csv_row(self) -> dict:
        return {
            "degrees": " ".join(map(str, self.degrees)),
            "w": " ".join(map(str, self.weight)),
            "D": self.D,
            "p": self.prime,
            "trials": self.trials,
            "max_loss": "" if self.max_loss is None else self.max_loss,
            "mean_loss": "" if self.mean_loss is None else str(self.mean_loss),
            "failures": self.failures,
            "max_pivot_loss": "" if self.max_pivot_loss is None else self.max_pivot_loss,
        }


def random_zp_system(rng: random.Random, degrees, n: int, p: int, prec: int) -> list:
    """Dense generators with coefficients uniform in [0, p^prec), known to O(p^prec)."""
    bound = p ** prec
    return [
        HomogeneousPoly(
            n, d,
            {m: CappedScalar.from_rational(rng.randrange(bound), p, prec)
             for m in monomials_of_degree(n, d)},
        )
        for d in degrees
    ]


def trial_seed(seed, p, w, trial) -> str:
    return f"{seed}:{p}:{','.join(map(str, w))}:{trial}"


def run_trial(cfg: ExperimentConfig, p: int, w, trial: int) -> TrialResult:
    rng = random.Random(trial_seed(cfg.seed, p, w, trial))
    F = random_zp_system(rng, cfg.degrees, cfg.n, p, cfg.precision)
    order = TropicalOrder(tuple(w), cfg.tiebreak)
    kw = {"carry": cfg.carry} if cfg.algorithm == "naive" else {}
    try:
        report = run_driver(F, cfg.bound(), order, cfg.algorithm, **kw)
    except PrecisionError as exc:
        return TrialResult(p, tuple(w), trial, None, True, str(exc))
    losses = coefficient_losses(report, cfg.precision)
    return TrialResult(p, tuple(w), trial, max(losses, default=0), False,
                       loss_sum=sum(losses), coefficients=len(losses),
                       pivot_loss=report.max_step_loss)


def coefficient_losses(report, precision: int) -> list:
    """Digits of absolute precision lost by each basis coefficient."""
    return [max(0, precision - c.precision)
            for g in report.basis for c in g.poly.terms.values()]


def _run_packed(args):
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig) -> list:
    jobs = [(cfg, p, tuple(w), t) for p in cfg.primes for w in cfg.weights
            for t in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_packed, jobs, chunksize=4))
    else:
        results = [_run_packed(j) for j in jobs]
    results.sort(key=lambda r: (r.prime, r.weight, r.trial))
    rows = []
    for p in cfg.primes:
        for w in cfg.weights:
            mine = [r for r in results if r.prime == p and r.weight == tuple(w)]
            ok = [r for r in mine if not r.failed]
            losses = [r.loss for r in ok]
            ncoef = sum(r.coefficients for r in ok)
            rows.append(
                SettingRow(
                    degrees=list(cfg.degrees),
                    weight=list(w),
                    D=cfg.bound(),
                    prime=p,
                    trials=len(mine),
                    max_loss=max(losses) if losses else None,
                    mean_loss=Fraction(sum(r.loss_sum for r in ok), ncoef) if ncoef else None,
                    failures=sum(r.failed for r in mine),
                    losses=[r.loss for r in mine],
                    max_pivot_loss=max((r.pivot_loss for r in ok), default=None),
                )
            )
    return rows


CSV_FIELDS = ["degrees", "w", "D", "p", "trials", "max_loss", "mean_loss", "failures",
              "max_pivot_loss"]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.as_csv_row())
    return buf.getvalue()


def rows_to_text(rows) -> str:
    head = (f"{'d':<12} {'w':<14} {'D':>3} {'p':>3} {'max loss':>9} {'mean loss':>10} "
            f"{'failures':>9} {'pivot loss':>11}")
    lines = [head, "-" * len(head)]
    for r in rows:
        mean = "-" if r.mean_loss is None else f"{float(r.mean_loss):.2f}"
        mx = "-" if r.max_loss is None else str(r.max_loss)
        piv = "-" if r.max_pivot_loss is None else str(r.max_pivot_loss)
        lines.append(
            f"{str(r.degrees):<12} {str(r.weight):<14} {r.D:>3} {r.prime:>3} "
            f"{mx:>9} {mean:>10} {r.failures:>9} {piv:>11}"
        )
    return "\n".join(lines)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)
