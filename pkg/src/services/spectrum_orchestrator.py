import functools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.models.channel_spec import ChannelSpec
from src.models.cloud_config import CloudConfig
from src.models.errors import ConfigError
from src.models.level_scheme import LevelScheme
from src.models.spectrum_record import SpectrumRecord
from src.services.cbs_service import (
    ChainEvaluator,
    Propagator,
    routing_strategy_for,
    sample_chains,
    transverse_propagator,
)
from src.utils.decorators import log_execution
from src.utils.logger import log

CHUNK_SIZE = 2048

# running sums kept per chunk; a = single + ladder + interf, d = single + ladder
_MOMENTS = (
    "s", "ss", "l", "ll", "i", "ii",
    "a", "aa", "d", "dd", "ad",
    "l2", "l2l2", "i2", "i2i2", "l2i2",
)
_INDEX = {name: position for position, name in enumerate(_MOMENTS)}


def _ratio_stderr(mean_a: float, mean_d: float, var_a: float, var_d: float, cov: float, n: int) -> float:
    """Delta-method standard error of mean(a)/mean(d)."""
    if mean_d == 0 or n < 2:
        return float("nan")
    ratio = mean_a / mean_d
    variance = (var_a - 2 * ratio * cov + ratio**2 * var_d) / (n * mean_d**2)
    return float(np.sqrt(max(variance, 0.0)))


@dataclass
class SpectrumAccumulator:
    """Sums over samples of one detuning; merged by addition, chunk by chunk."""

    n_orders: int
    n_samples: int = 0
    moments: Optional[np.ndarray] = None
    ladder_by_order: Optional[np.ndarray] = None
    interf_by_order: Optional[np.ndarray] = None
    resampled: int = 0
    degenerate: int = 0

    def __post_init__(self):
        if self.moments is None:
            self.moments = np.zeros(len(_MOMENTS))
        if self.ladder_by_order is None:
            self.ladder_by_order = np.zeros(self.n_orders)
        if self.interf_by_order is None:
            self.interf_by_order = np.zeros(self.n_orders)

    @classmethod
    def from_samples(
        cls,
        single: np.ndarray,
        ladder: np.ndarray,
        interf: np.ndarray,
        resampled: int = 0,
        degenerate: int = 0,
    ) -> "SpectrumAccumulator":
        """single has shape (S,); ladder and interf (S, orders) starting at order 2."""
        total_ladder = ladder.sum(axis=1)
        total_interf = interf.sum(axis=1)
        numerator = single + total_ladder + total_interf
        denominator = single + total_ladder
        if ladder.shape[1]:
            l2, i2 = ladder[:, 0], interf[:, 0]
        else:
            l2 = i2 = np.zeros_like(single)

        values = {
            "s": single.sum(), "ss": (single**2).sum(),
            "l": total_ladder.sum(), "ll": (total_ladder**2).sum(),
            "i": total_interf.sum(), "ii": (total_interf**2).sum(),
            "a": numerator.sum(), "aa": (numerator**2).sum(),
            "d": denominator.sum(), "dd": (denominator**2).sum(),
            "ad": (numerator * denominator).sum(),
            "l2": l2.sum(), "l2l2": (l2**2).sum(),
            "i2": i2.sum(), "i2i2": (i2**2).sum(), "l2i2": (l2 * i2).sum(),
        }
        return cls(
            n_orders=ladder.shape[1],
            n_samples=len(single),
            moments=np.array([values[name] for name in _MOMENTS]),
            ladder_by_order=ladder.sum(axis=0),
            interf_by_order=interf.sum(axis=0),
            resampled=resampled,
            degenerate=degenerate,
        )

    def merge(self, other: "SpectrumAccumulator") -> "SpectrumAccumulator":
        return SpectrumAccumulator(
            n_orders=self.n_orders,
            n_samples=self.n_samples + other.n_samples,
            moments=self.moments + other.moments,
            ladder_by_order=self.ladder_by_order + other.ladder_by_order,
            interf_by_order=self.interf_by_order + other.interf_by_order,
            resampled=self.resampled + other.resampled,
            degenerate=self.degenerate + other.degenerate,
        )

    def _mean(self, name: str) -> float:
        return self.moments[_INDEX[name]] / self.n_samples

    def _var(self, first: str, second: Optional[str] = None) -> float:
        second = second or first
        product = first + second
        if product not in _INDEX:
            product = second + first
        return self._mean(product) - self._mean(first) * self._mean(second)

    def _stderr(self, name: str) -> float:
        return float(np.sqrt(max(self._var(name), 0.0) / self.n_samples))

    def to_record(self, delta: float, peak_density: float = 0.0) -> SpectrumRecord:
        n = self.n_samples
        mean_a, mean_d = self._mean("a"), self._mean("d")
        mean_l2, mean_i2 = self._mean("l2"), self._mean("i2")
        single, ladder, interf = self._mean("s"), self._mean("l"), self._mean("i")
        denominator = single + ladder
        x_ef = (denominator + interf) / denominator if denominator > 0 else float("nan")
        r2 = mean_i2 / mean_l2 if mean_l2 > 0 else float("nan")
        return SpectrumRecord(
            delta=float(delta),
            sigma_single=single,
            sigma_ladder=ladder,
            sigma_interf=interf,
            X_EF=x_ef,
            R2=r2,
            stderr_single=self._stderr("s"),
            stderr_ladder=self._stderr("l"),
            stderr_interf=self._stderr("i"),
            stderr_X_EF=_ratio_stderr(mean_a, mean_d, self._var("a"), self._var("d"), self._var("a", "d"), n),
            stderr_R2=_ratio_stderr(
                mean_i2, mean_l2, self._var("i2"), self._var("l2"), self._var("l2", "i2"), n
            ),
            resampled_paths=self.resampled + self.degenerate,
            degenerate_paths=self.degenerate,
            n_samples=n,
            peak_density=peak_density,
            ladder_by_order=tuple(float(v) for v in self.ladder_by_order / n),
            interf_by_order=tuple(float(v) for v in self.interf_by_order / n),
        )


class SpectrumOrchestrator:
    """Runs the backscattering Monte Carlo over a detuning grid.

    Within a detuning, samples are cut into fixed chunks of CHUNK_SIZE; chunk c of
    detuning index j draws from SeedSequence([seed, j, c]) and chunks are merged in
    index order, so the sums do not depend on the number of worker threads.
    """

    def __init__(
        self,
        scheme: LevelScheme,
        cloud: CloudConfig,
        channel: ChannelSpec,
        threads: Optional[int] = None,
        chunk_size: int = CHUNK_SIZE,
        propagator: Propagator = transverse_propagator,
    ):
        self.scheme = scheme
        self.cloud = cloud
        self.channel = channel
        self.threads = threads or os.cpu_count() or 1
        self.chunk_size = chunk_size
        self.propagator = propagator

    def evaluator_for(self, delta: float) -> ChainEvaluator:
        strategy = routing_strategy_for(self.channel.diagram_set)
        return ChainEvaluator(
            self.scheme, self.channel, self.cloud, delta, strategy=strategy, propagator=self.propagator
        )

    @log_execution("SpectrumOrchestrator")
    def run(
        self, deltas: Sequence[float], n_samples: int, n_max_order: int, seed: int
    ) -> List[SpectrumRecord]:
        if len(deltas) == 0:
            raise ConfigError("the detuning list is empty")
        if n_samples < 1 or n_max_order < 1:
            raise ConfigError("n_samples and n_max_order must be at least 1")
        self.channel.resolved_final_m(self.scheme)

        records = []
        for delta_index, delta in enumerate(deltas):
            record = self.evaluate_detuning(delta_index, float(delta), n_samples, n_max_order, seed)
            log(
                self.__class__.__name__,
                f"delta={record.delta:+.3f} X_EF={record.X_EF:.5f}±{record.stderr_X_EF:.5f} "
                f"R2={record.R2:+.5f}±{record.stderr_R2:.5f} resampled={record.resampled_paths}",
            )
            if n_max_order > 2:
                log(self.__class__.__name__, f"  interference signs by order: {record.order_signs()}")
            records.append(record)
        return records

    def evaluate_detuning(
        self, delta_index: int, delta: float, n_samples: int, n_max_order: int, seed: int
    ) -> SpectrumRecord:
        evaluator = self.evaluator_for(delta)
        chunks = [
            (chunk_index, min(self.chunk_size, n_samples - start))
            for chunk_index, start in enumerate(range(0, n_samples, self.chunk_size))
        ]

        def evaluate(chunk: Tuple[int, int]) -> SpectrumAccumulator:
            chunk_index, size = chunk
            rng = np.random.default_rng(np.random.SeedSequence([seed, delta_index, chunk_index]))
            return self._evaluate_chunk(evaluator, size, n_max_order, rng)

        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            parts = list(executor.map(evaluate, chunks))
        total = functools.reduce(SpectrumAccumulator.merge, parts)
        return total.to_record(delta, evaluator.n0)

    def _evaluate_chunk(
        self, evaluator: ChainEvaluator, size: int, n_max_order: int, rng: np.random.Generator
    ) -> SpectrumAccumulator:
        batch = sample_chains(self.cloud, evaluator.n0, size, n_max_order, rng)
        geometry = evaluator.prepare(batch.positions)

        single = batch.weights[:, 0] * evaluator.single_term(geometry)
        ladder = np.zeros((size, n_max_order - 1))
        interf = np.zeros((size, n_max_order - 1))
        for order in range(2, n_max_order + 1):
            weight = np.where(batch.alive[:, order - 1], batch.weights[:, order - 1], 0.0)
            order_ladder, order_interf = evaluator.order_terms(geometry, order, rng)
            ladder[:, order - 2] = weight * order_ladder
            interf[:, order - 2] = weight * order_interf
        return SpectrumAccumulator.from_samples(single, ladder, interf, batch.redraws, batch.degenerate)


def mc_spectrum(
    channel: ChannelSpec,
    scheme: LevelScheme,
    cloud: CloudConfig,
    deltas: Sequence[float],
    n_samples: int,
    n_max_order: int,
    seed: int,
    threads: Optional[int] = None,
) -> List[SpectrumRecord]:
    orchestrator = SpectrumOrchestrator(scheme, cloud, channel, threads=threads)
    return orchestrator.run(deltas, n_samples, n_max_order, seed)


def xef_minimum(records: Sequence[SpectrumRecord]) -> Tuple[float, float]:
    """(delta, X_EF) at the grid point where X_EF - 1 is smallest."""
    if not records:
        raise ValueError("xef_minimum needs at least one record")
    values = np.array([record.X_EF for record in records], dtype=float)
    if np.all(np.isnan(values)):
        return records[0].delta, float("nan")
    best = int(np.nanargmin(values - 1.0))
    return records[best].delta, records[best].X_EF


def check_record(record: SpectrumRecord, tolerance: float = 1e-9) -> List[str]:
    """Invariant violations of one record; empty when it is consistent."""
    problems = []
    if record.sigma_single < 0:
        problems.append(f"sigma_single={record.sigma_single} is negative")
    if record.sigma_ladder < 0:
        problems.append(f"sigma_ladder={record.sigma_ladder} is negative")
    for order, (ladder, interf) in enumerate(zip(record.ladder_by_order, record.interf_by_order), start=2):
        if abs(interf) > ladder * (1 + tolerance):
            problems.append(f"order {order}: |interf|={abs(interf)} exceeds ladder={ladder}")
    denominator = record.sigma_single + record.sigma_ladder
    if denominator > 0:
        expected = (denominator + record.sigma_interf) / denominator
        if not np.isclose(record.X_EF, expected, rtol=0.0, atol=0.0):
            problems.append(f"X_EF={record.X_EF} differs from its cross sections ({expected})")
    return problems
