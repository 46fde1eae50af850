from dataclasses import dataclass, field
from typing import Tuple


@dataclass(frozen=True)
class SpectrumRecord:
    """Accumulated backscattering cross sections at one laser detuning.

    sigma_ladder and sigma_interf are summed over orders 2..n_max_order;
    the per-order values are kept in `ladder_by_order` / `interf_by_order`
    (index 0 is order 2). R2 uses order 2 only.
    """

    delta: float
    sigma_single: float
    sigma_ladder: float
    sigma_interf: float
    X_EF: float
    R2: float
    stderr_single: float = 0.0
    stderr_ladder: float = 0.0
    stderr_interf: float = 0.0
    stderr_X_EF: float = 0.0
    stderr_R2: float = 0.0
    resampled_paths: int = 0
    degenerate_paths: int = 0
    n_samples: int = 0
    peak_density: float = 0.0
    ladder_by_order: Tuple[float, ...] = field(default=())
    interf_by_order: Tuple[float, ...] = field(default=())

    @property
    def enhancement_deficit(self) -> float:
        return self.X_EF - 1.0

    def order_signs(self) -> Tuple[int, ...]:
        """Sign of the interference term per order, starting at order 2."""
        return tuple(int((value > 0) - (value < 0)) for value in self.interf_by_order)
