import functools
import itertools
from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from src.models.channel_spec import ChannelSpec
from src.models.level_scheme import LevelScheme
from src.physics.atom import zeeman_energy

# sublevel change of every atom along the chain, atoms in sampling order
Routing = Tuple[int, ...]

MAX_DM_PER_ATOM = 2


@functools.lru_cache(maxsize=None)
def frequency_matched_routings(scheme: LevelScheme, total_dm: int, order: int) -> Tuple[Routing, ...]:
    """Routings whose summed Zeeman energy equals that of the detected channel.

    Every atom starts in the stretched state, so an atom can only climb by 0, 1
    or 2 sublevels. Routings with fewer moving atoms come first.
    """
    F0 = scheme.populated_ground
    start = scheme.stretched_m()
    max_dm = min(MAX_DM_PER_ATOM, F0.twice_value)
    target = zeeman_energy(scheme, F0, start + total_dm)
    tolerance = 1e-12 * max(1.0, abs(target))

    matched = []
    for routing in itertools.product(range(max_dm + 1), repeat=order):
        if sum(routing) != total_dm:
            continue
        energy = sum(zeeman_energy(scheme, F0, start + dm) for dm in routing)
        if abs(energy - target) <= tolerance:
            matched.append(routing)
    return tuple(sorted(matched, key=lambda routing: (np.count_nonzero(routing), tuple(-dm for dm in routing))))


class RoutingStrategy(ABC):
    """Selects which internal Raman routings enter the coherent sum of a detected channel."""

    def routings(self, scheme: LevelScheme, channel: ChannelSpec, order: int) -> Tuple[Routing, ...]:
        candidates = frequency_matched_routings(scheme, channel.total_dm(scheme), order)
        return tuple(routing for routing in candidates if self.admits(routing))

    @abstractmethod
    def admits(self, routing: Routing) -> bool:
        pass
