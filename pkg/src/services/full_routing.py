from typing_extensions import override

from src.services.routing_service import Routing, RoutingStrategy


class FullRouting(RoutingStrategy):
    """Every frequency-matched routing, including the ones passing a pi photon between atoms."""

    @override
    def admits(self, routing: Routing) -> bool:
        return True
