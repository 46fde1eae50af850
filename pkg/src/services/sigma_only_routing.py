from typing_extensions import override

from src.services.routing_service import Routing, RoutingStrategy


class SigmaOnlyRouting(RoutingStrategy):
    """At most one atom leaves the stretched state: the circular-only diagrams."""

    @override
    def admits(self, routing: Routing) -> bool:
        return sum(1 for dm in routing if dm != 0) <= 1
