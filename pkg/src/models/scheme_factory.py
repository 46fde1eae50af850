from typing import Any, Dict, Iterable, Optional, Tuple

from src.models.errors import ConfigError, UnknownLevel
from src.models.half_int import HalfInt
from src.models.level_scheme import LevelEntry, LevelScheme
from src.physics.atom import oracle_scheme, rb85_default

SCHEME_OVERRIDES = ("zeeman_ground_splitting", "zeeman_quadratic")
CUSTOM_REQUIRED = ("nuclear_spin", "Jg", "Je", "ground_levels", "excited_levels")
CUSTOM_FIELDS = CUSTOM_REQUIRED + SCHEME_OVERRIDES + ("populated_ground", "gamma", "label")


def _levels(entries: Iterable[Any], manifold: str) -> Tuple[LevelEntry, ...]:
    """[[F, energy], ...] from JSON, ordered by F."""
    levels = []
    for entry in entries:
        if len(entry) != 2:
            raise ConfigError(f"{manifold} levels are [F, energy] pairs, got {entry}")
        F, energy = entry
        levels.append((HalfInt.of(F), float(energy)))
    return tuple(sorted(levels))


class SchemeFactory:
    @staticmethod
    def create_scheme(name: str, overrides: Optional[Dict[str, Any]] = None) -> LevelScheme:
        overrides = dict(overrides or {})
        try:
            if name == "custom":
                return SchemeFactory._custom_scheme(overrides)

            unknown = set(overrides) - set(SCHEME_OVERRIDES)
            if unknown:
                raise ConfigError(f"unsupported scheme overrides: {', '.join(sorted(unknown))}")
            if name == "rb85":
                return rb85_default(**{key: float(value) for key, value in overrides.items()})
            elif name == "oracle":
                if any(float(value) for value in overrides.values()):
                    raise ConfigError("the oracle atom has no Zeeman structure")
                return oracle_scheme()
            else:
                raise ConfigError(f"Unsupported scheme: {name}")
        except UnknownLevel as e:
            raise ConfigError(str(e)) from e
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"invalid value in scheme '{name}': {e}") from e

    @staticmethod
    def _custom_scheme(fields: Dict[str, Any]) -> LevelScheme:
        """User level scheme: quantum numbers, [F, energy] level lists in gamma, optional Zeeman terms."""
        unknown = set(fields) - set(CUSTOM_FIELDS)
        if unknown:
            raise ConfigError(f"unsupported custom scheme fields: {', '.join(sorted(unknown))}")
        missing = [key for key in CUSTOM_REQUIRED if key not in fields]
        if missing:
            raise ConfigError(f"a custom scheme needs {', '.join(missing)}")

        populated = fields.get("populated_ground")
        return LevelScheme(
            nuclear_spin=HalfInt.of(fields["nuclear_spin"]),
            Jg=HalfInt.of(fields["Jg"]),
            Je=HalfInt.of(fields["Je"]),
            ground_levels=_levels(fields["ground_levels"], "ground"),
            excited_levels=_levels(fields["excited_levels"], "excited"),
            gamma=float(fields.get("gamma", 1.0)),
            zeeman_ground_splitting=float(fields.get("zeeman_ground_splitting", 0.1)),
            zeeman_quadratic=float(fields.get("zeeman_quadratic", 0.0)),
            populated_ground=None if populated is None else HalfInt.of(populated),
            name=str(fields.get("label", "custom")),
        )
