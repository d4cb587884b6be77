"""Run configuration model."""

from dataclasses import dataclass, field
from typing import Any

DEFAULT_TOLERANCE = 1e-9
DEFAULT_LEMMA2_LEVEL = 6
DEFAULT_BOX_BOUND = 20
DEFAULT_BOX_POWER = 3
DEFAULT_WINDOW = 50
DEFAULT_SEED = 0
DEFAULT_TABLE_VALUE = "1/3"


@dataclass
class RunConfig:
    """Parameters of one CLI run; embedded verbatim into its report."""

    command: str
    params: dict[str, Any] = field(default_factory=dict)

    def get(self, key: str, default: Any = None) -> Any:
        value = self.params.get(key)
        return default if value is None else value

    def as_dict(self) -> dict[str, Any]:
        return {"command": self.command, **self.params}
