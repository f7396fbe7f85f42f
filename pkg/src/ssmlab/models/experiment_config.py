from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from ..constants import version

OutputFormat = Literal["csv", "json"]


@dataclass(frozen=True)
class ExperimentConfig:
    """
    What one CLI invocation ran, embedded into the metadata of its outputs.
    """

    command: str
    seed: int
    out: Optional[Path] = None
    format: OutputFormat = "csv"
    jobs: int = 1
    parameters: Dict[str, Any] = field(default_factory=dict)

    def metadata(self) -> Dict[str, str]:
        meta = {
            "version": version(),
            "command": self.command,
            "seed": str(self.seed),
            "jobs": str(self.jobs),
        }

        for key, value in sorted(self.parameters.items()):
            meta[key] = _format_value(value)

        return meta


def _format_value(value: Any):
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(item) for item in value)

    if isinstance(value, float):
        return repr(value)

    return str(value)
