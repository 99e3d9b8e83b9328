from pathlib import Path

from pydantic import ValidationError

from src.orbifold.domain.models import BuildRequest
from src.shared.errors import InvalidSpecError
from src.shared.telemetry import Telemetry


class ConfigLoader:
    """Reads a JSON build request: {"kind": 1, "keep1": [...], "keep2": [...], "options": {...}}."""

    def __init__(self) -> None:
        self.telemetry = Telemetry("ConfigLoader")

    def load(self, path: str | Path) -> BuildRequest:
        source = Path(path)
        if not source.exists():
            raise InvalidSpecError(f"config file {source} does not exist", witness=str(source))
        try:
            request = BuildRequest.model_validate_json(source.read_text(encoding="utf-8"))
        except ValidationError as e:
            self.telemetry.log_error("config_invalid", e, path=str(source))
            raise InvalidSpecError(
                f"invalid build request in {source}",
                witness=[err["msg"] for err in e.errors()],
            ) from e
        self.telemetry.log_info("config_loaded", path=str(source), kind=request.kind)
        return request
