import json
from pathlib import Path

from pydantic import BaseModel

from src.orbifold.domain.ports import IReportStore
from src.shared.errors import InvalidSpecError
from src.shared.telemetry import Telemetry, measure_time


class JsonReportStore(IReportStore):
    """One `<name>.json` file per report inside `directory`."""

    def __init__(self, directory: str | Path) -> None:
        self.telemetry = Telemetry("JsonReportStore")
        self.directory = Path(directory)

    def _path(self, name: str) -> Path:
        if not name or "/" in name or "\\" in name or name.startswith("."):
            raise InvalidSpecError(f"invalid report name {name!r}", witness=name)
        return self.directory / f"{name}.json"

    @measure_time("report_saved")
    def save(self, name: str, report: BaseModel) -> str:
        path = self._path(name)
        self.directory.mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        return str(path)

    def load(self, name: str) -> dict[str, object]:
        path = self._path(name)
        if not path.exists():
            raise FileNotFoundError(f"no report named {name} in {self.directory}")
        data: dict[str, object] = json.loads(path.read_text(encoding="utf-8"))
        return data

    def list_names(self) -> list[str]:
        if not self.directory.exists():
            return []
        return sorted(p.stem for p in self.directory.glob("*.json"))
