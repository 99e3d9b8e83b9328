from abc import ABC, abstractmethod

from pydantic import BaseModel


class IReportStore(ABC):
    @abstractmethod
    def save(self, name: str, report: BaseModel) -> str:
        """Persists the report and returns its location."""
        pass

    @abstractmethod
    def load(self, name: str) -> dict[str, object]:
        pass

    @abstractmethod
    def list_names(self) -> list[str]:
        pass
