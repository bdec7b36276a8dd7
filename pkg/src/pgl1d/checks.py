from dataclasses import dataclass


@dataclass
class Check:
    """One named verification outcome."""

    name: str
    passed: bool
    detail: str = ""
    anchor: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        anchor = f"  [{self.anchor}]" if self.anchor else ""
        detail = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}{detail}{anchor}"
