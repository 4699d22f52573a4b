from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def read(name: str) -> str:
    return (FIXTURES / f"{name}.net").read_text(encoding="utf-8")
