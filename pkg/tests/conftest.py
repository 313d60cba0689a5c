from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

import time
from dataclasses import dataclass, field

import pytest

ACCEPTANCE = pytest.StashKey[list]()


@dataclass
class CriterionRecord:
    number: int
    title: str
    limit: float | None
    passed: bool = False
    detail: str = ""
    elapsed: float = 0.0
    _t0: float = field(default=0.0, repr=False)

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self._t0
        if exc is not None:
            self.passed = False
            self.detail = f"{exc_type.__name__}: {exc}"
        elif self.limit is not None and self.elapsed >= self.limit:
            self.passed = False
            self.detail += f"; runtime {self.elapsed:.1f} s over the {self.limit:g} s limit"
        return False

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g} s)" if self.limit is not None else ""
        return (f"criterion {self.number} {verdict}: {self.title}; {self.detail} "
                f"[{self.elapsed:.2f} s{limit}]")


@pytest.fixture
def criterion(request):
    """Factory for timed acceptance records reported in the terminal summary."""
    store = request.config.stash.setdefault(ACCEPTANCE, [])

    def make(number: int, title: str, limit: float | None = None) -> CriterionRecord:
        rec = CriterionRecord(number, title, limit)
        store.append(rec)
        return rec
    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    records = config.stash.get(ACCEPTANCE, [])
    if not records:
        return
    terminalreporter.section("acceptance criteria")
    for rec in sorted(records, key=lambda r: r.number):
        terminalreporter.write_line(rec.line())
