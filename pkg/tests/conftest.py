import contextlib
import time

import pytest

_RESULTS = []


class _Recorder:
    @contextlib.contextmanager
    def __call__(self, number, title, limit):
        start = time.perf_counter()
        row = {"number": number, "title": title, "limit": limit, "status": "FAIL", "detail": ""}
        _RESULTS.append(row)
        try:
            yield row
        except BaseException as exc:
            row["elapsed"] = time.perf_counter() - start
            row["detail"] = f"{type(exc).__name__}: {exc}".splitlines()[0][:120]
            raise
        row["elapsed"] = elapsed = time.perf_counter() - start
        if elapsed > limit:
            row["detail"] = f"took {elapsed:.2f}s, limit {limit}s"
            pytest.fail(row["detail"])
        row["status"] = "PASS"


@pytest.fixture
def acceptance():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for row in sorted(_RESULTS, key=lambda r: int(r["number"])):
        extra = f" ({row['detail']})" if row["detail"] else ""
        terminalreporter.write_line(
            f"[{row['status']}] criterion {row['number']:>2}: {row['title']}"
            f" [{row.get('elapsed', 0):.2f}s / limit {row['limit']}s]{extra}")
