from __future__ import annotations

RESULTS: dict[int, bool] = {}


def record(n: int, ok: bool) -> None:
    RESULTS[n] = bool(ok)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if RESULTS[n] else 'FAIL'}")
