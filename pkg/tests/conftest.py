import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        label, ok, dt = results[n]
        terminalreporter.write_line(f"criterion {n:2d}  {'PASS' if ok else 'FAIL'}  {dt:7.2f}s  {label}")
