def pytest_runtest_logreport(report):
    """Print one PASS/FAIL line per acceptance criterion as it completes."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    print(f"\n[ACCEPTANCE] {status} {name}")
