import pytest

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num = mark.args[0]
    if rep.passed:
        detail = dict(item.user_properties).get("detail", "")
        ACCEPTANCE[num] = ("PASS", detail)
    else:
        msg = str(call.excinfo.value).strip().splitlines() if call.excinfo else []
        ACCEPTANCE[num] = ("FAIL", msg[0][:160] if msg else rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {detail}")
