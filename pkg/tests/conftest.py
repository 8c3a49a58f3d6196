from hypothesis import HealthCheck, settings

# exact arithmetic makes per-example timing uneven
settings.register_profile("mot", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mot")

# one summary line per acceptance criterion, filled from record_property
_criteria: dict = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    k = props["criterion"]
    if report.when == "call" or report.failed:
        status = "PASS" if report.passed else "FAIL"
        if k not in _criteria or status == "FAIL":
            _criteria[k] = (status, props.get("title", ""), props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        status, title, detail = _criteria[k]
        terminalreporter.write_line(f"criterion {k:>2}: {status}  {title}" + (f"  [{detail}]" if detail else ""))
