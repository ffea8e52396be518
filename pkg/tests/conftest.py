import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "20")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion.

    Tests record ``criterion`` and ``summary`` properties; a criterion
    split over several parametrized tests passes only if all of them do.
    """
    verdicts, summaries = {}, {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(report, "user_properties", ()))
            if "criterion" not in props:
                continue
            n = props["criterion"]
            summaries[n] = props["summary"]
            verdicts[n] = verdicts.get(n, True) and outcome == "passed"
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for n in sorted(verdicts):
            verdict = "PASS" if verdicts[n] else "FAIL"
            terminalreporter.write_line(f"criterion {n}: {verdict}  {summaries[n]}")
