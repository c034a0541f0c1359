import os

from hypothesis import HealthCheck, settings

from fitkit.fitting import seed_from_env

SEED = seed_from_env()

settings.register_profile(
    "fitkit",
    max_examples=int(os.environ.get("FITKIT_MAX_EXAMPLES", "40")),
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fitkit")

# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
