from hypothesis import HealthCheck, settings

settings.register_profile(
    "qweyl",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("qweyl")

PROPERTY_FILE = "test_properties.py"
# outcomes of the property suites seen in this session, keyed by node id
property_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    # the acceptance gate runs last so it can reuse the property-suite outcomes
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if PROPERTY_FILE in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        if property_outcomes.get(report.nodeid) != "failed":
            property_outcomes[report.nodeid] = report.outcome
