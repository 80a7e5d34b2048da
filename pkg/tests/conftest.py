import pytest


def pytest_addoption(parser: pytest.Parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Also run the desk-scale training reproductions.",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="Needs --run-slow.")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
