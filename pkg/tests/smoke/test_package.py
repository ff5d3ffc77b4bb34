from importlib.metadata import version

import pytest

import bicap as pkg


def test_version() -> None:
    assert version("bicap") == pkg.__version__


def test_all() -> None:
    """Test the `bicap` package contents."""
    # Test detailed contents (not order)
    assert set(pkg.__all__) == {
        "__version__",
        "__version_tuple__",
        # modules
        "bitree",
        "potential",
        "capacity",
        "sci",
        "rearrangement",
        "counterexamples",
        "bridge",
        "io",
        "utils",
        "typing",
    }


@pytest.mark.parametrize(
    "name",
    ["bitree", "potential", "capacity", "sci", "rearrangement", "counterexamples", "bridge", "io"],
)
def test_subpackage_exports_resolve(name: str) -> None:
    module = getattr(pkg, name)
    for attr in module.__all__:
        assert hasattr(module, attr), f"{name}.{attr}"


def test_cli_is_importable() -> None:
    from bicap import cli

    assert callable(cli.main)
    assert set(cli.SUITES) == {"sci", "rearrange", "maxprinciple", "carleson", "oracles"}
