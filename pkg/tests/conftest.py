import textwrap
from pathlib import Path

import pytest


@pytest.fixture
def write_config(tmp_path):
    """Write a config file under the test's tmp dir and return its path.

    Each part is dedented on its own, so differently indented fragments can
    be combined without creating INI continuation lines.
    """

    def _write(*parts: str, name: str = "run.cfg") -> Path:
        path = tmp_path / name
        path.write_text("\n".join(textwrap.dedent(p) for p in parts))
        return path

    return _write


@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / "out"
