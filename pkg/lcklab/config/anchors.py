"""Report labels for suites, loaded from the packaged anchors.toml."""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from functools import lru_cache
from importlib import resources
from typing import Dict


@lru_cache(maxsize=None)
def suite_anchors() -> Dict[str, str]:
    text = resources.files("lcklab.config").joinpath("anchors.toml").read_text(encoding="utf-8")
    return dict(tomllib.loads(text)["suites"])


def anchor_for(suite: str) -> str:
    return suite_anchors().get(suite, "")
