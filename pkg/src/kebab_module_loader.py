"""Utility to load Python modules with kebab-case filenames via importlib."""

import importlib.util
import sys
from pathlib import Path

_ROOT = Path(__file__).parent.parent


def load_kebab_module(kebab_path: str | Path, alias: str | None = None):
    """Load a kebab-case .py file as a Python module.

    Args:
        kebab_path: Absolute or relative path to the .py file.
        alias: Optional module name to register in sys.modules.
                Defaults to the stem with hyphens replaced by underscores.

    Returns:
        The loaded module object.
    """
    path = Path(kebab_path).resolve()
    module_name = alias or path.stem.replace("-", "_")

    # Return cached module if already loaded
    if module_name in sys.modules:
        return sys.modules[module_name]

    spec = importlib.util.spec_from_file_location(module_name, path)
    if spec is None or spec.loader is None:
        raise ImportError(f"Cannot load module from {path}")

    module = importlib.util.module_from_spec(spec)
    sys.modules[module_name] = module
    try:
        spec.loader.exec_module(module)  # type: ignore[union-attr]
    except BaseException:
        del sys.modules[module_name]
        raise
    return module


def load_module(dotted: str):
    """Load a repository module addressed as ``src.<package>.<kebab-name>``.

    The module is registered under the dotted name with hyphens replaced by
    underscores, so every importer shares one instance (and one set of classes).

    Example:
        >>> ecdf = load_module("src.numeric.empirical-cdf")
        >>> ecdf.empirical_cdf([1.0, 2.0, 3.0]).levels
        [0.25, 0.5, 0.75]
    """
    path = _ROOT.joinpath(*dotted.split(".")).with_suffix(".py")
    return load_kebab_module(path, alias=dotted.replace("-", "_"))
