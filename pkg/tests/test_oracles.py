"""The frozen oracle file must agree with a fresh symbolic derivation."""
import importlib.util
from pathlib import Path

import numpy as np

from conftest import ORACLES


def _load_derive():
    path = Path(__file__).parent / "oracles" / "derive.py"
    loader_spec = importlib.util.spec_from_file_location("oracle_derive", path)
    mod = importlib.util.module_from_spec(loader_spec)
    loader_spec.loader.exec_module(mod)
    return mod


def _compare(a, b, path="root"):
    if isinstance(a, dict):
        assert set(a) == set(b), path
        for k in a:
            _compare(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (p, q) in enumerate(zip(a, b)):
            _compare(p, q, f"{path}[{i}]")
    else:
        assert np.isclose(a, b, rtol=1e-14, atol=1e-15), path


def test_frozen_oracles_match_fresh_derivation():
    _compare(_load_derive().derive(), ORACLES)
