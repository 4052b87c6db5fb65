import os
from pathlib import Path

import pytest

from recgraph import load_ratings

REPO_ROOT = Path(__file__).resolve().parent.parent


def _data_root() -> Path:
    env = os.environ.get("RECGRAPH_DATA")
    return Path(env) if env else REPO_ROOT / "data"


def movielens_path():
    path = _data_root() / "ml-100k" / "u.data"
    return path if path.exists() else None


def eachmovie_path():
    path = _data_root() / "eachmovie.csv"
    return path if path.exists() else None


@pytest.fixture(scope="session")
def ml100k():
    path = movielens_path()
    if path is None:
        pytest.skip(
            "MovieLens-100k not found (expected data/ml-100k/u.data or "
            "$RECGRAPH_DATA/ml-100k/u.data; run scripts/fetch_ml100k.py)")
    return load_ratings(path, "movielens_tab")


@pytest.fixture(scope="session")
def eachmovie():
    path = eachmovie_path()
    if path is None:
        pytest.skip(
            "EachMovie data not found (expected $RECGRAPH_DATA/eachmovie.csv "
            "as person,movie CSV; the dataset is no longer distributed)")
    return load_ratings(path, "generic_csv")
