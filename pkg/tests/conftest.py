import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from intenbot.scene import load_scene

REPO = Path(__file__).resolve().parents[1]

MINIMAL_SCENE = {
    "version": "1",
    "rooms": [{"id": "cellar", "label": "Cellar", "centroid": [0, 0, 0]}],
    "objects": [
        {
            "id": "wine",
            "label": "wine",
            "category": "drink",
            "position": [2, 0, 1],
            "room": "cellar",
            "affordances": ["portable"],
        }
    ],
    "relations": [],
}


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO


@pytest.fixture()
def minimal_doc() -> bytes:
    return json.dumps(MINIMAL_SCENE).encode()


@pytest.fixture(scope="session")
def home_scene():
    return load_scene((REPO / "scenes/home7.json").read_bytes())


@pytest.fixture(scope="session")
def meeting_scene():
    return load_scene((REPO / "scenes/meeting.json").read_bytes())


@pytest.fixture(scope="session")
def planted_scene():
    return load_scene((REPO / "scenes/planted.json").read_bytes())
