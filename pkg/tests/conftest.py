import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from episodeseq.datasets import sample_dataset, sample_selection


@pytest.fixture(scope="session")
def sample_data():
    return sample_dataset()


@pytest.fixture(scope="session")
def sample_episodes():
    return sample_selection()
