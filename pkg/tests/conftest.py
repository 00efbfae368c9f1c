from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# planted corpus: 10 + 5 + 5 sentences, every pair inside a window of 5
PLANTED = (['cat chase mouse'] * 10 + ['dog chase cat'] * 5
           + ['mouse eat cheese'] * 5)


@pytest.fixture
def planted_sentences():
    return [s.split() for s in PLANTED]


@pytest.fixture
def planted_corpus(tmp_path):
    path = tmp_path / 'corpus.txt'
    path.write_text('\n'.join(PLANTED) + '\n', encoding='utf-8')
    return path
