# MIT License
#
# Copyright (c) 2024- unlevents contributors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from pathlib import Path

import pytest

from unlevents.core.io import Corpus

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def bbc_dir() -> Path:
    """Nine BBC Tamil news documents whose matches are all action nodes"""
    return DATA / "fig2"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    """Fifteen documents about competitions, festivals, elections and incidents"""
    return DATA / "corpus"


@pytest.fixture()
def bbc_documents(bbc_dir):
    return Corpus()(bbc_dir)


@pytest.fixture()
def documents(corpus_dir):
    return Corpus()(corpus_dir)


@pytest.fixture()
def write_document(tmp_path):
    """Write a document (without its #DOC and #END lines) into tmp_path / "corpus" """

    corpus = tmp_path / "corpus"
    corpus.mkdir(exist_ok=True)

    def write(doc_id: str, text: str) -> Path:
        path = corpus / doc_id
        path.write_text(f"#DOC {doc_id}\n{text.strip()}\n#END\n", encoding="utf-8")
        return path

    return write
