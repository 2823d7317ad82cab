"""Regenerate the fixture documents under fixtures/ from the built-in fixtures."""
import pathlib
import sys

from fibcat.catio import print_document
from fibcat.fixtures import corpus, negative_corpus

root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
for rel, doc in sorted({**corpus(), **negative_corpus()}.items()):
    path = root / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(print_document(doc), encoding="utf-8")
    print(path)
