"""
End-to-end pipeline on the synthetic mini-wiki
==============================================

Writes the fixture files, then drives the command-line tool step by step.
The same commands work from a shell as ``fastkate <command> ...``.
"""

import tempfile
from pathlib import Path

from fastkate.cli import main
from fastkate.synthetic import mini_wiki

d = Path(tempfile.mkdtemp())
wiki = mini_wiki(seed=0)
wiki.write(d)
print("fixture in", d, "area", wiki.area)

run = [
    ["ingest-titles", "--titles", d / "titles.txt", "--out", d / "lex.tsv"],
    ["ingest-categories", "--lexicon", d / "lex.tsv", "--edges", d / "categories.tsv", "--out", d / "cats.tsv"],
    ["tokenize-corpus", "--lexicon", d / "lex.tsv", "--documents", d / "documents.txt", "--out", d / "corpus.txt"],
    ["train", "--lexicon", d / "lex.tsv", "--corpus", d / "corpus.txt", "--out", d / "emb.fkte", "--deterministic"],
    ["extract", "--lexicon", d / "lex.tsv", "--categories", d / "cats.tsv", "--embeddings", d / "emb.fkte",
     "--area", wiki.area, "--k", "15", "--out", d / "fastkate.tsv"],
    ["baseline", "--method", "tfidf", "--lexicon", d / "lex.tsv", "--categories", d / "cats.tsv",
     "--documents", d / "documents.txt", "--area", wiki.area, "--out", d / "tfidf.tsv"],
    ["eval", "--gold", d / "gold.tsv", "--dataset", "mini-wiki",
     "--pred", wiki.area, "fastkate", d / "fastkate.tsv", "--pred", wiki.area, "tfidf", d / "tfidf.tsv"],
]
for argv in run:
    print("$ fastkate", argv[0])
    assert main([str(a) for a in argv]) == 0

print((d / "fastkate.tsv").read_text())
