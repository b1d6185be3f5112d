from pathlib import Path

import pytest

from fastkate.cli import main
from fastkate.synthetic import mini_wiki


def run_pipeline(src: Path, out: Path, area: str, seed: int = 1) -> dict[str, Path]:
    """ingest -> tokenize -> train -> extract -> eval over a written MiniWiki."""
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: out / name for name in
             ("lex.tsv", "cats.tsv", "corpus.txt", "emb.fkte", "pred.tsv", "report.tsv")}
    steps = [
        ["ingest-titles", "--titles", src / "titles.txt", "--out", paths["lex.tsv"]],
        ["ingest-categories", "--lexicon", paths["lex.tsv"], "--edges", src / "categories.tsv",
         "--out", paths["cats.tsv"]],
        ["tokenize-corpus", "--lexicon", paths["lex.tsv"], "--documents", src / "documents.txt",
         "--out", paths["corpus.txt"]],
        ["train", "--lexicon", paths["lex.tsv"], "--corpus", paths["corpus.txt"],
         "--out", paths["emb.fkte"], "--deterministic", "--seed", str(seed)],
        ["extract", "--lexicon", paths["lex.tsv"], "--categories", paths["cats.tsv"],
         "--embeddings", paths["emb.fkte"], "--area", area, "--k", "15",
         "--out", paths["pred.tsv"], "--no-timing"],
        ["eval", "--gold", src / "gold.tsv", "--pred", area, "fastkate", paths["pred.tsv"],
         "--out", paths["report.tsv"]],
    ]
    for argv in steps:
        rc = main([str(a) for a in argv])
        assert rc == 0, f"{argv[0]} exited {rc}"
    paths["vocab"] = Path(str(paths["emb.fkte"]) + ".vocab.tsv")
    return paths


@pytest.fixture(scope="session")
def wiki_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("wiki")
    wiki = mini_wiki(seed=0)
    wiki.write(d)
    return d, wiki


@pytest.fixture(scope="session")
def pipeline(wiki_dir, tmp_path_factory):
    src, wiki = wiki_dir
    return run_pipeline(src, tmp_path_factory.mktemp("run"), wiki.area), wiki


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call":
                lines += [v for k, v in rep.user_properties if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
