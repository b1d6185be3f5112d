import hashlib

import pytest

from fastkate.cli import EXIT_INPUT, EXIT_NO_CANDIDATES, EXIT_UNKNOWN_AREA, main
from fastkate.extraction import read_ranked


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_ingest_counts(tmp_path, capsys):
    titles = tmp_path / "titles.txt"
    titles.write_text("Artificial Intelligence\nMachine learning\nRobotics\n"
                      "Computer vision\nDeep Learning\n?!...\n", encoding="utf-8")
    assert main(["ingest-titles", "--titles", str(titles), "--out", str(tmp_path / "lex.tsv")]) == 0
    assert "accepted 5, rejected 1" in capsys.readouterr().out


def test_ingest_missing_path(tmp_path, capsys):
    rc = main(["ingest-titles", "--titles", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "l")])
    assert rc == EXIT_INPUT
    assert "nope.txt" in capsys.readouterr().err


def test_ingest_categories_format_error_names_line(tmp_path, capsys):
    (tmp_path / "t.txt").write_text("a\nb\n")
    main(["ingest-titles", "--titles", str(tmp_path / "t.txt"), "--out", str(tmp_path / "lex.tsv")])
    (tmp_path / "e.tsv").write_text("a\tb\nonly-one-field\n")
    rc = main(["ingest-categories", "--lexicon", str(tmp_path / "lex.tsv"),
               "--edges", str(tmp_path / "e.tsv"), "--out", str(tmp_path / "c.tsv")])
    assert rc == EXIT_INPUT
    assert "e.tsv:2" in capsys.readouterr().err


def test_ingest_byte_stable(wiki_dir, tmp_path):
    src, _ = wiki_dir
    outs = []
    for i in range(2):
        out = tmp_path / f"lex{i}.tsv"
        assert main(["ingest-titles", "--titles", str(src / "titles.txt"), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_train_defaults_echo(pipeline, tmp_path, capsys):
    paths, _ = pipeline
    out = tmp_path / "e.fkte"
    argv = ["train", "--lexicon", str(paths["lex.tsv"]), "--corpus", str(paths["corpus.txt"]),
            "--out", str(out), "--deterministic", "--seed", "7", "--epochs", "1"]
    assert main(argv) == 0
    header = capsys.readouterr().err.splitlines()[0]
    for field in ("dim=200", "window=10", "min_count=2", "subsample=1e-4"):
        assert field in header


def test_train_deterministic_checksum(pipeline, tmp_path):
    paths, _ = pipeline
    sums = []
    for i in range(2):
        out = tmp_path / f"e{i}.fkte"
        assert main(["train", "--lexicon", str(paths["lex.tsv"]), "--corpus", str(paths["corpus.txt"]),
                     "--out", str(out), "--deterministic", "--seed", "7"]) == 0
        sums.append(sha(out))
    assert sums[0] == sums[1]


def test_train_empty_corpus(pipeline, tmp_path):
    paths, _ = pipeline
    (tmp_path / "empty.txt").write_text("")
    rc = main(["train", "--lexicon", str(paths["lex.tsv"]), "--corpus", str(tmp_path / "empty.txt"),
               "--out", str(tmp_path / "e.fkte")])
    assert rc == EXIT_INPUT


def _extract(paths, *extra):
    return ["extract", "--lexicon", str(paths["lex.tsv"]), "--categories", str(paths["cats.tsv"]),
            "--embeddings", str(paths["emb.fkte"]), *extra]


def test_extract_rows_non_increasing(pipeline, tmp_path, capsys):
    paths, wiki = pipeline
    assert main(_extract(paths, "--area", wiki.area, "--k", "15")) == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[-1].startswith("elapsed_seconds\t")
    rows = [line.split("\t") for line in lines[:-1]]
    assert [int(r[0]) for r in rows] == list(range(1, 16))
    scores = [float(r[2]) for r in rows]
    assert scores == sorted(scores, reverse=True)
    assert "k=15 d1=3 d2=1" in captured.err


def test_extract_accepts_human_area(pipeline, capsys):
    paths, wiki = pipeline
    human = wiki.area.replace("_", " ").title()
    assert main(_extract(paths, "--area", human, "--no-timing")) == 0
    first = capsys.readouterr().out
    assert main(_extract(paths, "--area", wiki.area, "--no-timing")) == 0
    assert capsys.readouterr().out == first


def test_extract_truncated_warns(pipeline, capsys):
    paths, wiki = pipeline
    assert main(_extract(paths, "--area", wiki.area, "--k", "500", "--d1", "1")) == 0
    captured = capsys.readouterr()
    assert "fewer than k=500" in captured.err
    assert 0 < len(captured.out.splitlines()) - 1 < 500


def test_extract_unknown_area(pipeline):
    paths, _ = pipeline
    assert main(_extract(paths, "--area", "no_such_area")) == EXIT_UNKNOWN_AREA


def test_extract_no_candidates(pipeline):
    paths, _ = pipeline
    parents, children = set(), set()
    for line in paths["cats.tsv"].read_text().splitlines():
        p, c = line.split("\t")
        parents.add(p)
        children.add(c)
    leaf = sorted(children - parents)[0]
    assert main(_extract(paths, "--area", leaf)) == EXIT_NO_CANDIDATES


def test_extract_rejects_bad_k(pipeline):
    paths, wiki = pipeline
    assert main(_extract(paths, "--area", wiki.area, "--k", "0")) == EXIT_INPUT


def test_baselines_run(pipeline, wiki_dir, capsys):
    paths, wiki = pipeline
    src, _ = wiki_dir
    for method in ("tfidf", "textrank"):
        rc = main(["baseline", "--method", method, "--lexicon", str(paths["lex.tsv"]),
                   "--categories", str(paths["cats.tsv"]), "--documents", str(src / "documents.txt"),
                   "--area", wiki.area, "--no-timing"])
        assert rc == 0
        assert len(capsys.readouterr().out.splitlines()) == 15


# -- eval -------------------------------------------------------------------


def _eval_case(tmp_path, gold, pred):
    g = tmp_path / "gold.tsv"
    g.write_text("".join(f"ai\t{i}\t{t}\n" for i, t in enumerate(gold, 1)))
    p = tmp_path / "pred.tsv"
    p.write_text("".join(f"{i}\t{t}\t{1.0 / i:.6f}\n" for i, t in enumerate(pred, 1)))
    out = tmp_path / "report.tsv"
    assert main(["eval", "--gold", str(g), "--pred", "ai", "fastkate", str(p), "--out", str(out)]) == 0
    row = out.read_text().splitlines()[1].split("\t")
    return float(row[3]), float(row[4])


GOLD = [f"topic_{i}" for i in range(15)]


def test_eval_identical(tmp_path):
    assert _eval_case(tmp_path, GOLD, GOLD) == (1.0, 1.0)


def test_eval_disjoint(tmp_path):
    assert _eval_case(tmp_path, GOLD, [f"other_{i}" for i in range(15)]) == (0.0, 0.0)


def test_eval_eleven_hits(tmp_path):
    pred = GOLD[:11] + [f"other_{i}" for i in range(4)]
    p15, _ = _eval_case(tmp_path, GOLD, pred)
    assert p15 == pytest.approx(11 / 15, abs=1e-4)


def test_eval_malformed(tmp_path):
    (tmp_path / "gold.tsv").write_text("ai\tx\ttopic\n")
    (tmp_path / "pred.tsv").write_text("1\ttopic\t1.0\n")
    rc = main(["eval", "--gold", str(tmp_path / "gold.tsv"), "--pred", "ai", "m",
               str(tmp_path / "pred.tsv"), "--k", "1"])
    assert rc == EXIT_INPUT


def test_pipeline_result_readable(pipeline):
    paths, wiki = pipeline
    ranked = read_ranked(paths["pred.tsv"])
    assert len(ranked) == 15
