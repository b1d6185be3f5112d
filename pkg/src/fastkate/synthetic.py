"""Synthetic knowledge bases with a known answer.

`planted_clusters` builds a corpus in which topics only co-occur inside their
own cluster.  `mini_wiki` builds titles, a category tree, raw article text
and a gold list for one area whose 15 depth-1 subcategories are the
representative topics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lexicon import TokenizedCorpus, TopicLexicon


def planted_clusters(n_clusters: int = 3, per_cluster: int = 10, n_docs: int = 10_000,
                     doc_len: tuple[int, int] = (8, 16), seed: int = 0):
    """Return ``(lexicon, corpus, labels)``; ``labels[t]`` is topic t's cluster."""
    rng = np.random.default_rng(seed)
    phrases = [f"cluster_{c}_topic_{i}" for c in range(n_clusters) for i in range(per_cluster)]
    labels = np.repeat(np.arange(n_clusters), per_cluster)
    docs = []
    for _ in range(n_docs):
        c = rng.integers(n_clusters)
        n = rng.integers(doc_len[0], doc_len[1] + 1)
        docs.append((c * per_cluster + rng.integers(per_cluster, size=n)).tolist())
    corpus = TokenizedCorpus(docs)
    freq = np.bincount(np.concatenate([np.asarray(d) for d in docs]), minlength=len(phrases))
    return TopicLexicon(phrases, freq), corpus, labels


def _pseudo_words(n: int, syllables: int, rng: np.random.Generator, exclude=()) -> list[str]:
    onsets = "bdfgklmnprstvz"
    vowels = "aeiou"
    sylls = [o + v for o in onsets for v in vowels]
    seen = set(exclude)
    words = []
    while len(words) < n:
        w = "".join(sylls[i] for i in rng.integers(len(sylls), size=syllables))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


@dataclass
class MiniWiki:
    area: str
    titles: list[str]
    edges: list[tuple[str, str]]
    documents: list[str]
    gold: list[str]

    def write(self, directory: str | Path) -> dict[str, Path]:
        """Write ``titles.txt``, ``categories.tsv``, ``documents.txt`` and ``gold.tsv``."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        paths = {
            "titles": d / "titles.txt",
            "categories": d / "categories.tsv",
            "documents": d / "documents.txt",
            "gold": d / "gold.tsv",
        }
        paths["titles"].write_text("".join(t + "\n" for t in self.titles), encoding="utf-8")
        paths["categories"].write_text(
            "".join(f"{p}\t{c}\n" for p, c in self.edges), encoding="utf-8"
        )
        paths["documents"].write_text("".join(t + "\n" for t in self.documents), encoding="utf-8")
        paths["gold"].write_text(
            "".join(f"{self.area}\t{i}\t{t}\n" for i, t in enumerate(self.gold, 1)), encoding="utf-8"
        )
        return paths


def mini_wiki(n_docs: int = 60_000, n_representatives: int = 15, seed: int = 0) -> MiniWiki:
    """A small knowledge base around the area ``synthetic_area``.

    Layout under the area: the representative topics at depth 1, a few
    off-topic depth-1 categories ("list" and "stub" style) whose articles
    talk about unrelated topics, three subtopics per representative at
    depth 2, and one more level below each subtopic.  A second, unrelated
    area supplies noise topics.  Edge phrases are already normalized.
    """
    rng = np.random.default_rng(seed)
    # two-word titles for topics, disjoint filler words for article text
    n_sub = 3 * n_representatives
    n_noise = 40
    words = _pseudo_words(2 * (n_representatives + 2 * n_sub + n_noise + 6), 2, rng)
    pairs = [f"{a} {b}" for a, b in zip(words[::2], words[1::2])]
    it = iter(pairs)
    reps = [next(it).title() for _ in range(n_representatives)]
    subs = [[next(it).title() for _ in range(3)] for _ in reps]
    leaves = [[next(it).title() for _ in range(3)] for _ in reps]
    noise = [next(it).title() for _ in range(n_noise)]
    distractors = [f"{p.title()} Stubs" for p in itertools.islice(it, 3)]
    distractors += ["List Of " + p.title() for p in itertools.islice(it, 2)]
    filler = _pseudo_words(60, 3, rng, exclude=words)

    area_title, other_title = "Synthetic Area", "Other Field"

    def norm(t: str) -> str:
        return "_".join(t.lower().split())

    titles = [area_title, other_title] + reps + distractors
    titles += [s for group in subs for s in group] + [s for group in leaves for s in group] + noise
    # duplicates and junk the ingest step must drop
    titles += ["synthetic area", reps[0].upper(), "---", "(...)"]

    edges = [(norm(area_title), norm(r)) for r in reps]
    edges += [(norm(area_title), norm(d)) for d in distractors]
    for r, group, lgroup in zip(reps, subs, leaves):
        edges += [(norm(r), norm(s)) for s in group]
        edges += [(norm(s), norm(lf)) for s, lf in zip(group, lgroup)]
    for i, d in enumerate(distractors):
        edges += [(norm(d), norm(noise[(2 * i + j) % n_noise])) for j in range(2)]
    edges += [(norm(other_title), norm(n)) for n in noise]
    # a cycle back up the tree
    edges.append((norm(leaves[0][0]), norm(reps[0])))

    def text(topics: list[str]) -> str:
        n_fill = rng.integers(0, 3, size=len(topics))
        fill = rng.integers(len(filler), size=int(n_fill.sum())).tolist()
        lower = rng.random(len(topics)) < 0.5
        out = []
        pos = 0
        for t, nf, low in zip(topics, n_fill, lower):
            out.extend(filler[j] for j in fill[pos : pos + nf])
            pos += nf
            out.append(t.lower() if low else t)
        return " ".join(out) + "."

    docs = []
    for _ in range(n_docs):
        kind = rng.random()
        if kind < 0.35:
            # overview article: the area and several of its main topics
            chosen = [reps[i] for i in rng.choice(n_representatives, size=rng.integers(3, 7), replace=False)]
            seq = chosen + [area_title] * int(rng.integers(1, 3))
        elif kind < 0.70:
            # article about one representative topic and its subtopics
            i = rng.integers(n_representatives)
            pool = subs[i] + leaves[i]
            seq = [reps[i]] + [pool[j] for j in rng.integers(len(pool), size=rng.integers(3, 7))]
        elif kind < 0.80:
            i = rng.integers(len(distractors))
            seq = [distractors[i]] + [noise[j] for j in rng.integers(n_noise, size=rng.integers(3, 7))]
        else:
            seq = [noise[j] for j in rng.integers(n_noise, size=rng.integers(4, 9))]
            if rng.random() < 0.3:
                seq.append(other_title)
        seq = [seq[j] for j in rng.permutation(len(seq))]
        docs.append(text(seq))

    return MiniWiki(norm(area_title), titles, edges, docs, [norm(r) for r in reps])
