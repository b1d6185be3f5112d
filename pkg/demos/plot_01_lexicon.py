"""
Building a topic lexicon and tokenizing text
============================================

Titles become lowercase underscore phrases; documents become sequences of
topic ids by greedy longest match.
"""

from fastkate import build_corpus, build_lexicon
from fastkate.lexicon import LexiconStats

titles = ["Artificial Intelligence", "Machine learning", "Deep Learning",
          "Learning", "Robotics", "AI", "ai", "?!..."]
stats = LexiconStats()
lex = build_lexicon(titles, stats)
print(stats)
print(lex.id_to_phrase)

# "deep learning" wins over "learning" because the longer phrase matches first
docs = ["Deep learning is a branch of machine learning.",
        "Robotics uses deep learning and AI.",
        "hello"]  # nothing matched: dropped by the minimum length
corpus = build_corpus(docs, lex)
for ids in corpus.documents:
    print([lex.id_to_phrase[t] for t in ids])

# frequencies were counted along the way
print(dict(zip(lex.id_to_phrase, lex.frequency.tolist())))
