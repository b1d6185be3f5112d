"""
Scoring ranked lists and the TF-IDF / TextRank baselines
========================================================
"""

from fastkate import average_precision, mean_average_precision, precision_at_k
from fastkate.evaluation import baseline_textrank, baseline_tfidf
from fastkate.lexicon import TopicLexicon

gold = [f"g{i}" for i in range(15)]
pred = gold[:11] + ["n1", "n2", "n3", "n4"]
print("P@15", round(precision_at_k(pred, gold, 15), 4))
print("AP  ", round(average_precision(pred, gold), 4))
print("AP examples", average_precision(["a", "x"], ["a", "b"]), average_precision(["x", "a"], ["a", "b"]))
print("MAP ", mean_average_precision([0.5, 0.25, 1.0]))

# baselines need only documents and the candidate set
lex = TopicLexicon(["robotics", "machine_learning", "deep_learning", "history"])
docs = ["Machine learning and deep learning in robotics.",
        "Deep learning is machine learning.",
        "The history of robotics."]
cand = {0, 1, 2, 3}
for name, ranking in (("tfidf", baseline_tfidf(cand, docs, lex)),
                      ("textrank", baseline_textrank(cand, docs, lex))):
    print(name, [(lex.id_to_phrase[t], round(s, 3)) for t, s in ranking])
