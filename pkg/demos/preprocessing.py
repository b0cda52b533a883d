"""
From raw reviews to candidate word pools
========================================

Reviews come as one document per line, one file per class. Tokens are
whitespace-separated and lowercased; punctuation stays attached, so
``reception!`` and ``reception`` are different words.
"""
# %%
import tempfile
from pathlib import Path

from woafs.corpus import (apply_frequency_filter, build_candidate_pools, build_vocabulary,
                          load_corpus, load_word_list)
from woafs.synthetic import generate_corpus

workdir = Path(tempfile.mkdtemp())
paths = generate_corpus(n_docs=400, n_informative=10, n_noise=60, seed=1).write(workdir)
docs = load_corpus(paths["positive_reviews"], paths["negative_reviews"])
print(len(docs), "documents; first one:", docs[0].label, docs[0].tokens[:8])

# %%
# The vocabulary counts every occurrence. The filter drops words seen at most
# twice and words occurring more often than half the number of reviews.
vocab = build_vocabulary(docs)
kept = apply_frequency_filter(vocab)
dropped = sorted(set(vocab.entries) - set(kept.entries))
print(f"{len(vocab)} distinct words, {len(kept)} survive; dropped include {dropped[:6]}")

# %%
# Seed lists split the survivors into a positive and a negative pool.
# Words in neither list are neutral and take no further part.
pools = build_candidate_pools(kept, load_word_list(paths["positive_words"], "positive"),
                              load_word_list(paths["negative_words"], "negative"))
print(len(pools.positive_pool), "positive candidates:", pools.positive_pool[:5])
print(len(pools.negative_pool), "negative candidates:", pools.negative_pool[:5])
