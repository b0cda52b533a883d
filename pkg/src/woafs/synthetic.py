"""Synthetic review corpora with a known set of informative words.

Each document is a bag of words drawn independently: an informative word
appears with probability ``p_hi`` in reviews of the class it leans towards
and ``p_lo`` otherwise; a noise word appears with probability ``p_noise``
in any review. Positive-leaning informative words and half of the noise
words go to the positive seed list, the rest to the negative one. A few
neutral filler words (in neither list) are added, some frequent enough to
be removed by the "more than half the records" rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import NEGATIVE, POSITIVE, Document, WordList

FILLERS = ("the", "phone", "is", "i", "it", "and")


@dataclass(frozen=True)
class SyntheticCorpus:
    documents: list
    positive_words: WordList
    negative_words: WordList
    informative: frozenset

    def write(self, directory) -> dict:
        """Write reviews and word lists; returns the four paths by role."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = {
            "positive_reviews": directory / "reviews-positive.txt",
            "negative_reviews": directory / "reviews-negative.txt",
            "positive_words": directory / "words-positive.txt",
            "negative_words": directory / "words-negative.txt",
        }
        for key, label in (("positive_reviews", POSITIVE), ("negative_reviews", NEGATIVE)):
            lines = [" ".join(d.tokens) for d in self.documents if d.label == label]
            paths[key].write_text("\n".join(lines) + "\n", encoding="utf-8")
        for key, wl in (("positive_words", self.positive_words), ("negative_words", self.negative_words)):
            paths[key].write_text("# synthetic seed list\n" + "\n".join(sorted(wl.words)) + "\n", encoding="utf-8")
        return paths


def generate_corpus(n_docs=2000, n_informative=40, n_noise=400, p_hi=0.15, p_lo=0.05,
                    p_noise=0.03, seed=0) -> SyntheticCorpus:
    rng = np.random.default_rng(seed)
    # names carry no hint of informativeness and sort in random order
    names = [f"w{i:04d}" for i in rng.permutation(n_informative + n_noise)]
    half_inf = n_informative // 2
    pos_inf = names[:half_inf]
    neg_inf = names[half_inf:n_informative]
    noise = names[n_informative:]
    vocab = pos_inf + neg_inf + noise
    n_pos_inf = len(pos_inf)

    labels = np.array([POSITIVE if i % 2 == 0 else NEGATIVE for i in range(n_docs)])
    rng.shuffle(labels)
    # neutral fillers: the first half is very frequent, the rest rare-ish
    filler_p = np.where(np.arange(len(FILLERS)) < len(FILLERS) // 2, 0.8, 0.05)

    docs = []
    for i, label in enumerate(labels):
        probs = np.full(len(vocab), p_noise)
        leaning_pos = label == POSITIVE
        probs[:n_pos_inf] = p_hi if leaning_pos else p_lo
        probs[n_pos_inf:n_informative] = p_lo if leaning_pos else p_hi
        words = [vocab[j] for j in np.flatnonzero(rng.random(len(vocab)) < probs)]
        words += [FILLERS[j] for j in np.flatnonzero(rng.random(len(FILLERS)) < filler_p)]
        if not words:
            words = [FILLERS[0]]
        order = rng.permutation(len(words))
        docs.append(Document(tuple(words[j] for j in order), str(label), i))

    noise_pos = frozenset(noise[: n_noise // 2])
    noise_neg = frozenset(noise[n_noise // 2:])
    return SyntheticCorpus(
        docs,
        WordList(POSITIVE, frozenset(pos_inf) | noise_pos),
        WordList(NEGATIVE, frozenset(neg_inf) | noise_neg),
        frozenset(pos_inf + neg_inf),
    )
