"""Regenerates fixture_10k.jsonl and its expected statistics.

The statistics are counted here independently of the C++ code: tokens are
lowercased runs of [a-z0-9] joined by single hyphens, stemmed once with
NLTK's original-algorithm Porter stemmer, stripped of trailing hyphens, and
filtered by stopwords.txt.

    python3 tests/data/make_fixture.py
"""

import json
import random
import re
from pathlib import Path

from nltk.stem.porter import PorterStemmer

HERE = Path(__file__).resolve().parent
ROOT = HERE.parent.parent


def stem(stemmer, word):
    return stemmer.stem(word, to_lowercase=False).rstrip("-")


def main():
    rng = random.Random(20240611)
    words = sorted({line.split("\t")[0] for line in (HERE / "porter_reference.tsv").read_text().splitlines()
                    if line and "-" not in line.split("\t")[0]})
    rng.shuffle(words)
    vocab = words[:800]
    weights = [1.0 / (r + 1) for r in range(len(vocab))]
    punct = [".", ",", ";", ":", "(", ")", "!", "?"]

    records = []
    for i in range(10000):
        n = rng.randint(3, 40)
        toks = rng.choices(vocab, weights=weights, k=n)
        out = []
        for t in toks:
            if rng.random() < 0.1:
                t = t.capitalize()
            if rng.random() < 0.03:
                t = t + "-" + rng.choice(vocab)
            if rng.random() < 0.1:
                t = t + rng.choice(punct)
            out.append(t)
        split = rng.randint(0, min(6, n))
        records.append({
            "id": f"fx{i:05d}",
            "title": " ".join(out[:split]),
            "body": " ".join(out[split:]),
            "pub_year": rng.randint(1990, 2020),
            "kind": rng.choice(["abstract", "full_text"]),
        })
        if not records[-1]["title"] and not records[-1]["body"]:
            records[-1]["title"] = "untitled"

    with open(HERE / "fixture_10k.jsonl", "w") as f:
        for r in records:
            f.write(json.dumps(r, sort_keys=True) + "\n")

    stop = {w.strip() for w in (ROOT / "data" / "stopwords.txt").read_text().splitlines() if w.strip()}
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    cache = {}
    lengths, vocab_seen, total = [], set(), 0
    for r in records:
        text = (r["title"] + " " + r["body"]).lower()
        toks = []
        for w in re.findall(r"[a-z0-9]+(?:-[a-z0-9]+)*", text):
            if w not in cache:
                cache[w] = stem(stemmer, w)
            s = cache[w]
            if s and s not in stop:
                toks.append(s)
        lengths.append(len(toks))
        vocab_seen.update(toks)
        total += len(toks)
    lengths.sort()
    median = lengths[(len(lengths) - 1) // 2]
    with open(HERE / "fixture_10k_stats.tsv", "w") as f:
        f.write("total_words\tunique_words\tcorpus_size\tmedian_words_per_doc\n")
        f.write(f"{total}\t{len(vocab_seen)}\t{len(records)}\t{median}\n")


if __name__ == "__main__":
    main()
