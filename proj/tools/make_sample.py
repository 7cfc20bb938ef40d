#!/usr/bin/env python3
"""Writes the 200-article news-like sample used by the density tests.

Outputs (into the directory given as the only argument):
  sample200.jsonl      id, title, author, text, label
  sample200.vec        word vectors for every lowercase word in the sample
  sample200.plan       experiment plan used by the end-to-end tests

Deterministic: reruns produce identical files.
"""

import json
import math
import random
import sys
from pathlib import Path

SEED = 20231

TOPICS = {
    "health": {
        "nouns": "virus vaccine hospital patient doctor nurse infection symptom treatment trial dose mask "
                 "outbreak pandemic clinic ventilator antibody immunity variant test quarantine lockdown "
                 "disease fever cough epidemic researcher study medicine pharmacy protein cell".split(),
        "verbs": "spread infected tested recovered treated vaccinated hospitalized diagnosed prescribed "
                 "isolated screened warned monitored".split(),
    },
    "politics": {
        "nouns": "election senator governor campaign ballot voter policy bill law court judge minister "
                 "parliament committee mandate vote debate candidate party administration official "
                 "legislation hearing statement agency budget office reform scandal".split(),
        "verbs": "announced signed vetoed debated approved rejected criticized defended proposed "
                 "appointed investigated endorsed".split(),
    },
    "economy": {
        "nouns": "market economy inflation unemployment stock trade tariff bank loan debt growth "
                 "recession investor company worker wage price supply shortage factory industry "
                 "profit revenue export import currency sector".split(),
        "verbs": "rose fell surged collapsed recovered invested borrowed traded hired closed "
                 "expanded cut".split(),
    },
    "science": {
        "nouns": "climate scientist data experiment laboratory evidence model temperature emission "
                 "satellite ocean species energy carbon forecast analysis journal discovery theory "
                 "sample measurement instrument telescope planet".split(),
        "verbs": "measured observed published confirmed estimated predicted recorded discovered "
                 "calculated reviewed".split(),
    },
}

ADJECTIVES = ("new large small recent major serious rapid global local national federal official "
              "public private strong weak high low safe dangerous effective positive negative severe "
              "critical medical economic political scientific accurate misleading massive daily").split()
SENSATIONAL = ("shocking secret deadly explosive outrageous terrifying unbelievable bizarre horrific "
               "hidden incredible alarming").split()
ADVERBS = ("quickly slowly clearly reportedly allegedly recently widely strongly sharply quietly "
           "openly rapidly").split()
FUNCTION = ("the the the a a of of in in to to and and that for on with as by from at was is were "
            "has have had it its this their they he she which who but not also after before while").split()

PEOPLE = [("John", "Miller"), ("Maria", "Lopez"), ("David", "Chen"), ("Sarah", "Johnson"),
          ("Ahmed", "Khan"), ("Elena", "Petrova"), ("James", "Walker"), ("Priya", "Sharma"),
          ("Robert", "Brown"), ("Laura", "Schmidt"), ("Kenji", "Tanaka"), ("Grace", "Okafor"),
          ("Michael", "Rossi"), ("Anna", "Kowalski"), ("Thomas", "Dubois"), ("Fatima", "Haddad")]
ORGS = ["World Health Organization", "United Nations", "European Union", "Supreme Court",
        "White House", "Federal Reserve", "Johns Hopkins University", "Pfizer", "Moderna",
        "Reuters", "Associated Press", "Harvard Medical School", "Wall Street Journal",
        "Centers for Disease Control and Prevention", "National Institutes of Health", "Congress"]
PLACES = ["New York", "Washington", "London", "Beijing", "Wuhan", "Italy", "Brazil", "India",
          "Germany", "Texas", "California", "Hong Kong", "South Korea", "Canada", "Mexico", "Paris"]
AUTHORS = ["Staff Reporter", "Jane Roe", "Alex Morgan", "Chris Patel", "Sam Lee", "Dana White"]

DIM = 24


def sentence(rng, topic, label):
    t = TOPICS[topic]
    words = []
    n = rng.randint(12, 26)
    while len(words) < n:
        r = rng.random()
        if r < 0.34:
            words.append(rng.choice(FUNCTION))
        elif r < 0.58:
            words.append(rng.choice(t["nouns"]))
        elif r < 0.68:
            words.append(rng.choice(t["verbs"]))
        elif r < 0.78:
            pool = SENSATIONAL if (label == 0 and rng.random() < 0.5) else ADJECTIVES
            words.append(rng.choice(pool))
        elif r < 0.82:
            words.append(rng.choice(ADVERBS))
        elif r < 0.95:
            other = rng.choice(list(TOPICS))
            words.append(rng.choice(TOPICS[other]["nouns"]))
        else:
            kind = rng.random()
            if kind < 0.4:
                first, last = rng.choice(PEOPLE)
                words.extend([first, last] if rng.random() < 0.6 else [last])
            elif kind < 0.7:
                words.extend(rng.choice(ORGS).split())
            else:
                words.extend(rng.choice(PLACES).split())
    # Sentence-initial capital; trailing period.
    first = words[0]
    words[0] = first[0].upper() + first[1:]
    text = " ".join(words)
    if rng.random() < 0.15:
        text = text.replace(" and ", ", and ", 1)
    return text + "."


def article(rng, idx, label):
    topic = rng.choice(list(TOPICS))
    paragraphs = []
    n_sent = rng.randint(18, 30)
    sents = [sentence(rng, topic, label) for _ in range(n_sent)]
    for i in range(0, n_sent, 5):
        paragraphs.append(" ".join(sents[i:i + 5]))
    t = TOPICS[topic]
    adj = rng.choice(SENSATIONAL if label == 0 else ADJECTIVES)
    title_words = [adj.capitalize(), rng.choice(t["nouns"]).capitalize(), rng.choice(t["verbs"]),
                   rng.choice(["in", "after", "amid", "as"]), rng.choice(PLACES)]
    return {
        "id": f"s{idx:03d}",
        "title": " ".join(title_words),
        "author": rng.choice(AUTHORS),
        "text": "\n\n".join(paragraphs),
        "label": label,
    }


def unit(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def vectors(rng, words):
    centroids = {name: unit([rng.gauss(0, 1) for _ in range(DIM)]) for name in TOPICS}
    centroids["adj"] = unit([rng.gauss(0, 1) for _ in range(DIM)])
    centroids["entity"] = unit([rng.gauss(0, 1) for _ in range(DIM)])
    topic_of = {}
    for name, t in TOPICS.items():
        for w in t["nouns"] + t["verbs"]:
            topic_of.setdefault(w, name)
    for w in ADJECTIVES + SENSATIONAL + ADVERBS:
        topic_of.setdefault(w, "adj")
    out = {}
    for w in sorted(words):
        base = centroids.get(topic_of.get(w, "entity"))
        noise = [rng.gauss(0, 0.6) for _ in range(DIM)]
        if w in FUNCTION:
            v = [x * 0.3 for x in noise]
        else:
            v = [b + x for b, x in zip(base, noise)]
        out[w] = v
    return out


def tokens(text):
    strip = ".,;:!?\"'()"
    for raw in text.lower().split():
        w = raw.strip(strip)
        if w:
            yield w


def main():
    out_dir = Path(sys.argv[1])
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    arts = [article(rng, i, i % 2) for i in range(200)]
    with open(out_dir / "sample200.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for a in arts:
            f.write(json.dumps(a, ensure_ascii=False) + "\n")

    vocab = set()
    for a in arts:
        vocab.update(tokens(a["text"]))
        vocab.update(tokens(a["title"]))
    vecs = vectors(rng, vocab)
    with open(out_dir / "sample200.vec", "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{DIM} {len(vecs)}\n")
        for w, v in vecs.items():
            f.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    with open(out_dir / "sample200.plan", "w", encoding="utf-8", newline="\n") as f:
        f.write("# small end-to-end plan over the density sample\n"
                "corpus = sample200.jsonl\n"
                "embeddings = sample200.vec\n"
                "featurizer = hashed-bow\n"
                "hash_dim = 512\n"
                "trials = 3\n"
                "seed = 7\n"
                "learning_rate = 0.05\n"
                "epochs = 5\n"
                "k = 0.10, 0.30\n"
                "view = keyword\n"
                "view = pos\n"
                "view = ner\n"
                "view = title\n"
                "view = keyword@0.30+title\n")


if __name__ == "__main__":
    main()
