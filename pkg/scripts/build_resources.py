"""Regenerate the bundled resource files under src/chatprofiler/data/.

Needs the optional ``resources`` extras (wordfreq, vaderSentiment):

    pip install wordfreq vaderSentiment
    python scripts/build_resources.py
"""
from __future__ import annotations

import argparse
import hashlib
import os
from pathlib import Path

import numpy as np

from chatprofiler.textutil import tokenize

DATA = Path(__file__).resolve().parents[1] / "src" / "chatprofiler" / "data"

# 15 content words for each of the 32 EmpatheticDialogues emotion categories
EMPATHY_WORDS = {
    "surprised": "surprised shocked amazed wow unexpected sudden startled astonished stunned unbelievable believe realize discovered found incredible",
    "excited": "excited thrilled exciting cannot wait looking forward adventure trip fun amazing awesome great party yay",
    "angry": "angry mad upset furious rude yelled unfair frustrating annoyed fight argue hate blame outrageous temper",
    "proud": "proud accomplished achievement graduated promoted succeeded award earned worked hard congratulations congrats honor impressive milestone",
    "sad": "sad unhappy crying cried tears miss lost passed away gone heartbroken depressed down grief sorrow",
    "annoyed": "annoyed irritated bothered frustrating noisy rude waiting traffic late ugh stuck pesky constant nuisance tired",
    "grateful": "grateful thankful thank thanks appreciate appreciative blessed lucky fortunate kind helped support generous gift gratitude",
    "lonely": "lonely alone isolated lonesome empty friends nobody company miss distance apart solitude abandoned quiet single",
    "afraid": "afraid scared fear frightened worried nervous dark spider creepy noise panic shaking dangerous threat safe",
    "terrified": "terrified horrified panicked petrified horror nightmare scream frozen trembling scariest dread terror attack accident emergency",
    "guilty": "guilty sorry regret apologize apologized fault mistake blame forgive forgiveness ashamed bad wrong lied conscience",
    "impressed": "impressed impressive talented skilled brilliant remarkable admire admired wonderful outstanding excellent gifted clever genius inspiring",
    "disgusted": "disgusted disgusting gross nasty smell vomit rotten filthy dirty sick revolting yuck mold trash horrible",
    "hopeful": "hopeful hope hoping wish optimistic positive future chance better improve pray faith dream possibility opportunity",
    "confident": "confident sure certain ready capable prepared strong believe trust myself skills succeed ace nailed secure",
    "furious": "furious livid enraged outraged rage infuriated seething irate angrier fuming explode unacceptable betrayed cheated insulted",
    "anxious": "anxious anxiety nervous worry worried stress stressed stressful uneasy tense restless overwhelmed interview exam doctor",
    "anticipating": "anticipating anticipate expecting await waiting soon upcoming eager countdown plan planning preparing weekend vacation arrival",
    "joyful": "joyful joy happy happiness delighted cheerful glad smiling laugh laughing celebrate wonderful blissful elated ecstatic",
    "nostalgic": "nostalgic memories remember remembering childhood old days past reminds reminisce grew young school photos tradition",
    "disappointed": "disappointed disappointing letdown failed failure expected unfortunately sadly rejected cancelled missed bummed shame pity regret",
    "prepared": "prepared preparation ready organized planned practice practiced studied training checklist packed early ahead supplies stocked",
    "jealous": "jealous envy envious unfair wish rich lucky better neighbor sibling coworker compare resent covet bitter",
    "content": "content satisfied peaceful calm relaxed comfortable fine okay pleased enough simple cozy serene balanced grateful",
    "devastated": "devastated crushed shattered destroyed heartbroken tragedy tragic loss died death funeral cancer divorce terrible hurts",
    "embarrassed": "embarrassed embarrassing awkward humiliated blushed ashamed clumsy tripped fell laughed mortified cringe silly oops stupid",
    "caring": "caring care cared sympathy empathy compassion understand understanding support comfort listen feel gentle hug concern",
    "sentimental": "sentimental emotional touched moved heartwarming memories cherish keepsake treasure tears meaningful precious love special nostalgia",
    "trusting": "trusting trust trusted rely reliable depend honest loyal faithful believe confidence friend secret promise open",
    "ashamed": "ashamed shame shameful guilty sorry embarrassed regret disgraced wrong cheated lied mistake humiliated remorse apologize",
    "apprehensive": "apprehensive hesitant uneasy unsure uncertain doubt doubtful wary cautious nervous worried concerned reluctant risky afraid",
    "faithful": "faithful loyal devoted committed dedicated faith god church pray prayer believe loyalty commitment promise steadfast",
}

# high-frequency function words left out of the embedding table
STOPWORDS = set(
    "a an the and or but if of to in on at by for with from as is are was were be been being am "
    "i me my you your he she it we they them his her its our their this that these those "
    "do does did have has had will would can could should shall may might must not no "
    "so than then there here what which who whom when where why how all any some".split()
)


def build_frequency(n: int) -> None:
    import wordfreq

    rows = []
    seen = set()
    for word in wordfreq.top_n_list("en", n * 2, wordlist="large"):
        if tokenize(word) != [word] or word in seen:
            continue
        count = max(1, round(wordfreq.word_frequency(word, "en", wordlist="large") * 1e9))
        rows.append((word, count))
        seen.add(word)
        if len(rows) == n:
            break
    with open(DATA / "frequency.tsv", "w", encoding="utf-8") as fh:
        for word, count in rows:
            fh.write(f"{word}\t{count}\n")
    print(f"frequency.tsv: {len(rows)} tokens")


def build_sentiment() -> None:
    import vaderSentiment
    from vaderSentiment import vaderSentiment as vs

    lex_path = Path(os.path.dirname(vaderSentiment.__file__)) / "vader_lexicon.txt"
    polarity = {}
    for line in lex_path.read_text(encoding="utf-8").splitlines():
        parts = line.split("\t")
        if len(parts) < 2:
            continue
        word = parts[0].strip().lower()
        if tokenize(word) == [word] and word not in polarity:
            polarity[word] = float(parts[1])
    negations = sorted({w for w in vs.NEGATE if tokenize(w) == [w]})
    boosters = {w: v for w, v in vs.BOOSTER_DICT.items() if tokenize(w) == [w] and w not in negations}
    with open(DATA / "sentiment.tsv", "w", encoding="utf-8") as fh:
        fh.write("# valences from the VADER lexicon (MIT license)\n")
        for word in sorted(polarity):
            fh.write(f"{word}\t{polarity[word]}\n")
        fh.write("#boosters\n")
        for word in sorted(boosters):
            fh.write(f"{word}\t{boosters[word]}\n")
        fh.write("#negations\n")
        for word in negations:
            fh.write(f"{word}\n")
    print(f"sentiment.tsv: {len(polarity)} polar, {len(boosters)} boosters, {len(negations)} negations")


def _hashed_gaussian(key: str, dim: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "little")
    return np.random.default_rng(seed).standard_normal(dim)


def build_embeddings(n: int, dim: int) -> None:
    """Deterministic word vectors: a per-word random direction plus a shared
    component for words with the same 5-letter prefix, so inflections land close."""
    words = []
    for line in (DATA / "frequency.tsv").read_text(encoding="utf-8").splitlines():
        word = line.split("\t")[0]
        if word in STOPWORDS or not word.isalpha():
            continue
        words.append(word)
        if len(words) == n:
            break
    with open(DATA / "embeddings.txt", "w", encoding="utf-8") as fh:
        for word in words:
            vec = _hashed_gaussian("w:" + word, dim)
            if len(word) > 5:
                vec = vec + _hashed_gaussian("p:" + word[:5], dim)
            vec /= np.linalg.norm(vec)
            fh.write(word + " " + " ".join(f"{v:.4f}" for v in vec) + "\n")
    print(f"embeddings.txt: {len(words)} x {dim}")


def build_empathy() -> None:
    raw = [w for words in EMPATHY_WORDS.values() for w in words.split()]
    assert len(EMPATHY_WORDS) == 32 and all(len(w.split()) == 15 for w in EMPATHY_WORDS.values())
    unique = sorted(set(raw))
    with open(DATA / "empathy.txt", "w", encoding="utf-8") as fh:
        fh.write(f"# raw entries: {len(raw)} (15 content words x 32 emotion categories); unique: {len(unique)}\n")
        for w in unique:
            fh.write(w + "\n")
    print(f"empathy.txt: {len(raw)} raw, {len(unique)} unique")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vocab", type=int, default=50_000)
    ap.add_argument("--embedding-vocab", type=int, default=10_000)
    ap.add_argument("--dim", type=int, default=32)
    args = ap.parse_args()
    build_empathy()
    build_frequency(args.vocab)
    build_sentiment()
    build_embeddings(args.embedding_vocab, args.dim)


if __name__ == "__main__":
    main()
