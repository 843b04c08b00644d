"""English Snowball (Porter2) stemmer.

Self-contained implementation of the standard algorithm
(https://snowballstem.org/algorithms/english/stemmer.html), used to
normalize action/object terms before keyword induction.  No stemming
library is pulled in; the whole pipeline depends on these exact stems,
so the algorithm lives here where its test vectors can pin it down.
"""

from __future__ import annotations

import re

_VOWELS = "aeiouy"

_EXCEPTION1 = {
    "skis": "ski",
    "skies": "sky",
    "dying": "die",
    "lying": "lie",
    "tying": "tie",
    "idly": "idl",
    "gently": "gentl",
    "ugly": "ugli",
    "early": "earli",
    "only": "onli",
    "singly": "singl",
    "sky": "sky",
    "news": "news",
    "howe": "howe",
    "atlas": "atlas",
    "cosmos": "cosmos",
    "bias": "bias",
    "andes": "andes",
}

_EXCEPTION2 = {
    "inning", "outing", "canning", "herring", "earring",
    "proceed", "exceed", "succeed",
}

_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")

_LI_ENDING = "cdeghkmnrt"

_REGION_RE = re.compile(r"[^aeiouy]*[aeiouy]+[^aeiouy]")

_STEP2_RULES = [
    ("ization", "ize"),
    ("ational", "ate"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("iveness", "ive"),
    ("tional", "tion"),
    ("biliti", "ble"),
    ("lessli", "less"),
    ("entli", "ent"),
    ("ation", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("ousli", "ous"),
    ("iviti", "ive"),
    ("fulli", "ful"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("abli", "able"),
    ("izer", "ize"),
    ("ator", "ate"),
    ("alli", "al"),
    ("bli", "ble"),
]

_STEP3_RULES = [
    ("ational", "ate"),
    ("tional", "tion"),
    ("alize", "al"),
    ("icate", "ic"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ness", ""),
    ("ful", ""),
]

_STEP4_SUFFIXES = (
    "ement", "ance", "ence", "able", "ible", "ment",
    "ant", "ent", "ism", "ate", "iti", "ous", "ive", "ize",
    "ion", "al", "er", "ic",
)


def _is_vowel(ch: str) -> bool:
    return ch in _VOWELS


def _regions(word: str) -> tuple[int, int]:
    """Start offsets of R1 and R2, with the gener-/commun-/arsen- special cases."""
    if word.startswith(("gener", "arsen")):
        r1 = 5
    elif word.startswith("commun"):
        r1 = 6
    else:
        m = _REGION_RE.match(word)
        r1 = m.end() if m else len(word)
    m = _REGION_RE.match(word, r1)
    r2 = m.end() if m else len(word)
    return r1, r2


def _ends_short_syllable(word: str) -> bool:
    if len(word) == 2:
        return _is_vowel(word[0]) and not _is_vowel(word[1])
    if len(word) >= 3:
        a, b, c = word[-3], word[-2], word[-1]
        return (not _is_vowel(a)) and _is_vowel(b) and c not in _VOWELS + "wxY"
    return False


def _contains_vowel(part: str) -> bool:
    return any(_is_vowel(ch) for ch in part)


def stem(word: str) -> str:
    """Return the Snowball English stem of a single lowercase token."""
    if len(word) <= 2:
        return word
    if word.startswith("'"):
        word = word[1:]
    if word in _EXCEPTION1:
        return _EXCEPTION1[word]
    if len(word) <= 2:
        return word

    # Mark consonant-y as Y so it is excluded from the vowel class.
    chars = list(word)
    for i, ch in enumerate(chars):
        if ch == "y" and (i == 0 or chars[i - 1] in _VOWELS):
            chars[i] = "Y"
    word = "".join(chars)

    r1, r2 = _regions(word)

    # Step 0: trailing apostrophe forms.
    for suf in ("'s'", "'s", "'"):
        if word.endswith(suf):
            word = word[: -len(suf)]
            break

    # Step 1a.
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith(("ied", "ies")):
        word = word[:-3] + ("i" if len(word) > 4 else "ie")
    elif word.endswith(("us", "ss")):
        pass
    elif word.endswith("s") and _contains_vowel(word[:-2]):
        word = word[:-1]

    if word in _EXCEPTION2:
        return word

    # Step 1b.
    if word.endswith(("eedly", "eed")):
        suf = "eedly" if word.endswith("eedly") else "eed"
        if len(word) - len(suf) >= r1:
            word = word[: -len(suf)] + "ee"
    else:
        for suf in ("ingly", "edly", "ing", "ed"):
            if word.endswith(suf):
                stem_part = word[: -len(suf)]
                if _contains_vowel(stem_part):
                    word = stem_part
                    if word.endswith(("at", "bl", "iz")):
                        word += "e"
                    elif word.endswith(_DOUBLES):
                        word = word[:-1]
                    elif _ends_short_syllable(word) and r1 >= len(word):
                        word += "e"
                break

    # Step 1c: y preceded by a non-vowel that is not the first letter.
    if len(word) > 2 and word[-1] in "yY" and not _is_vowel(word[-2]):
        word = word[:-1] + "i"

    # Step 2 (longest suffix, in R1).
    for suf, rep in _STEP2_RULES:
        if word.endswith(suf):
            if len(word) - len(suf) >= r1:
                word = word[: -len(suf)] + rep
            break
    else:
        if word.endswith("ogi"):
            if len(word) - 3 >= r1 and word[-4:-3] == "l":
                word = word[:-1]
        elif word.endswith("li"):
            if len(word) - 2 >= r1 and word[-3:-2] in _LI_ENDING:
                word = word[:-2]

    # Step 3 (in R1; "ative" needs R2).
    if word.endswith("ative"):
        if len(word) - 5 >= r2:
            word = word[:-5]
    else:
        for suf, rep in _STEP3_RULES:
            if word.endswith(suf):
                if len(word) - len(suf) >= r1:
                    word = word[: -len(suf)] + rep
                break

    # Step 4 (longest suffix, in R2; "ion" only after s/t).
    for suf in _STEP4_SUFFIXES:
        if word.endswith(suf):
            if len(word) - len(suf) >= r2:
                if suf != "ion" or word[-4:-3] in ("s", "t"):
                    word = word[: -len(suf)]
            break

    # Step 5.
    if word.endswith("e"):
        if len(word) - 1 >= r2 or (
            len(word) - 1 >= r1 and not _ends_short_syllable(word[:-1])
        ):
            word = word[:-1]
    elif word.endswith("ll") and len(word) - 1 >= r2:
        word = word[:-1]

    return word.replace("Y", "y")
