"""Generate the bundled synthetic fixture corpus under tests/fixtures/.

Produces submissions.jsonl / comments.jsonl (20 extractable triples plus
decoy threads that must NOT produce triples) and annotations.jsonl in the
token-annotation exchange format, with deterministic pseudo-random POS,
dependency, and entity assignments so every feature dimension is exercised.

Run from the repo root:  python scripts/make_fixture_corpus.py
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timezone
from pathlib import Path

from echotrace.annotate import BuiltinTagger
from echotrace.corpus import extract_triples, load_dump
from echotrace.annotate import normalized_docs
from echotrace.textprep import token_texts

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

DELTA_FORMS = ["Δ", "δ", "&;#8710;", "!delta"]

DEP_LABELS = [
    "nsubj", "dobj", "amod", "prep", "pobj", "det", "aux", "advmod", "attr",
    "agent", "dative", "expl", "csubj", "nsubjpass", "oprd", "conj", "cc",
    "compound", "poss", "relcl", "ccomp", "xcomp", "punct",
]
ENT_LABELS = ["PERSON", "ORG", "GPE", "NORP", "LOC", "WORK_OF_ART",
              "CARDINAL", "DATE", "PERCENT"]
OPEN_CLASS = ("NOUN", "VERB", "ADJ", "ADV", "PROPN", "NUM", "X", "INTJ")


def ts(year: int, month: int, day: int, hour: int = 12) -> int:
    return int(datetime(year, month, day, hour, tzinfo=timezone.utc).timestamp())


# Hand-written threads: (title, selftext, [challenger comments], explanation).
# The persuasive comment is the last challenger comment in the chain.
THREADS = [
    ("CMV: most hit music artists today are bad musicians",
     "Music is art and art has no rules, but most popular songs are repetitive "
     "and the artists do not write their own songs. See https://example.com/top40 "
     "for the charts. I think they are performers, not musicians.",
     ["Music appreciation is a skill, and it is all about pattern recognition. "
      "Songs serve different purposes: you can dance, study, or sleep to them. "
      "Pop music is really good in some situations."],
     "I guess I never really looked at it as music serving different purposes. "
     "I can see how pop music fills a purpose, and the artist does not have to "
     "write the song."),

    ("CMV: a flat tax would be fair for everyone",
     "The poor would only pay very little because they make so little money. "
     "The rich will also pay their fair amounts. A flat tax would eliminate "
     "the revenue service entirely.",
     ["> A flat tax would eliminate the revenue service entirely.\n"
      "How is a person supposed to pay for school if they never have enough "
      "money on a reliable basis? A millionaire is not harmed by paying a "
      "higher rate.",
      "Think about what you mean by fair. Equal treatment is not equal footing "
      "when people start with different money."],
     "They start with a minimum wage job and work up, but plenty of people do "
     "not have enough money right now. Fair footing matters more than I thought."),

    ("CMV: escort quests in games are good design",
     "I keep seeing people complain about escort quests. Consider the "
     "alternatives: the character moves at your walking speed, which is "
     "terrible, or at your run speed, which is worse.",
     ["The best solution is allowing the player to select a speed equal to "
      "the escort. The frustration does not stem from moving slower. It is "
      "about being able to match pace."],
     "The annoying thing is just that they are slow. Running at pace with "
     "them would be equally annoying. You could be right about matching pace."),

    ("CMV: school uniforms help students focus",
     "Uniforms remove distraction and the \" fashion contest \" that happens "
     "in every school. Students focus on learning instead of clothes.",
     ["Uniforms do not remove the contest, they move it to shoes and bags. "
      "Students always find a way to signal status. EDIT: typo fixed.\n"
      "The focus argument has no evidence behind it."],
     "The status signal point convinced me. Students will signal with shoes "
     "and bags anyway, so uniforms do not remove the contest."),

    ("CMV: remote work is better for most office jobs",
     "Commuting wastes two hours every day. Remote work gives workers time "
     "and focus. Offices exist for managers, not for workers.",
     ["Remote work isolates junior workers who learn by watching others. "
      "An office gives them mentors and structure. Hello, users of CMV should "
      "be removed.\nManagers also coordinate work that workers cannot see."],
     "I had not considered junior workers. Mentors and structure matter for "
     "people learning a job, even if commuting wastes time."),

    ("CMV: zoos should be banned everywhere",
     "Keeping an animal in a cage for entertainment is cruel. A zoo cannot "
     "give a large animal the space it needs. Watch https://example.org/doc "
     "and tell me otherwise.",
     ["Modern zoos fund conservation and breed endangered animals that would "
      "otherwise vanish. The cage you imagine is a century old picture.",
      "Sanctuaries cannot replace zoos for every species, and education "
      "changes how children treat animals."],
     "The conservation funding point changed my view. A modern zoo breeds "
     "endangered animals and funds real work, not just cages."),

    ("CMV: books are always better than their movies",
     "A book gives you the character's thoughts directly. Movies cut the "
     "story to fit two hours. Every adaptation loses the best parts.",
     ["“ Always ” is doing a lot of work there. Some movies improve "
      "weak books by cutting filler. Adaptation is translation, not copying."],
     "Translation is a better frame than copying. Some movies do improve "
     "weak books by cutting filler, so always was too strong."),

    ("CMV: tipping should be replaced by service charges",
     "Tipping hides the true price and makes a server's wage depend on luck. "
     "A fixed service charge is honest and fair to every server.",
     ["In practice servers earn more under tipping, and many prefer it. Ask "
      "the servers r/serverlife before deciding what is fair for them."],
     "I assumed servers hate tipping, but many earn more and prefer it. "
     "Asking the servers is fair."),
]

WORD_POOL = [
    "people", "argument", "evidence", "reason", "system", "change", "policy",
    "history", "science", "health", "market", "culture", "freedom", "society",
    "problem", "question", "answer", "example", "government", "children",
    "running", "tradition", "traditions", "traditional", "believe", "belief",
    "create", "created", "teacher", "student", "normal", "value", "benefit",
    "risk", "choice", "decision", "action", "effect", "cause", "result",
]


def build_generated_threads(rng: random.Random) -> list:
    threads = []
    for n in range(12):
        topic = rng.sample(WORD_POOL, 8)
        title = f"CMV: the {topic[0]} debate needs better {topic[1]}"
        body = (f"Every {topic[0]} discussion turns into noise. The {topic[2]} is "
                f"weak and the {topic[3]} gets ignored. I think {topic[1]} would "
                f"fix the {topic[0]} problem. My view is that {topic[4]} matters "
                f"more than {topic[5]}.")
        pc_words = rng.sample(WORD_POOL, 6)
        comments = []
        if n % 3 == 2:
            comments.append(f"You are wrong about the {topic[2]}, but let me add "
                            f"context about {pc_words[0]} first.")
        comments.append(
            f"Consider the {pc_words[0]} angle: \" {topic[0]} without {pc_words[1]} \" "
            f"is an empty slogan. Real {pc_words[2]} requires {pc_words[3]} and "
            f"{topic[4]}. The {pc_words[4]} shows this clearly.")
        echoed = [topic[0], topic[4], pc_words[0], pc_words[3]]
        exp = (f"The {echoed[2]} angle convinced me. I see now that {echoed[0]} "
               f"needs {echoed[3]}, and {echoed[1]} still matters. "
               f"Fresh {rng.choice(WORD_POOL)} helps too.")
        threads.append((title, body, comments, exp))
    return threads


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(99)
    threads = THREADS + build_generated_threads(rng)
    assert len(threads) == 20

    # Train: 12 (2017-01 .. 2017-12), validation: 4 (2018-03 .. 2018-06),
    # test: 4 (2018-09 .. 2019-01-31). Latest ts anchors the windows.
    stamps = (
        [ts(2017, m + 1, 5 + m) for m in range(12)]
        + [ts(2018, 3, 3), ts(2018, 4, 14), ts(2018, 6, 9), ts(2018, 7, 31)]
        + [ts(2018, 9, 2), ts(2018, 11, 20), ts(2019, 1, 10), ts(2019, 1, 31)]
    )
    order = list(range(20))
    rng.shuffle(order)

    submissions = []
    comments = []
    for slot, thread_idx in enumerate(order):
        title, body, chain, exp = threads[thread_idx]
        n = slot + 1
        t0 = stamps[slot]
        sub_id, op_author = f"s{n}", f"op_user_{n}"
        submissions.append({"id": sub_id, "author": op_author,
                            "created_utc": t0 - 86400, "title": title, "selftext": body})
        parent = sub_id
        for j, text in enumerate(chain):
            cid = f"c{n}_{j + 1}"
            comments.append({"id": cid, "author": f"challenger_{n}_{j + 1}",
                             "created_utc": t0 - 3600 * (len(chain) - j),
                             "body": text, "parent_id": parent, "link_id": sub_id})
            parent = cid
        delta = DELTA_FORMS[slot % len(DELTA_FORMS)]
        comments.append({"id": f"d{n}", "author": op_author, "created_utc": t0,
                         "body": f"{delta} {exp}", "parent_id": parent,
                         "link_id": sub_id})

    # Decoy threads: none of these may yield a triple.
    t_decoy = ts(2017, 6, 1)
    submissions.append({"id": "s90", "author": "op_user_90", "created_utc": t_decoy,
                        "title": "CMV: decoy one", "selftext": "body text here"})
    comments.extend([
        {"id": "c90_1", "author": "challenger_90", "created_utc": t_decoy + 100,
         "body": "a counterpoint", "parent_id": "s90", "link_id": "s90"},
        # Delta awarded by a non-author user.
        {"id": "c90_2", "author": "bystander", "created_utc": t_decoy + 200,
         "body": "Δ great point", "parent_id": "c90_1", "link_id": "s90"},
        # Author delta directly on the submission (no persuasive comment).
        {"id": "c90_3", "author": "op_user_90", "created_utc": t_decoy + 300,
         "body": "!delta to myself", "parent_id": "s90", "link_id": "s90"},
    ])
    submissions.append({"id": "s91", "author": "op_user_91", "created_utc": t_decoy,
                        "title": "CMV: decoy two", "selftext": "more body text"})
    comments.extend([
        {"id": "c91_1", "author": "challenger_91", "created_utc": t_decoy + 100,
         "body": "[deleted]", "parent_id": "s91", "link_id": "s91"},
        # Delta reply to a deleted persuasive comment.
        {"id": "d91", "author": "op_user_91", "created_utc": t_decoy + 200,
         "body": "δ fine you win", "parent_id": "c91_1", "link_id": "s91"},
        # Delta reply whose parent id resolves nowhere.
        {"id": "d92", "author": "op_user_91", "created_utc": t_decoy + 300,
         "body": "!delta lost thread", "parent_id": "missing_1", "link_id": "s91"},
    ])

    with open(FIXTURES / "submissions.jsonl", "w", encoding="utf-8") as handle:
        for sub in submissions:
            handle.write(json.dumps(sub, ensure_ascii=False) + "\n")
    with open(FIXTURES / "comments.jsonl", "w", encoding="utf-8") as handle:
        for com in comments:
            handle.write(json.dumps(com, ensure_ascii=False) + "\n")

    subs = load_dump(FIXTURES / "submissions.jsonl")
    coms = load_dump(FIXTURES / "comments.jsonl")
    triples = extract_triples(subs.submissions, coms.comments)
    assert len(triples) == 20, f"expected 20 triples, got {len(triples)}"

    tagger = BuiltinTagger()
    with open(FIXTURES / "annotations.jsonl", "w", encoding="utf-8") as handle:
        for triple in triples:
            for key, text in normalized_docs(triple).items():
                doc_rng = random.Random(f"ann:{key}")
                tokens = []
                for surface in token_texts(text):
                    pos = tagger.tag(surface)
                    alpha = any(ch.isalpha() for ch in surface)
                    if alpha and pos in OPEN_CLASS and doc_rng.random() < 0.25:
                        pos = doc_rng.choice(OPEN_CLASS)
                    dep = doc_rng.choice(DEP_LABELS)
                    ent = ""
                    if alpha and doc_rng.random() < 0.08:
                        ent = doc_rng.choice(ENT_LABELS)
                    tokens.append({"text": surface, "upos": pos, "dep": dep, "ent": ent})
                handle.write(json.dumps({"doc_id": key, "tokens": tokens},
                                        ensure_ascii=False) + "\n")
    print(f"wrote fixtures for {len(triples)} triples to {FIXTURES}")


if __name__ == "__main__":
    main()
