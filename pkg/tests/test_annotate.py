from echotrace import annotate
from echotrace.corpus import ConversationTriple


def make_triple(op="alpha beta", pc="gamma", exp="alpha", tid="t1", depth=1):
    return ConversationTriple(
        triple_id=tid, op_text="T\n" + op, pc_text=pc, explanation_text=exp,
        op_author="a", pc_depth=depth, created_at=1000)


def test_dep_role_mapping():
    assert annotate.dep_role("nsubj") == "subject"
    assert annotate.dep_role("nsubjpass") == "subject"
    assert annotate.dep_role("csubj") == "subject"
    assert annotate.dep_role("csubjpass") == "subject"
    assert annotate.dep_role("agent") == "subject"
    assert annotate.dep_role("expl") == "subject"
    assert annotate.dep_role("dobj") == "object"
    assert annotate.dep_role("dative") == "object"
    assert annotate.dep_role("attr") == "object"
    assert annotate.dep_role("oprd") == "object"
    assert annotate.dep_role("amod") == "other"
    assert annotate.dep_role("") == "other"


def test_builtin_annotation_shapes():
    [at] = annotate.annotate_triples([make_triple()])
    assert at.op.length == 3  # "T alpha beta" after title joining
    assert [t.pos for t in at.op.tokens]
    assert all(t.dep_role == "other" for t in at.op.tokens)
    assert not any(t.is_entity for t in at.op.tokens)
    assert [t.index for t in at.op.tokens] == list(range(at.op.length))


def test_builtin_tagger_basics():
    tagger = annotate.BuiltinTagger()
    assert tagger.tag("the") == "DET"
    assert tagger.tag("quickly") == "ADV"
    assert tagger.tag(".") == "PUNCT"
    assert tagger.tag("$") == "SYM"
    assert tagger.tag("42") == "NUM"
    assert tagger.tag("@url@") == "X"
    assert tagger.tag("London") == "PROPN"
    assert tagger.tag("chair") == "NOUN"


def test_exchange_annotation_consumed_verbatim():
    triple = make_triple()
    exchange = {
        "t1:op": [
            {"text": "T", "upos": "NOUN", "dep": "nsubj", "ent": "PERSON"},
            {"text": "alpha", "upos": "VERB", "dep": "dobj", "ent": ""},
            {"text": "beta", "upos": "WEIRD", "dep": "xx", "ent": "CARDINAL"},
        ],
        "t1:pc": [{"text": "gamma", "upos": "NOUN", "dep": "amod", "ent": "ORG"}],
        "t1:exp": [{"text": "alpha", "upos": "NOUN", "dep": "", "ent": ""}],
    }
    [at] = annotate.annotate_triples([triple], exchange)
    op = at.op.tokens
    assert [t.pos for t in op] == ["NOUN", "VERB", "X"]  # unknown tag maps to X
    assert [t.dep_role for t in op] == ["subject", "object", "other"]
    assert [t.is_entity for t in op] == [True, False, False]  # CARDINAL filtered
    assert at.pc.tokens[0].is_entity  # ORG is a listed type
    assert at.op.tokens[1].stem == "alpha"


def test_exchange_missing_doc_drops_triple():
    triples = [make_triple(tid="t1"), make_triple(tid="t2")]
    exchange = {
        "t1:op": [{"text": "x", "upos": "NOUN", "dep": "", "ent": ""}],
        "t1:pc": [{"text": "y", "upos": "NOUN", "dep": "", "ent": ""}],
        "t1:exp": [{"text": "x", "upos": "NOUN", "dep": "", "ent": ""}],
    }
    annotated = annotate.annotate_triples(triples, exchange)
    assert [a.triple_id for a in annotated] == ["t1"]


def test_normalized_docs_keys_and_delta():
    triple = make_triple(exp="!delta thanks for this")
    docs = annotate.normalized_docs(triple)
    assert set(docs) == {"t1:op", "t1:pc", "t1:exp"}
    assert docs["t1:exp"] == "thanks for this"


def test_quote_flags_present_in_docs(fixture_annotated):
    flagged = [tok for at in fixture_annotated
               for tok in at.op.tokens + at.pc.tokens if tok.in_quotes]
    assert flagged, "fixture should contain quoted spans"
    assert all(tok.surface != '"' for tok in flagged)
