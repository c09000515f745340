import random

import pytest

from mmcount.formula import total
from mmcount.mingen import (TransactionDb, TransactionParseError, brute_force_min_generators, cover,
                            decode_generator, encode_mingen, parse_transactions)
from mmcount.minmodel import brute_force_mm, enumerate_minimal_models

from _gen import random_db

ITEM_A, ITEM_B = 0, 1
AB = TransactionDb.from_itemsets([{ITEM_A}, {ITEM_A, ITEM_B}])


def test_parse_examples():
    db = parse_transactions("0 2\n1\n")
    assert db.items == (0, 1, 2)
    assert db.transactions == ((1, frozenset({0, 2})), (2, frozenset({1})))
    assert parse_transactions("") == TransactionDb((), ())
    assert parse_transactions("0 0\n").transactions == ((1, frozenset({0})),)


def test_parse_error_position():
    with pytest.raises(TransactionParseError) as exc:
        parse_transactions("1 2\n3 x4\n")
    assert (exc.value.line, exc.value.column) == (2, 3)


def test_db_invariants():
    with pytest.raises(ValueError):
        TransactionDb((0,), ((1, frozenset()), (1, frozenset())))
    with pytest.raises(ValueError):
        TransactionDb((0,), ((1, frozenset({5})),))


def test_encode_ab():
    enc = encode_mingen(AB)
    pa, pb = enc.item_var[ITEM_A], enc.item_var[ITEM_B]
    q1, q2 = enc.txn_var[1], enc.txn_var[2]
    assert set(enc.formula.clauses) == {(pb, q1), (q2,)}
    assert (pa, pb, q1, q2) == (1, 2, 3, 4)
    assert enc.num_literals == 3


def test_encode_degenerate():
    enc = encode_mingen(TransactionDb.from_itemsets([{0}]))
    assert enc.formula.clauses == ((enc.txn_var[1],),)
    enc = encode_mingen(TransactionDb.from_itemsets([set()], items=[0]))
    assert enc.formula.clauses == ((enc.item_var[0], enc.txn_var[1]),)


def test_decode_examples():
    enc = encode_mingen(AB)
    n = enc.formula.num_vars
    q1, q2, pb = enc.txn_var[1], enc.txn_var[2], enc.item_var[ITEM_B]
    assert decode_generator(total({q1, q2}, range(1, n + 1)), enc) == (frozenset(), {1, 2})
    assert decode_generator(total({pb, q2}, range(1, n + 1)), enc) == ({ITEM_B}, {2})
    empty = encode_mingen(TransactionDb.from_itemsets([], items=[0]))
    assert decode_generator(total(set(), [1]), empty) == (frozenset(), frozenset())


def test_cover_examples():
    assert cover(set(), AB) == {1, 2}
    assert cover({ITEM_B}, AB) == {2}
    assert cover({ITEM_A, ITEM_B}, AB) == {2}


def test_brute_force_generators_examples():
    assert brute_force_min_generators(AB) == {frozenset(), frozenset({ITEM_B})}
    assert brute_force_min_generators(TransactionDb.from_itemsets([{0}])) == {frozenset()}
    assert brute_force_min_generators(TransactionDb.from_itemsets([])) == {frozenset()}
    with pytest.raises(ValueError):
        brute_force_min_generators(TransactionDb.from_itemsets([set(range(17))]))


def test_ab_minimal_models():
    enc = encode_mingen(AB)
    gens = {decode_generator(s, enc)[0] for s in brute_force_mm(enc.formula)}
    assert gens == {frozenset(), frozenset({ITEM_B})}


def test_bijection_and_cover_consistency():
    rng = random.Random(17)
    for _ in range(60):
        db = random_db(rng, max_items=8, max_txns=10)
        enc = encode_mingen(db)
        decoded = [decode_generator(s, enc) for s in enumerate_minimal_models(enc.formula)]
        gens = [g for g, _ in decoded]
        assert len(set(gens)) == len(gens)
        assert set(gens) == brute_force_min_generators(db)
        for g, ids in decoded:
            assert ids == cover(g, db)
