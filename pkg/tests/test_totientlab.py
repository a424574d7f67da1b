import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from divtorsion.arith import jordan
from divtorsion.totientlab import (
    D_collision_scan,
    collision_scan,
    jordan_table,
    primes_upto,
    prop20_scan,
    spf_sieve,
)


@given(st.integers(2, 3000), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_sieve_table_matches_factorization(n, k):
    assert jordan_table(k, n)[n] == jordan(k, n)


def test_sieve_primitives():
    spf = spf_sieve(30)
    assert spf[15] == 3 and spf[29] == 29 and spf[16] == 2
    assert primes_upto(20) == [2, 3, 5, 7, 11, 13, 17, 19]


def test_small_collisions():
    j1 = collision_scan(1, 20)
    assert any({15, 16} <= set(ns) for ns in j1.pairs())
    assert [15, 16, 20] in j1.pairs()
    assert jordan(2, 15) == jordan(2, 16) == 192


def test_j3_pair():
    rep = collision_scan(3, 30000)
    assert [28268, 28710] in rep.pairs()
    assert jordan(3, 28268) == 19764446869440


def test_no_j4_collisions():
    assert collision_scan(4, 10 ** 5).pairs() == []


def test_d_collisions():
    pairs = D_collision_scan(70).pairs()
    for ns in ([5, 6], [35, 40, 42], [55, 57, 62, 66]):
        assert ns in pairs


def test_prop20():
    a = prop20_scan("A", 10 ** 6)
    assert a.passed and [ns for _, ns in a.classes] == [[7, 8]]
    assert prop20_scan("B", 10 ** 4).passed
    c = prop20_scan("c", 10 ** 4)
    assert c.passed and c.violations == []
    with pytest.raises(ValueError):
        prop20_scan("D", 100)


def test_output_formats():
    rep = collision_scan(2, 40)
    data = json.loads(json.dumps(rep.to_json()))
    assert data["k"] == 2
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["k", "value", "members"]
    assert len(rows) == len(rep.classes) + 1
    assert "J_2(15) = J_2(16) = 192" in rep.to_text()
