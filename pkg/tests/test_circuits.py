import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

import oracles
from mrip.circuits import (AND, INPUT, NOT, OR, BlockCodec, BlockDecodeError, Circuit,
                           CircuitError, DcOracle, Gate, ThreeLevelCircuit, build,
                           dc_query, eval_circuit, eval_three_level, majority3_circuit,
                           random_circuit, random_three_level, xor2_circuit)
from mrip.core import decide_oracle3sat
from mrip.corpus import random_instance


@given(st.integers(0, 2 ** 31), st.integers(1, 3), st.integers(1, 6))
def test_eval_matches_recursive_oracle(seed, n, extra):
    rng = random.Random(seed)
    c = random_circuit(rng, n, n + extra)
    for x in product((0, 1), repeat=n):
        assert eval_circuit(c, x) == oracles.eval_gates(n, oracles.circuit_rows(c), x)


def test_majority_truth_table():
    c = majority3_circuit()
    assert c.g == 7
    for x in product((0, 1), repeat=3):
        assert eval_circuit(c, x)[c.g] == int(sum(x) >= 2)


def test_xor_truth_table():
    c = xor2_circuit()
    assert c.g == 6
    for a, b in product((0, 1), repeat=2):
        assert eval_circuit(c, (a, b))[c.g] == a ^ b


@given(st.integers(0, 2 ** 31), st.integers(1, 3), st.integers(1, 6))
def test_dc_queries_agree_with_circuit(seed, n, extra):
    c = random_circuit(random.Random(seed), n, n + extra)
    dc = DcOracle(c)
    assert dc_query(dc, ("SIZE",)) == c.g
    for i in range(1, c.g + 1):
        gate = c.gate(i)
        for t in (AND, OR, NOT, INPUT):
            assert dc_query(dc, ("TYPE", i, t)) == int(gate.type == t)
        for h in range(1, 2 * c.g + 1):
            is_in = h in gate.wires
            src = [j for j in range(1, c.g + 1)
                   for k, h2 in enumerate(c.gate(j).wires) if h2 == h]
            assert dc.input(h, i) == int(is_in)
            # wire h leaves gate i iff i feeds some gate through h
            feeds = any(c.gate(d).inputs[k] == i for d in range(1, c.g + 1)
                        for k, h2 in enumerate(c.gate(d).wires) if h2 == h)
            assert dc.output(h, i) == int(feeds)
            assert len(src) <= 1


def test_dc_out_of_range():
    dc = DcOracle(xor2_circuit())
    assert dc.safe("TYPE", 99, AND) == 0
    with pytest.raises(ValueError):
        dc_query(dc, ("TYPE", 99, AND))


def test_generator_backed_oracle():
    dc = DcOracle(lambda n: build(n, [(NOT, 1)]), n=2)
    assert dc.size() == 3


def test_cycle_rejected():
    gates = (Gate(INPUT), Gate(AND, (1, 3)), Gate(NOT, (2,)))
    with pytest.raises(CircuitError):
        Circuit(1, gates)


@pytest.mark.parametrize("gates", [
    (Gate(AND, (1, 1)),),                       # input gate slot holds AND
    (Gate(INPUT), Gate(NOT, (1, 1))),           # wrong arity
    (Gate(INPUT), Gate(NOT, (5,))),             # dangling input
])
def test_malformed_circuits(gates):
    with pytest.raises(CircuitError):
        Circuit(1, gates)


@given(st.integers(0, 2 ** 31))
def test_block_codec_round_trip(seed):
    rng = random.Random(seed)
    codec = BlockCodec()
    r = rng.randint(0, 1)
    inst = random_instance(rng, r, 1, rng.randint(0, codec.max_clauses))
    assert codec.decode(codec.encode(inst)) == inst
    assert len(codec.encode(inst)) == codec.width == 14


def test_block_decode_rejects_bad_length():
    with pytest.raises(BlockDecodeError):
        BlockCodec().decode("0101")


@given(st.integers(0, 2 ** 31), st.integers(1, 2))
def test_three_level_flat_reevaluation(seed, q):
    # re-evaluate level by level with the independent helpers
    rng = random.Random(seed)
    tlc = random_three_level(rng, n=2, q=q)
    for x in product((0, 1), repeat=2):
        res = eval_three_level(tlc, x)
        v1 = oracles.eval_gates(2, oracles.circuit_rows(tlc.level1), x)
        answers = []
        for k in range(1, q + 1):
            block = "".join(str(v1[j]) for j in tlc.block_gates(k))
            inst = tlc.codec.decode(block)
            answers.append(oracles.decide(inst.r, inst.s, inst.clauses)[0])
        v3 = oracles.eval_gates(2 + q, oracles.circuit_rows(tlc.level3), list(x) + answers)
        assert res.final == v3[tlc.level3.g]
        assert [res.values[tlc.g + k] for k in range(1, q + 1)] == answers
        assert len(res.instances) == q


def test_three_level_json_round_trip():
    tlc = random_three_level(random.Random(3))
    data = tlc.to_json(x=(1, 0))
    back = ThreeLevelCircuit.from_json(data)
    assert eval_three_level(back, (1, 0)) == eval_three_level(tlc, (1, 0))
