"""Brute-force reference computations, written without the package's helpers.

Only the plain data containers (instances, circuits) are shared; every
evaluation here walks the definitions directly.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def oracle_tables(s):
    """All oracles on s-bit points, as tuples indexed by point value."""
    return list(product((0, 1), repeat=1 << s))


def w_vector(r, s, value):
    """Bits of w, most significant first: z (r bits), then b1, b2, b3."""
    width = r + 3 * s
    return [(value >> (width - 1 - t)) & 1 for t in range(width)]


def points_of(r, s, bits):
    out = []
    for k in range(3):
        chunk = bits[r + k * s: r + (k + 1) * s]
        out.append(int("".join(map(str, chunk)), 2) if chunk else 0)
    return out


def literal_true(lit, assignment):
    v = assignment[abs(lit)]
    return v == 1 if lit > 0 else v == 0


def cnf_true(clauses, assignment):
    return all(any(literal_true(lit, assignment) for lit in clause) for clause in clauses)


def sat_count(r, s, clauses, table):
    total = 0
    for value in range(1 << (r + 3 * s)):
        bits = w_vector(r, s, value)
        answers = [table[b] for b in points_of(r, s, bits)]
        assignment = {i + 1: bit for i, bit in enumerate(bits + answers)}
        total += cnf_true(clauses, assignment)
    return total


def decide(r, s, clauses):
    """(member, max satisfying count) by trying every oracle."""
    N = 1 << (r + 3 * s)
    best = max(sat_count(r, s, clauses, t) for t in oracle_tables(s))
    return int(best == N), best


def expected_score_truthful(q):
    """E_{b ~ q}[BSR(q, b)] from the Brier definition, outcome space {0, 1}."""
    q = Fraction(q)
    def bsr(p, b):
        prob = p if b else 1 - p
        return 2 * prob - (p * p + (1 - p) * (1 - p)) - 1
    return q * bsr(q, 1) + (1 - q) * bsr(q, 0)


def scoring_utility(r, s, clauses, c, a, table, table2=None):
    """Expected payment of the scoring protocol for committed provers, by
    walking every (w, w', k) directly from the protocol's rules."""
    table2 = table if table2 is None else table2
    N = 1 << (r + 3 * s)
    if a > N or (c == 1 and a < N) or (c == 0 and a == N):
        return Fraction(-1)
    p = Fraction(a, N)
    total = Fraction(0)
    for w in range(N):
        for w2 in range(N):
            bw, bw2 = w_vector(r, s, w), w_vector(r, s, w2)
            pts = points_of(r, s, bw) + points_of(r, s, bw2)
            ans = [table[b] for b in pts]
            for k in range(6):
                if ans[k] != table2[pts[k]]:
                    total -= 1
                    continue
                first = {i + 1: v for i, v in enumerate(bw + ans[:3])}
                if not cnf_true(clauses, first):
                    continue
                second = {i + 1: v for i, v in enumerate(bw2 + ans[3:])}
                b = int(cnf_true(clauses, second))
                prob = p if b else 1 - p
                total += (2 * prob - (p * p + (1 - p) ** 2) + 1) / 11
    return total / (6 * N * N)


def eval_gates(n, gates, x):
    """Recursive evaluation of a gate list [(type, inputs)], gates 1-based."""
    memo = {}

    def value(i, depth=0):
        if depth > len(gates):
            raise RecursionError("cycle")
        if i not in memo:
            kind, inputs = gates[i - 1]
            if kind == "INPUT":
                memo[i] = x[i - 1]
            else:
                vals = [value(j, depth + 1) for j in inputs]
                memo[i] = {"AND": lambda v: v[0] and v[1], "OR": lambda v: v[0] or v[1],
                           "NOT": lambda v: 1 - v[0]}[kind](vals)
                memo[i] = int(memo[i])
        return memo[i]

    return {i: value(i) for i in range(1, len(gates) + 1)}


def circuit_rows(circuit):
    return [(g.type, tuple(g.inputs)) for g in circuit.gates]
