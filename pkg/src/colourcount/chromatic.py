"""Exact chromatic polynomial evaluation by inclusion-exclusion over subsets.

For each vertex subset S the rank table holds i_k(S), the number of
independent sets of size k inside G[S].  Writing I_S(x) = sum_k i_k(S) x^k,

    P(G, q) = sum_S (-1)^(n - |S|) [x^n] I_S(x)^q :

a q-tuple of independent sets with union inside S and sizes totalling n is
forced to be an exact partition, so overlapping covers cancel out of the
alternating sum.  The rank table is built with numpy; the per-subset
polynomial powers run modulo 29-bit primes (numba kernel for n >= 10, plain
big ints below that) and the exact integer is reassembled via CRT.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .errors import CapacityError, InputError
from .graphs import Graph

__all__ = ["chromatic_polynomial_eval", "SUBSET_DP_MAX_VERTICES"]

SUBSET_DP_MAX_VERTICES = 30
MEMORY_BUDGET_BYTES = 2 << 30       # rank table guard; 2^n (n+1) int64 entries
_PY_PATH_MAX = 9                    # below this the big-int path beats JIT overhead

# primes just below 2^29: residue products stay under 2^58, so a 31-term
# accumulation fits int64 without intermediate reductions
_PRIMES = (
    536870909, 536870879, 536870869, 536870849, 536870839, 536870837,
    536870819, 536870813, 536870791, 536870779, 536870767, 536870743,
    536870717, 536870701, 536870683, 536870657, 536870641, 536870627,
    536870611, 536870603, 536870599, 536870573, 536870569, 536870563,
    536870561, 536870513, 536870501, 536870497, 536870473, 536870401,
    536870363, 536870317, 536870303, 536870297, 536870273, 536870267,
)


def _rank_table(g: Graph) -> np.ndarray:
    n = g.n
    low = [g.adj[v] & ((1 << v) - 1) for v in range(n)]
    table = np.zeros((1 << n, n + 1), dtype=np.int64)
    table[0, 0] = 1
    for v in range(n):
        size = 1 << v
        idx = np.arange(size)
        sub = idx & ~np.int64(low[v])
        block = table[size:2 * size]
        block[:] = table[:size]
        block[:, 1:] += table[sub, :-1]
    return table


@njit(cache=True)
def _power_sum_mod(table, q, n, p, parity):          # pragma: no cover - jitted
    total = np.int64(0)
    rows = table.shape[0]
    L = n + 1
    acc = np.zeros(L, np.int64)
    base = np.zeros(L, np.int64)
    tmp = np.zeros(L, np.int64)
    for s in range(rows):
        db = 0
        for i in range(L):
            base[i] = table[s, i]
            if base[i]:
                db = i
        # binary exponentiation, truncated at degree n
        e = q
        while not (e & 1):                           # square up to the lowest set bit
            e >>= 1
            dr = min(db + db, n)
            for k in range(dr + 1):
                tmp[k] = 0
            for i in range(db + 1):
                a = base[i]
                if a:
                    jmax = min(dr - i, db)
                    for j in range(jmax + 1):
                        tmp[i + j] += a * base[j]
            for k in range(dr + 1):
                base[k] = tmp[k] % p
            db = dr
        for i in range(L):
            acc[i] = base[i]
        da = db
        e >>= 1
        while e:
            dr = min(db + db, n)
            for k in range(dr + 1):
                tmp[k] = 0
            for i in range(db + 1):
                a = base[i]
                if a:
                    jmax = min(dr - i, db)
                    for j in range(jmax + 1):
                        tmp[i + j] += a * base[j]
            for k in range(dr + 1):
                base[k] = tmp[k] % p
            db = dr
            if e & 1:
                dr = min(da + db, n)
                for k in range(dr + 1):
                    tmp[k] = 0
                for i in range(da + 1):
                    a = acc[i]
                    if a:
                        jmax = min(dr - i, db)
                        for j in range(jmax + 1):
                            tmp[i + j] += a * base[j]
                for k in range(dr + 1):
                    acc[k] = tmp[k] % p
                da = dr
            e >>= 1
        coef = acc[n] if da >= n else np.int64(0)
        if parity[s]:
            total = (total + p - coef) % p
        else:
            total = (total + coef) % p
    return total


def _power_sum_py(table: np.ndarray, q: int, n: int) -> int:
    """Small-n path: exact big-int accumulation, no primes, no JIT."""
    total = 0
    for s in range(table.shape[0]):
        row = [int(x) for x in table[s]]
        acc = [1] + [0] * n
        base = row
        e = q
        while e:
            if e & 1:
                acc = _mul_trunc(acc, base, n)
            e >>= 1
            if e:
                base = _mul_trunc(base, base, n)
        coef = acc[n]
        if (n - s.bit_count()) & 1:
            total -= coef
        else:
            total += coef
    return total


def _mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(min(n - i, len(b) - 1) + 1):
                out[i + j] += ai * b[j]
    return out


def chromatic_polynomial_eval(g: Graph, q: int, *,
                              max_vertices: int = SUBSET_DP_MAX_VERTICES,
                              memory_budget: int = MEMORY_BUDGET_BYTES) -> int:
    """P(g, q): the exact number of proper colourings from a palette of size q.

    n above max_vertices (default 30) or a rank table above the memory budget
    raises CapacityError advising the backtracking path.
    """
    if q < 0:
        raise InputError(f"palette size must be >= 0, got {q}")
    n = g.n
    if n == 0:
        return 1
    if q == 0:
        return 0
    if n > max_vertices:
        raise CapacityError(
            f"subset DP limited to {max_vertices} vertices, got {n}; "
            "use the backtracking counter instead",
            budget=max_vertices, needed=n)
    need = (1 << n) * (n + 1) * 8
    if need > memory_budget:
        raise CapacityError(
            f"subset DP rank table needs {need} bytes, budget is {memory_budget}; "
            "use the backtracking counter instead",
            budget=memory_budget, needed=need)
    table = _rank_table(g)
    if n <= _PY_PATH_MAX:
        return _power_sum_py(table, q, n)

    rows = 1 << n
    pc = np.zeros(rows, dtype=np.uint8)
    for v in range(n):
        pc[1 << v:2 << v] = pc[:1 << v] ^ 1
    parity = (pc ^ (n & 1)).astype(np.uint8)

    # enough primes for the product to exceed q^n
    bound = q ** n
    primes, prod = [], 1
    for p in _PRIMES:
        primes.append(p)
        prod *= p
        if prod > bound:
            break
    else:
        raise CapacityError("CRT prime pool exhausted", budget=len(_PRIMES))

    residues = [int(_power_sum_mod(table, np.int64(q), np.int64(n), np.int64(p), parity))
                for p in primes]
    value, modulus = 0, 1
    for r, p in zip(residues, primes):
        h = (r - value) * pow(modulus, -1, p) % p
        value += modulus * h
        modulus *= p
    return value
