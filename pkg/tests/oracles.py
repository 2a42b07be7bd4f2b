"""Slow, independent reference implementations used only by the tests.

Nothing here imports the package's arithmetic: circuits are simulated gate by
gate, fields multiply by schoolbook long division, and decoders search every
correction exhaustively.
"""

from __future__ import annotations

from itertools import combinations


# ---------------------------------------------------------------- GF(2^m)


def poly_mulmod(a: int, b: int, modulus: int) -> int:
    prod = 0
    i = 0
    while b >> i:
        if (b >> i) & 1:
            prod ^= a << i
        i += 1
    deg = modulus.bit_length() - 1
    while prod.bit_length() - 1 >= deg:
        prod ^= modulus << (prod.bit_length() - 1 - deg)
    return prod


def poly_pow(a: int, k: int, modulus: int) -> int:
    r = 1
    for _ in range(k):
        r = poly_mulmod(r, a, modulus)
    return r


def has_factor(poly: int) -> bool:
    """True when ``poly`` is a product of two polynomials of positive degree."""
    deg = poly.bit_length() - 1
    for a in range(2, 1 << deg):
        for b in range(2, 1 << deg):
            if poly_mulmod(a, b, 1 << (2 * deg + 2)) == poly:
                return True
    return False


def bch_columns(w: int, t: int, m: int, modulus: int) -> list[int]:
    """Column j stacks x^((2i+1)j) for i < t, block i at bit offset i*m."""
    cols = []
    for j in range(w):
        c = 0
        for i in range(t):
            c |= poly_pow(0b10, (2 * i + 1) * j, modulus) << (i * m)
        cols.append(c)
    return cols


def min_dependent(cols: list[int], cap: int) -> int | None:
    """Size of the smallest nonempty column set summing to zero, searched up to ``cap``."""
    for k in range(1, cap + 1):
        for sub in combinations(cols, k):
            acc = 0
            for c in sub:
                acc ^= c
            if acc == 0:
                return k
    return None


# ---------------------------------------------------------------- circuits


def simulate(C_rows: list[int], n_cols: int, data_row: int, gaps, flags) -> tuple[int, int]:
    """Propagate syndrome X faults gate by gate.

    Gap g sits before column g (gap n_cols is after the last gate).  Returns
    (flag pattern, data mask over the data CNOTs in time order).
    """
    data_cols = [j for j in range(n_cols) if (C_rows[data_row] >> j) & 1]
    flag_rows = [i for i in range(len(C_rows)) if i != data_row]
    pattern = 0
    data = 0
    for g in gaps:
        x = 0
        for j in range(n_cols):
            if j == g:
                x ^= 1
            if not x:
                continue
            if (C_rows[data_row] >> j) & 1:
                data ^= 1 << data_cols.index(j)
            else:
                for k, i in enumerate(flag_rows):
                    if (C_rows[i] >> j) & 1:
                        pattern ^= 1 << k
    for i in flags:
        pattern ^= 1 << i
    return pattern, data


def all_fault_sets(l: int, f: int, t: int):  # noqa: E741
    locs = list(range(l + f))
    for k in range(t + 1):
        for combo in combinations(locs, k):
            yield [x for x in combo if x < l], [x - l for x in combo if x >= l]


def residual(x: int, w: int) -> int:
    p = bin(x).count("1")
    return min(p, w - p)


def classes(C_rows, n_cols, data_row, w, t):
    """pattern -> {data mask: smallest number of faults producing it}."""
    out: dict[int, dict[int, int]] = {}
    for gaps, flags in all_fault_sets(n_cols + 1, len(C_rows) - 1, t):
        p, d = simulate(C_rows, n_cols, data_row, gaps, flags)
        k = len(gaps) + len(flags)
        m = out.setdefault(p, {})
        if d not in m or k < m[d]:
            m[d] = k
    return out


def table_is_ft(C_rows, n_cols, data_row, w, t, table: dict[int, int]) -> bool:
    for gaps, flags in all_fault_sets(n_cols + 1, len(C_rows) - 1, t):
        p, d = simulate(C_rows, n_cols, data_row, gaps, flags)
        if residual(d ^ table.get(p, 0), w) > len(gaps) + len(flags):
            return False
    return True


def any_valid_table(C_rows, n_cols, data_row, w, t) -> bool:
    """Exhaust every correction for every pattern class."""
    for members in classes(C_rows, n_cols, data_row, w, t).values():
        if not any(all(residual(x ^ d, w) <= k for d, k in members.items()) for x in range(1 << w)):
            return False
    return True


# ---------------------------------------------------------------- Paulis


def pauli_commutes(a: str, b: str) -> bool:
    anti = sum(1 for p, q in zip(a, b) if p != "I" and q != "I" and p != q)
    return anti % 2 == 0
