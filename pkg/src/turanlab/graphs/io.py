"""graph6 and ``"n; u-v,u-v"`` text forms.

graph6 packs the upper triangle of the adjacency matrix column by column
(``x(0,1), x(0,2), x(1,2), x(0,3), ...``) into 6-bit groups, each printed as
``chr(63 + value)``.  The vertex count comes first: one byte for ``n <= 62``,
else ``~`` followed by three 6-bit bytes.
"""
from __future__ import annotations

import os

from turanlab.errors import GraphFormatError
from turanlab.graphs.core import Graph, named

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise GraphFormatError("graph too large for graph6", str(n))


def to_graph6(g: Graph, header: bool = False) -> str:
    bits = []
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            bits.append(row >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return (HEADER if header else "") + _encode_n(g.n) + body


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise GraphFormatError("empty graph6 string", text)
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError("graph6 byte outside 63..126", s)
    if s[0] == "~":
        if len(s) < 4 or s[1] == "~":
            raise GraphFormatError("unsupported graph6 size prefix", s)
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        body = s[4:]
    else:
        n = ord(s[0]) - 63
        body = s[1:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphFormatError(
            f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}", s
        )
    edges = []
    k = 0
    vals = [ord(ch) - 63 for ch in body]
    for j in range(1, n):
        for i in range(j):
            if vals[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    if nbits % 6 and vals and vals[-1] & ((1 << (6 - nbits % 6)) - 1):
        raise GraphFormatError("nonzero graph6 padding bits", s)
    return Graph(n, edges)


def to_edge_list(g: Graph) -> str:
    return f"{g.n}; " + ",".join(f"{u}-{v}" for u, v in g.sorted_edges)


def from_edge_list(text: str) -> Graph:
    head, sep, rest = text.partition(";")
    if not sep:
        raise GraphFormatError("edge list must look like 'n; u-v,u-v'", text)
    try:
        n = int(head.strip())
    except ValueError:
        raise GraphFormatError("vertex count is not an integer", head.strip()) from None
    edges = []
    for tok in rest.split(","):
        tok = tok.strip()
        if not tok:
            continue
        parts = tok.split("-")
        if len(parts) != 2:
            raise GraphFormatError("edge must look like 'u-v'", tok)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError("edge endpoints must be integers", tok) from None
    return Graph(n, edges)


def parse_graph(text: str) -> Graph:
    """Read a graph given as a builtin name, an edge list, graph6, or ``@file``/path.

    A file holds one graph in any of the textual forms (first non-empty line).
    """
    s = text.strip()
    if s.startswith("@") or os.path.isfile(s):
        fname = s[1:] if s.startswith("@") else s
        try:
            with open(fname) as fh:
                lines = [ln.strip() for ln in fh if ln.strip()]
        except OSError as exc:
            raise GraphFormatError(f"cannot read graph file: {exc.strerror}", fname) from None
        if not lines:
            raise GraphFormatError("graph file is empty", fname)
        return parse_graph(lines[0])
    if ";" in s:
        return from_edge_list(s)
    try:
        return named(s)
    except GraphFormatError:
        pass
    return from_graph6(s)
