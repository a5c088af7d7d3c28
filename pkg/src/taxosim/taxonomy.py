"""Concept hierarchy model and the line-based taxonomy file parser.

File format (UTF-8, ``#`` starts a comment, blank lines ignored)::

    node <id> [word1,word2,...]
    edge <child-id> <parent-id> <relation> [type_factor]

Only edges whose relation is in ``relations`` (default ``{"isa"}``) form the
hierarchy used for depth, subsumption and paths. Other edges are kept on the
taxonomy for inspection and per-relation statistics.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

import numpy as np

from taxosim import kernels
from taxosim.errors import (
    CycleError,
    MissingICError,
    NoCommonSubsumerError,
    ParseError,
    UnknownConceptError,
    UnknownWordError,
)

VIRTUAL_RELATION = "virtual"
VIRTUAL_ROOT_ID = "<root>"


@dataclass(frozen=True)
class Edge:
    child: str
    parent: str
    relation: str = "isa"
    type_factor: float = 1.0

    def __post_init__(self):
        if self.child == self.parent:
            raise ValueError(f"self-loop edge on {self.child!r}")
        if not self.relation:
            raise ValueError("edge relation must be non-empty")
        if not (self.type_factor >= 0 and math.isfinite(self.type_factor)):
            raise ValueError(f"type factor must be finite and >= 0, got {self.type_factor}")

    @property
    def is_virtual(self):
        return self.relation == VIRTUAL_RELATION


def _ic_values(ic):
    return ic.ic if hasattr(ic, "ic") else ic


def _csr(n, pairs):
    """CSR arrays for adjacency lists given as (u, v) pairs, neighbours sorted."""
    lists = [[] for _ in range(n)]
    for u, v in pairs:
        lists[u].append(v)
    indptr = np.zeros(n + 1, dtype=np.int32)
    flat = []
    for i, nbrs in enumerate(lists):
        nbrs.sort()
        flat.extend(nbrs)
        indptr[i + 1] = len(flat)
    return indptr, kernels.index_array(flat)


class Taxonomy:
    """Immutable rooted DAG of concepts with word membership.

    Parameters
    ----------
    concepts : iterable of str
        Concept ids; must be unique, non-empty and whitespace-free.
    edges : iterable of Edge
        Child-to-parent links of any relation.
    words : mapping of concept id to iterable of words, optional
        Word membership; ``word_index`` is derived from it.
    relations : iterable of str
        Relations that make up the hierarchy.
    virtual_root : bool
        Synthesize a shared top node when the hierarchy has several roots.
    """

    def __init__(
        self,
        concepts: Iterable[str],
        edges: Iterable[Edge],
        words: Optional[Mapping[str, Iterable[str]]] = None,
        *,
        relations: Iterable[str] = ("isa",),
        virtual_root: bool = True,
    ):
        concepts = list(concepts)
        seen = set()
        for c in concepts:
            if not c or any(ch.isspace() for ch in c):
                raise ValueError(f"invalid concept id {c!r}")
            if c in seen:
                raise ValueError(f"duplicate concept id {c!r}")
            seen.add(c)
        if not concepts:
            raise ValueError("taxonomy has no concepts")
        self.relations = frozenset(relations)
        if VIRTUAL_RELATION in self.relations:
            raise ValueError(f"relation name {VIRTUAL_RELATION!r} is reserved")

        edges = list(edges)
        edge_keys = set()
        for e in edges:
            for end in (e.child, e.parent):
                if end not in seen:
                    raise ValueError(f"edge {e.child} -> {e.parent} references unknown concept {end!r}")
            key = (e.child, e.parent, e.relation)
            if key in edge_keys:
                raise ValueError(f"duplicate edge {e.child} {e.parent} {e.relation}")
            edge_keys.add(key)

        has_parent = {e.child for e in edges if e.relation in self.relations}
        self.roots = frozenset(c for c in concepts if c not in has_parent)
        if not self.roots:
            raise CycleError("hierarchy has no root; it must contain a cycle")

        self.virtual_root = None
        all_ids = sorted(concepts)
        if virtual_root and len(self.roots) > 1:
            vid = VIRTUAL_ROOT_ID
            while vid in seen:
                vid = "<" + vid + ">"
            self.virtual_root = vid
            edges.extend(Edge(r, vid, VIRTUAL_RELATION) for r in sorted(self.roots))
            all_ids.append(vid)

        self.concepts = tuple(all_ids)
        self._index = {c: i for i, c in enumerate(self.concepts)}
        self.edges = tuple(edges)
        n = len(self.concepts)
        idx = self._index

        # hierarchy edges keyed by (child, parent); first one in input order wins
        self._link = {}
        up_pairs, nb_pairs = [], []
        self._n_children = np.zeros(n, dtype=np.int64)
        for e in self.edges:
            if not (e.is_virtual or e.relation in self.relations):
                continue
            ci, pi = idx[e.child], idx[e.parent]
            if (ci, pi) in self._link:
                continue
            self._link[(ci, pi)] = e
            up_pairs.append((ci, pi))
            if not e.is_virtual:
                nb_pairs.append((ci, pi))
                nb_pairs.append((pi, ci))
                self._n_children[pi] += 1
        self._up_ptr, self._up_idx = _csr(n, up_pairs)
        self._down_ptr, self._down_idx = _csr(n, [(p, c) for c, p in up_pairs])
        self._nb_ptr, self._nb_idx = _csr(n, nb_pairs)

        self._order = self._topological_order()
        self._depth = kernels.min_depths(self._up_ptr, self._up_idx, self._order)

        word_index = {}
        words_of = {}
        for c, ws in (words or {}).items():
            if c not in idx:
                raise ValueError(f"words attached to unknown concept {c!r}")
            ws = tuple(dict.fromkeys(ws))
            words_of[c] = ws
            for w in ws:
                word_index.setdefault(w, set()).add(c)
        self.word_index = MappingProxyType({w: frozenset(cs) for w, cs in word_index.items()})
        self._words_of = words_of
        self._memo = {}

    def _topological_order(self):
        """Node indices with every parent before its children (Kahn)."""
        n = len(self.concepts)
        pending = np.diff(self._up_ptr).astype(np.int64)
        queue = deque(i for i in range(n) if pending[i] == 0)
        order = []
        dptr, dnbr = self._down_ptr, self._down_idx
        while queue:
            u = queue.popleft()
            order.append(u)
            for k in range(dptr[u], dptr[u + 1]):
                v = dnbr[k]
                pending[v] -= 1
                if pending[v] == 0:
                    queue.append(int(v))
        if len(order) != n:
            stuck = sorted(self.concepts[i] for i in range(n) if pending[i] > 0)
            raise CycleError(f"cycle detected among parent edges involving {stuck[0]!r}")
        return order

    # -- basic lookups -------------------------------------------------

    def __len__(self):
        return len(self.concepts)

    def __contains__(self, c):
        return c in self._index

    def __repr__(self):
        vr = f", virtual_root={self.virtual_root!r}" if self.virtual_root else ""
        return f"<Taxonomy {len(self.concepts)} concepts, roots={sorted(self.roots)!r}{vr}>"

    def index(self, c):
        try:
            return self._index[c]
        except KeyError:
            raise UnknownConceptError(c) from None

    @property
    def effective_root(self):
        """The virtual root if present, else the unique real root (None if several)."""
        if self.virtual_root is not None:
            return self.virtual_root
        if len(self.roots) == 1:
            return next(iter(self.roots))
        return None

    def parents(self, c):
        i = self.index(c)
        return tuple(self.concepts[j] for j in self._up_idx[self._up_ptr[i]:self._up_ptr[i + 1]])

    def children(self, c):
        i = self.index(c)
        return tuple(self.concepts[j] for j in self._down_idx[self._down_ptr[i]:self._down_ptr[i + 1]])

    def link(self, child, parent):
        """The hierarchy edge from ``child`` up to ``parent``."""
        try:
            return self._link[(self.index(child), self.index(parent))]
        except KeyError:
            raise KeyError(f"no hierarchy edge {child} -> {parent}") from None

    def words(self, c):
        self.index(c)
        return self._words_of.get(c, ())

    def senses(self, w):
        """classes(w): every concept the word belongs to."""
        try:
            return self.word_index[w]
        except KeyError:
            raise UnknownWordError(w) from None

    def relation_count(self, x, relation, direction="up"):
        """Number of ``relation`` edges leaving ``x`` upward (to parents) or downward."""
        self.index(x)
        if direction not in ("up", "down"):
            raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
        counts = self._memo.get("relation_counts")
        if counts is None:
            counts = Counter()
            for e in self.edges:
                counts[(e.child, e.relation, "up")] += 1
                counts[(e.parent, e.relation, "down")] += 1
            self._memo["relation_counts"] = counts
        return counts[(x, relation, direction)]

    # -- structure -----------------------------------------------------

    def depth(self, c):
        """1 at the effective root; minimum over parents under multiple inheritance."""
        return int(self._depth[self.index(c)])

    def max_depth(self):
        return int(self._depth.max())

    def local_density(self, p):
        """Number of (non-virtual) hierarchy child links under ``p``."""
        return int(self._n_children[self.index(p)])

    def average_density(self):
        avg = self._memo.get("average_density")
        if avg is None:
            internal = self._n_children[self._n_children > 0]
            avg = float(internal.sum()) / internal.size if internal.size else 0.0
            self._memo["average_density"] = avg
        return avg

    def ancestor_distances(self, c):
        """Hop count from ``c`` to each of its subsumers (``c`` itself at 0)."""
        dist = kernels.upward_distances(self._up_ptr, self._up_idx, self.index(c))
        return {self.concepts[i]: int(d) for i, d in dist.items()}

    def subsumers(self, c):
        cache = self._memo.setdefault("subsumers", {})
        subs = cache.get(c)
        if subs is None:
            subs = cache[c] = frozenset(self.ancestor_distances(c))
        return subs

    def common_subsumers(self, c1, c2):
        return self.subsumers(c1) & self.subsumers(c2)

    def lowest_subsumer(self, ic, c1, c2, by="ic"):
        """Pick one common subsumer of ``c1`` and ``c2``.

        ``by="ic"`` takes the maximum IC, then the greatest depth, then the
        smallest id. ``by="depth"`` ranks depth first, then IC, then id.
        """
        common = self.common_subsumers(c1, c2)
        if not common:
            raise NoCommonSubsumerError(f"{c1!r} and {c2!r} have no common subsumer")
        if by == "depth" and ic is None:
            return min(common, key=lambda s: (-self.depth(s), s))
        values = _ic_values(ic)

        def info(s):
            if s == self.virtual_root and s not in values:
                return 0.0
            try:
                return values[s]
            except KeyError:
                raise MissingICError(s) from None

        if by == "ic":
            return min(common, key=lambda s: (-info(s), -self.depth(s), s))
        if by == "depth":
            return min(common, key=lambda s: (-self.depth(s), -info(s), s))
        raise ValueError(f"lowest subsumer mode must be 'ic' or 'depth', got {by!r}")

    def most_informative_subsumer(self, ic, c1, c2):
        return self.lowest_subsumer(ic, c1, c2, by="ic")

    def shortest_path_length(self, c1, c2):
        """Edge count between ``c1`` and ``c2`` ignoring direction and virtual links.

        Returns None when the two concepts are not connected.
        """
        d = kernels.bfs_distance(self._nb_ptr, self._nb_idx, self.index(c1), self.index(c2))
        return None if d < 0 else int(d)

    def upward_chain(self, c, ancestor):
        """Shortest parent-edge chain ``[c, ..., ancestor]``.

        Ties between equally short chains go to whichever a breadth-first
        search over parents in id order reaches first.
        """
        start, goal = self.index(c), self.index(ancestor)
        prev = {start: -1}
        queue = deque([start])
        ptr, nbr = self._up_ptr, self._up_idx
        while queue:
            u = queue.popleft()
            if u == goal:
                break
            for k in range(ptr[u], ptr[u + 1]):
                v = int(nbr[k])
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
        if goal not in prev:
            raise ValueError(f"{ancestor!r} does not subsume {c!r}")
        chain = []
        u = goal
        while u != -1:
            chain.append(self.concepts[u])
            u = prev[u]
        chain.reverse()
        return chain

    def path_through_lsuper(self, ic, c1, c2, by="ic"):
        """Node list from ``c1`` up to their lowest subsumer and down to ``c2``."""
        top = self.lowest_subsumer(ic, c1, c2, by=by)
        left = self.upward_chain(c1, top)
        right = self.upward_chain(c2, top)
        return left + right[-2::-1]


# -- parsing ------------------------------------------------------------


def parse_taxonomy(source, *, relations=("isa",), virtual_root=True, name=None):
    """Read a taxonomy from a text stream (or any iterable of lines)."""
    if name is None:
        name = getattr(source, "name", None)
    nodes = {}
    node_line = {}
    edges = []
    edge_line = {}
    for lineno, raw in enumerate(source, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "node":
            if len(tok) not in (2, 3):
                raise ParseError("expected 'node <id> [word1,word2,...]'", lineno, name)
            cid = tok[1]
            if cid in nodes:
                raise ParseError(
                    f"duplicate concept id {cid!r} (first declared on line {node_line[cid]})",
                    lineno, name,
                )
            ws = []
            if len(tok) == 3:
                ws = tok[2].split(",")
                if any(not w for w in ws):
                    raise ParseError(f"empty word in list {tok[2]!r}", lineno, name)
            nodes[cid] = ws
            node_line[cid] = lineno
        elif kind == "edge":
            if len(tok) not in (4, 5):
                raise ParseError(
                    "expected 'edge <child-id> <parent-id> <relation> [type_factor]'", lineno, name
                )
            factor = 1.0
            if len(tok) == 5:
                try:
                    factor = float(tok[4])
                except ValueError:
                    raise ParseError(f"bad type factor {tok[4]!r}", lineno, name) from None
            if tok[3] == VIRTUAL_RELATION:
                raise ParseError(f"relation {VIRTUAL_RELATION!r} is reserved", lineno, name)
            try:
                edge = Edge(tok[1], tok[2], tok[3], factor)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, name) from None
            key = (edge.child, edge.parent, edge.relation)
            if key in edge_line:
                raise ParseError(
                    f"duplicate edge (first declared on line {edge_line[key]})", lineno, name
                )
            edge_line[key] = lineno
            edges.append(edge)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno, name)

    for e in edges:
        for end in (e.child, e.parent):
            if end not in nodes:
                raise ParseError(
                    f"edge references undeclared concept {end!r}",
                    edge_line[(e.child, e.parent, e.relation)], name,
                )
    if not nodes:
        raise ParseError("no concepts declared", None, name)
    try:
        return Taxonomy(nodes, edges, nodes, relations=relations, virtual_root=virtual_root)
    except CycleError as exc:
        raise CycleError(str(exc), None, name) from None


def load_taxonomy(path, **kwargs):
    with open(path, encoding="utf-8") as fh:
        return parse_taxonomy(fh, name=str(path), **kwargs)
