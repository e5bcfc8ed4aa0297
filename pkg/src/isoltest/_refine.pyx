# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled signature refinement for strong and branching bisimulation."""

from libc.stdint cimport int64_t
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort, unique

import numpy as np
cimport numpy as cnp


cdef list _renumber(const int64_t[:] keys_view, Py_ssize_t n):
    cdef dict ids = {}
    cdef list out = []
    cdef Py_ssize_t i
    for i in range(n):
        out.append(ids.setdefault(keys_view[i], len(ids)))
    return out


cdef void _sort_unique(vector[int64_t]& v):
    sort(v.begin(), v.end())
    v.erase(unique(v.begin(), v.end()), v.end())


def _csr(Py_ssize_t n, src, lab, dst):
    s = np.asarray(src, dtype=np.int64)
    a = np.asarray(lab, dtype=np.int64)
    t = np.asarray(dst, dtype=np.int64)
    order = np.argsort(s, kind="stable")
    s, a, t = s[order], a[order], t[order]
    offs = np.zeros(n + 1, dtype=np.int64)
    np.add.at(offs, s + 1, 1)
    return np.cumsum(offs), a, t


def strong_partition(Py_ssize_t n, src, lab, dst, init=None):
    offs_np, lab_np, dst_np = _csr(n, src, lab, dst)
    cdef const int64_t[:] offs = offs_np
    cdef const int64_t[:] labv = lab_np
    cdef const int64_t[:] dstv = dst_np
    cdef cnp.ndarray[int64_t] block = np.zeros(n, dtype=np.int64) if init is None else np.asarray(init, dtype=np.int64)
    cdef vector[int64_t] sig
    cdef Py_ssize_t s, k, count, new_count
    cdef int64_t nb, code
    cdef dict ids
    cdef cnp.ndarray[int64_t] nxt
    block = np.asarray(_renumber(block, n), dtype=np.int64)
    count = int(block.max()) + 1 if n else 0
    while True:
        nb = count
        ids = {}
        nxt = np.empty(n, dtype=np.int64)
        for s in range(n):
            sig.clear()
            sig.push_back(block[s])
            for k in range(offs[s], offs[s + 1]):
                code = labv[k] * nb + block[dstv[k]]
                sig.push_back(code)
            _sort_unique_tail(sig)
            key = (<char*> sig.data())[: sig.size() * sizeof(int64_t)]
            nxt[s] = ids.setdefault(key, len(ids))
        new_count = len(ids)
        block = nxt
        if new_count == count:
            return [int(x) for x in block]
        count = new_count


cdef void _sort_unique_tail(vector[int64_t]& v):
    # keep element 0 (the old block) in front, canonicalize the rest
    sort(v.begin() + 1, v.end())
    v.erase(unique(v.begin() + 1, v.end()), v.end())


def branching_partition(Py_ssize_t n, src, lab, dst, Py_ssize_t tau, topo, init=None):
    """Signature refinement on a graph without tau cycles.

    ``topo`` lists every state so that tau-successors precede their
    predecessors; inert tau steps then inherit the successor's signature.
    """
    offs_np, lab_np, dst_np = _csr(n, src, lab, dst)
    cdef const int64_t[:] offs = offs_np
    cdef const int64_t[:] labv = lab_np
    cdef const int64_t[:] dstv = dst_np
    cdef const int64_t[:] order = np.asarray(topo, dtype=np.int64)
    cdef cnp.ndarray[int64_t] block = np.zeros(n, dtype=np.int64) if init is None else np.asarray(init, dtype=np.int64)
    cdef vector[vector[int64_t]] sigs
    cdef Py_ssize_t i, s, k, t, count, new_count
    cdef int64_t nb, a, bt
    cdef dict ids
    cdef cnp.ndarray[int64_t] nxt
    sigs.resize(n)
    block = np.asarray(_renumber(block, n), dtype=np.int64)
    count = int(block.max()) + 1 if n else 0
    while True:
        nb = count
        for i in range(n):
            s = order[i]
            sigs[s].clear()
            for k in range(offs[s], offs[s + 1]):
                a = labv[k]
                t = dstv[k]
                bt = block[t]
                if a == tau and bt == block[s]:
                    sigs[s].insert(sigs[s].end(), sigs[t].begin(), sigs[t].end())
                else:
                    sigs[s].push_back(a * nb + bt)
            _sort_unique(sigs[s])
        ids = {}
        nxt = np.empty(n, dtype=np.int64)
        for s in range(n):
            key = (block[s], (<char*> sigs[s].data())[: sigs[s].size() * sizeof(int64_t)])
            nxt[s] = ids.setdefault(key, len(ids))
        new_count = len(ids)
        block = nxt
        if new_count == count:
            return [int(x) for x in block]
        count = new_count
