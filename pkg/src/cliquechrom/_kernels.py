"""Compiled graph kernels over sorted CSR adjacency.

Every kernel takes ``indptr``/``indices`` of a simple undirected graph with
each neighbor slice sorted ascending. Outputs are deterministic functions of
the inputs.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def csr_from_pairs(n, us, vs):
    deg = np.zeros(n, dtype=np.int64)
    for i in range(us.size):
        deg[us[i]] += 1
        deg[vs[i]] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + deg[v]
    pos = indptr[:-1].copy()
    indices = np.empty(indptr[n], dtype=np.int64)
    for i in range(us.size):
        u = us[i]
        v = vs[i]
        indices[pos[u]] = v
        pos[u] += 1
        indices[pos[v]] = u
        pos[v] += 1
    for v in range(n):
        indices[indptr[v]:indptr[v + 1]] = np.sort(indices[indptr[v]:indptr[v + 1]])
    return indptr, indices


@njit(cache=True)
def _has_common(indices, a0, a1, b0, b1):
    i = a0
    j = b0
    while i < a1 and j < b1:
        x = indices[i]
        y = indices[j]
        if x == y:
            return True
        if x < y:
            i += 1
        else:
            j += 1
    return False


@njit(cache=True)
def _has_edge(indptr, indices, u, v):
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        x = indices[mid]
        if x == v:
            return True
        if x < v:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True)
def edge_triangle_flags(indptr, indices):
    """For each CSR entry u->v: does the edge uv lie in a triangle."""
    n = indptr.size - 1
    flags = np.zeros(indices.size, dtype=np.bool_)
    mark = np.zeros(n, dtype=np.bool_)
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            mark[indices[j]] = True
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if v < u:
                continue
            for t in range(indptr[v], indptr[v + 1]):
                if mark[indices[t]]:
                    flags[j] = True
                    break
        for j in range(indptr[u], indptr[u + 1]):
            mark[indices[j]] = False
    # mirror v->u entries from the u<v half
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if v < u and _mirror_flag(indptr, indices, flags, v, u):
                flags[j] = True
    return flags


@njit(cache=True)
def _mirror_flag(indptr, indices, flags, u, v):
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        x = indices[mid]
        if x == v:
            return flags[mid]
        if x < v:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True)
def part_edge_stats(indptr, indices, label):
    """Per CSR entry u->v inside one part: common neighbors inside the part,
    and whether any common neighbor lies outside it. Cross-part entries get -1."""
    n = indptr.size - 1
    cn_in = np.full(indices.size, -1, dtype=np.int64)
    cn_out = np.zeros(indices.size, dtype=np.bool_)
    for u in range(n):
        lab = label[u]
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if label[v] != lab:
                continue
            a = indptr[u]
            a1 = indptr[u + 1]
            b = indptr[v]
            b1 = indptr[v + 1]
            cnt = 0
            out = False
            while a < a1 and b < b1:
                x = indices[a]
                y = indices[b]
                if x == y:
                    if label[x] == lab:
                        cnt += 1
                    else:
                        out = True
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
            cn_in[j] = cnt
            cn_out[j] = out
    return cn_in, cn_out


@njit(cache=True)
def _excluded_dominates(indptr, indices, buf, s, L, colors, cu, last):
    """True when some common neighbor that may not join the clique (other
    color, or same color but below ``last``) is adjacent to every remaining
    candidate; then no extension of the clique can be maximal."""
    for i in range(s, s + L):
        z = buf[i]
        if colors[z] == cu and z > last:
            continue
        ok = True
        for j in range(s, s + L):
            y = buf[j]
            if y == z or colors[y] != cu or y <= last:
                continue
            if not _has_edge(indptr, indices, z, y):
                ok = False
                break
        if ok:
            return True
    return False


@njit(cache=True)
def mono_maximal_cliques(indptr, indices, colors, max_out):
    """Enumerate maximal cliques of size >= 2 whose vertices share one color.

    Each monochromatic clique is grown in increasing vertex order; a clique is
    reported when its common neighborhood is empty. Branches are cut as soon
    as a vertex that cannot join is adjacent to all remaining candidates. Stops after ``max_out``
    reports. Returns (flat vertex list, offsets, truncated).
    """
    n = indptr.size - 1
    maxdeg = 0
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    depth_cap = maxdeg + 3
    buf = np.empty(4 * maxdeg + 16, dtype=np.int64)
    start = np.empty(depth_cap, dtype=np.int64)
    length = np.empty(depth_cap, dtype=np.int64)
    cursor = np.empty(depth_cap, dtype=np.int64)
    clique = np.empty(depth_cap, dtype=np.int64)
    flat = np.empty(64, dtype=np.int64)
    offsets = np.zeros(17, dtype=np.int64)
    count = 0
    nflat = 0

    for u in range(n):
        cu = colors[u]
        for jj in range(indptr[u], indptr[u + 1]):
            v = indices[jj]
            if v <= u or colors[v] != cu:
                continue
            clique[0] = u
            clique[1] = v
            # common neighborhood of {u, v}
            a = indptr[u]
            a1 = indptr[u + 1]
            b = indptr[v]
            b1 = indptr[v + 1]
            L = 0
            while a < a1 and b < b1:
                x = indices[a]
                y = indices[b]
                if x == y:
                    buf[L] = x
                    L += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
            size = 2
            if L == 0:
                # report clique[:2]
                if nflat + size > flat.size:
                    nf = np.empty(2 * flat.size + size, dtype=np.int64)
                    nf[:nflat] = flat[:nflat]
                    flat = nf
                flat[nflat] = u
                flat[nflat + 1] = v
                nflat += size
                count += 1
                if count + 1 > offsets.size:
                    no = np.zeros(2 * offsets.size, dtype=np.int64)
                    no[:count] = offsets[:count]
                    offsets = no
                offsets[count] = nflat
                if count >= max_out:
                    return flat[:nflat], offsets[:count + 1], True
                continue
            if _excluded_dominates(indptr, indices, buf, 0, L, colors, cu, v):
                continue
            start[0] = 0
            length[0] = L
            cursor[0] = 0
            depth = 0
            while True:
                d = depth
                found = False
                w = -1
                last = clique[d + 1]
                while cursor[d] < length[d]:
                    w = buf[start[d] + cursor[d]]
                    cursor[d] += 1
                    if w > last and colors[w] == cu:
                        found = True
                        break
                if not found:
                    if d == 0:
                        break
                    depth -= 1
                    continue
                clique[d + 2] = w
                ns = start[d] + length[d]
                need = ns + length[d]
                if need > buf.size:
                    nb = np.empty(2 * need, dtype=np.int64)
                    nb[:ns] = buf[:ns]
                    buf = nb
                a = start[d]
                a1 = start[d] + length[d]
                b = indptr[w]
                b1 = indptr[w + 1]
                L2 = 0
                while a < a1 and b < b1:
                    x = buf[a]
                    y = indices[b]
                    if x == y:
                        buf[ns + L2] = x
                        L2 += 1
                        a += 1
                        b += 1
                    elif x < y:
                        a += 1
                    else:
                        b += 1
                if L2 == 0:
                    size = d + 3
                    if nflat + size > flat.size:
                        nf = np.empty(2 * flat.size + size, dtype=np.int64)
                        nf[:nflat] = flat[:nflat]
                        flat = nf
                    for t in range(size):
                        flat[nflat + t] = clique[t]
                    nflat += size
                    count += 1
                    if count + 1 > offsets.size:
                        no = np.zeros(2 * offsets.size, dtype=np.int64)
                        no[:count] = offsets[:count]
                        offsets = no
                    offsets[count] = nflat
                    if count >= max_out:
                        return flat[:nflat], offsets[:count + 1], True
                    continue
                if _excluded_dominates(indptr, indices, buf, ns, L2, colors, cu, w):
                    continue
                start[d + 1] = ns
                length[d + 1] = L2
                cursor[d + 1] = 0
                depth = d + 1
    return flat[:nflat], offsets[:count + 1], False


@njit(cache=True)
def greedy_color(indptr, indices, order):
    n = indptr.size - 1
    colors = np.full(n, -1, dtype=np.int64)
    maxdeg = 0
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    seen = np.full(maxdeg + 2, -1, dtype=np.int64)
    for i in range(order.size):
        v = order[i]
        for j in range(indptr[v], indptr[v + 1]):
            c = colors[indices[j]]
            if c >= 0 and c <= maxdeg:
                seen[c] = v
        c = 0
        while seen[c] == v:
            c += 1
        colors[v] = c
    return colors


@njit(cache=True)
def mono_triangles(indptr, indices, label, max_out):
    """Triangles u<v<w whose three vertices share a label, at most ``max_out``."""
    n = indptr.size - 1
    out = np.empty((16, 3), dtype=np.int64)
    cnt = 0
    for u in range(n):
        lab = label[u]
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if v <= u or label[v] != lab:
                continue
            a = indptr[u]
            a1 = indptr[u + 1]
            b = indptr[v]
            b1 = indptr[v + 1]
            while a < a1 and b < b1:
                x = indices[a]
                y = indices[b]
                if x == y:
                    if x > v and label[x] == lab:
                        if cnt >= out.shape[0]:
                            no = np.empty((2 * out.shape[0], 3), dtype=np.int64)
                            no[:cnt] = out[:cnt]
                            out = no
                        out[cnt, 0] = u
                        out[cnt, 1] = v
                        out[cnt, 2] = x
                        cnt += 1
                        if cnt >= max_out:
                            return out[:cnt]
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
    return out[:cnt]


@njit(cache=True)
def first_fit_triangle_free(indptr, indices, order):
    """Place vertices in ``order`` into the lowest class where they close no triangle."""
    n = indptr.size - 1
    label = np.full(n, -1, dtype=np.int64)
    forbid = np.full(n + 1, -1, dtype=np.int64)
    nclass = 0
    maxdeg = 0
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    nb = np.empty(maxdeg + 1, dtype=np.int64)
    nl = np.empty(maxdeg + 1, dtype=np.int64)
    for i in range(order.size):
        v = order[i]
        k = 0
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if label[u] >= 0:
                nb[k] = u
                nl[k] = label[u]
                k += 1
        if k >= 2:
            perm = np.argsort(nl[:k], kind="mergesort")
            s = 0
            while s < k:
                e = s
                lab = nl[perm[s]]
                while e < k and nl[perm[e]] == lab:
                    e += 1
                hit = False
                for a in range(s, e):
                    if hit:
                        break
                    for b in range(a + 1, e):
                        if _has_edge(indptr, indices, nb[perm[a]], nb[perm[b]]):
                            hit = True
                            break
                if hit:
                    forbid[lab] = v
                s = e
        c = 0
        while c < nclass and forbid[c] == v:
            c += 1
        if c == nclass:
            nclass += 1
        label[v] = c
    return label


@njit(cache=True)
def triangles_created(indptr, indices, label, v, nclass):
    """For each class c: edges among v's neighbors labeled c, i.e. the triangles
    v would close by joining c."""
    counts = np.zeros(nclass, dtype=np.int64)
    for j in range(indptr[v], indptr[v + 1]):
        u = indices[j]
        lab = label[u]
        for t in range(j + 1, indptr[v + 1]):
            w = indices[t]
            if label[w] == lab and _has_edge(indptr, indices, u, w):
                counts[lab] += 1
    return counts
