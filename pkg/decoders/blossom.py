"""
Emparejamiento perfecto de peso mínimo exacto (algoritmo de flores de Edmonds).

Implementación primal-dual O(n³) del emparejamiento de peso máximo en
grafos generales con pesos enteros. El emparejamiento perfecto de peso
mínimo sobre un grafo completo se obtiene con pesos C − d y cardinalidad
máxima. Los pesos se duplican para que todas las variables duales sean
enteras.
"""
from __future__ import annotations

from utils.exceptions import ArgumentError


class MaxWeightMatcher:
    """
    Estado del algoritmo sobre un grafo dado como lista de aristas (i, j, w).

    Vértices 0..n-1; cada arista k tiene dos extremos p = 2k y 2k+1;
    endpoint[p] es el vértice de ese extremo. Las flores no triviales usan
    los índices n..2n-1. Etiquetas: 0 libre, 1 = S, 2 = T; el bit 4 se usa
    como marca temporal en scan_blossom.
    """

    def __init__(self, edges, max_cardinality=True):
        self.edges = [(int(i), int(j), 2 * int(w)) for (i, j, w) in edges]
        self.max_cardinality = max_cardinality
        self.n_edges = len(self.edges)
        self.n_vertices = 1 + max(max(i, j) for (i, j, _w) in self.edges) if self.edges else 0

        n = self.n_vertices
        max_weight = max([0] + [w for (_i, _j, w) in self.edges])

        self.endpoint = [self.edges[p // 2][p % 2] for p in range(2 * self.n_edges)]
        self.neighbend = [[] for _ in range(n)]
        for k, (i, j, _w) in enumerate(self.edges):
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)

        self.mate = n * [-1]
        self.label = (2 * n) * [0]
        self.labelend = (2 * n) * [-1]
        self.inblossom = list(range(n))
        self.blossomparent = (2 * n) * [-1]
        self.blossomchilds = (2 * n) * [None]
        self.blossombase = list(range(n)) + n * [-1]
        self.blossomendps = (2 * n) * [None]
        self.bestedge = (2 * n) * [-1]
        self.blossombestedges = (2 * n) * [None]
        self.unusedblossoms = list(range(n, 2 * n))
        self.dualvar = n * [max_weight] + n * [0]
        self.allowedge = self.n_edges * [False]
        self.queue = []

    # ==================== AUXILIARES ====================

    def slack(self, k):
        i, j, w = self.edges[k]
        return self.dualvar[i] + self.dualvar[j] - 2 * w

    def blossom_leaves(self, b):
        if b < self.n_vertices:
            yield b
        else:
            for t in self.blossomchilds[b]:
                if t < self.n_vertices:
                    yield t
                else:
                    yield from self.blossom_leaves(t)

    def assign_label(self, w, t, p):
        b = self.inblossom[w]
        self.label[w] = self.label[b] = t
        self.labelend[w] = self.labelend[b] = p
        self.bestedge[w] = self.bestedge[b] = -1
        if t == 1:
            self.queue.extend(self.blossom_leaves(b))
        elif t == 2:
            base = self.blossombase[b]
            self.assign_label(self.endpoint[self.mate[base]], 1, self.mate[base] ^ 1)

    def scan_blossom(self, v, w):
        """Busca la base de una nueva flor; -1 si hay camino aumentante"""
        path = []
        base = -1
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            self.label[b] = 1
        return base

    # ==================== FLORES ====================

    def add_blossom(self, base, k):
        v, w, _wt = self.edges[k]
        bb = self.inblossom[base]
        bv = self.inblossom[v]
        bw = self.inblossom[w]
        b = self.unusedblossoms.pop()
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        self.blossomchilds[b] = path = []
        self.blossomendps[b] = endps = []
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = self.inblossom[w]
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dualvar[b] = 0
        for leaf in self.blossom_leaves(b):
            if self.label[self.inblossom[leaf]] == 2:
                self.queue.append(leaf)
            self.inblossom[leaf] = b

        bestedgeto = (2 * self.n_vertices) * [-1]
        for child in path:
            if self.blossombestedges[child] is None:
                nblists = [[p // 2 for p in self.neighbend[leaf]]
                           for leaf in self.blossom_leaves(child)]
            else:
                nblists = [self.blossombestedges[child]]
            for nblist in nblists:
                for edge in nblist:
                    i, j, _w = self.edges[edge]
                    if self.inblossom[j] == b:
                        i, j = j, i
                    bj = self.inblossom[j]
                    if (bj != b and self.label[bj] == 1
                            and (bestedgeto[bj] == -1 or self.slack(edge) < self.slack(bestedgeto[bj]))):
                        bestedgeto[bj] = edge
            self.blossombestedges[child] = None
            self.bestedge[child] = -1
        self.blossombestedges[b] = [edge for edge in bestedgeto if edge != -1]
        self.bestedge[b] = -1
        for edge in self.blossombestedges[b]:
            if self.bestedge[b] == -1 or self.slack(edge) < self.slack(self.bestedge[b]):
                self.bestedge[b] = edge

    def expand_blossom(self, b, endstage):
        for s in self.blossomchilds[b]:
            self.blossomparent[s] = -1
            if s < self.n_vertices:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for leaf in self.blossom_leaves(s):
                    self.inblossom[leaf] = s

        if (not endstage) and self.label[b] == 2:
            entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = self.blossomchilds[b].index(entrychild)
            if j & 1:
                j -= len(self.blossomchilds[b])
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[self.blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allowedge[self.blossomendps[b][j - endptrick] // 2] = True
                j += jstep
                p = self.blossomendps[b][j - endptrick] ^ endptrick
                self.allowedge[p // 2] = True
                j += jstep
            bv = self.blossomchilds[b][j]
            self.label[self.endpoint[p ^ 1]] = self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while self.blossomchilds[b][j] != entrychild:
                bv = self.blossomchilds[b][j]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                leaf = -1
                for leaf in self.blossom_leaves(bv):
                    if self.label[leaf] != 0:
                        break
                if self.label[leaf] != 0:
                    self.label[leaf] = 0
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(leaf, 2, self.labelend[leaf])
                j += jstep

        self.label[b] = self.labelend[b] = -1
        self.blossomchilds[b] = self.blossomendps[b] = None
        self.blossombase[b] = -1
        self.blossombestedges[b] = None
        self.bestedge[b] = -1
        self.unusedblossoms.append(b)

    def augment_blossom(self, b, v):
        t = v
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.n_vertices:
            self.augment_blossom(t, v)
        i = j = self.blossomchilds[b].index(t)
        if i & 1:
            j -= len(self.blossomchilds[b])
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = self.blossomchilds[b][j]
            p = self.blossomendps[b][j - endptrick] ^ endptrick
            if t >= self.n_vertices:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = self.blossomchilds[b][j]
            if t >= self.n_vertices:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.blossomchilds[b] = self.blossomchilds[b][i:] + self.blossomchilds[b][:i]
        self.blossomendps[b] = self.blossomendps[b][i:] + self.blossomendps[b][:i]
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]]

    def augment_matching(self, k):
        v, w, _wt = self.edges[k]
        for (s, p) in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = self.inblossom[s]
                if bs >= self.n_vertices:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.n_vertices:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    # ==================== ETAPAS ====================

    def _scan_queue(self):
        """Hace crecer el bosque alternante; True si se aumentó el emparejamiento"""
        while self.queue:
            v = self.queue.pop()
            for p in self.neighbend[v]:
                k = p // 2
                w = self.endpoint[p]
                if self.inblossom[v] == self.inblossom[w]:
                    continue
                kslack = None
                if not self.allowedge[k]:
                    kslack = self.slack(k)
                    if kslack <= 0:
                        self.allowedge[k] = True
                if self.allowedge[k]:
                    if self.label[self.inblossom[w]] == 0:
                        self.assign_label(w, 2, p ^ 1)
                    elif self.label[self.inblossom[w]] == 1:
                        base = self.scan_blossom(v, w)
                        if base >= 0:
                            self.add_blossom(base, k)
                        else:
                            self.augment_matching(k)
                            return True
                    elif self.label[w] == 0:
                        self.label[w] = 2
                        self.labelend[w] = p ^ 1
                elif self.label[self.inblossom[w]] == 1:
                    b = self.inblossom[v]
                    if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                        self.bestedge[b] = k
                elif self.label[w] == 0:
                    if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                        self.bestedge[w] = k
        return False

    def _dual_update(self):
        """Ajuste dual; True si la etapa debe terminar sin aumento"""
        n = self.n_vertices
        deltatype = -1
        delta = deltaedge = deltablossom = None

        if not self.max_cardinality:
            deltatype = 1
            delta = min(self.dualvar[:n])

        for v in range(n):
            if self.label[self.inblossom[v]] == 0 and self.bestedge[v] != -1:
                d = self.slack(self.bestedge[v])
                if deltatype == -1 or d < delta:
                    delta = d
                    deltatype = 2
                    deltaedge = self.bestedge[v]

        for b in range(2 * n):
            if self.blossomparent[b] == -1 and self.label[b] == 1 and self.bestedge[b] != -1:
                d = self.slack(self.bestedge[b]) // 2
                if deltatype == -1 or d < delta:
                    delta = d
                    deltatype = 3
                    deltaedge = self.bestedge[b]

        for b in range(n, 2 * n):
            if (self.blossombase[b] >= 0 and self.blossomparent[b] == -1 and self.label[b] == 2
                    and (deltatype == -1 or self.dualvar[b] < delta)):
                delta = self.dualvar[b]
                deltatype = 4
                deltablossom = b

        if deltatype == -1:
            # Sin más mejoras posibles: emparejamiento de cardinalidad máxima
            deltatype = 1
            delta = max(0, min(self.dualvar[:n]))

        for v in range(n):
            if self.label[self.inblossom[v]] == 1:
                self.dualvar[v] -= delta
            elif self.label[self.inblossom[v]] == 2:
                self.dualvar[v] += delta
        for b in range(n, 2 * n):
            if self.blossombase[b] >= 0 and self.blossomparent[b] == -1:
                if self.label[b] == 1:
                    self.dualvar[b] += delta
                elif self.label[b] == 2:
                    self.dualvar[b] -= delta

        if deltatype == 1:
            return True
        if deltatype == 2:
            self.allowedge[deltaedge] = True
            i, j, _w = self.edges[deltaedge]
            if self.label[self.inblossom[i]] == 0:
                i, j = j, i
            self.queue.append(i)
        elif deltatype == 3:
            self.allowedge[deltaedge] = True
            i, _j, _w = self.edges[deltaedge]
            self.queue.append(i)
        else:
            self.expand_blossom(deltablossom, False)
        return False

    def run(self):
        """
        Ejecuta las etapas hasta que ninguna aumenta el emparejamiento.

        Returns:
            list: mate[v] = vértice emparejado con v, o -1
        """
        n = self.n_vertices
        for _stage in range(n):
            self.label[:] = (2 * n) * [0]
            self.bestedge[:] = (2 * n) * [-1]
            self.blossombestedges[n:] = n * [None]
            self.allowedge[:] = self.n_edges * [False]
            self.queue[:] = []

            for v in range(n):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)

            augmented = False
            while True:
                augmented = self._scan_queue()
                if augmented:
                    break
                if self._dual_update():
                    break

            if not augmented:
                break

            for b in range(n, 2 * n):
                if (self.blossomparent[b] == -1 and self.blossombase[b] >= 0
                        and self.label[b] == 1 and self.dualvar[b] == 0):
                    self.expand_blossom(b, True)

        return [self.endpoint[m] if m >= 0 else -1 for m in self.mate]


def max_weight_matching(edges, max_cardinality=False):
    """
    Emparejamiento de peso máximo de un grafo general con pesos enteros.

    Args:
        edges: lista de (i, j, w) con i != j
        max_cardinality: si True, solo entre emparejamientos de cardinalidad máxima

    Returns:
        list: pares (i, j) con i < j
    """
    for (i, j, _w) in edges:
        if i == j or i < 0 or j < 0:
            raise ArgumentError(f"Arista inválida ({i}, {j})")
    if not edges:
        return []
    mate = MaxWeightMatcher(edges, max_cardinality).run()
    return [(v, m) for v, m in enumerate(mate) if m > v]


def min_weight_perfect_matching(distances):
    """
    Emparejamiento perfecto de peso mínimo en el grafo completo.

    Args:
        distances: matriz simétrica n×n de enteros no negativos, n par

    Returns:
        list: pares (i, j) con i < j, ordenados por i
    """
    n = len(distances)
    if n % 2:
        raise ArgumentError(f"No existe emparejamiento perfecto con {n} vértices")
    if n == 0:
        return []
    if n == 2:
        return [(0, 1)]

    ceiling = 1 + max(int(distances[i][j]) for i in range(n) for j in range(i + 1, n))
    edges = [(i, j, ceiling - int(distances[i][j])) for i in range(n) for j in range(i + 1, n)]
    pairs = max_weight_matching(edges, max_cardinality=True)
    if 2 * len(pairs) != n:
        raise RuntimeError("El emparejamiento de cardinalidad máxima no es perfecto")
    return sorted(pairs)


def matching_weight(distances, pairs):
    return sum(int(distances[i][j]) for i, j in pairs)


def brute_force_min_matching_weight(distances):
    """
    Peso mínimo exacto enumerando los (n−1)!! emparejamientos perfectos.
    Oráculo para verificar el algoritmo de flores en grafos pequeños.
    """
    n = len(distances)
    if n % 2:
        raise ArgumentError(f"No existe emparejamiento perfecto con {n} vértices")

    def best(remaining):
        if not remaining:
            return 0
        first, rest = remaining[0], remaining[1:]
        return min(
            int(distances[first][partner]) + best(rest[:idx] + rest[idx + 1:])
            for idx, partner in enumerate(rest)
        )

    return best(tuple(range(n)))


__all__ = [
    'MaxWeightMatcher', 'max_weight_matching', 'min_weight_perfect_matching',
    'matching_weight', 'brute_force_min_matching_weight',
]
