"""Pure-Python CDCL SAT solver.

Reference twin of the compiled core in ``_satcore``: two-watched-literal
propagation, first-UIP conflict analysis, VSIDS branching with saved phases
(default false), Luby restarts and activity-based learnt-clause reduction.
All heuristics are deterministic; a nonzero seed perturbs initial variable
activities reproducibly.

Literals use the internal encoding ``2*var`` (positive) / ``2*var + 1``
(negative) with 0-based variables; the public interface speaks DIMACS-style
signed integers with 1-based variables.
"""

from __future__ import annotations

from heapq import heappop, heappush

_DECAY = 1 / 0.95
_RESCALE = 1e100


def _luby(i: int) -> int:
    while True:
        k = 1
        while (1 << k) - 1 < i:
            k += 1
        if (1 << k) - 1 == i:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1


class Solver:
    def __init__(self, num_vars: int, clauses=(), seed: int = 0):
        nv = num_vars
        self.nv = nv
        self.ok = True
        self.lits: list[int] = []          # clause arena, flat
        self.c_start: list[int] = []
        self.c_size: list[int] = []
        self.c_learnt: list[int] = []
        self.c_act: list[float] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * nv)]
        self.assign: list[int] = [0] * nv  # 0 unassigned, +1 true, -1 false
        self.level: list[int] = [0] * nv
        self.reason: list[int] = [-1] * nv
        self.trail: list[int] = []
        self.lim: list[int] = []
        self.qhead = 0
        self.act: list[float] = [0.0] * nv
        self.inc = 1.0
        self.phase: list[int] = [0] * nv
        self.seen: list[int] = [0] * nv
        self.heap: list[tuple[float, int]] = []
        self.root_units: list[int] = []
        if seed:
            state = seed & 0xFFFFFFFF or 1
            for v in range(nv):
                state = (1103515245 * state + 12345) & 0x7FFFFFFF
                self.act[v] = state / 0x7FFFFFFF * 1e-6
        for v in range(nv):
            heappush(self.heap, (-self.act[v], v))
        for clause in clauses:
            self.add_clause(clause)

    # -- clause management --------------------------------------------------

    def add_clause(self, ext_lits, learnt: bool = False) -> None:
        """Add a clause of signed 1-based literals; resets to decision level 0.

        The clause is simplified against the permanent level-0 assignment so
        the chosen watches are never already falsified.
        """
        if self.lim:
            self._cancel_until(0)
        lits = []
        seen = set()
        for el in ext_lits:
            v = abs(el) - 1
            if v < 0 or v >= self.nv:
                raise ValueError(f"literal {el} out of range")
            il = 2 * v + (1 if el < 0 else 0)
            if il ^ 1 in seen:
                return  # tautology
            if il in seen:
                continue
            val = self._lit_value(il)
            if val > 0:
                return  # already satisfied at level 0
            if val < 0:
                continue  # permanently false literal
            seen.add(il)
            lits.append(il)
        self._add_internal(lits, learnt)

    def _add_internal(self, lits: list[int], learnt: bool) -> int:
        if not lits:
            self.ok = False
            return -1
        if len(lits) == 1:
            self.root_units.append(lits[0])
            return -1
        ci = len(self.c_start)
        self.c_start.append(len(self.lits))
        self.c_size.append(len(lits))
        self.c_learnt.append(1 if learnt else 0)
        self.c_act.append(0.0)
        self.lits.extend(lits)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        return ci

    # -- assignment ---------------------------------------------------------

    def _lit_value(self, il: int) -> int:
        a = self.assign[il >> 1]
        if a == 0:
            return 0
        return a if (il & 1) == 0 else -a

    def _enqueue(self, il: int, reason: int) -> bool:
        v = il >> 1
        val = 1 if (il & 1) == 0 else -1
        if self.assign[v] != 0:
            return self.assign[v] == val
        self.assign[v] = val
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.trail.append(il)
        return True

    def _propagate(self) -> int:
        lits, c_start, c_size = self.lits, self.c_start, self.c_size
        watches, assign = self.watches, self.assign
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            falsified = p ^ 1
            ws = watches[falsified]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                s = c_start[ci]
                if lits[s] == falsified:
                    lits[s], lits[s + 1] = lits[s + 1], lits[s]
                first = lits[s]
                a = assign[first >> 1]
                if a != 0 and (a > 0) == ((first & 1) == 0):
                    ws[j] = ci
                    j += 1
                    i += 1
                    continue
                found = -1
                for t in range(s + 2, s + c_size[ci]):
                    q = lits[t]
                    aq = assign[q >> 1]
                    if aq == 0 or (aq > 0) == ((q & 1) == 0):
                        found = t
                        break
                if found >= 0:
                    lits[s + 1], lits[found] = lits[found], lits[s + 1]
                    watches[lits[s + 1]].append(ci)
                    i += 1
                    continue
                ws[j] = ci
                j += 1
                i += 1
                if a != 0:  # first literal false: conflict
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return ci
                self._enqueue(first, ci)
            del ws[j:]
        return -1

    # -- conflict analysis ---------------------------------------------------

    def _bump_var(self, v: int) -> None:
        self.act[v] += self.inc
        if self.act[v] > _RESCALE:
            for u in range(self.nv):
                self.act[u] *= 1e-100
            self.inc *= 1e-100
        heappush(self.heap, (-self.act[v], v))

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        learnt = [0]
        seen = self.seen
        counter = 0
        p = -1
        index = len(self.trail) - 1
        cur_level = len(self.lim)
        c = confl
        while True:
            if self.c_learnt[c]:
                self.c_act[c] += self.inc
            s = self.c_start[c]
            for t in range(s, s + self.c_size[c]):
                q = self.lits[t]
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump_var(v)
                    if self.level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            v = p >> 1
            index -= 1
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            c = self.reason[v]
        learnt[0] = p ^ 1
        back = 0
        if len(learnt) > 1:
            # move the highest-level tail literal to the second slot
            best = 1
            for t in range(2, len(learnt)):
                if self.level[learnt[t] >> 1] > self.level[learnt[best] >> 1]:
                    best = t
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[learnt[1] >> 1]
        for q in learnt:
            seen[q >> 1] = 0
        return learnt, back

    def _cancel_until(self, target: int) -> None:
        if len(self.lim) <= target:
            return
        bound = self.lim[target]
        for idx in range(len(self.trail) - 1, bound - 1, -1):
            il = self.trail[idx]
            v = il >> 1
            self.phase[v] = 1 if self.assign[v] > 0 else 0
            self.assign[v] = 0
            self.reason[v] = -1
            heappush(self.heap, (-self.act[v], v))
        del self.trail[bound:]
        del self.lim[target:]
        self.qhead = len(self.trail)

    # -- learnt-clause reduction ----------------------------------------------

    def _reduce_db(self) -> None:
        learnts = [ci for ci in range(len(self.c_start))
                   if self.c_learnt[ci] and self.c_size[ci] > 2]
        if len(learnts) < 100:
            return
        locked = {self.reason[il >> 1] for il in self.trail}
        learnts.sort(key=lambda ci: (self.c_act[ci], -ci))
        drop = set(ci for ci in learnts[: len(learnts) // 2] if ci not in locked)
        if not drop:
            return
        # rebuild the arena without the dropped clauses
        old = (self.lits, self.c_start, self.c_size, self.c_learnt, self.c_act)
        self.lits, self.c_start, self.c_size = [], [], []
        self.c_learnt, self.c_act = [], []
        self.watches = [[] for _ in range(2 * self.nv)]
        remap: dict[int, int] = {}
        for ci in range(len(old[1])):
            if ci in drop:
                continue
            s, sz = old[1][ci], old[2][ci]
            new_ci = len(self.c_start)
            remap[ci] = new_ci
            self.c_start.append(len(self.lits))
            self.c_size.append(sz)
            self.c_learnt.append(old[3][ci])
            self.c_act.append(old[4][ci])
            self.lits.extend(old[0][s: s + sz])
            self.watches[self.lits[self.c_start[new_ci]]].append(new_ci)
            self.watches[self.lits[self.c_start[new_ci] + 1]].append(new_ci)
        for v in range(self.nv):
            if self.reason[v] >= 0:
                self.reason[v] = remap.get(self.reason[v], -1)

    # -- main loop -------------------------------------------------------------

    def solve(self) -> list[bool] | None:
        """A satisfying assignment indexed by variable (1-based), or None."""
        if not self.ok:
            return None
        self._cancel_until(0)
        for il in self.root_units:
            if not self._enqueue(il, -1):
                self.ok = False
                return None
        if self._propagate() != -1:
            self.ok = False
            return None
        n_assigned = sum(1 for a in self.assign if a != 0)
        conflicts = 0
        restart_idx = 1
        restart_limit = 64 * _luby(restart_idx)
        max_learnts = max(4000, 2 * len(self.c_start))
        while True:
            confl = self._propagate()
            if confl != -1:
                conflicts += 1
                if not self.lim:
                    self.ok = False
                    return None
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                ci = -1
                if len(learnt) > 1:
                    ci = self._add_internal(list(learnt), True)
                else:
                    self.root_units.append(learnt[0])
                self._enqueue(learnt[0], ci)
                self.inc *= _DECAY
                if conflicts >= restart_limit:
                    conflicts = 0
                    restart_idx += 1
                    restart_limit = 64 * _luby(restart_idx)
                    self._cancel_until(0)
                n_learnt = sum(self.c_learnt)
                if n_learnt > max_learnts:
                    self._cancel_until(0)
                    self._reduce_db()
                    max_learnts += max_learnts // 2
                continue
            if len(self.trail) == self.nv:
                return [False] + [a > 0 for a in self.assign]
            v = -1
            while self.heap:
                negact, u = heappop(self.heap)
                if self.assign[u] == 0 and -negact == self.act[u]:
                    v = u
                    break
            if v < 0:
                for u in range(self.nv):
                    if self.assign[u] == 0:
                        v = u
                        break
            self.lim.append(len(self.trail))
            self._enqueue(2 * v + (0 if self.phase[v] else 1), -1)


def solve(num_vars: int, clauses, seed: int = 0) -> list[bool] | None:
    return Solver(num_vars, clauses, seed).solve()
