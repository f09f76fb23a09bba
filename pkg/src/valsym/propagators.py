"""Concrete propagators and the descriptor-to-propagator factory.

Every propagator is contracting (only removes values) and monotone, and each
carries an exact check() used at search leaves, so propagation strength below
GAC never lets a false solution through.
"""

from __future__ import annotations

from typing import Sequence

from .domains import DomainSet, VarId
from .engine import Propagator
from .errors import ModelError
from .model import Constraint, ConstraintKind, Model
from .symmetry import VarValueSymmetry


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class NotEqualProp(Propagator):
    kind = "not-equal"

    def __init__(self, x: VarId, y: VarId):
        self.x = x
        self.y = y
        self.watches = (x, y)

    def propagate(self, domains):
        changed = []
        dx, dy = domains[self.x], domains[self.y]
        if dx.is_singleton and dy.remove(dx.value()):
            if dy.empty:
                return True, [self.y]
            changed.append(self.y)
        if dy.is_singleton and dx.remove(dy.value()):
            if dx.empty:
                return True, [self.x]
            changed.append(self.x)
        return False, changed

    def check(self, values):
        return values[self.x] != values[self.y]


class AbsDiffProp(Propagator):
    """|x - y| = d, filtered to arc consistency by support sweeps."""

    kind = "abs-diff"

    def __init__(self, x: VarId, y: VarId, d: VarId):
        self.x = x
        self.y = y
        self.d = d
        self.watches = (x, y, d)

    def propagate(self, domains):
        dx, dy, dd = domains[self.x], domains[self.y], domains[self.d]
        changed = set()
        while True:
            moved = False
            keep = 0
            for w in dd:
                for a in dx:
                    if (a - w) in dy or (a + w) in dy:
                        keep |= 1 << w
                        break
            if dd.intersect_mask(keep):
                changed.add(self.d)
                moved = True
                if dd.empty:
                    return True, list(changed)
            keep = 0
            for a in dx:
                for w in dd:
                    if (a - w) in dy or (a + w) in dy:
                        keep |= 1 << a
                        break
            if dx.intersect_mask(keep):
                changed.add(self.x)
                moved = True
                if dx.empty:
                    return True, list(changed)
            keep = 0
            for b in dy:
                for w in dd:
                    if (b - w) in dx or (b + w) in dx:
                        keep |= 1 << b
                        break
            if dy.intersect_mask(keep):
                changed.add(self.y)
                moved = True
                if dy.empty:
                    return True, list(changed)
            if not moved:
                return False, list(changed)

    def check(self, values):
        return abs(values[self.x] - values[self.y]) == values[self.d]


class AllDifferentProp(Propagator):
    """Assigned values are pruned from the rest of the scope; when the number
    of available values equals the scope size, a value held by only one
    variable is fixed there; fewer available values than variables fails."""

    kind = "all-different"
    prune_assigned = True

    def __init__(self, scope: Sequence[VarId]):
        self.scope = tuple(scope)
        self.watches = self.scope

    def propagate(self, domains):
        scope = self.scope
        changed = set()
        while True:
            moved = False
            if self.prune_assigned:
                fixed_mask = 0
                for v in scope:
                    d = domains[v]
                    if d.is_singleton:
                        if d.mask & fixed_mask:
                            return True, list(changed)  # two vars on one value
                        fixed_mask |= d.mask
                for v in scope:
                    d = domains[v]
                    if not d.is_singleton and d.intersect_mask(~fixed_mask):
                        changed.add(v)
                        moved = True
                        if d.empty:
                            return True, list(changed)
            avail = 0
            for v in scope:
                avail |= domains[v].mask
            if avail.bit_count() < len(scope):
                return True, list(changed)
            if avail.bit_count() == len(scope):
                # every available value is used exactly once
                for val in _bits(avail):
                    bit = 1 << val
                    holder = -1
                    many = False
                    for v in scope:
                        if domains[v].mask & bit:
                            if holder >= 0:
                                many = True
                                break
                            holder = v
                    if not many and holder >= 0 and not domains[holder].is_singleton:
                        domains[holder].intersect_mask(bit)
                        changed.add(holder)
                        moved = True
            if not moved:
                return False, list(changed)

    def check(self, values):
        vals = [values[v] for v in self.scope]
        return len(set(vals)) == len(vals)


class LazyAllDifferentProp(AllDifferentProp):
    """All-different that deliberately skips assigned-value pruning; it only
    applies the counting rules, leaving individual collisions to the leaf
    check."""

    kind = "lazy-all-different"
    prune_assigned = False


class OrderingChainProp(Propagator):
    """v0 < v1 < ... (or <=), kept bounds consistent."""

    kind = "ordering-chain"

    def __init__(self, chain: Sequence[VarId], strict: bool = True):
        self.chain = tuple(chain)
        self.strict = strict
        self.watches = self.chain

    def propagate(self, domains):
        gap = 1 if self.strict else 0
        chain = self.chain
        changed = set()
        while True:
            moved = False
            for k in range(1, len(chain)):
                d = domains[chain[k]]
                if d.remove_below(domains[chain[k - 1]].min() + gap):
                    changed.add(chain[k])
                    moved = True
                    if d.empty:
                        return True, list(changed)
            for k in range(len(chain) - 2, -1, -1):
                d = domains[chain[k]]
                if d.remove_above(domains[chain[k + 1]].max() - gap):
                    changed.add(chain[k])
                    moved = True
                    if d.empty:
                        return True, list(changed)
            if not moved:
                return False, list(changed)

    def check(self, values):
        seq = [values[v] for v in self.chain]
        if self.strict:
            return all(a < b for a, b in zip(seq, seq[1:]))
        return all(a <= b for a, b in zip(seq, seq[1:]))


class PrecedenceProp(Propagator):
    """Value precedence on one interchangeable class: the k-th class value to
    appear (scanning the scope left to right) must be the k-th in the declared
    order, so used class values always form a prefix of that order.

    Filtering unfolds the counting automaton over the scope (state = number of
    class values introduced so far) and keeps exactly the values on a path
    from the start state to any end state: generalized arc consistency.
    """

    kind = "precedence"

    def __init__(self, scope: Sequence[VarId], order: Sequence[int]):
        if len(set(order)) != len(order):
            raise ModelError("precedence order repeats a value")
        self.scope = tuple(scope)
        self.order = tuple(order)
        self.rank = {v: r for r, v in enumerate(order)}
        self.watches = self.scope

    def _dest(self, state: int, value: int) -> int:
        # -1 = dead
        r = self.rank.get(value)
        if r is None or r < state:
            return state
        if r == state:
            return state + 1
        return -1

    def propagate(self, domains):
        scope = self.scope
        L = len(scope)
        fwd = [0] * (L + 1)
        fwd[0] = 1
        for i in range(L):
            nxt = 0
            dm = domains[scope[i]]
            for s in _bits(fwd[i]):
                for v in dm:
                    dest = self._dest(s, v)
                    if dest >= 0:
                        nxt |= 1 << dest
            if nxt == 0:
                return True, []
            fwd[i + 1] = nxt
        changed = []
        bwd = fwd[L]
        for i in range(L - 1, -1, -1):
            dm = domains[scope[i]]
            keep = 0
            new_bwd = 0
            for s in _bits(fwd[i]):
                for v in dm:
                    dest = self._dest(s, v)
                    if dest >= 0 and (bwd >> dest) & 1:
                        keep |= 1 << v
                        new_bwd |= 1 << s
            if dm.intersect_mask(keep):
                changed.append(scope[i])
                if dm.empty:
                    return True, changed
            bwd = new_bwd
        return False, changed

    def check(self, values):
        state = 0
        for var in self.scope:
            dest = self._dest(state, values[var])
            if dest < 0:
                return False
            state = dest
        return True


class LexLeaderProp(Propagator):
    """Assignment <=lex its image under one variable/value symmetry.

    With U_j = X at scope position j and V_j = sigma(X at position
    theta^-1(j)), the image assignment reads V_0 V_1 ... and the constraint is
    U <=lex V. Filtering walks the forced-tie prefix, enforces U <= V at the
    first open position (strict when the positions after it force U > V), and
    leaves the rest to later runs; the leaf check is exact.
    """

    kind = "lex-leader"

    def __init__(self, scope: Sequence[VarId], sym: VarValueSymmetry):
        if len(sym.theta) != len(scope):
            raise ModelError("lex-leader symmetry does not fit scope")
        self.scope = tuple(scope)
        self.sym = sym
        inv = sym.theta_inverse()
        self.u_vars = self.scope
        self.v_vars = tuple(self.scope[inv[j]] for j in range(len(scope)))
        self.sig = sym.sigma.image
        self.watches = tuple(sorted(set(self.u_vars) | set(self.v_vars)))

    def _forced_tie(self, domains, j: int) -> bool:
        uv, vv = self.u_vars[j], self.v_vars[j]
        sig = self.sig
        if uv == vv:
            return all(sig[v] == v for v in domains[uv])
        du, dv = domains[uv], domains[vv]
        return du.is_singleton and dv.is_singleton and du.value() == sig[dv.value()]

    def propagate(self, domains):
        L = len(self.u_vars)
        sig = self.sig
        j = 0
        while j < L and self._forced_tie(domains, j):
            j += 1
        if j == L:
            return False, []  # equality: constraint holds
        alpha = j
        # positions after a fully tied block that force U > V make alpha strict
        k = alpha + 1
        while k < L and self._forced_tie(domains, k):
            k += 1
        strict = False
        if k < L:
            min_u = domains[self.u_vars[k]].min()
            max_v = max(sig[b] for b in domains[self.v_vars[k]])
            if min_u > max_v:
                strict = True
        changed = []
        uv, vv = self.u_vars[alpha], self.v_vars[alpha]
        if uv == vv:
            d = domains[uv]
            keep = 0
            for v in d:
                if sig[v] > v or (not strict and sig[v] == v):
                    keep |= 1 << v
            if d.intersect_mask(keep):
                changed.append(uv)
                if d.empty:
                    return True, changed
        else:
            du, dv = domains[uv], domains[vv]
            max_v = max(sig[b] for b in dv)
            if du.remove_above(max_v - 1 if strict else max_v):
                changed.append(uv)
                if du.empty:
                    return True, changed
            min_u = du.min()
            keep = 0
            for b in dv:
                if sig[b] > min_u or (not strict and sig[b] == min_u):
                    keep |= 1 << b
            if dv.intersect_mask(keep):
                changed.append(vv)
                if dv.empty:
                    return True, changed
        return False, changed

    def check(self, values):
        u = tuple(values[v] for v in self.u_vars)
        w = tuple(self.sig[values[v]] for v in self.v_vars)
        return u <= w


class FirstOccurrenceChannelProp(Propagator):
    """Channel between scope variables and first-occurrence position variables.

    For the class value of rank k (1-based), z_k is its first-occurrence
    position among the scope (1-based), or the sentinel len(scope)+1+k when
    the value never occurs. Deductions kept deliberately at forward-checking
    strength:
      - a scope var fixed to the value bounds z from above;
      - a scope var fixed to something else removes that position from z;
      - positions before min(z) cannot hold the value;
      - a fixed z forces its position's variable;
      - a value absent from every scope domain forces the sentinel.
    """

    kind = "first-occurrence-channel"

    def __init__(self, x_scope: Sequence[VarId], z_vars: Sequence[VarId], order: Sequence[int]):
        if len(z_vars) != len(order):
            raise ModelError("one position variable per class value required")
        self.x_scope = tuple(x_scope)
        self.z_vars = tuple(z_vars)
        self.order = tuple(order)
        self.watches = self.x_scope + self.z_vars

    def sentinel(self, k: int) -> int:
        return len(self.x_scope) + 1 + (k + 1)

    def propagate(self, domains):
        n = len(self.x_scope)
        changed = set()
        while True:
            moved = False
            for k, val in enumerate(self.order):
                dz = domains[self.z_vars[k]]
                bit = 1 << val
                absent = True
                for i1 in range(1, n + 1):
                    dx = domains[self.x_scope[i1 - 1]]
                    if dx.mask & bit:
                        absent = False
                    if dx.is_singleton:
                        if dx.value() == val:
                            if dz.remove_above(i1):
                                changed.add(self.z_vars[k])
                                moved = True
                        elif dz.remove(i1):
                            changed.add(self.z_vars[k])
                            moved = True
                if absent and dz.intersect_mask(1 << self.sentinel(k)):
                    changed.add(self.z_vars[k])
                    moved = True
                if dz.empty:
                    return True, list(changed)
                lb = dz.min()
                for i1 in range(1, min(lb, n + 1)):
                    dx = domains[self.x_scope[i1 - 1]]
                    if dx.remove(val):
                        changed.add(self.x_scope[i1 - 1])
                        moved = True
                        if dx.empty:
                            return True, list(changed)
                if dz.is_singleton:
                    pos = dz.value()
                    if pos <= n:
                        dx = domains[self.x_scope[pos - 1]]
                        if dx.intersect_mask(bit):
                            changed.add(self.x_scope[pos - 1])
                            moved = True
                            if dx.empty:
                                return True, list(changed)
            if not moved:
                return False, list(changed)

    def check(self, values):
        for k, val in enumerate(self.order):
            first = self.sentinel(k)
            for i1, var in enumerate(self.x_scope, start=1):
                if values[var] == val:
                    first = i1
                    break
            if values[self.z_vars[k]] != first:
                return False
        return True


class EqualityDisjunctionProp(Propagator):
    """Some listed pair of variables must be equal; evaluated only once its
    whole scope is fixed."""

    kind = "equality-disjunction"

    def __init__(self, pairs: Sequence[tuple[VarId, VarId]]):
        self.pairs = tuple(tuple(p) for p in pairs)
        self.watches = tuple(sorted({v for p in self.pairs for v in p}))

    def propagate(self, domains):
        if not self.pairs:
            return True, []
        if all(domains[v].is_singleton for v in self.watches):
            vals = {v: domains[v].value() for v in self.watches}
            if not any(vals[a] == vals[b] for a, b in self.pairs):
                return True, []
        return False, []

    def check(self, values):
        return any(values[a] == values[b] for a, b in self.pairs)


def build_propagator(c: Constraint) -> Propagator:
    kind = c.kind
    if kind is ConstraintKind.NOT_EQUAL:
        x, y = c.scope
        return NotEqualProp(x, y)
    if kind is ConstraintKind.ABS_DIFF:
        x, y, d = c.scope
        return AbsDiffProp(x, y, d)
    if kind is ConstraintKind.ALL_DIFFERENT:
        return AllDifferentProp(c.scope)
    if kind is ConstraintKind.LAZY_ALL_DIFFERENT:
        return LazyAllDifferentProp(c.scope)
    if kind is ConstraintKind.ORDERING_CHAIN:
        return OrderingChainProp(c.scope, strict=c.params.get("strict", True))
    if kind is ConstraintKind.PRECEDENCE:
        return PrecedenceProp(c.scope, c.params["order"])
    if kind is ConstraintKind.LEX_LEADER:
        return LexLeaderProp(c.scope, c.params["symmetry"])
    if kind is ConstraintKind.FIRST_OCCURRENCE_CHANNEL:
        return FirstOccurrenceChannelProp(
            c.params["x_scope"], c.params["z_vars"], c.params["order"]
        )
    if kind is ConstraintKind.EQUALITY_DISJUNCTION:
        return EqualityDisjunctionProp(c.params["pairs"])
    raise ModelError(f"no propagator for constraint kind {kind}")


def build_propagators(model: Model) -> list[Propagator]:
    return [build_propagator(c) for c in model.constraints]


def check_all(propagators: Sequence[Propagator], values: Sequence[int]) -> bool:
    return all(p.check(values) for p in propagators)
