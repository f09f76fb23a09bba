"""Chaotic-iteration propagation engine.

Propagators are contracting and monotone, so running them in any fair order
reaches the same greatest fixpoint; the engine uses a FIFO queue re-seeded by
the variables each run changed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .domains import DomainSet, VarId


@dataclass
class PropagationOutcome:
    """Result of running propagation to a fixpoint: failure flag plus the set
    of variables whose domains changed."""

    failed: bool
    changed: set[int] = field(default_factory=set)

    @property
    def fixpoint(self) -> bool:
        return not self.failed


class Propagator:
    """One constraint's filtering algorithm.

    propagate() mutates the domain list and reports (failed, changed_vars).
    check() decides the underlying relation on a full assignment; search uses
    it at leaves so weak propagators never admit false solutions.
    """

    kind = "propagator"
    watches: tuple[VarId, ...] = ()

    def propagate(self, domains: list[DomainSet]) -> tuple[bool, list[int]]:
        raise NotImplementedError

    def check(self, values: Sequence[int]) -> bool:
        raise NotImplementedError


def build_watchers(propagators: Sequence[Propagator], num_vars: int) -> list[list[int]]:
    watchers: list[list[int]] = [[] for _ in range(num_vars)]
    for idx, p in enumerate(propagators):
        for v in p.watches:
            watchers[v].append(idx)
    return watchers


def propagate_to_fixpoint(
    propagators: Sequence[Propagator],
    domains: list[DomainSet],
    trigger_vars: Optional[Sequence[int]] = None,
    watchers: Optional[list[list[int]]] = None,
    stats=None,
) -> PropagationOutcome:
    """Run propagators to their common fixpoint.

    trigger_vars=None seeds the queue with every propagator (root call);
    otherwise only the watchers of the given variables run initially, the
    rest are woken by domain changes.
    """
    if watchers is None:
        watchers = build_watchers(propagators, len(domains))
    pending = [False] * len(propagators)
    queue: deque[int] = deque()

    def enqueue(idx: int):
        if not pending[idx]:
            pending[idx] = True
            queue.append(idx)

    if trigger_vars is None:
        for idx in range(len(propagators)):
            enqueue(idx)
    else:
        for v in trigger_vars:
            for idx in watchers[v]:
                enqueue(idx)

    changed_total: set[int] = set()
    while queue:
        idx = queue.popleft()
        pending[idx] = False
        if stats is not None:
            stats.propagation_calls += 1
        failed, changed = propagators[idx].propagate(domains)
        if failed:
            return PropagationOutcome(True, changed_total | set(changed))
        for v in changed:
            changed_total.add(v)
            for w in watchers[v]:
                enqueue(w)
    return PropagationOutcome(False, changed_total)
