"""Reduction engine for the extended pi-calculus.

A process is normalized into a ``Config``: a set of restricted names (kept
globally unique) plus a flat multiset of threads, each a sequential process
headed by an action, a match, a folded replication, or a bullet-wrapped
one.  Reduction enumerates redexes over the soup:

* COMM -- a send and a receive on the same evaluated channel with equal
  arity; replicated threads participate through one implicit unfold and
  stay folded.
* BROAD -- a broadcast together with *all* threads currently receiving on
  that exact channel, consumed atomically in a single step; a replicated
  receiver contributes one unfolded copy and persists; zero receivers is
  still a step (the payload is lost).
* THEN / ELSE -- a comparison thread whose operands evaluate now.

A step is important when it consumes a bullet guarding a participating
prefix, administrative otherwise.  Every thread carries a causal depth:
continuations inherit the maximum participant depth, plus one on important
steps, which makes the maximum depth over a run the span of its
important-step dependency graph.

Terms travelling over a channel are evaluated at commit time.  Evaluation
faults (arithmetic on a name, division by zero) abort the run in strict
mode and remove the offending thread in permissive mode.  Sends and
receives whose channel never resolves to a name simply stay blocked, which
is how translated programs deadlock on errors such as out-of-bounds
indexing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import lru_cache

from butfpi.epi.pretty import pretty_process, render_chan
from butfpi.epi.syntax import (
    Act,
    _memo_on_instance,
    Bcast,
    Bullet,
    Chan,
    Match,
    NameT,
    New,
    Nil,
    NumT,
    OpT,
    Par,
    Process,
    Recv,
    Repl,
    Send,
    Term,
    TermError,
    VarT,
    all_names,
    compare,
    eval_term,
    free_names,
    rewrite,
    term_vars,
)


class EngineError(Exception):
    """A process shape the engine does not execute (unguarded replication, ...)."""


@dataclass(frozen=True)
class Thread:
    tid: int
    proc: Process
    depth: int


@dataclass(frozen=True)
class Config:
    restricted: frozenset[str]
    threads: tuple[Thread, ...]
    used: frozenset[str]
    next_tid: int

    def thread(self, tid: int) -> Thread:
        for t in self.threads:
            if t.tid == tid:
                return t
        raise KeyError(tid)


@dataclass(frozen=True)
class Head:
    """The consumable prefix of a thread."""

    core: Send | Recv | Bcast | Match | None  # None: inert (e.g. a bulleted 0)
    cont: Process | None  # continuation once the prefix fires (branch for Match)
    bullets: int  # bullets consumed by a fire
    repl: bool  # folded replication: the thread survives a fire
    residual: Process | None  # what a replicated thread becomes after a fire


@_memo_on_instance("_memo_head")
def head_of(proc: Process) -> Head:
    bullets = 0
    p = proc
    while isinstance(p, Bullet):
        bullets += 1
        p = p.body
    if isinstance(p, Repl):
        inner = p.body
        copy_bullets = 0
        while isinstance(inner, Bullet):
            copy_bullets += 1
            inner = inner.body
        residual = p  # outer bullets are consumed by the first fire
        if isinstance(inner, Act):
            return Head(inner.action, inner.cont, bullets + copy_bullets, True, residual)
        if isinstance(inner, Match):
            return Head(inner, None, bullets + copy_bullets, True, residual)
        raise EngineError("replication must guard an action or a match")
    if isinstance(p, Act):
        return Head(p.action, p.cont, bullets, False, None)
    if isinstance(p, Match):
        return Head(p, None, bullets, False, None)
    if isinstance(p, Nil):
        return Head(None, None, bullets, False, None)
    raise AssertionError(f"non-normalized thread process: {p!r}")


# ------------------------------------------------------------ normalize

def _fresh_variant(base: str, used: set[str]) -> str:
    if base not in used:
        return base
    root = base.rstrip("0123456789_") or base
    i = 2
    while True:
        candidate = f"{root}_{i}"
        if candidate not in used:
            return candidate
        i += 1


class _Builder:
    """Accumulates threads while hoisting restrictions and flattening parallels."""

    def __init__(self, used: set[str], restricted: set[str], next_tid: int):
        self.used = used
        self.restricted = restricted
        self.next_tid = next_tid
        self.new_threads: list[Thread] = []

    def add(self, proc: Process, depth: int) -> None:
        match proc:
            case Nil():
                return
            case Par(left, right):
                self.add(left, depth)
                self.add(right, depth)
            case New(name, body):
                chosen = _fresh_variant(name, self.used)
                self.used.add(chosen)
                self.restricted.add(chosen)
                if chosen != name:
                    body = rewrite(body, name_map={name: chosen})
                self.add(body, depth)
            case Bullet():
                self._add_bulleted(proc, depth)
            case Repl(body):
                head_of(proc)  # raises on unguarded bodies
                self._thread(proc, depth)
            case Act() | Match():
                self._thread(proc, depth)
            case _:
                raise TypeError(f"not a process: {proc!r}")

    def _add_bulleted(self, proc: Process, depth: int) -> None:
        bullets = 0
        p = proc
        while isinstance(p, Bullet):
            bullets += 1
            p = p.body
        match p:
            case New(name, body):
                inner: Process = body
                for _ in range(bullets):
                    inner = Bullet(inner)
                self.add(New(name, inner), depth)
            case Par():
                raise EngineError("a bullet must guard a sequential process")
            case Nil():
                self._thread(proc, depth)  # inert, kept for bullet accounting
            case Repl() | Act() | Match():
                head_of(proc)
                self._thread(proc, depth)
            case _:
                raise TypeError(f"not a process: {p!r}")

    def _thread(self, proc: Process, depth: int) -> None:
        self.new_threads.append(Thread(self.next_tid, proc, depth))
        self.next_tid += 1


def _make_config(threads: tuple[Thread, ...], restricted: set[str],
                 used: set[str], next_tid: int, prune: bool = False) -> Config:
    if prune:
        # drop restricted names that occur nowhere; cosmetic, and cheap
        # enough only at normalization time, so steps skip it
        occurring: set[str] = set()
        for t in threads:
            occurring |= all_names(t.proc)
        restricted = restricted & occurring
    return Config(
        restricted=frozenset(restricted),
        threads=threads,
        used=frozenset(used),
        next_tid=next_tid,
    )


def normalize(p: Process) -> Config:
    """Flatten a process into a config, renaming binders to keep names unique."""
    used = set(free_names(p))
    builder = _Builder(used, set(), 0)
    builder.add(p, 0)
    return _make_config(tuple(builder.new_threads), builder.restricted, used,
                        builder.next_tid, prune=True)


def insert_process(config: Config, p: Process, depth: int = 0) -> Config:
    """Drop an extra process into an existing soup (used for read-back probes)."""
    used = set(config.used) | set(free_names(p))
    restricted = set(config.restricted)
    builder = _Builder(used, restricted, config.next_tid)
    builder.add(p, depth)
    threads = config.threads + tuple(builder.new_threads)
    return _make_config(threads, restricted, used, builder.next_tid)


def config_to_process(config: Config) -> Process:
    """Fold a config back into a single process (restrictions out front)."""
    body: Process = Nil()
    for t in reversed(config.threads):
        body = t.proc if isinstance(body, Nil) else Par(t.proc, body)
    for name in sorted(config.restricted):
        body = New(name, body)
    return body


# -------------------------------------------------------------- redexes

@dataclass(frozen=True)
class Redex:
    rule: str  # COMM | BROAD | THEN | ELSE | FAULT
    participants: tuple[int, ...]  # sender first, then receivers in tid order
    channel: tuple[str, object] | None = None
    branch_then: bool | None = None
    bullets: int = 0
    reason: str | None = None

    @property
    def key(self) -> tuple[int, ...]:
        return self.participants


def _chan_key(c: Chan) -> tuple[str, object] | None:
    if not isinstance(c.base, NameT):
        return None  # unresolved variable or a number: never a usable channel
    if isinstance(c.suffix, (VarT, NameT)):
        return None
    return (c.base.name, c.suffix)


def _decidable_terms(*terms: Term) -> bool:
    return all(not term_vars(t) for t in terms)


def enabled_redexes(config: Config) -> tuple[list[Redex], list[str]]:
    """All redexes of the soup, in deterministic order, plus diagnostics.

    Diagnostics report arity mismatches between a send and a receive on the
    same channel; strict-mode runs treat them as faults, permissive runs
    ignore them.
    """
    sends: list[tuple[int, tuple, int, Head]] = []
    recvs: dict[tuple, list[tuple[int, int, Head]]] = {}  # key -> [(tid, arity, head)]
    bcasts: list[tuple[int, tuple, int, Head]] = []
    redexes: list[Redex] = []
    diagnostics: list[str] = []

    for t in config.threads:
        h = head_of(t.proc)
        if h.core is None:
            continue
        if isinstance(h.core, Match):
            m = h.core
            if not _decidable_terms(m.left, m.right):
                continue
            try:
                taken = compare(m.op, eval_term(m.left), eval_term(m.right))
            except TermError as exc:
                redexes.append(Redex("FAULT", (t.tid,), reason=str(exc)))
                continue
            redexes.append(Redex("THEN" if taken else "ELSE", (t.tid,),
                                 branch_then=taken, bullets=h.bullets))
            continue
        key = _chan_key(h.core.chan)
        if key is None:
            continue
        if isinstance(h.core, Send):
            sends.append((t.tid, key, len(h.core.args), h))
        elif isinstance(h.core, Bcast):
            bcasts.append((t.tid, key, len(h.core.args), h))
        else:
            recvs.setdefault(key, []).append((t.tid, len(h.core.params), h))

    for tid, key, arity, h in sends:
        for rtid, rarity, rh in recvs.get(key, ()):
            if rarity != arity:
                diagnostics.append(
                    f"arity mismatch on {key[0]}: send of {arity} vs receive of {rarity}")
                continue
            redexes.append(Redex("COMM", (tid, rtid), channel=key,
                                 bullets=h.bullets + rh.bullets))

    for tid, key, arity, h in bcasts:
        receivers: list[int] = []
        bullets = h.bullets
        for rtid, rarity, rh in recvs.get(key, ()):
            if rarity != arity:
                diagnostics.append(
                    f"arity mismatch on broadcast {key[0]}: {arity} vs {rarity}")
                continue
            receivers.append(rtid)
            bullets += rh.bullets
        redexes.append(Redex("BROAD", (tid, *sorted(receivers)), channel=key,
                             bullets=bullets))

    redexes.sort(key=lambda r: r.key)
    return redexes, diagnostics


# ---------------------------------------------------------------- steps

@dataclass(frozen=True)
class Step:
    index: int
    kind: str  # "important" | "administrative"
    rule: str  # COMM | BROAD | THEN | ELSE
    channel: str | None  # ":c" marks a broadcast on a free channel
    participants: tuple[int, ...]
    depth_after: int
    bullets: int


class CommitFault(Exception):
    def __init__(self, message: str, tids: tuple[int, ...]):
        super().__init__(message)
        self.tids = tids


def _strip(thread: Thread, head: Head) -> Thread:
    """The folded residual of a replicated participant (outer bullets consumed)."""
    return replace(thread, proc=head.residual)


def apply_redex(config: Config, redex: Redex) -> tuple[Config, Step]:
    """Fire one redex.  Raises ``CommitFault`` if commit-time evaluation fails."""
    used = set(config.used)
    restricted = set(config.restricted)
    builder = _Builder(used, restricted, config.next_tid)

    consumed: set[int] = set()
    folded: dict[int, Thread] = {}
    important = redex.bullets > 0
    inc = 1 if important else 0
    channel_text: str | None = None

    if redex.rule in ("THEN", "ELSE"):
        t = config.thread(redex.participants[0])
        h = head_of(t.proc)
        m = h.core
        branch = m.then if redex.branch_then else m.orelse
        depth_after = t.depth + inc
        if h.repl:
            folded[t.tid] = _strip(t, h)
        else:
            consumed.add(t.tid)
        builder.add(branch, depth_after)
    elif redex.rule == "COMM":
        s = config.thread(redex.participants[0])
        r = config.thread(redex.participants[1])
        sh, rh = head_of(s.proc), head_of(r.proc)
        try:
            values = [eval_term(a) for a in sh.core.args]
        except TermError as exc:
            raise CommitFault(str(exc), (s.tid,))
        mapping = {x: v for x, v in zip(rh.core.params, values) if x is not None}
        depth_after = max(s.depth, r.depth) + inc
        for t, h in ((s, sh), (r, rh)):
            if h.repl:
                folded[t.tid] = _strip(t, h)
            else:
                consumed.add(t.tid)
        builder.add(sh.cont, depth_after)
        builder.add(rewrite(rh.cont, var_map=mapping), depth_after)
        channel_text = render_chan(sh.core.chan)
    elif redex.rule == "BROAD":
        s = config.thread(redex.participants[0])
        sh = head_of(s.proc)
        try:
            values = [eval_term(a) for a in sh.core.args]
        except TermError as exc:
            raise CommitFault(str(exc), (s.tid,))
        depths = [s.depth]
        if sh.repl:
            folded[s.tid] = _strip(s, sh)
        else:
            consumed.add(s.tid)
        receiver_conts: list[Process] = []
        for rtid in redex.participants[1:]:
            r = config.thread(rtid)
            rh = head_of(r.proc)
            depths.append(r.depth)
            mapping = {x: v for x, v in zip(rh.core.params, values) if x is not None}
            receiver_conts.append(rewrite(rh.cont, var_map=mapping))
            if rh.repl:
                folded[rtid] = _strip(r, rh)
            else:
                consumed.add(rtid)
        depth_after = max(depths) + inc
        builder.add(sh.cont, depth_after)
        for cont in receiver_conts:
            builder.add(cont, depth_after)
        channel_text = render_chan(sh.core.chan)
        if redex.channel[0] not in config.restricted:
            channel_text = ":" + channel_text  # observable broadcast label
    else:
        raise ValueError(f"cannot apply redex {redex.rule}")

    threads = tuple(
        folded.get(t.tid, t) for t in config.threads if t.tid not in consumed
    ) + tuple(builder.new_threads)
    new_config = _make_config(threads, restricted, used, builder.next_tid)
    step = Step(
        index=0,
        kind="important" if important else "administrative",
        rule=redex.rule,
        channel=channel_text,
        participants=redex.participants,
        depth_after=depth_after,
        bullets=redex.bullets,
    )
    return new_config, step


def _drop_threads(config: Config, tids: tuple[int, ...]) -> Config:
    threads = tuple(t for t in config.threads if t.tid not in tids)
    return _make_config(threads, set(config.restricted), set(config.used),
                        config.next_tid)


# ----------------------------------------------------------------- barbs

def barbs(config: Config) -> frozenset[tuple[str, str]]:
    """Unrestricted channels with a pending send (``out``) or receive (``in``)."""
    out: set[tuple[str, str]] = set()
    for t in config.threads:
        h = head_of(t.proc)
        if h.core is None or isinstance(h.core, Match):
            continue
        key = _chan_key(h.core.chan)
        if key is None or key[0] in config.restricted:
            continue
        polarity = "in" if isinstance(h.core, Recv) else "out"
        out.add((render_chan(h.core.chan), polarity))
    return frozenset(out)


# ------------------------------------------------------------------- run

@dataclass
class Trace:
    steps: list[Step] = field(default_factory=list)
    status: str = "terminated"
    faults: list[str] = field(default_factory=list)
    config: Config | None = None

    @property
    def work(self) -> int:
        return sum(1 for s in self.steps if s.kind == "important")

    @property
    def admin_steps(self) -> int:
        return sum(1 for s in self.steps if s.kind == "administrative")

    @property
    def span(self) -> int:
        return max((s.depth_after for s in self.steps), default=0)

    def to_dict(self) -> dict:
        return {
            "steps": [
                {"idx": s.index, "kind": s.kind, "rule": s.rule,
                 "channel": s.channel, "depth": s.depth_after}
                for s in self.steps
            ],
            "work": self.work,
            "span": self.span,
            "admin_steps": self.admin_steps,
            "barbs": sorted(f"{name}:{pol}" for name, pol in barbs(self.config)) if self.config else [],
            "status": self.status,
            "faults": list(self.faults),
        }


def _pick(redexes: list[Redex], policy: str, rng: random.Random | None) -> Redex:
    if policy == "priority":
        return min(redexes, key=lambda r: r.key)
    return redexes[rng.randrange(len(redexes))]


def run(config: Config, policy: str = "priority", seed: int = 0,
        budget: int = 1_000_000, stop_barb: str | None = None,
        admin_only: bool = False, permissive: bool = False,
        gc: bool = False) -> Trace:
    """Schedule redexes until quiescence, a stop barb, a fault, or the budget.

    ``policy`` is ``"priority"`` (lowest participant thread ids win) or
    ``"random"`` (uniform over enabled redexes, seeded).  ``admin_only``
    refuses to fire important redexes, which read-back probing uses to keep
    decoding free.  ``stop_barb`` halts as soon as the named channel is
    observable.
    """
    if policy not in ("priority", "random"):
        raise ValueError(f"unknown policy {policy!r}")
    rng = random.Random(seed) if policy == "random" else None
    trace = Trace()
    while True:
        if gc:
            config = garbage_collect(config)
        if stop_barb is not None and any(
                name == stop_barb for name, pol in barbs(config) if pol == "out"):
            trace.status = "barb"
            break
        redexes, diagnostics = enabled_redexes(config)
        if diagnostics and not permissive:
            trace.status = "fault"
            trace.faults.extend(diagnostics)
            break
        if admin_only:
            redexes = [r for r in redexes if r.bullets == 0 and r.rule != "FAULT"]
        if not redexes:
            trace.status = "terminated"
            break
        if len(trace.steps) >= budget:
            trace.status = "timeout"
            break
        redex = _pick(redexes, policy, rng)
        if redex.rule == "FAULT":
            trace.faults.append(redex.reason or "fault")
            if not permissive:
                trace.status = "fault"
                break
            config = _drop_threads(config, redex.participants)
            continue
        try:
            config, step = apply_redex(config, redex)
        except CommitFault as fault:
            trace.faults.append(str(fault))
            if not permissive:
                trace.status = "fault"
                break
            config = _drop_threads(config, fault.tids)
            continue
        trace.steps.append(replace(step, index=len(trace.steps) + 1))
    trace.config = config
    return trace


# --------------------------------------------------------------- explore

@_memo_on_instance("_memo_template")
def _thread_template(proc: Process) -> tuple[str, tuple[str, ...]]:
    """Encode a thread with free-name occurrences abstracted out.

    Local binders (guarded restrictions, receive patterns) encode
    positionally, so fresh names picked during unfolding cannot split
    states.  Every other name occurrence becomes an indexed hole; the
    returned occurrence list restores them.  Cached per process: threads
    survive across many states during exploration.
    """
    occs: list[str] = []

    def enc_name(name: str, env: dict[str, int]):
        if name in env:
            return ("b", env[name])
        occs.append(name)
        return ("N", len(occs) - 1)

    def enc_term(t: Term, env: dict[str, int]):
        match t:
            case NumT(v):
                return ("n", v)
            case NameT(name):
                return enc_name(name, env)
            case VarT(name):
                return ("v", env[name]) if name in env else ("v?", name)
            case OpT(op, left, right):
                return ("op", op, enc_term(left, env), enc_term(right, env))

    def enc_chan(c: Chan, env: dict[str, int]):
        sfx = c.suffix
        if isinstance(sfx, (VarT, NameT)):
            sfx = enc_term(sfx, env)
        return (enc_term(c.base, env), sfx)

    def go(p: Process, env: dict[str, int], depth: int):
        match p:
            case Nil():
                return ("0",)
            case Par(left, right):
                return ("|", go(left, env, depth), go(right, env, depth))
            case Repl(body):
                return ("!", go(body, env, depth))
            case Bullet(body):
                return ("*", go(body, env, depth))
            case New(name, body):
                return ("new", go(body, {**env, name: depth}, depth + 1))
            case Act(action, cont):
                tag = {Send: "snd", Recv: "rcv", Bcast: "bct"}[type(action)]
                if isinstance(action, Recv):
                    inner = dict(env)
                    d = depth
                    shape = []
                    for x in action.params:
                        if x is None:
                            shape.append("_")
                        else:
                            inner[x] = d
                            shape.append(d)
                            d += 1
                    return (tag, enc_chan(action.chan, env), tuple(shape),
                            go(cont, inner, d))
                payload = tuple(enc_term(t, env) for t in action.args)
                return (tag, enc_chan(action.chan, env), payload, go(cont, env, depth))
            case Match(left, op, right, then, orelse):
                return ("m", op, enc_term(left, env), enc_term(right, env),
                        go(then, env, depth), go(orelse, env, depth))

    skeleton = go(proc, {}, 0)
    return _intern_skeleton(skeleton), tuple(occs)


_SKELETONS: dict = {}


def _intern_skeleton(skeleton) -> int:
    sid = _SKELETONS.get(skeleton)
    if sid is None:
        sid = len(_SKELETONS)
        _SKELETONS[skeleton] = sid
    return sid


# interning table: canonical thread form -> small id (exact, never collides)
_INTERN: dict = {}


def _intern(key) -> int:
    tid = _INTERN.get(key)
    if tid is None:
        tid = len(_INTERN)
        _INTERN[key] = tid
    return tid


def canonical_key(config: Config) -> tuple:
    """A hashable form identifying configs up to renaming of restricted names.

    Two configs with equal keys are alpha-equivalent soups (depths and
    thread identities ignored).  The converse can miss: symmetric configs
    may canonicalize differently, which only costs deduplication, never
    soundness.  Keys are multisets of interned canonical thread forms, so
    holding hundreds of thousands of them stays cheap.
    """
    restricted = config.restricted
    templates = [_thread_template(t.proc) for t in config.threads]

    # order threads by skeleton and name-blinded occurrences, then number
    # restricted names by first appearance in that order
    blinded = sorted(
        ((skel, tuple((0, 0) if n in restricted else (1, n) for n in occs), occs)
         for skel, occs in templates))

    def assign(ordering) -> list[tuple]:
        numbers: dict[str, int] = {}
        keyed = []
        for skel, _masked, occs in ordering:
            parts = []
            for n in occs:
                if n in restricted:
                    k = numbers.get(n)
                    if k is None:
                        k = len(numbers)
                        numbers[n] = k
                    parts.append((0, k))
                else:
                    parts.append((1, n))
            keyed.append((skel, tuple(parts), occs))
        return keyed

    keyed = assign(blinded)
    keyed = assign(sorted((k[0], k[1], k[2]) for k in keyed))
    return tuple(sorted(_intern((skel, parts)) for skel, parts, _ in keyed))


def explore(config: Config, state_bound: int = 100_000, depth_bound: int = 100_000,
            ) -> tuple[list[Config], bool, int]:
    """Breadth-first search of the reduction graph modulo canonical renaming.

    Returns terminal configs (no enabled redexes), whether a bound was hit,
    and the number of distinct states visited.  Arity mismatches and match
    faults are treated permissively (the offending thread blocks or drops).
    """
    start = normalize_depths(config)
    seen = {canonical_key(start)}
    frontier = [start]
    terminals: list[Config] = []
    terminal_keys: set = set()
    bound_hit = False
    depth = 0
    while frontier:
        if depth >= depth_bound:
            bound_hit = True
            break
        next_frontier: list[Config] = []
        for c in frontier:
            redexes, _diagnostics = enabled_redexes(c)
            fired = False
            for redex in redexes:
                if redex.rule == "FAULT":
                    succ = _drop_threads(c, redex.participants)
                else:
                    try:
                        succ, _step = apply_redex(c, redex)
                    except CommitFault as fault:
                        succ = _drop_threads(c, fault.tids)
                fired = True
                key = canonical_key(succ)
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > state_bound:
                    bound_hit = True
                    return terminals, bound_hit, len(seen)
                next_frontier.append(succ)
            if not fired:
                key = canonical_key(c)
                if key not in terminal_keys:
                    terminal_keys.add(key)
                    terminals.append(c)
        frontier = next_frontier
        depth += 1
    if frontier:
        bound_hit = True
    return terminals, bound_hit, len(seen)


def normalize_depths(config: Config) -> Config:
    threads = tuple(replace(t, depth=0) for t in config.threads)
    return replace(config, threads=threads)


# ------------------------------------------------------------------- gc

def garbage_collect(config: Config) -> Config:
    """Drop replicated servers on restricted channels that no client can reach.

    A folded replication whose subject channel is restricted and whose base
    name occurs in no other thread can never synchronize again; removing it
    preserves behavior.
    """
    threads = list(config.threads)
    while True:
        removed = False
        for i, t in enumerate(threads):
            proc = t.proc
            stripped = proc
            while isinstance(stripped, Bullet):
                stripped = stripped.body
            if not isinstance(stripped, Repl):
                continue
            h = head_of(t.proc)
            if h.core is None or isinstance(h.core, Match):
                continue
            key = _chan_key(h.core.chan)
            if key is None or key[0] not in config.restricted:
                continue
            subject = key[0]
            others = threads[:i] + threads[i + 1:]
            if any(subject in all_names(o.proc) for o in others):
                continue
            threads = others
            removed = True
            break
        if not removed:
            break
    return _make_config(tuple(threads), set(config.restricted), set(config.used),
                        config.next_tid, prune=True)
