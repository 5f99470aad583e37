"""Bounded countermodel search by exhaustive enumeration of finite models.

Everything here scans a fixed, documented order — world count ascending,
then frame bitmask, then (for quantified models) domain size, existence
mask, predicate-interpretation masks, and valuation masks — and returns the
first hit, so results are reproducible run to run.  ``jobs > 1`` fans the
scan out over worker processes in fixed chunks and keeps the same answer:
chunks are consumed in order and the first in-order hit wins.

Every reported witness is re-checked with the plain reference evaluator
before it is returned; a failure there raises RuntimeError and would mean a
bug in the compiled evaluator, not in the caller's input.
"""

from __future__ import annotations

import multiprocessing
import string
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .formula import (Formula, Imp, SchemeVar, const_names, free_vars,
                      is_propositional, pred_symbols, prop_atoms, render,
                      scheme_vars)
from .model import (DomainFrame, FlexiblePred, FoModel, Frame,
                    FRAME_PROPERTIES, PropModel, domain_monotonicity,
                    frame_property, is_total, model_to_dict)
from .semantics import (Budget, ResourceLimit, bf_readings, evaluate,
                        fo_scheme_valid, meta_implies, scheme_valid, valid)

__all__ = [
    "SearchSpec", "SearchResult", "CONSTRAINT_NAMES",
    "PROP_WORLD_CEILING", "FO_WORLD_CEILING", "FO_SEARCH_BITS",
    "frame_from_mask", "frame_mask", "enumerate_frames",
    "find_countermodel", "find_fo_countermodel",
    "find_barcan_divergence", "find_deduction_gap",
    "barcan_sweep", "bf_agreement_sweep",
]

# Hard ceilings on the enumeration size a search will accept.
PROP_WORLD_CEILING = 4
FO_WORLD_CEILING = 3
# Refuse a first-order stage whose per-frame enumeration needs more bits
# (existence map + predicate interpretations + valuations) than this.
FO_SEARCH_BITS = 22

CONSTRAINT_NAMES = FRAME_PROPERTIES + ("total", "none")


# ---------------------------------------------------------------------------
# Frame enumeration

def frame_from_mask(n: int, mask: int, prefix: str = "w") -> Frame:
    """The n-world frame whose accessibility bitmask is ``mask``; bit i*n+j
    set means world i sees world j."""
    worlds = tuple(f"{prefix}{i}" for i in range(n))
    edges = tuple((worlds[i], worlds[j])
                  for i in range(n) for j in range(n)
                  if mask >> (i * n + j) & 1)
    return Frame(worlds, edges)


def frame_mask(fr: Frame) -> int:
    """Inverse of frame_from_mask up to world names."""
    n = len(fr.worlds)
    idx = fr.index
    m = 0
    for a, b in fr.access:
        m |= 1 << (idx[a] * n + idx[b])
    return m


def _canonical_mask(n: int, mask: int) -> int:
    best = None
    for perm in permutations(range(n)):
        m2 = 0
        for i in range(n):
            row = mask >> (i * n)
            for j in range(n):
                if row >> j & 1:
                    m2 |= 1 << (perm[i] * n + perm[j])
        if best is None or m2 < best:
            best = m2
    return best


def _check_constraints(constraints: Iterable[str]) -> frozenset[str]:
    cs = frozenset(constraints)
    bad = cs - set(CONSTRAINT_NAMES)
    if bad:
        raise ValueError(f"unknown frame constraint(s): {sorted(bad)}; "
                         f"known: {list(CONSTRAINT_NAMES)}")
    return cs - {"none"}


def _frame_ok(fr: Frame, constraints: frozenset[str]) -> bool:
    for c in constraints:
        if c == "total":
            if not is_total(fr):
                return False
        elif not frame_property(fr, c):
            return False
    return True


def enumerate_frames(n: int, constraints: Iterable[str] = (),
                     dedup: bool = False) -> Iterator[Frame]:
    """All labelled frames on n worlds in ascending bitmask order, filtered
    by the named constraints.  With ``dedup`` only the least representative
    of each relabelling (isomorphism) class is yielded.  Bad arguments are
    rejected immediately; the frames themselves come lazily."""
    if n < 1:
        raise ValueError("need at least one world")
    cs = _check_constraints(constraints)

    def gen() -> Iterator[Frame]:
        for mask in range(1 << (n * n)):
            if dedup and _canonical_mask(n, mask) != mask:
                continue
            fr = frame_from_mask(n, mask)
            if _frame_ok(fr, cs):
                yield fr
    return gen()


# ---------------------------------------------------------------------------
# Search specification and results

@dataclass(frozen=True)
class SearchSpec:
    """What to search for: a model where every premise holds (formulas valid,
    schemes schematically valid) but the conclusion fails under the chosen
    reading.

    reading "object": the conclusion formula/scheme itself must fail.
    reading "meta": the conclusion must be an implication A => B, and the
    model must make some shared instantiation of A valid while B is not —
    refuting the rule reading rather than the formula.
    max_domain 0 means propositional search; quantified search needs at
    least 1.  mode applies to quantified search only: "constant" keeps
    every element present everywhere, "varying" also enumerates existence
    maps.
    """

    conclusion: Formula
    premise_formulas: tuple[Formula, ...] = ()
    premise_schemes: tuple[Formula, ...] = ()
    frame_constraints: frozenset[str] = frozenset()
    max_worlds: int = 3
    max_domain: int = 0
    reading: str = "object"
    mode: str = "constant"

    def __post_init__(self):
        object.__setattr__(self, "premise_formulas",
                           tuple(self.premise_formulas))
        object.__setattr__(self, "premise_schemes",
                           tuple(self.premise_schemes))
        object.__setattr__(self, "frame_constraints",
                           _check_constraints(self.frame_constraints))
        if self.reading not in ("object", "meta"):
            raise ValueError(f"reading must be 'object' or 'meta', "
                             f"got {self.reading!r}")
        if self.mode not in ("constant", "varying"):
            raise ValueError(f"mode must be 'constant' or 'varying', "
                             f"got {self.mode!r}")
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if self.reading == "meta" and not isinstance(self.conclusion, Imp):
            raise ValueError("the meta reading needs an implication "
                             "conclusion")

    def formulas(self) -> tuple[Formula, ...]:
        return (*self.premise_formulas, *self.premise_schemes,
                self.conclusion)


@dataclass(frozen=True)
class SearchResult:
    """A found countermodel plus a self-describing certificate dict."""

    model: PropModel | FoModel
    certificate: dict

    def to_dict(self) -> dict:
        return {"model": model_to_dict(self.model),
                "certificate": self.certificate}


# ---------------------------------------------------------------------------
# Deterministic chunked scanning

def _chunk_ranges(total: int) -> list[tuple[int, int]]:
    """Split range(total) into fixed chunks (at most 128, independent of the
    worker count, so results and budget accounting do not depend on jobs)."""
    size = max(1, total >> 7)
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _consume(worker, tasks: Sequence, jobs: int) -> Iterator:
    """Yield worker(task) in task order; with jobs > 1 the tasks run on a
    fork-based process pool but are still consumed in submission order."""
    if jobs <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield worker(t)
        return
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=min(jobs, len(tasks))) as pool:
        yield from pool.imap(worker, tasks)


def _limit_of(budget) -> int:
    if isinstance(budget, Budget):
        return budget.limit
    if budget is None:
        return Budget().limit
    return int(budget)


class _Tally:
    """Parent-side budget ledger: sums per-chunk usage in chunk order and
    raises once the limit is crossed.  Chunk boundaries are fixed, so the
    trip point does not depend on jobs."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def add(self, n: int, frontier) -> None:
        self.used += n
        if self.used > self.limit:
            raise ResourceLimit(
                f"evaluator-call budget exhausted ({self.limit} calls)",
                frontier=frontier)


def _with_frontier(e: ResourceLimit, frontier) -> ResourceLimit:
    """Attach a frontier to a budget trip raised inside a worker, which
    knows its chunk but not the stage."""
    if e.frontier is None:
        return ResourceLimit(e.args[0], frontier)
    return e


# ---------------------------------------------------------------------------
# Shared premise/conclusion checking

def _check_model(m, spec: SearchSpec, bud: Budget) -> dict | None:
    """Certificate dict if m is a countermodel for spec, else None."""
    for p in spec.premise_formulas:
        if not valid(m, p, bud).holds:
            return None
    for s in spec.premise_schemes:
        if not scheme_valid(m, s, bud).holds:
            return None
    if spec.reading == "object":
        if is_propositional(spec.conclusion):
            v = scheme_valid(m, spec.conclusion, bud)
        else:
            v = valid(m, spec.conclusion, bud)
        if v.holds:
            return None
        cert = {"reading": "object",
                "conclusion": render(spec.conclusion, "ascii"),
                "world": v.world}
        if v.assignment:
            cert["assignment"] = {k: list(vs)
                                  for k, vs in sorted(v.assignment.items())}
    else:
        v = meta_implies(m, [spec.conclusion.lhs], spec.conclusion.rhs, bud)
        if v.holds:
            return None
        cert = {"reading": "meta",
                "conclusion": render(spec.conclusion, "ascii"),
                "assignment": {k: list(vs)
                               for k, vs in sorted(v.assignment.items())},
                "world": v.world}
    if spec.premise_formulas:
        cert["premises"] = [render(p, "ascii")
                            for p in spec.premise_formulas]
    if spec.premise_schemes:
        cert["scheme_premises"] = [render(s, "ascii")
                                   for s in spec.premise_schemes]
    return cert


def _scheme_assignments(names: Sequence[str], worlds: Sequence[str]
                        ) -> Iterator[dict[str, frozenset[str]]]:
    n = len(worlds)
    subsets = [frozenset(w for i, w in enumerate(worlds) if mask >> i & 1)
               for mask in range(1 << n)]
    for masks in product(range(1 << n), repeat=len(names)):
        yield {nm: subsets[mask] for nm, mask in zip(names, masks)}


def _revalidate(m, spec: SearchSpec, cert: dict) -> None:
    """Independent re-check of a witness with the reference evaluator."""
    worlds = m.worlds
    ok = True
    for p in spec.premise_formulas:
        ok = ok and all(evaluate(m, p, w) for w in worlds)
    for s in spec.premise_schemes:
        for sv in _scheme_assignments(scheme_vars(s), worlds):
            ok = ok and all(evaluate(m, s, w, scheme_vals=sv) for w in worlds)
    sv = {k: frozenset(v) for k, v in cert.get("assignment", {}).items()}
    if spec.reading == "object":
        ok = ok and not evaluate(m, spec.conclusion, cert["world"],
                                 scheme_vals=sv)
    else:
        ok = ok and all(evaluate(m, spec.conclusion.lhs, w, scheme_vals=sv)
                        for w in worlds)
        ok = ok and not evaluate(m, spec.conclusion.rhs, cert["world"],
                                 scheme_vals=sv)
    if not ok:
        raise RuntimeError("search witness failed the independent re-check; "
                           "this is a bug, please report it")


def _mask_worlds(worlds: Sequence[str], mask: int) -> tuple[str, ...]:
    return tuple(w for i, w in enumerate(worlds) if mask >> i & 1)


# ---------------------------------------------------------------------------
# Propositional countermodel search

def _prop_chunk(task):
    n, lo, hi, spec, limit = task
    bud = Budget(limit)
    atoms = sorted(set().union(*(prop_atoms(f) for f in spec.formulas())))
    for mask in range(lo, hi):
        fr = frame_from_mask(n, mask)
        if not _frame_ok(fr, spec.frame_constraints):
            continue
        for vmasks in product(range(1 << n), repeat=len(atoms)):
            valuation = {a: _mask_worlds(fr.worlds, vm)
                         for a, vm in zip(atoms, vmasks)}
            m = PropModel(fr, valuation)
            cert = _check_model(m, spec, bud)
            if cert is not None:
                return bud.used, (mask, m, cert)
    return bud.used, None


def find_countermodel(spec: SearchSpec, jobs: int = 1, budget=None
                      ) -> SearchResult | None:
    """Least propositional countermodel for spec, or None if the bounded
    space holds none.  Scan order: world count, then frame bitmask, then
    valuation bitmasks (atoms sorted).  ``jobs`` never changes the answer.
    """
    for f in spec.formulas():
        if not is_propositional(f):
            raise ValueError(
                "find_countermodel is propositional; use "
                "find_fo_countermodel for quantified formulas")
    if spec.max_worlds > PROP_WORLD_CEILING:
        raise ValueError(f"max_worlds {spec.max_worlds} exceeds the "
                         f"propositional ceiling {PROP_WORLD_CEILING}")
    limit = _limit_of(budget)
    tally = _Tally(limit)
    for n in range(1, spec.max_worlds + 1):
        tasks = [(n, lo, hi, spec, limit)
                 for lo, hi in _chunk_ranges(1 << (n * n))]
        try:
            for used, payload in _consume(_prop_chunk, tasks, jobs):
                if payload is not None:
                    mask, m, cert = payload
                    cert = {"worlds": n, "frame_mask": mask, **cert}
                    _revalidate(m, spec, cert)
                    return SearchResult(m, cert)
                tally.add(used, frontier={"worlds": n})
        except ResourceLimit as e:
            raise _with_frontier(e, {"worlds": n}) from None
    return None


# ---------------------------------------------------------------------------
# First-order countermodel search

def _domain_names(d: int) -> tuple[str, ...]:
    if d > len(string.ascii_lowercase):
        raise ValueError("domain sizes beyond 26 are not supported")
    return tuple(string.ascii_lowercase[:d])


def _exists_from_mask(worlds: Sequence[str], domain: Sequence[str],
                      mask: int) -> dict[str, frozenset[str]]:
    """World-major existence map: bit wi*|domain|+ei puts element ei at
    world wi."""
    d = len(domain)
    return {w: frozenset(e for ei, e in enumerate(domain)
                         if mask >> (wi * d + ei) & 1)
            for wi, w in enumerate(worlds)}


def _pred_cells(domain: Sequence[str], arity: int) -> list[tuple[str, ...]]:
    return list(product(domain, repeat=arity))


def _pred_from_mask(cells: Sequence[tuple[str, ...]], worlds: Sequence[str],
                    arity: int, mask: int) -> FlexiblePred:
    """Cell-major interpretation: bit ci*|worlds|+wi puts cell ci in the
    extension at world wi (matches the unary order used by fo_scheme_valid).
    """
    nw = len(worlds)
    ext = {w: frozenset(cells[ci] for ci in range(len(cells))
                        if mask >> (ci * nw + wi) & 1)
           for wi, w in enumerate(worlds)}
    return FlexiblePred(arity, ext)


def _fo_stage_bits(n: int, d: int, spec: SearchSpec,
                   preds: dict[str, int], atoms: Sequence[str]) -> int:
    bits = 0
    if spec.mode == "varying":
        bits += d * n
    for arity in preds.values():
        bits += (d ** arity) * n
    bits += len(atoms) * n
    return bits


def _fo_chunk(task):
    n, d, lo, hi, spec, limit = task
    bud = Budget(limit)
    domain = _domain_names(d)
    all_forms = spec.formulas()
    preds: dict[str, int] = {}
    for f in all_forms:
        for name, arity in pred_symbols(f).items():
            preds[name] = arity
    pred_names = sorted(preds)
    atoms = sorted(set().union(*(prop_atoms(f) for f in all_forms)))
    cells = {p: _pred_cells(domain, preds[p]) for p in pred_names}
    for fmask in range(lo, hi):
        fr = frame_from_mask(n, fmask)
        if not _frame_ok(fr, spec.frame_constraints):
            continue
        worlds = fr.worlds
        emasks = range(1 << (d * n)) if spec.mode == "varying" else \
            ((1 << (d * n)) - 1,)
        for emask in emasks:
            df = DomainFrame(fr, domain, _exists_from_mask(worlds, domain,
                                                           emask))
            for pmasks in product(*(range(1 << (len(cells[p]) * n))
                                    for p in pred_names)):
                flex = {p: _pred_from_mask(cells[p], worlds, preds[p], pm)
                        for p, pm in zip(pred_names, pmasks)}
                for vmasks in product(range(1 << n), repeat=len(atoms)):
                    valuation = {a: _mask_worlds(worlds, vm)
                                 for a, vm in zip(atoms, vmasks)}
                    m = FoModel(df, spec.mode, valuation,
                                flexible_preds=flex)
                    cert = _check_model(m, spec, bud)
                    if cert is not None:
                        coords = {"frame_mask": fmask, "exists_mask": emask}
                        return bud.used, (coords, m, cert)
    return bud.used, None


def find_fo_countermodel(spec: SearchSpec, jobs: int = 1, budget=None
                         ) -> SearchResult | None:
    """Least quantified countermodel for spec, enumerating predicate
    interpretations and (in varying mode) existence maps as part of the
    model.  Scan order: world count, then domain size, then frame bitmask,
    then existence mask, then interpretation masks (predicates sorted),
    then valuation masks.  ``jobs`` never changes the answer."""
    for f in spec.formulas():
        if free_vars(f):
            raise ValueError(f"formulas must be closed; "
                             f"free: {sorted(free_vars(f))}")
        if const_names(f):
            raise ValueError(
                "rigid constants are not searched over; replace "
                f"{sorted(const_names(f))} with quantified variables")
        if scheme_vars(f) and not is_propositional(f):
            raise ValueError("schematic metavariables are only supported "
                             "in purely propositional (sub)formulas")
    if spec.max_worlds > FO_WORLD_CEILING:
        raise ValueError(f"max_worlds {spec.max_worlds} exceeds the "
                         f"quantified ceiling {FO_WORLD_CEILING}")
    if spec.max_domain < 1:
        raise ValueError("max_domain must be at least 1 for quantified "
                         "search")
    preds: dict[str, int] = {}
    for f in spec.formulas():
        for name, arity in pred_symbols(f).items():
            preds[name] = arity
    atoms = sorted(set().union(*(prop_atoms(f) for f in spec.formulas())))
    limit = _limit_of(budget)
    tally = _Tally(limit)
    for n in range(1, spec.max_worlds + 1):
        for d in range(1, spec.max_domain + 1):
            bits = _fo_stage_bits(n, d, spec, preds, atoms)
            if bits > FO_SEARCH_BITS:
                raise ResourceLimit(
                    f"stage {n} worlds x {d} elements needs 2**{bits} "
                    f"models per frame (limit 2**{FO_SEARCH_BITS})",
                    frontier={"worlds": n, "domain": d - 1})
            tasks = [(n, d, lo, hi, spec, limit)
                     for lo, hi in _chunk_ranges(1 << (n * n))]
            try:
                for used, payload in _consume(_fo_chunk, tasks, jobs):
                    if payload is not None:
                        coords, m, cert = payload
                        cert = {"worlds": n, "domain": d, **coords, **cert}
                        _revalidate(m, spec, cert)
                        return SearchResult(m, cert)
                    tally.add(used, frontier={"worlds": n, "domain": d})
            except ResourceLimit as e:
                raise _with_frontier(e, {"worlds": n, "domain": d}) from None
    return None


# ---------------------------------------------------------------------------
# The quantifier/Box exchange: divergence search and exhaustive sweeps

def _div_chunk(task):
    n, d, lo, hi, limit = task
    bud = Budget(limit)
    domain = _domain_names(d)
    for fmask in range(lo, hi):
        fr = frame_from_mask(n, fmask)
        worlds = fr.worlds
        for emask in range(1 << (d * n)):
            df = DomainFrame(fr, domain,
                             _exists_from_mask(worlds, domain, emask))
            fm = FoModel(df, "varying")
            r = bf_readings(fm, "P", bud)
            if r.meta_implies and not r.object_implies:
                return bud.used, (fmask, emask, fm, r)
    return bud.used, None


def find_barcan_divergence(max_worlds: int = 3, max_domain: int = 2,
                           jobs: int = 1, budget=None
                           ) -> SearchResult | None:
    """Least varying-domain model on which the rule reading of the
    quantifier/Box exchange holds while the implication formula fails.

    Scan order: world count, then domain size, then frame bitmask, then
    existence mask.  Returns None when no divergence exists in bounds
    (e.g. with max_worlds=1, where the two readings coincide)."""
    if max_worlds > FO_WORLD_CEILING:
        raise ValueError(f"max_worlds {max_worlds} exceeds the quantified "
                         f"ceiling {FO_WORLD_CEILING}")
    limit = _limit_of(budget)
    tally = _Tally(limit)
    for n in range(1, max_worlds + 1):
        for d in range(1, max_domain + 1):
            tasks = [(n, d, lo, hi, limit)
                     for lo, hi in _chunk_ranges(1 << (n * n))]
            try:
                for used, payload in _consume(_div_chunk, tasks, jobs):
                    if payload is not None:
                        fmask, emask, fm, r = payload
                        _revalidate_divergence(fm, r)
                        cert = {
                            "kind": "barcan_divergence",
                            "worlds": n, "domain": d,
                            "frame_mask": fmask, "exists_mask": emask,
                            "readings": r.to_dict(),
                        }
                        return SearchResult(fm, cert)
                    tally.add(used, frontier={"worlds": n, "domain": d})
            except ResourceLimit as e:
                raise _with_frontier(e, {"worlds": n, "domain": d}) from None
    return None


def _revalidate_divergence(fm: FoModel, r) -> None:
    """Reference-evaluator re-check that the rule reading holds and the
    implication reading fails on fm, per the reported witness."""
    from .semantics import BF_LHS, BF_RHS
    lhs, rhs = BF_LHS("P"), BF_RHS("P")
    worlds, domain = fm.worlds, fm.domain
    nw = len(worlds)
    ok = True
    for mask in range(1 << (len(domain) * nw)):
        ext = {w: frozenset(
            (e,) for ei, e in enumerate(domain)
            if mask >> (ei * nw + widx) & 1)
            for widx, w in enumerate(worlds)}
        m2 = FoModel(fm.dframe, "varying",
                     flexible_preds={"P": FlexiblePred(1, ext)})
        if all(evaluate(m2, lhs, w) for w in worlds):
            ok = ok and all(evaluate(m2, rhs, w) for w in worlds)
    interp, w0 = r.object_witness
    ext = {w: frozenset((e,) for e, wx in interp if wx == w) for w in worlds}
    m2 = FoModel(fm.dframe, "varying",
                 flexible_preds={"P": FlexiblePred(1, ext)})
    ok = ok and evaluate(m2, lhs, w0) and not evaluate(m2, rhs, w0)
    if not ok:
        raise RuntimeError("divergence witness failed the independent "
                           "re-check; this is a bug, please report it")


def _sweep_chunk(task):
    from .correspondence import BF_SCHEME, CBF_SCHEME
    n, d, lo, hi, limit = task
    bud = Budget(limit)
    domain = _domain_names(d)
    checked = 0
    violations: list[dict] = []
    for fmask in range(lo, hi):
        fr = frame_from_mask(n, fmask)
        worlds = fr.worlds
        sym = frame_property(fr, "symmetric")
        for emask in range(1 << (d * n)):
            df = DomainFrame(fr, domain,
                             _exists_from_mask(worlds, domain, emask))
            fm = FoModel(df, "varying")
            mono = domain_monotonicity(df)
            bf = fo_scheme_valid(fm, BF_SCHEME, "P", bud).holds
            cbf = fo_scheme_valid(fm, CBF_SCHEME, "P", bud).holds
            checked += 1
            coords = {"worlds": n, "frame_mask": fmask, "exists_mask": emask}
            if bf != mono.nonincreasing:
                violations.append({**coords, "check": "bf_vs_nonincreasing",
                                   "bf": bf,
                                   "nonincreasing": mono.nonincreasing})
            if cbf != mono.nondecreasing:
                violations.append({**coords, "check": "cbf_vs_nondecreasing",
                                   "cbf": cbf,
                                   "nondecreasing": mono.nondecreasing})
            if sym and bf != cbf:
                violations.append({**coords,
                                   "check": "bf_iff_cbf_on_symmetric",
                                   "bf": bf, "cbf": cbf})
    return bud.used, (checked, violations)


def barcan_sweep(max_worlds: int = 3, domain_size: int = 2, jobs: int = 1,
                 budget=None) -> dict:
    """Exhaustively pair both exchange schemes with domain monotonicity over
    every frame of up to max_worlds worlds and every existence map for a
    fixed domain size.  Returns a summary dict whose ``violations`` list is
    expected to stay empty; ``jobs`` never changes the summary."""
    if max_worlds > FO_WORLD_CEILING:
        raise ValueError(f"max_worlds {max_worlds} exceeds the quantified "
                         f"ceiling {FO_WORLD_CEILING}")
    limit = _limit_of(budget)
    tally = _Tally(limit)
    checked = 0
    violations: list[dict] = []
    for n in range(1, max_worlds + 1):
        tasks = [(n, domain_size, lo, hi, limit)
                 for lo, hi in _chunk_ranges(1 << (n * n))]
        try:
            for used, (cnt, viol) in _consume(_sweep_chunk, tasks, jobs):
                checked += cnt
                violations.extend(viol)
                tally.add(used, frontier={"worlds": n, "checked": checked})
        except ResourceLimit as e:
            raise _with_frontier(e, {"worlds": n,
                                     "checked": checked}) from None
    return {"max_worlds": max_worlds, "domain_size": domain_size,
            "checked": checked, "violations": violations,
            "all_consistent": not violations}


def _agree_chunk(task):
    n, d, lo, hi, limit = task
    bud = Budget(limit)
    domain = _domain_names(d)
    checked = 0
    disagreements: list[dict] = []
    for fmask in range(lo, hi):
        fr = frame_from_mask(n, fmask)
        df = DomainFrame(fr, domain)
        fm = FoModel(df, "constant")
        r = bf_readings(fm, "P", bud)
        checked += 1
        if r.meta_implies != r.object_implies:
            disagreements.append({"worlds": n, "domain": d,
                                  "frame_mask": fmask,
                                  "readings": r.to_dict()})
    return bud.used, (checked, disagreements)


def bf_agreement_sweep(max_worlds: int = 3, max_domain: int = 2,
                       jobs: int = 1, budget=None) -> dict:
    """Check that on every constant-domain model in bounds the rule reading
    and the implication reading of the exchange agree.  The summary's
    ``disagreements`` list is expected to stay empty."""
    if max_worlds > FO_WORLD_CEILING:
        raise ValueError(f"max_worlds {max_worlds} exceeds the quantified "
                         f"ceiling {FO_WORLD_CEILING}")
    limit = _limit_of(budget)
    tally = _Tally(limit)
    checked = 0
    disagreements: list[dict] = []
    for n in range(1, max_worlds + 1):
        for d in range(1, max_domain + 1):
            tasks = [(n, d, lo, hi, limit)
                     for lo, hi in _chunk_ranges(1 << (n * n))]
            try:
                for used, (cnt, dis) in _consume(_agree_chunk, tasks, jobs):
                    checked += cnt
                    disagreements.extend(dis)
                    tally.add(used, frontier={"worlds": n, "domain": d})
            except ResourceLimit as e:
                raise _with_frontier(e, {"worlds": n, "domain": d}) from None
    return {"max_worlds": max_worlds, "max_domain": max_domain,
            "checked": checked, "disagreements": disagreements,
            "all_agree": not disagreements}


# ---------------------------------------------------------------------------
# Deduction-theorem gap

def _gap_chunk(task):
    n, lo, hi, conclusion, limit = task
    bud = Budget(limit)
    names = scheme_vars(conclusion)
    lhs, rhs = conclusion.lhs, conclusion.rhs
    for fmask in range(lo, hi):
        fr = frame_from_mask(n, fmask)
        m = PropModel(fr, {})
        worlds = fr.worlds
        for sv in _scheme_assignments(names, worlds):
            bud.charge(3 * len(worlds))
            lhs_valid = all(evaluate(m, lhs, w, scheme_vals=sv)
                            for w in worlds)
            rhs_valid = all(evaluate(m, rhs, w, scheme_vals=sv)
                            for w in worlds)
            if lhs_valid and not rhs_valid:
                continue  # the rule reading fails here: not a gap
            fail = next((w for w in worlds
                         if not evaluate(m, conclusion, w, scheme_vals=sv)),
                        None)
            if fail is not None:
                return bud.used, (fmask, m, {
                    "kind": "deduction_gap",
                    "conclusion": render(conclusion, "ascii"),
                    "assignment": {k: sorted(v, key=fr.index.__getitem__)
                                   for k, v in sorted(sv.items())},
                    "world": fail,
                    "lhs_valid": lhs_valid,
                    "rhs_valid": rhs_valid,
                })
    return bud.used, None


def find_deduction_gap(conclusion: Formula | None = None,
                       max_worlds: int = 2, jobs: int = 1, budget=None
                       ) -> SearchResult | None:
    """Least model and instantiation where the rule reading of an
    implication holds (premise valid implies conclusion valid) while the
    implication formula itself fails — the deduction-theorem direction that
    modal consequence lacks.  Default conclusion: P => Q over metavariables.

    The check uses the reference evaluator directly.  No such gap fits in a
    single world; the least witnesses appear at two."""
    if conclusion is None:
        conclusion = Imp(SchemeVar("P"), SchemeVar("Q"))
    if not isinstance(conclusion, Imp):
        raise ValueError("the deduction gap needs an implication conclusion")
    if not is_propositional(conclusion):
        raise ValueError("the deduction gap search is propositional")
    if prop_atoms(conclusion):
        raise ValueError("build the conclusion from metavariables (uppercase"
                         " initial), not fixed atoms")
    if max_worlds > PROP_WORLD_CEILING:
        raise ValueError(f"max_worlds {max_worlds} exceeds the "
                         f"propositional ceiling {PROP_WORLD_CEILING}")
    limit = _limit_of(budget)
    tally = _Tally(limit)
    for n in range(1, max_worlds + 1):
        tasks = [(n, lo, hi, conclusion, limit)
                 for lo, hi in _chunk_ranges(1 << (n * n))]
        try:
            for used, payload in _consume(_gap_chunk, tasks, jobs):
                if payload is not None:
                    fmask, m, cert = payload
                    cert = {"worlds": n, "frame_mask": fmask, **cert}
                    return SearchResult(m, cert)
                tally.add(used, frontier={"worlds": n})
        except ResourceLimit as e:
            raise _with_frontier(e, {"worlds": n}) from None
    return None
