"""Structured transition models and their parameter estimator.

A structural model describes every transition row of an MDP as a function of
m unknown Bernoulli parameters.  The description is a table of latent
outcomes: each outcome names the parameters that fired positively (factor
mu_i), the ones that fired negatively (factor 1 - mu_i), a constant factor
for parameter-free randomness, and the resulting next state.  The table is
enough to

  * reconstruct the full transition matrix at any parameter vector,
  * read off the structural support (entries that are zero at every mu),
  * decide which state-action pairs reveal which parameter bits, and
  * sample transitions together with the latent bits that produced them.

The estimator itself is a pair of per-parameter counters: how many bits were
observed and how many of them were one.  Parameter estimates are the bit
means, clamped to the unit box, with declared defaults standing in until the
first observation.

The entry-wise baseline fits the same machinery as a degenerate model: one
categorical block per state-action row, realized as one parameter per
support entry whose outcome is linear in the parameter.  Updating a block
increments the count of every cell in the visited row and the bit sum of
the observed cell, which makes the estimates exactly the per-row empirical
frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .mdp import FiniteMdp


@dataclass(frozen=True)
class TransitionRecord:
    """One sampled transition plus the latent bits the simulator drew.

    latent holds (parameter index, bit) pairs for every parameter whose
    event actually fired during the step.
    """

    state: int
    action: int
    next_state: int
    latent: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class LatentOutcome:
    """One joint realization of the latent events at a state-action pair.

    Probability of the outcome = const * prod(mu[i] for i in pos)
                                       * prod(1 - mu[i] for i in neg).
    When the outcome occurs, every parameter in pos reveals bit 1 and every
    parameter in neg reveals bit 0.
    """

    const: float
    pos: tuple[int, ...]
    neg: tuple[int, ...]
    next_state: int

    def bits(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, 1) for i in self.pos) + tuple((i, 0) for i in self.neg)


@dataclass
class StructuralModelSpec:
    """Known transition structure with unknown Bernoulli parameters.

    outcomes[z] lists the latent outcomes of pair z = s * num_actions + a.
    rewards, gamma and the reward interval come along so that reconstruction
    yields a complete FiniteMdp.  true_params, when known (simulation
    studies), drives sampling and the pruning of impossible outcomes when
    strict decodability is computed.
    """

    num_states: int
    num_actions: int
    num_params: int
    param_names: list[str]
    outcomes: list[list[LatentOutcome]]
    rewards: np.ndarray
    gamma: float
    r_min: float
    r_max: float
    defaults: np.ndarray
    active: np.ndarray
    true_params: np.ndarray | None = None
    terminal_states: frozenset[int] = frozenset()
    is_entrywise: bool = False
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.outcomes) != self.num_states * self.num_actions:
            raise ValueError("outcome table must cover every state-action pair")
        self.defaults = np.asarray(self.defaults, dtype=np.float64)
        self.active = np.asarray(self.active, dtype=bool)
        if self.defaults.shape != (self.num_params,):
            raise ValueError("defaults must have one entry per parameter")
        if self.active.shape != (self.num_params,):
            raise ValueError("active mask must have one entry per parameter")

    @property
    def num_pairs(self) -> int:
        return self.num_states * self.num_actions

    def sampleable_pairs(self) -> np.ndarray:
        """Pairs whose state is not absorbing-by-construction."""
        keep = np.ones(self.num_pairs, dtype=bool)
        for s in self.terminal_states:
            keep[s * self.num_actions:(s + 1) * self.num_actions] = False
        return np.flatnonzero(keep)

    # -- compiled flat tables ------------------------------------------------

    def _compiled(self) -> dict:
        if self._tables:
            return self._tables
        out_row, out_next, out_const = [], [], []
        pos_rec, pos_par, neg_rec, neg_par = [], [], [], []
        row_out_indptr = [0]
        for z, outs in enumerate(self.outcomes):
            for o in outs:
                j = len(out_row)
                out_row.append(z)
                out_next.append(o.next_state)
                out_const.append(o.const)
                for i in o.pos:
                    pos_rec.append(j)
                    pos_par.append(i)
                for i in o.neg:
                    neg_rec.append(j)
                    neg_par.append(i)
            row_out_indptr.append(len(out_row))
        t = {
            "out_row": np.array(out_row, dtype=np.int32),
            "out_next": np.array(out_next, dtype=np.int32),
            "out_const": np.array(out_const, dtype=np.float64),
            "pos_rec": np.array(pos_rec, dtype=np.int64),
            "pos_par": np.array(pos_par, dtype=np.int64),
            "neg_rec": np.array(neg_rec, dtype=np.int64),
            "neg_par": np.array(neg_par, dtype=np.int64),
            "row_out_indptr": np.array(row_out_indptr, dtype=np.int64),
        }
        # canonical sparse support pattern and the slot of every outcome in it
        support_cols: list[int] = []
        row_indptr = [0]
        out_slot = np.empty(len(out_row), dtype=np.int64)
        for z, outs in enumerate(self.outcomes):
            cols: dict[int, int] = {}
            base = row_out_indptr[z]
            for local, o in enumerate(outs):
                if o.next_state not in cols:
                    cols[o.next_state] = len(support_cols)
                    support_cols.append(o.next_state)
                out_slot[base + local] = cols[o.next_state]
            row_indptr.append(len(support_cols))
        t["support_cols"] = np.array(support_cols, dtype=np.int32)
        t["row_indptr"] = np.array(row_indptr, dtype=np.int64)
        t["out_slot"] = out_slot
        if self.is_entrywise:
            # cells of terminal rows are fixed outcomes with no parameter
            slot_param = np.full(len(support_cols), -1, dtype=np.int64)
            for z, outs in enumerate(self.outcomes):
                base = row_out_indptr[z]
                for local, o in enumerate(outs):
                    if o.pos:
                        slot_param[out_slot[base + local]] = o.pos[0]
            t["slot_param"] = slot_param
        lookup = np.full((self.num_pairs, self.num_states), -1, dtype=np.int64)
        t["cell_lookup"] = lookup
        lookup[
            np.repeat(np.arange(self.num_pairs),
                      np.diff(t["row_indptr"]).astype(np.int64)),
            t["support_cols"],
        ] = np.arange(len(support_cols))
        self._tables.update(t)
        return self._tables

    # -- reconstruction ------------------------------------------------------

    def outcome_probs(self, mu: np.ndarray) -> np.ndarray:
        """Probability of every latent outcome at parameter vector mu."""
        mu = np.asarray(mu, dtype=np.float64)
        if mu.shape != (self.num_params,):
            raise ValueError(f"expected {self.num_params} parameters, got {mu.shape}")
        if np.any(mu < 0.0) or np.any(mu > 1.0):
            raise ValueError("parameters outside the unit box; clamp estimates first")
        t = self._compiled()
        p = t["out_const"].copy()
        np.multiply.at(p, t["pos_rec"], mu[t["pos_par"]])
        np.multiply.at(p, t["neg_rec"], 1.0 - mu[t["neg_par"]])
        return p

    def reconstruct_data(self, mu: np.ndarray) -> np.ndarray:
        """Transition probabilities laid out on the canonical support slots."""
        t = self._compiled()
        data = np.zeros(len(t["support_cols"]))
        np.add.at(data, t["out_slot"], self.outcome_probs(mu))
        return data

    def reconstruct(self, mu: np.ndarray) -> FiniteMdp:
        """Full MDP at parameter vector mu.

        Structurally impossible entries stay exactly zero: they are simply
        absent from the support pattern.
        """
        t = self._compiled()
        trans = sp.csr_matrix(
            (self.reconstruct_data(mu), t["support_cols"], t["row_indptr"]),
            shape=(self.num_pairs, self.num_states),
        )
        return FiniteMdp(self.num_states, self.num_actions, trans,
                         self.rewards, self.gamma, self.r_min, self.r_max)

    def support_mask(self) -> np.ndarray:
        """Dense bool (num_pairs, num_states) mask of structurally possible entries."""
        t = self._compiled()
        mask = np.zeros((self.num_pairs, self.num_states), dtype=bool)
        rows = np.repeat(np.arange(self.num_pairs), np.diff(t["row_indptr"]))
        mask[rows, t["support_cols"]] = True
        return mask

    # -- sampling ------------------------------------------------------------

    def _sampling_tables(self) -> dict:
        t = self._compiled()
        if "out_cdf" not in t:
            if self.true_params is None:
                raise ValueError("sampling requires true_params on the model spec")
            t["out_cdf"] = np.cumsum(self.outcome_probs(self.true_params))
            base = np.concatenate(([0.0], t["out_cdf"]))[t["row_out_indptr"][:-1]]
            top = np.concatenate(([0.0], t["out_cdf"]))[t["row_out_indptr"][1:]]
            t["row_cdf_base"] = base
            t["row_cdf_span"] = top - base
            # latent bits revealed by each outcome, flattened
            bit_par: list[int] = []
            bit_val: list[int] = []
            bit_indptr = [0]
            for outs in self.outcomes:
                for o in outs:
                    for i in o.pos:
                        bit_par.append(i)
                        bit_val.append(1)
                    for i in o.neg:
                        bit_par.append(i)
                        bit_val.append(0)
                    bit_indptr.append(len(bit_par))
            t["bit_par"] = np.array(bit_par, dtype=np.int64)
            t["bit_val"] = np.array(bit_val, dtype=np.int64)
            t["bit_indptr"] = np.array(bit_indptr, dtype=np.int64)
            # outcomes regrouped by support cell, for draws conditioned on
            # the observed next state
            order = np.argsort(t["out_slot"], kind="stable")
            seg = np.bincount(t["out_slot"][order],
                              minlength=len(t["support_cols"]))
            cum = np.cumsum(self.outcome_probs(self.true_params)[order])
            indptr = np.concatenate(([0], np.cumsum(seg)))
            t["slot_out_order"] = order
            t["slot_out_indptr"] = indptr
            t["slot_out_cum"] = cum
        return t

    def sample_pairs_batch(self, z_arr: np.ndarray,
                           rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Draw one next state per listed pair; returns (next_states, outcome_ids)."""
        t = self._sampling_tables()
        u = rng.random(len(z_arr))
        targets = t["row_cdf_base"][z_arr] + u * t["row_cdf_span"][z_arr]
        idx = np.searchsorted(t["out_cdf"], targets, side="right")
        hi = t["row_out_indptr"][z_arr + 1] - 1
        idx = np.minimum(idx, hi)
        return t["out_next"][idx], idx

    def annotations_for(self, outcome_ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (parameter, bit) annotations of the given outcomes."""
        t = self._sampling_tables()
        flat = _ragged_take(t["bit_indptr"], outcome_ids)
        return t["bit_par"][flat], t["bit_val"][flat]

    def conditional_outcomes(self, z_arr: np.ndarray, next_arr: np.ndarray,
                             rng: np.random.Generator) -> np.ndarray:
        """Draw the latent outcome behind each observed (pair, next state).

        Samples from the posterior over this row's outcomes given the next
        state, at the true parameters.  Lets a transition stream gathered
        without latent detail be annotated after the fact, with the same law
        as direct outcome sampling.
        """
        t = self._sampling_tables()
        slots = t["cell_lookup"][z_arr, next_arr]
        if np.any(slots < 0):
            raise ValueError("observed transition outside declared support")
        lo = t["slot_out_indptr"][slots]
        hi = t["slot_out_indptr"][slots + 1]
        cum = t["slot_out_cum"]
        base = np.where(lo > 0, cum[lo - 1], 0.0)
        span = cum[hi - 1] - base
        targets = base + rng.random(len(slots)) * span
        idx = np.searchsorted(cum, targets, side="right")
        idx = np.clip(idx, lo, hi - 1)
        return t["slot_out_order"][idx]


def _ragged_take(indptr: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Indices into the flat array for CSR rows listed in idx (with repeats)."""
    counts = indptr[idx + 1] - indptr[idx]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    owner_start = np.repeat(indptr[idx], counts)
    within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return owner_start + within


# ---------------------------------------------------------------------------
# Estimator state and its operations.
# ---------------------------------------------------------------------------

@dataclass
class EstimatorState:
    """Per-parameter observation count and bit sum, plus transitions consumed."""

    counts: np.ndarray
    sums: np.ndarray
    k: int = 0

    @classmethod
    def fresh(cls, num_params: int) -> "EstimatorState":
        return cls(np.zeros(num_params, dtype=np.int64),
                   np.zeros(num_params, dtype=np.int64), 0)


def record_transition(est: EstimatorState,
                      info: tuple[tuple[int, int], ...]) -> EstimatorState:
    """Fold one transition's (parameter, bit) list into the counters.

    An empty list still advances k: the transition was consumed, it just
    carried no parameter information.
    """
    for i, bit in info:
        if bit not in (0, 1):
            raise ValueError(f"bit for parameter {i} must be 0 or 1, got {bit}")
        est.counts[i] += 1
        est.sums[i] += bit
    est.k += 1
    return est


def estimates(est: EstimatorState, spec: StructuralModelSpec) -> np.ndarray:
    """Bit means clamped to the unit box; defaults where nothing was seen."""
    seen = est.counts > 0
    mu = np.where(seen, est.sums / np.maximum(est.counts, 1), spec.defaults)
    return np.clip(mu, 0.0, 1.0)


def min_info_count(est: EstimatorState, active: np.ndarray | None = None) -> int:
    """Smallest observation count over the active parameters."""
    counts = est.counts if active is None else est.counts[np.asarray(active, dtype=bool)]
    if counts.size == 0:
        raise ValueError("active parameter set is empty")
    return int(counts.min())


def reconstruct(spec: StructuralModelSpec, mu: np.ndarray) -> FiniteMdp:
    return spec.reconstruct(mu)


# -- batched updates ---------------------------------------------------------

def update_from_annotations(est: EstimatorState, num_params: int,
                            par_flat: np.ndarray, bit_flat: np.ndarray,
                            num_records: int) -> None:
    """Fold flattened (parameter, bit) annotations of a record batch."""
    if len(par_flat):
        est.counts += np.bincount(par_flat, minlength=num_params)
        est.sums += np.bincount(par_flat, weights=bit_flat.astype(np.float64),
                                minlength=num_params).astype(np.int64)
    est.k += num_records


def update_entrywise_batch(est: EstimatorState, spec: StructuralModelSpec,
                           z_arr: np.ndarray, next_arr: np.ndarray) -> None:
    """Categorical-block update: every cell of a visited row gains a count,
    the observed cell gains the bit.  Equivalent to record_transition with a
    one-hot information list, but vectorized."""
    if not spec.is_entrywise:
        raise ValueError("spec is not the entry-wise baseline")
    t = spec._compiled()
    slots = t["cell_lookup"][z_arr, next_arr]
    if np.any(slots < 0):
        bad = int(np.flatnonzero(slots < 0)[0])
        raise ValueError(
            f"observed transition outside declared support: pair {int(z_arr[bad])} "
            f"-> state {int(next_arr[bad])}"
        )
    visits = np.bincount(z_arr, minlength=spec.num_pairs)
    cell_row = np.repeat(np.arange(spec.num_pairs), np.diff(t["row_indptr"]))
    slot_param = t["slot_param"]
    owned = slot_param >= 0   # cells of terminal rows carry no parameter
    est.counts[slot_param[owned]] += visits[cell_row[owned]]
    par = slot_param[slots]
    est.sums += np.bincount(par[par >= 0], minlength=spec.num_params)
    est.k += len(z_arr)


def decode_entrywise(spec: StructuralModelSpec, state: int, action: int,
                     next_state: int) -> tuple[tuple[int, int], ...]:
    """One-hot information list of an entry-wise observation."""
    t = spec._compiled()
    z = state * spec.num_actions + action
    lo, hi = t["row_indptr"][z], t["row_indptr"][z + 1]
    slot = t["cell_lookup"][z, next_state]
    if slot < 0:
        raise ValueError(
            f"transition ({state}, {action}) -> {next_state} outside declared support"
        )
    slot_param = t["slot_param"]
    return tuple((int(slot_param[c]), 1 if c == slot else 0)
                 for c in range(lo, hi) if slot_param[c] >= 0)


# ---------------------------------------------------------------------------
# Informative sets and strict decoding.
# ---------------------------------------------------------------------------

@dataclass
class InfoSets:
    """Which pairs reveal which parameters, and how to read bits off data.

    mode "strict" keeps a pair in U_i only when the bit of parameter i is
    recoverable from (s, a, s') alone: the parameter's event fires in every
    outcome that is possible at the true parameters, and its bit is constant
    within every group of outcomes sharing a next state.  mode "oracle"
    keeps every pair where the event fires, matching what a simulator that
    exposes its own latent draws would report.
    """

    mode: str
    members: list[np.ndarray]
    decode: dict[tuple[int, int], tuple[tuple[int, int], ...]] | None = None

    def decode_pair(self, z: int, next_state: int) -> tuple[tuple[int, int], ...]:
        if self.decode is None:
            raise ValueError("decode tables exist only in strict mode")
        return self.decode.get((z, next_state), ())


def informative_sets(spec: StructuralModelSpec, mode: str = "strict") -> InfoSets:
    """Compute U_i for every parameter, plus strict decode tables."""
    if mode not in ("strict", "oracle"):
        raise ValueError(f"unknown mode {mode!r}")
    if spec.is_entrywise:
        # each cell is revealed exactly by visits to its own row
        t = spec._compiled()
        cell_row = np.repeat(np.arange(spec.num_pairs), np.diff(t["row_indptr"]))
        members = [np.array([z], dtype=np.int64) for z in cell_row]
        decode = None
        if mode == "strict":
            decode = {}
            for z in range(spec.num_pairs):
                lo, hi = int(t["row_indptr"][z]), int(t["row_indptr"][z + 1])
                for slot in range(lo, hi):
                    decode[(z, int(t["support_cols"][slot]))] = tuple(
                        (c, 1 if c == slot else 0) for c in range(lo, hi)
                    )
        return InfoSets(mode, members, decode)

    members: list[list[int]] = [[] for _ in range(spec.num_params)]
    decode: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
    mu_star = spec.true_params
    for z, outs in enumerate(spec.outcomes):
        if mode == "strict" and mu_star is not None:
            outs = [o for o in outs
                    if all(mu_star[i] > 0.0 for i in o.pos)
                    and all(mu_star[i] < 1.0 for i in o.neg)]
        if not outs:
            continue
        present = set(outs[0].pos) | set(outs[0].neg)
        for o in outs[1:]:
            present &= set(o.pos) | set(o.neg)
        if not present:
            continue
        if mode == "oracle":
            for i in present:
                members[i].append(z)
            continue
        groups: dict[int, list[LatentOutcome]] = {}
        for o in outs:
            groups.setdefault(o.next_state, []).append(o)
        for i in sorted(present):
            constant = True
            for grp in groups.values():
                vals = {1 if i in o.pos else 0 for o in grp}
                if len(vals) > 1:
                    constant = False
                    break
            if constant:
                members[i].append(z)
                for nxt, grp in groups.items():
                    bit = 1 if i in grp[0].pos else 0
                    decode[(z, nxt)] = decode.get((z, nxt), ()) + ((i, bit),)
    arrays = [np.array(m, dtype=np.int64) for m in members]
    return InfoSets(mode, arrays, decode if mode == "strict" else None)


class StrictUpdater:
    """Vectorized strict-mode estimator updates from (pair, next state) arrays."""

    def __init__(self, spec: StructuralModelSpec, info: InfoSets | None = None):
        if spec.is_entrywise:
            raise ValueError("use update_entrywise_batch for the entry-wise baseline")
        info = info or informative_sets(spec, "strict")
        if info.mode != "strict":
            raise ValueError("strict updater needs strict info sets")
        t = spec._compiled()
        nslots = len(t["support_cols"])
        par: list[list[int]] = [[] for _ in range(nslots)]
        bit: list[list[int]] = [[] for _ in range(nslots)]
        for (z, nxt), pairs in (info.decode or {}).items():
            slot = t["cell_lookup"][z, nxt]
            if slot < 0:
                continue
            for i, b in pairs:
                par[slot].append(i)
                bit[slot].append(b)
        self._spec = spec
        self._indptr = np.cumsum([0] + [len(p) for p in par])
        self._par = np.array([i for p in par for i in p], dtype=np.int64)
        self._bit = np.array([b for p in bit for b in p], dtype=np.int64)
        self._lookup = t["cell_lookup"]

    def apply(self, est: EstimatorState, z_arr: np.ndarray,
              next_arr: np.ndarray) -> None:
        slots = self._lookup[z_arr, next_arr]
        if np.any(slots < 0):
            raise ValueError("observed transition outside declared support")
        flat = _ragged_take(self._indptr, slots)
        update_from_annotations(est, self._spec.num_params,
                                self._par[flat], self._bit[flat], len(z_arr))


# ---------------------------------------------------------------------------
# Entry-wise baseline construction.
# ---------------------------------------------------------------------------

def entrywise_spec(mdp: FiniteMdp,
                   terminal_states: frozenset[int] = frozenset()) -> StructuralModelSpec:
    """Degenerate structural model with one categorical block per row.

    The support is read off the MDP's sparsity pattern.  Rows of terminal
    states are emitted as fixed absorbing outcomes rather than estimated
    blocks, since their dynamics are known by construction.  Unvisited rows
    reconstruct to the uniform distribution over their support.
    """
    n, m = mdp.num_states, mdp.num_actions
    t = mdp.transitions
    outcomes: list[list[LatentOutcome]] = []
    names: list[str] = []
    defaults: list[float] = []
    true_vals: list[float] = []
    terminal_pairs = {s * m + a for s in terminal_states for a in range(m)}
    for z in range(n * m):
        lo, hi = t.indptr[z], t.indptr[z + 1]
        cols = t.indices[lo:hi]
        vals = t.data[lo:hi]
        if z in terminal_pairs:
            outcomes.append([LatentOutcome(float(v), (), (), int(c))
                             for c, v in zip(cols, vals) if v > 0.0])
            continue
        outs = []
        for c, v in zip(cols, vals):
            cell = len(names)
            s, a = divmod(z, m)
            names.append(f"row[{s},{a}]->{int(c)}")
            defaults.append(1.0 / len(cols))
            true_vals.append(float(v))
            outs.append(LatentOutcome(1.0, (cell,), (), int(c)))
        outcomes.append(outs)
    num_params = len(names)
    return StructuralModelSpec(
        num_states=n, num_actions=m, num_params=num_params,
        param_names=names, outcomes=outcomes,
        rewards=np.asarray(mdp.rewards), gamma=mdp.gamma,
        r_min=mdp.r_min, r_max=mdp.r_max,
        defaults=np.array(defaults), active=np.ones(num_params, dtype=bool),
        true_params=np.array(true_vals), terminal_states=frozenset(terminal_states),
        is_entrywise=True,
    )


# ---------------------------------------------------------------------------
# Estimator snapshots (plain text, for checkpoint and resume).
# ---------------------------------------------------------------------------

def estimator_to_text(est: EstimatorState, spec: StructuralModelSpec) -> str:
    lines = [f"{est.k} {len(est.counts)}"]
    for name, c, s in zip(spec.param_names, est.counts, est.sums):
        lines.append(f"{name} {int(c)} {int(s)}")
    return "\n".join(lines) + "\n"


def estimator_from_text(text: str, spec: StructuralModelSpec) -> EstimatorState:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    k, m = (int(x) for x in lines[0].split())
    if m != spec.num_params:
        raise ValueError(f"snapshot has {m} parameters, spec has {spec.num_params}")
    if len(lines) != 1 + m:
        raise ValueError(f"expected {m} parameter lines, found {len(lines) - 1}")
    counts = np.zeros(m, dtype=np.int64)
    sums = np.zeros(m, dtype=np.int64)
    for i, line in enumerate(lines[1:]):
        name, c, s = line.rsplit(" ", 2)
        if name != spec.param_names[i]:
            raise ValueError(f"parameter {i} name mismatch: {name!r}")
        counts[i], sums[i] = int(c), int(s)
    return EstimatorState(counts, sums, k)


def save_estimator(est: EstimatorState, spec: StructuralModelSpec, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(estimator_to_text(est, spec))


def load_estimator(path: str, spec: StructuralModelSpec) -> EstimatorState:
    with open(path) as fh:
        return estimator_from_text(fh.read(), spec)
