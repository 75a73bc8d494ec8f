"""Two-phase revised simplex for coupling programs.

Exact mode runs in two layers.  A floating-point revised simplex discovers a
candidate optimal basis quickly (columns are priced implicitly through the
question-block structure of the coupling space, so the Boolean matrix is
never materialized).  The basis is then certified in exact rational
arithmetic: exact basic solution, exact duals, and an exact sign check of
every reduced cost, using float prices only to prune candidates under a
rigorous rounding-error bound.  If certification fails, exact Bland pivoting
continues from that basis until the true optimum is reached, so the reported
value is the exact rational optimum regardless of what the float layer did.

Float mode stops after the first layer and reports the float optimum.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lp import LinearProgram, Row

EPS = 2.0**-52

# above this many columns the float layer always prices by Dantzig: Bland's
# lowest-index scan would have to rank the whole improving set every pivot
_BLAND_ID_LIMIT = 2**20


class SolverError(RuntimeError):
    pass


class NumericBreakdown(SolverError):
    """Float mode lost feasibility; retry in exact mode."""


@dataclass
class SolveOptions:
    tolerance: float = 1e-9
    pricing: str = "dantzig"        # entering rule of the float discovery layer;
                                    # the exact certification layer always pivots
                                    # by Bland's rule
    max_iterations: int | None = None
    log: bool = False

    def __post_init__(self):
        if self.pricing not in ("bland", "dantzig"):
            raise ValueError(f"unknown pricing rule {self.pricing!r}")


@dataclass
class LpSolution:
    status: str                      # "optimal" | "infeasible"
    value: Fraction | float | None
    mode: str
    support: dict | None = None      # structural column -> net value
    certificate: list | None = None  # Farkas duals for the exact infeasible case
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# standard form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Extra:
    cid: int
    entries: tuple[tuple[int, int], ...]   # (row index, +1/-1)
    cost: int                              # phase-2 cost


class _Standardized:
    """LinearProgram in equality standard form with explicit column ids.

    Column id layout: [0, N) structural x+; [N, 2N) structural x- when the
    program is signed; then deviation/slack columns; artificials last.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.space = lp.space
        self.rows: list[Row] = list(lp.rows) + list(lp.soft_rows)
        self.soft_start = len(lp.rows)
        self.m = len(self.rows)
        self.b = [row.target for row in self.rows]
        if any(t < 0 for t in self.b):
            raise SolverError("negative row target; coupling targets are probabilities")
        self.b_float = np.array([float(t) for t in self.b])
        self.N = self.space.n_columns
        self.signed = lp.signed
        self.struct_cost = lp.col_cost
        self.n_struct_ids = 2 * self.N if self.signed else self.N

        self.extras: dict[int, _Extra] = {}
        self.basis_seed: list[int] = [-1] * self.m
        nxt = self.n_struct_ids
        for r, row in enumerate(self.rows):
            if r >= self.soft_start:
                over = _Extra(nxt, ((r, -1),), 1)
                under = _Extra(nxt + 1, ((r, 1),), 1)
                self.extras[over.cid] = over
                self.extras[under.cid] = under
                self.basis_seed[r] = under.cid
                nxt += 2
            elif row.relation == "le":
                slack = _Extra(nxt, ((r, 1),), 0)
                self.extras[slack.cid] = slack
                self.basis_seed[r] = slack.cid
                nxt += 1
        self.artificials: dict[int, int] = {}   # cid -> row
        for r, row in enumerate(self.rows):
            if self.basis_seed[r] == -1:
                cid = nxt
                self.extras[cid] = _Extra(cid, ((r, 1),), 0)
                self.artificials[cid] = r
                self.basis_seed[r] = cid
                nxt += 1
        self.n_cols_total = nxt
        self.has_artificials = bool(self.artificials)
        self._entry_cache: dict[int, tuple[tuple[int, int], ...]] = {}

    # -- column access ------------------------------------------------------

    def is_structural(self, cid: int) -> bool:
        return cid < self.n_struct_ids

    def is_artificial(self, cid: int) -> bool:
        return cid in self.artificials

    def structural_parts(self, cid: int) -> tuple[int, int]:
        """(atom index, sign) of a structural column id."""
        if cid < self.N:
            return cid, 1
        return cid - self.N, -1

    def column_entries(self, cid: int) -> tuple[tuple[int, int], ...]:
        cached = self._entry_cache.get(cid)
        if cached is not None:
            return cached
        if self.is_structural(cid):
            j, sign = self.structural_parts(cid)
            values = self.space.decode(j)
            entries = tuple(
                (r, sign)
                for r, row in enumerate(self.rows)
                if all(values[p] == v for p, v in row.conds)
            )
        else:
            entries = self.extras[cid].entries
        if len(self._entry_cache) < 200_000:
            self._entry_cache[cid] = entries
        return entries

    def cost(self, cid: int, phase: int) -> int:
        if phase == 1:
            return 1 if self.is_artificial(cid) else 0
        if self.is_structural(cid):
            return self.struct_cost
        if self.is_artificial(cid):
            return 0
        return self.extras[cid].cost

    def float_basis_matrix(self, basis: Sequence[int]) -> np.ndarray:
        B = np.zeros((self.m, self.m))
        for k, cid in enumerate(basis):
            for r, coef in self.column_entries(cid):
                B[r, k] = coef
        return B

    def add_artificial(self, row: int) -> int:
        cid = self.n_cols_total
        self.extras[cid] = _Extra(cid, ((row, 1),), 0)
        self.artificials[cid] = row
        self.n_cols_total += 1
        return cid


# ---------------------------------------------------------------------------
# implicit pricing over question blocks
# ---------------------------------------------------------------------------


class _Pricer:
    """Prices all structural columns at once.

    Variables are grouped into blocks by question; every row's conditions
    touch a fixed set of blocks, so the price vector y^T A over all columns
    is a broadcast sum of small per-group tables over the block-state tensor.
    """

    def __init__(self, st: _Standardized):
        self.st = st
        space = st.space
        self.blocks = space.question_blocks()
        self.n_blocks = len(self.blocks)
        block_of_pos: dict[int, int] = {}
        for bi, (_, positions) in enumerate(self.blocks):
            for p in positions:
                block_of_pos[p] = bi
        self.shapes: list[int] = []
        self.contribs: list[np.ndarray] = []
        for _, positions in self.blocks:
            radices = [space.radices[p] for p in positions]
            size = 1
            for r in radices:
                size *= r
            self.shapes.append(size)
            states = np.zeros(size, dtype=np.int64)
            for local, combo in enumerate(
                itertools.product(*(range(r) for r in radices))
            ):
                states[local] = sum(
                    v * space.weights[p] for v, p in zip(combo, positions)
                )
            self.contribs.append(states)
        self.shape = tuple(self.shapes)
        self.groups: dict[tuple[int, ...], list[tuple[int, list[np.ndarray]]]] = {}
        for r, row in enumerate(st.rows):
            touched = tuple(sorted({block_of_pos[p] for p, _ in row.conds}))
            allowed = [self._allowed_states(b, row) for b in touched]
            self.groups.setdefault(touched, []).append((r, allowed))
        self._buffer: np.ndarray | None = None

    def _allowed_states(self, block_index: int, row: Row) -> np.ndarray:
        _, positions = self.blocks[block_index]
        radices = [self.st.space.radices[p] for p in positions]
        conds = {p: v for p, v in row.conds if p in positions}
        allowed = [
            local
            for local, combo in enumerate(
                itertools.product(*(range(r) for r in radices))
            )
            if all(combo[positions.index(p)] == v for p, v in conds.items())
        ]
        return np.array(allowed, dtype=np.intp)

    def price_flat(self, y: np.ndarray) -> np.ndarray:
        """y^T A for every structural atom, flattened in block-tensor C order."""
        if self._buffer is None:
            self._buffer = np.zeros(self.shape)
        total = self._buffer
        total[...] = 0.0
        for touched, rows in self.groups.items():
            if not touched:
                s = sum(y[r] for r, _ in rows)
                if s:
                    total += s
                continue
            tshape = tuple(self.shapes[b] for b in touched)
            table = np.zeros(tshape)
            hot = False
            for r, allowed in rows:
                if y[r] != 0.0:
                    table[np.ix_(*allowed)] += y[r]
                    hot = True
            if hot:
                view = [1] * self.n_blocks
                for b in touched:
                    view[b] = self.shapes[b]
                total += table.reshape(view)
        return total.ravel()

    def flat_to_columns(self, flat: np.ndarray) -> np.ndarray:
        """Map flattened tensor positions to coupling atom indices."""
        cols = np.zeros(len(flat), dtype=np.int64)
        rem = flat.astype(np.int64, copy=True)
        for b in range(self.n_blocks - 1, -1, -1):
            size = self.shapes[b]
            cols += self.contribs[b][rem % size]
            rem //= size
        return cols

    def price_error_bound(self, y: np.ndarray) -> float:
        """Valid bound on |float price - exact price| for every column.

        Every exact price is a sum of at most m dual values with 0/1
        coefficients; the float computation performs at most 2m + #groups
        roundings, each bounded by eps times the running magnitude, which
        never exceeds sum|y|.
        """
        scale = 1.0 + float(np.abs(y).sum())
        return 8.0 * EPS * (2 * self.st.m + len(self.groups) + 8) * scale


# ---------------------------------------------------------------------------
# float layer
# ---------------------------------------------------------------------------


@dataclass
class _FloatResult:
    basis: list[int]
    feasible: bool
    iterations: int
    pivots: list


class _FloatSimplex:
    def __init__(self, st: _Standardized, pricer: _Pricer, options: SolveOptions):
        self.st = st
        self.pricer = pricer
        self.opt = options
        self.tol = options.tolerance
        self.pivots: list = []
        self.iterations = 0

    def run(self) -> _FloatResult:
        st = self.st
        basis = list(st.basis_seed)
        feasible = True
        if st.has_artificials:
            basis, feasible = self._phase(basis, phase=1)
        if feasible:
            basis, _ = self._phase(basis, phase=2)
        return _FloatResult(basis, feasible, self.iterations, self.pivots)

    def _phase(self, basis: list[int], phase: int) -> tuple[list[int], bool]:
        st = self.st
        m = st.m
        cap = self.opt.max_iterations or max(3000, 80 * (m + 20))
        bland_always = self.opt.pricing == "bland" and st.N <= _BLAND_ID_LIMIT
        stall = 0
        obj = math.inf
        for _ in range(cap):
            self.iterations += 1
            B = st.float_basis_matrix(basis)
            try:
                xB = np.linalg.solve(B, st.b_float)
                cB = np.array([float(st.cost(c, phase)) for c in basis])
                y = np.linalg.solve(B.T, cB)
            except np.linalg.LinAlgError:
                break   # exact layer recovers
            new_obj = float(cB @ xB)
            if new_obj < obj - self.tol:
                obj, stall = new_obj, 0
            else:
                stall += 1
                if stall > 4 * m + 40:
                    break
            entering = self._entering(
                basis,
                y,
                phase,
                bland=bland_always or (stall > 2 * m and st.N <= _BLAND_ID_LIMIT),
            )
            if entering is None:
                break
            a = np.zeros(m)
            for r, coef in st.column_entries(entering):
                a[r] = coef
            d = np.linalg.solve(B, a)
            leave_pos = self._ratio(basis, xB, d, phase)
            if leave_pos is None:
                raise SolverError("program is unbounded; builder produced a bad program")
            if self.opt.log:
                self.pivots.append((entering, basis[leave_pos]))
            basis[leave_pos] = entering
        if phase == 1:
            obj = self._phase1_objective(basis)
            return basis, obj <= max(self.tol * 100, 1e-7)
        return basis, True

    def _phase1_objective(self, basis) -> float:
        st = self.st
        try:
            B = st.float_basis_matrix(basis)
            xB = np.linalg.solve(B, st.b_float)
        except np.linalg.LinAlgError:
            return math.inf
        return float(
            sum(x for c, x in zip(basis, xB) if st.is_artificial(c))
        )

    def _entering(self, basis, y, phase, bland: bool):
        st = self.st
        tol = self.tol
        in_basis = set(basis)
        struct_cost = 0.0 if phase == 1 else float(st.struct_cost)
        prices = self.pricer.price_flat(y)
        candidate = None
        if bland:
            candidate = self._bland_structural(prices, struct_cost, in_basis)
        else:
            best_rc = -tol
            cid, rc = self._dantzig_pick(prices, struct_cost, in_basis, sign=+1)
            if cid is not None and rc < best_rc:
                candidate, best_rc = cid, rc
            if st.signed:
                cid, rc = self._dantzig_pick(prices, struct_cost, in_basis, sign=-1)
                if cid is not None and rc < best_rc:
                    candidate, best_rc = cid, rc
            if candidate is None and st.N <= _BLAND_ID_LIMIT:
                candidate = self._bland_structural(prices, struct_cost, in_basis)
        if candidate is not None and bland:
            return candidate
        # extras: under Bland they only matter if no structural candidate
        # (their ids are all larger); under Dantzig compare reduced costs.
        best_extra, best_extra_rc = None, -tol
        for cid in sorted(st.extras):
            if cid in in_basis or st.is_artificial(cid):
                continue
            extra = st.extras[cid]
            rc = st.cost(cid, phase) - sum(coef * y[r] for r, coef in extra.entries)
            if rc < best_extra_rc:
                best_extra, best_extra_rc = cid, rc
                if bland:
                    break
        if candidate is None:
            return best_extra
        if bland or best_extra is None:
            return candidate
        return candidate if best_rc <= best_extra_rc else best_extra

    def _dantzig_pick(self, prices, struct_cost, in_basis, sign):
        """Most negative reduced cost among x+ (sign=+1) or x- (sign=-1).

        Ties resolve to the lowest flattened tensor position, a fixed
        deterministic order; exactness of the final answer rests on the
        exact layer, not on this choice.
        """
        st = self.st
        k = int(np.argmax(prices)) if sign > 0 else int(np.argmin(prices))
        rc = struct_cost - sign * float(prices[k])
        if rc >= -self.tol:
            return None, 0.0
        cid = int(self.pricer.flat_to_columns(np.array([k]))[0])
        if sign < 0:
            cid += st.N
        if cid in in_basis:
            # rare: a basic column shows a tiny negative rc; take the best of
            # the next candidates instead
            top = min(64, len(prices))
            part = np.argpartition(-prices if sign > 0 else prices, top - 1)[:top]
            part = part[np.argsort(-prices[part] if sign > 0 else prices[part])]
            for f in part:
                alt_rc = struct_cost - sign * float(prices[f])
                if alt_rc >= -self.tol:
                    return None, 0.0
                alt = int(self.pricer.flat_to_columns(np.array([int(f)]))[0])
                if sign < 0:
                    alt += st.N
                if alt not in in_basis:
                    return alt, alt_rc
            return None, 0.0
        return cid, rc

    def _bland_structural(self, prices, struct_cost, in_basis):
        st = self.st
        tol = self.tol
        mask = (struct_cost - prices) < -tol
        if mask.any():
            for cid in np.sort(self.pricer.flat_to_columns(np.flatnonzero(mask))):
                if int(cid) not in in_basis:
                    return int(cid)
        if st.signed:
            mask = (struct_cost + prices) < -tol
            if mask.any():
                for cid in np.sort(self.pricer.flat_to_columns(np.flatnonzero(mask))):
                    if int(cid) + st.N not in in_basis:
                        return int(cid) + st.N
        return None

    def _ratio(self, basis, xB, d, phase):
        st = self.st
        tol = self.tol
        candidates = []
        for i, cid in enumerate(basis):
            if phase == 2 and st.is_artificial(cid):
                if abs(d[i]) > tol:
                    candidates.append((0.0, i))
                continue
            if d[i] > tol:
                candidates.append((max(xB[i], 0.0) / d[i], i))
        if not candidates:
            return None
        theta = min(r for r, _ in candidates)
        ties = [i for r, i in candidates if r <= theta + tol]
        # prefer kicking artificials out, then lowest basic column id
        return min(ties, key=lambda i: (not st.is_artificial(basis[i]), basis[i]))


# ---------------------------------------------------------------------------
# exact layer
# ---------------------------------------------------------------------------


class _Singular(Exception):
    pass


class _InfeasibleSignal(Exception):
    def __init__(self, basis):
        self.basis = basis


class _ExactBasis:
    """Exact LU factorization (row pivoting on first nonzero) of a basis."""

    def __init__(self, st: _Standardized, basis: Sequence[int]):
        m = st.m
        A = [[Fraction(0)] * m for _ in range(m)]
        for k, cid in enumerate(basis):
            for r, coef in st.column_entries(cid):
                A[r][k] = Fraction(coef)
        perm = list(range(m))
        for col in range(m):
            pivot = next((r for r in range(col, m) if A[perm[r]][col] != 0), None)
            if pivot is None:
                raise _Singular(col)
            perm[col], perm[pivot] = perm[pivot], perm[col]
            prow = A[perm[col]]
            inv = 1 / prow[col]
            for r in range(col + 1, m):
                row = A[perm[r]]
                if row[col] != 0:
                    factor = row[col] * inv
                    row[col] = factor
                    for c in range(col + 1, m):
                        if prow[c] != 0:
                            row[c] -= factor * prow[c]
        self.m = m
        self.A = A
        self.perm = perm

    def solve(self, rhs: Sequence[Fraction]) -> list[Fraction]:
        m, A, perm = self.m, self.A, self.perm
        x = [rhs[perm[r]] for r in range(m)]
        for r in range(m):
            row = A[perm[r]]
            s = x[r]
            for c in range(r):
                if row[c] != 0 and x[c] != 0:
                    s -= row[c] * x[c]
            x[r] = s
        for r in range(m - 1, -1, -1):
            row = A[perm[r]]
            s = x[r]
            for c in range(r + 1, m):
                if row[c] != 0 and x[c] != 0:
                    s -= row[c] * x[c]
            x[r] = s / row[r]
        return x

    def solve_transpose(self, rhs: Sequence[Fraction]) -> list[Fraction]:
        m, A, perm = self.m, self.A, self.perm
        z = list(rhs)
        for c in range(m):
            s = z[c]
            for r in range(c):
                arc = A[perm[r]][c]
                if arc != 0 and z[r] != 0:
                    s -= arc * z[r]
            z[c] = s / A[perm[c]][c]
        for c in range(m - 1, -1, -1):
            s = z[c]
            for r in range(c + 1, m):
                arc = A[perm[r]][c]
                if arc != 0 and z[r] != 0:
                    s -= arc * z[r]
            z[c] = s
        y = [Fraction(0)] * m
        for r in range(m):
            y[perm[r]] = z[r]
        return y


class _ExactSimplex:
    def __init__(self, st: _Standardized, pricer: _Pricer, options: SolveOptions, stats: dict):
        self.st = st
        self.pricer = pricer
        self.opt = options
        self.stats = stats

    def _structural_negatives(self, y: list[Fraction], phase: int) -> list[int]:
        """Structural ids with exactly negative reduced cost, ascending."""
        st = self.st
        struct_cost = Fraction(0 if phase == 1 else st.struct_cost)
        try:
            y_f = np.array([float(v) for v in y])
        except OverflowError:
            return self._structural_negatives_slow(y, struct_cost)
        if not np.all(np.isfinite(y_f)):
            return self._structural_negatives_slow(y, struct_cost)
        prices = self.pricer.price_flat(y_f)
        bound = self.pricer.price_error_bound(y_f) + 4 * EPS * (
            1 + abs(float(struct_cost))
        )
        cand: list[int] = []
        mask = prices > float(struct_cost) - bound
        if mask.any():
            cand.extend(self.pricer.flat_to_columns(np.flatnonzero(mask)).tolist())
        if st.signed:
            mask = prices < -float(struct_cost) + bound
            if mask.any():
                cand.extend(
                    (self.pricer.flat_to_columns(np.flatnonzero(mask)) + st.N).tolist()
                )
        if not cand:
            return []
        self.stats["exact_candidates"] = self.stats.get("exact_candidates", 0) + len(cand)
        return self._confirm(sorted(set(cand)), y, struct_cost)

    def _confirm(self, cand: list[int], y: list[Fraction], struct_cost: Fraction) -> list[int]:
        """Exact reduced-cost signs via integer arithmetic on scaled duals."""
        st = self.st
        denom = 1
        for v in y:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
        scaled = [int(v * denom) for v in y]
        cost_scaled = struct_cost * denom
        assert cost_scaled.denominator == 1
        cost_scaled = int(cost_scaled)
        space = st.space
        cand_arr = np.array(cand, dtype=np.int64)
        atoms = np.where(cand_arr < st.N, cand_arr, cand_arr - st.N)
        acc = [0] * len(cand)
        for r, row in enumerate(st.rows):
            nr = scaled[r]
            if nr == 0:
                continue
            mask = np.ones(len(cand), dtype=bool)
            for p, v in row.conds:
                mask &= (atoms // space.weights[p]) % space.radices[p] == v
            for i in np.flatnonzero(mask):
                acc[i] += nr
        out = []
        for i, cid in enumerate(cand):
            sign = 1 if cid < st.N else -1
            if cost_scaled - sign * acc[i] < 0:
                out.append(cid)
        return out

    def _structural_negatives_slow(self, y, struct_cost) -> list[int]:
        st = self.st
        if st.N > 2**20:
            raise SolverError(
                "duals overflow float range on a program too large for a full "
                "exact pricing scan"
            )
        out = []
        for j in range(st.N):
            values = st.space.decode(j)
            p = Fraction(0)
            for r, row in enumerate(st.rows):
                if y[r] != 0 and all(values[pp] == v for pp, v in row.conds):
                    p += y[r]
            if struct_cost - p < 0:
                out.append(j)
            if st.signed and struct_cost + p < 0:
                out.append(j + st.N)
        return sorted(out)

    def _extra_negatives(self, y: list[Fraction], basis: set[int], phase: int) -> list[int]:
        st = self.st
        out = []
        for cid in sorted(st.extras):
            if cid in basis or st.is_artificial(cid):
                continue
            extra = st.extras[cid]
            rc = Fraction(st.cost(cid, phase)) - sum(
                (Fraction(coef) * y[r] for r, coef in extra.entries), Fraction(0)
            )
            if rc < 0:
                out.append(cid)
        return out

    def run(self, basis: list[int], phase: int):
        """Bland-pivot from `basis` to the exact optimum of the given phase."""
        st = self.st
        basis = list(basis)
        restarted = False
        while True:
            try:
                fact = _ExactBasis(st, basis)
            except _Singular:
                basis = self._repair(basis)
                fact = _ExactBasis(st, basis)
            xB = fact.solve(st.b)
            if any(v < 0 for v in xB):
                if restarted:
                    raise SolverError("exact simplex lost feasibility after restart")
                restarted = True
                basis = self._restart_feasible()
                continue
            cB = [Fraction(st.cost(c, phase)) for c in basis]
            y = fact.solve_transpose(cB)
            in_basis = set(basis)
            negatives = self._extra_negatives(y, in_basis, phase)
            negatives += [
                c for c in self._structural_negatives(y, phase) if c not in in_basis
            ]
            if not negatives:
                return basis, xB, y
            entering = min(negatives)
            a = [Fraction(0)] * st.m
            for r, coef in st.column_entries(entering):
                a[r] = Fraction(coef)
            d = fact.solve(a)
            leave = self._ratio_exact(basis, xB, d, phase)
            if leave is None:
                raise SolverError("exact simplex found an unbounded direction")
            basis[leave] = entering
            self.stats["exact_pivots"] = self.stats.get("exact_pivots", 0) + 1

    def _ratio_exact(self, basis, xB, d, phase):
        st = self.st
        best = None   # (ratio, not artificial, cid, position)
        for i, cid in enumerate(basis):
            if phase == 2 and st.is_artificial(cid):
                if d[i] == 0:
                    continue
                ratio = Fraction(0)
            elif d[i] > 0:
                ratio = xB[i] / d[i]
            else:
                continue
            key = (ratio, not st.is_artificial(cid), cid)
            if best is None or key < best[0]:
                best = (key, i)
        return None if best is None else best[1]

    def _repair(self, basis: list[int]) -> list[int]:
        """Replace dependent basis columns with artificials (exact rank scan)."""
        st = self.st
        m = st.m
        chosen: list[int] = []
        work: list[tuple[int, list[Fraction]]] = []

        def try_add(cid: int) -> bool:
            vec = [Fraction(0)] * m
            for r, coef in st.column_entries(cid):
                vec[r] = Fraction(coef)
            for piv_row, piv_vec in work:
                if vec[piv_row] != 0:
                    f = vec[piv_row] / piv_vec[piv_row]
                    vec = [a - f * b for a, b in zip(vec, piv_vec)]
            lead = next((r for r in range(m) if vec[r] != 0), None)
            if lead is None:
                return False
            work.append((lead, vec))
            chosen.append(cid)
            return True

        for cid in basis:
            try_add(cid)
        covered = {r for r, _ in work}
        existing_art = {r: cid for cid, r in st.artificials.items()}
        for r in range(m):
            if r not in covered:
                art = existing_art.get(r)
                if art is None or art in chosen:
                    art = st.add_artificial(r)
                if not try_add(art):
                    raise SolverError("basis repair failed")
        if len(chosen) != m:
            raise SolverError("basis repair produced a deficient basis")
        self.stats["basis_repairs"] = self.stats.get("basis_repairs", 0) + 1
        return chosen

    def _restart_feasible(self) -> list[int]:
        """Restart from the artificial seed basis and re-run exact Phase I."""
        st = self.st
        self.stats["exact_restarts"] = self.stats.get("exact_restarts", 0) + 1
        basis, xB, _ = self.run(list(st.basis_seed), phase=1)
        phase1 = sum(
            (x for c, x in zip(basis, xB) if st.is_artificial(c)), Fraction(0)
        )
        if phase1 > 0:
            raise _InfeasibleSignal(basis)
        return basis


# ---------------------------------------------------------------------------
# public entry point
# ---------------------------------------------------------------------------


def solve(lp: LinearProgram, mode: str = "exact", options: SolveOptions | None = None) -> LpSolution:
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    options = options or SolveOptions()
    t0 = time.perf_counter()
    st = _Standardized(lp)
    pricer = _Pricer(st)
    stats: dict = {
        "program": lp.name,
        "n_rows": st.m,
        "n_columns": st.N,
        "signed": st.signed,
        "pricing": options.pricing,
    }
    fl = _FloatSimplex(st, pricer, options)
    res = fl.run()
    stats["float_iterations"] = res.iterations
    if options.log:
        stats["pivots"] = res.pivots

    if mode == "float":
        sol = _finish_float(st, res, stats, options)
        stats["time_s"] = time.perf_counter() - t0
        return sol

    ex = _ExactSimplex(st, pricer, options, stats)
    basis = list(res.basis)
    try:
        skip_phase1 = not st.has_artificials
        if not skip_phase1:
            try:
                fact = _ExactBasis(st, basis)
                xB = fact.solve(st.b)
                art_mass = sum(
                    (x for c, x in zip(basis, xB) if st.is_artificial(c)), Fraction(0)
                )
                skip_phase1 = all(v >= 0 for v in xB) and art_mass == 0
            except _Singular:
                skip_phase1 = False
        if not skip_phase1:
            basis, xB, y = ex.run(basis, phase=1)
            phase1 = sum(
                (x for c, x in zip(basis, xB) if st.is_artificial(c)), Fraction(0)
            )
            if phase1 > 0:
                stats["time_s"] = time.perf_counter() - t0
                return LpSolution("infeasible", None, "exact", certificate=y, stats=stats)
        basis, xB, y = ex.run(basis, phase=2)
    except _InfeasibleSignal as sig:
        fact = _ExactBasis(st, sig.basis)
        xB = fact.solve(st.b)
        y = fact.solve_transpose([Fraction(st.cost(c, 1)) for c in sig.basis])
        stats["time_s"] = time.perf_counter() - t0
        return LpSolution("infeasible", None, "exact", certificate=y, stats=stats)

    value = sum((Fraction(st.cost(c, 2)) * x for c, x in zip(basis, xB)), Fraction(0))
    support: dict[int, Fraction] = {}
    for cid, x in zip(basis, xB):
        if st.is_structural(cid) and x != 0:
            j, sign = st.structural_parts(cid)
            support[j] = support.get(j, Fraction(0)) + sign * x
    support = {j: v for j, v in support.items() if v != 0}
    stats["time_s"] = time.perf_counter() - t0
    return LpSolution("optimal", value, "exact", support=support, stats=stats)


def _finish_float(st: _Standardized, res: _FloatResult, stats: dict, options: SolveOptions) -> LpSolution:
    if not res.feasible:
        return LpSolution("infeasible", None, "float", stats=stats)
    B = st.float_basis_matrix(res.basis)
    try:
        xB = np.linalg.solve(B, st.b_float)
    except np.linalg.LinAlgError as exc:
        raise NumericBreakdown("final float basis is singular") from exc
    if float(xB.min(initial=0.0)) < -1e-6:
        raise NumericBreakdown("float basis lost primal feasibility")
    value = 0.0
    support: dict[int, float] = {}
    for cid, x in zip(res.basis, xB):
        value += st.cost(cid, 2) * x
        if st.is_structural(cid) and abs(x) > options.tolerance:
            j, sign = st.structural_parts(cid)
            support[j] = support.get(j, 0.0) + sign * x
    return LpSolution("optimal", value, "float", support=support, stats=stats)


def row_activity(lp: LinearProgram, support: dict, row: Row) -> Fraction:
    """Recompute one row's activity from a sparse structural support."""
    total = Fraction(0)
    for j, x in support.items():
        if all(lp.space.value_index(j, p) == v for p, v in row.conds):
            total += x
    return total


def verify_farkas(lp: LinearProgram, certificate: list) -> bool:
    """Check an infeasibility certificate: y.b > 0 and y.A_j <= 0 for all columns.

    Full column scan; intended for test-sized programs.
    """
    st = _Standardized(lp)
    y = certificate
    if sum((yr * t for yr, t in zip(y, st.b)), Fraction(0)) <= 0:
        return False
    for j in range(st.N):
        values = st.space.decode(j)
        p = Fraction(0)
        for r, row in enumerate(st.rows):
            if y[r] != 0 and all(values[pp] == v for pp, v in row.conds):
                p += y[r]
        if p > 0 or (st.signed and -p > 0):
            return False
    for cid, extra in st.extras.items():
        if st.is_artificial(cid):
            continue
        p = sum((Fraction(c) * y[r] for r, c in extra.entries), Fraction(0))
        if p > 0:
            return False
    return True
