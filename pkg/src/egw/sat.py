"""CNF formulas, DIMACS I/O, a DPLL oracle, MU(1) certification, and the
dictionary between boards-with-pairings and formulas.

The board-to-formula direction turns each edge into a clause after
identifying the two members of every pair with the two literals of one
variable; the reverse direction reads a k-CNF as a board on literal
vertices paired x with not-x.  Maker's pure pairing wins exactly when
the formula is unsatisfiable, which the test suite exercises in both
directions against the DPLL oracle.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimacsError, LimitExceeded, ValidationError
from .hypergraph import Hypergraph, Pairing, PairingStrategyMaker, degree_stats
from .limits import DEFAULT_LIMITS, Limits
from .numerics import floor_div_e


class CnfFormula:
    """Clause list over variables 1..num_vars.

    Clauses are stored with literals ascending by absolute value, in
    construction order.  No duplicate literals; tautological clauses are
    rejected unless explicitly admitted.
    """

    __slots__ = ("num_vars", "clauses")

    def __init__(
        self,
        clauses: Iterable[Iterable[int]],
        num_vars: int | None = None,
        allow_tautologies: bool = False,
    ):
        packed = []
        max_var = 0
        for clause in clauses:
            lits = tuple(sorted(clause, key=lambda l: (abs(l), l)))
            if any(l == 0 for l in lits):
                raise ValidationError("literal 0 is not allowed")
            vars_in = [abs(l) for l in lits]
            if len(set(lits)) != len(lits):
                raise ValidationError(f"duplicate literal in clause {lits}")
            if len(set(vars_in)) != len(vars_in) and not allow_tautologies:
                raise ValidationError(f"tautological clause {lits}")
            if vars_in:
                max_var = max(max_var, max(vars_in))
            packed.append(lits)
        if num_vars is None:
            num_vars = max_var
        elif num_vars < max_var:
            raise ValidationError(f"clause uses variable {max_var} > declared {num_vars}")
        self.num_vars = num_vars
        self.clauses = tuple(packed)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def variables_occurring(self) -> set[int]:
        return {abs(l) for c in self.clauses for l in c}

    def deficiency(self) -> int:
        """clause count minus the number of occurring variables."""
        return self.clause_count - len(self.variables_occurring())

    def widths(self) -> set[int]:
        return {len(c) for c in self.clauses}

    def is_k_cnf(self, k: int) -> bool:
        return all(len(c) == k for c in self.clauses)

    def evaluate(self, model: Mapping[int, bool]) -> bool:
        return all(
            any(model.get(abs(l), False) == (l > 0) for l in clause)
            for clause in self.clauses
        )

    def without_clause(self, idx: int) -> "CnfFormula":
        rest = self.clauses[:idx] + self.clauses[idx + 1:]
        return CnfFormula(rest, num_vars=self.num_vars, allow_tautologies=True)

    def __eq__(self, other):
        return (
            isinstance(other, CnfFormula)
            and self.num_vars == other.num_vars
            and self.clauses == other.clauses
        )

    def __repr__(self):
        return f"CnfFormula({self.num_vars} vars, {self.clause_count} clauses)"


# -- DIMACS ----------------------------------------------------------------


def dimacs_write(formula: CnfFormula) -> str:
    out = io.StringIO()
    out.write(f"p cnf {formula.num_vars} {formula.clause_count}\n")
    for clause in formula.clauses:
        out.write(" ".join(str(l) for l in clause))
        out.write(" 0\n" if clause else "0\n")
    return out.getvalue()


def dimacs_read(text: str) -> CnfFormula:
    num_vars = num_clauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer header counts in {line!r}", lineno)
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError("negative header counts", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal token {tok!r}", lineno)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(
                        f"literal {lit} exceeds declared variable count {num_vars}", lineno
                    )
                current.append(lit)
    if current:
        raise DimacsError("unterminated clause at end of input", None)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header", None)
    if num_clauses is not None and num_clauses != len(clauses):
        raise DimacsError(
            f"header declares {num_clauses} clauses but {len(clauses)} were read", None
        )
    return CnfFormula(clauses, num_vars=num_vars)


# -- DPLL oracle -------------------------------------------------------------


@dataclass
class SatResult:
    satisfiable: bool
    model: dict[int, bool] | None = None
    decisions: int = 0

    def __bool__(self):
        return self.satisfiable


def dpll_sat(formula: CnfFormula, limits: Limits = DEFAULT_LIMITS) -> SatResult:
    """Complete DPLL with unit propagation and pure-literal elimination.

    Returned models are total over 1..num_vars (unconstrained variables
    default to False) and are re-verified by direct evaluation.
    """
    if formula.num_vars > limits.dpll_vars:
        raise LimitExceeded(
            f"formula has {formula.num_vars} variables > limit {limits.dpll_vars}"
        )
    if formula.clause_count > limits.dpll_clauses:
        raise LimitExceeded(
            f"formula has {formula.clause_count} clauses > limit {limits.dpll_clauses}"
        )

    stats = {"decisions": 0}

    def solve(clauses: list[tuple[int, ...]], assignment: dict[int, bool]):
        while True:
            # unit propagation
            unit = None
            simplified = []
            for clause in clauses:
                live = []
                satisfied = False
                for l in clause:
                    val = assignment.get(abs(l))
                    if val is None:
                        live.append(l)
                    elif val == (l > 0):
                        satisfied = True
                        break
                if satisfied:
                    continue
                if not live:
                    return None
                if len(live) == 1 and unit is None:
                    unit = live[0]
                simplified.append(tuple(live))
            clauses = simplified
            if not clauses:
                return assignment
            if unit is not None:
                assignment = dict(assignment)
                assignment[abs(unit)] = unit > 0
                continue
            # pure literals
            polarity: dict[int, int] = {}
            for clause in clauses:
                for l in clause:
                    polarity[abs(l)] = polarity.get(abs(l), 0) | (1 if l > 0 else 2)
            pures = [v if pol == 1 else -v for v, pol in polarity.items() if pol != 3]
            if pures:
                assignment = dict(assignment)
                for l in pures:
                    assignment[abs(l)] = l > 0
                continue
            break
        # branch on the most frequent variable among the shortest clauses
        shortest = min(len(c) for c in clauses)
        freq: dict[int, int] = {}
        for clause in clauses:
            if len(clause) == shortest:
                for l in clause:
                    freq[abs(l)] = freq.get(abs(l), 0) + 1
        var = max(sorted(freq), key=lambda v: freq[v])
        stats["decisions"] += 1
        for value in (True, False):
            trial = dict(assignment)
            trial[var] = value
            result = solve(clauses, trial)
            if result is not None:
                return result
        return None

    found = solve(list(formula.clauses), {})
    if found is None:
        return SatResult(False, None, stats["decisions"])
    model = {v: found.get(v, False) for v in range(1, formula.num_vars + 1)}
    if not formula.evaluate(model):
        raise AssertionError("DPLL produced a non-model; solver bug")
    return SatResult(True, model, stats["decisions"])


def is_minimal_unsatisfiable(formula: CnfFormula, limits: Limits = DEFAULT_LIMITS) -> bool:
    """F unsatisfiable and every clause-deleted subformula satisfiable."""
    if dpll_sat(formula, limits):
        return False
    for i in range(formula.clause_count):
        if not dpll_sat(formula.without_clause(i), limits):
            return False
    return True


# -- MU(1) certification ------------------------------------------------------


def mu1_check(formula: CnfFormula) -> tuple[bool, dict | None]:
    """Recursive splitting certificate for deficiency-1 minimal unsatisfiability.

    A formula belongs to the class iff it is the single empty clause or it
    splits, on some variable x present in both polarities, into two
    clause-disjoint parts sharing exactly the variable x, whose x- and
    not-x-stripped versions belong to the class again.  Returns the split
    tree found (variable per level) as the certificate.
    """
    clauses = tuple(frozenset(c) for c in formula.clauses)
    memo: dict[tuple, tuple[bool, dict | None]] = {}

    def recurse(cls: tuple[frozenset[int], ...]) -> tuple[bool, dict | None]:
        key = tuple(sorted(cls, key=sorted))
        if key in memo:
            return memo[key]
        if len(set(cls)) != len(cls):
            memo[key] = (False, None)  # duplicate clauses break minimality
            return memo[key]
        if len(cls) == 1 and not next(iter(cls)):
            memo[key] = (True, {"leaf": "empty-clause"})
            return memo[key]
        variables = {abs(l) for c in cls for l in c}
        # deficiency-1 is necessary at every level; cheap filter
        if len(cls) != len(variables) + 1:
            memo[key] = (False, None)
            return memo[key]
        pos = {abs(l) for c in cls for l in c if l > 0}
        neg = {abs(l) for c in cls for l in c if l < 0}
        for x in sorted(pos & neg):
            result = _try_split(cls, x)
            if result is not None:
                memo[key] = (True, result)
                return memo[key]
        memo[key] = (False, None)
        return memo[key]

    def _try_split(cls, x):
        # connected components of the clause graph linking clauses that
        # share any variable other than x
        var_to_clauses: dict[int, list[int]] = {}
        for idx, c in enumerate(cls):
            for l in c:
                if abs(l) != x:
                    var_to_clauses.setdefault(abs(l), []).append(idx)
        comp = list(range(len(cls)))

        def find(a):
            while comp[a] != a:
                comp[a] = comp[comp[a]]
                a = comp[a]
            return a

        for members in var_to_clauses.values():
            for other in members[1:]:
                ra, rb = find(members[0]), find(other)
                if ra != rb:
                    comp[rb] = ra
        groups: dict[int, list[int]] = {}
        for idx in range(len(cls)):
            groups.setdefault(find(idx), []).append(idx)
        comps = sorted(groups.values())
        if len(comps) < 2:
            return None
        if len(comps) > 14:
            comps = comps[:14]  # cap the bipartition search; desk scale only
        # assign components to side 1 / side 2 (both nonempty)
        total = len(comps)
        for mask in range(1, 2 ** (total - 1)):
            side1 = [i for i in range(total) if mask >> i & 1]
            side2 = [i for i in range(total) if not mask >> i & 1]
            for s1, s2 in ((side1, side2), (side2, side1)):
                part1 = [cls[i] for g in s1 for i in comps[g]]
                part2 = [cls[i] for g in s2 for i in comps[g]]
                if not _mentions(part1, x) or not _mentions(part2, x):
                    continue
                stripped1 = tuple(c - {x} for c in part1)
                stripped2 = tuple(c - {-x} for c in part2)
                ok1, t1 = recurse(stripped1)
                if not ok1:
                    continue
                ok2, t2 = recurse(stripped2)
                if ok2:
                    return {"variable": x, "positive_side": t1, "negative_side": t2}
        return None

    def _mentions(part, x):
        return any(x in c or -x in c for c in part)

    if not clauses:
        return False, None
    return recurse(clauses)


# -- occurrence and neighborhood statistics -----------------------------------


@dataclass
class OccurrenceStats:
    var_occurrences: dict[int, int]
    literal_occurrences: dict[int, int]
    max_var_occurrence: int
    max_literal_occurrence: int
    widths: set[int]

    def is_ks(self, k: int, s: int) -> bool:
        return self.widths == {k} and self.max_var_occurrence <= s

    def is_balanced_ks(self, k: int, s: int) -> bool:
        return self.is_ks(k, s) and 2 * self.max_literal_occurrence <= s


def occurrence_and_balance_stats(formula: CnfFormula) -> OccurrenceStats:
    var_occ: dict[int, int] = {}
    lit_occ: dict[int, int] = {}
    for clause in formula.clauses:
        for l in clause:
            var_occ[abs(l)] = var_occ.get(abs(l), 0) + 1
            lit_occ[l] = lit_occ.get(l, 0) + 1
    return OccurrenceStats(
        var_occurrences=var_occ,
        literal_occurrences=lit_occ,
        max_var_occurrence=max(var_occ.values(), default=0),
        max_literal_occurrence=max(lit_occ.values(), default=0),
        widths=formula.widths(),
    )


@dataclass
class ClauseNeighborhoodStats:
    sharing_by_clause: list[int]
    conflict_by_clause: list[int]
    max_sharing: int
    max_conflict: int


def clause_neighborhood_stats(formula: CnfFormula) -> ClauseNeighborhoodStats:
    """Per-clause counts of variable-sharing and sign-conflicting neighbors."""
    var_to_clauses: dict[int, list[int]] = {}
    for idx, clause in enumerate(formula.clauses):
        for l in clause:
            var_to_clauses.setdefault(abs(l), []).append(idx)
    sharing = []
    conflict = []
    clause_sets = [frozenset(c) for c in formula.clauses]
    for idx, clause in enumerate(formula.clauses):
        near: set[int] = set()
        for l in clause:
            near.update(var_to_clauses[abs(l)])
        near.discard(idx)
        sharing.append(len(near))
        conf = sum(
            1
            for j in near
            if any(-l in clause_sets[j] for l in clause)
        )
        conflict.append(conf)
    return ClauseNeighborhoodStats(
        sharing,
        conflict,
        max(sharing, default=0),
        max(conflict, default=0),
    )


# -- bound tables --------------------------------------------------------------


def bound_table(k: int, formula: CnfFormula | None = None) -> dict:
    """Numeric bound rows for occurrence and neighborhood thresholds at width k.

    Lower bounds come from the local-lemma side; upper bounds from the
    constructions (power-of-two rows apply only at suitable k, recorded
    as annotations, not enforced).  If a formula is supplied, its
    statistics are reported as witnesses against the upper-bound side.
    """
    if k < 3:
        raise ValidationError("bound table needs k >= 3")
    rows = {
        "k": k,
        "f_lower": floor_div_e(2 ** k, k),
        "f_bal_lower": floor_div_e(2 ** (k + 1), k),
        "f_bal_upper_pow2": str(Fraction(2 ** k, k) - 1),
        "f_bal_upper": str(2 * Fraction(2 ** k, k) - 1),
        "l_lower": floor_div_e(2 ** k) - 1,
        "l_upper_complete": 2 ** k - 2,
        "l_upper_pow2": 2 ** (k - 1) - 1,
        "l_upper_small": 2 ** (k - 1) + 2 ** (k - 2),
        "notes": {
            "f_bal_upper_pow2": "applies when k is a (large) power of two",
            "l_upper_pow2": "applies when k is a (large) power of two",
            "l_upper_small": "applies for every k >= 3",
        },
    }
    if formula is not None:
        occ = occurrence_and_balance_stats(formula)
        nb = clause_neighborhood_stats(formula)
        sat = None
        try:
            sat = bool(dpll_sat(formula))
        except LimitExceeded:
            pass
        rows["witness"] = {
            "k_uniform": formula.is_k_cnf(k),
            "satisfiable": sat,
            "max_var_occurrence": occ.max_var_occurrence,
            "max_literal_occurrence": occ.max_literal_occurrence,
            "max_neighborhood": nb.max_sharing,
            "implies_f_upper": occ.max_var_occurrence - 1 if sat is False else None,
            "implies_l_upper": nb.max_sharing - 1 if sat is False else None,
        }
    return rows


# -- board/formula dictionary ---------------------------------------------------


def _pair_variables(pairing: Pairing) -> list[tuple[str, str]]:
    """Pairs ordered by their lexicographically smaller member; the smaller
    member carries the positive literal.  Variable i+1 is pairs[i]."""
    return sorted(((min(p), max(p)) for p in pairing.pairs), key=lambda p: p[0])


def hypergraph_to_cnf(board: Hypergraph, pairing: Pairing) -> CnfFormula:
    """One clause per edge after identifying each pair with a variable.

    Requires a uniform board, a full pairing with no leftover, and no
    edge containing both members of any pair (such a clause would be
    tautological).  If Maker's pure pairing wins on the board, the output
    is unsatisfiable; literal occurrence counts equal vertex degrees, so
    a board with maximum degree s yields a balanced (k, 2s)-CNF.
    """
    sizes = {len(e) for e in board.edges}
    if len(sizes) > 1:
        raise ValidationError("board is not uniform")
    pairing.validate_cover(board.vertices, full=True)
    ordered = _pair_variables(pairing)
    lit_of: dict[str, int] = {}
    for i, (a, b) in enumerate(ordered, start=1):
        lit_of[a] = i
        lit_of[b] = -i
    clauses = []
    for eno in range(board.edge_count):
        lits = [lit_of[v] for v in board.edge_ids(eno)]
        if len({abs(l) for l in lits}) != len(lits):
            raise ValidationError(
                f"edge {board.edge_ids(eno)} contains both members of a pair"
            )
        clauses.append(lits)
    return CnfFormula(clauses, num_vars=len(ordered))


def cnf_to_hypergraph(formula: CnfFormula) -> tuple[Hypergraph, PairingStrategyMaker]:
    """Literal-vertex board: one edge per clause, x paired with not-x.

    Requires exact clause width and no tautologies (already enforced by
    CnfFormula).  Maker's pure pairing wins on the board iff the formula
    is unsatisfiable.
    """
    widths = formula.widths()
    if len(widths) > 1:
        raise ValidationError(f"clauses have mixed widths {sorted(widths)}")
    if formula.num_vars == 0:
        raise ValidationError("formula has no variables")

    def vid(lit: int) -> str:
        return f"x{lit}" if lit > 0 else f"~x{-lit}"

    vertices = [vid(v) for v in range(1, formula.num_vars + 1)]
    vertices += [vid(-v) for v in range(1, formula.num_vars + 1)]
    edges = [[vid(l) for l in clause] for clause in formula.clauses]
    board = Hypergraph(vertices, edges)
    pairing = Pairing(tuple((vid(v), vid(-v)) for v in range(1, formula.num_vars + 1)))
    return board, PairingStrategyMaker(pairing=pairing, first_move=None)


def model_to_breaker_selection(
    formula: CnfFormula, model: Mapping[int, bool]
) -> list[str]:
    """Vertices Breaker should claim on the literal board to play a model."""
    out = []
    for v in range(1, formula.num_vars + 1):
        out.append(f"x{v}" if model.get(v, False) else f"~x{v}")
    return out


def double_with_pure_pairing(
    board: Hypergraph, strategy: PairingStrategyMaker
) -> tuple[Hypergraph, PairingStrategyMaker]:
    """Disjoint-double a board and turn a first-move pairing strategy pure.

    The copy keeps the original pairing mirrored, and the two first-move
    vertices become one extra pair, so Breaker may start.
    """
    from .hypergraph import disjoint_double

    strategy.validate_for_board(board)
    if strategy.first_move is None:
        raise ValidationError("strategy is already pure; doubling is for first-move strategies")
    doubled, copy_map = disjoint_double(board)
    pairs = list(strategy.pairing.pairs)
    pairs += [(copy_map[a], copy_map[b]) for a, b in strategy.pairing.pairs]
    pairs.append((strategy.first_move, copy_map[strategy.first_move]))
    leftover = None
    if strategy.pairing.leftover is not None:
        pairs.append(
            (strategy.pairing.leftover, copy_map[strategy.pairing.leftover])
        )
    pure = PairingStrategyMaker(Pairing(tuple(pairs), leftover), first_move=None)
    pure.validate_for_board(doubled)
    return doubled, pure


def pairing_reduction_formula(
    board: Hypergraph, strategy: PairingStrategyMaker
) -> CnfFormula:
    """The formula whose unsatisfiability is equivalent to the pairing winning.

    Edges that can never be fully claimed by Maker under the strategy
    (edges containing the leftover, or both members of a pair) constrain
    nothing and are dropped; an edge within Maker's guaranteed set yields
    the empty clause.
    """
    strategy.validate_for_board(board)
    ordered = _pair_variables(strategy.pairing)
    lit_of: dict[str, int] = {}
    for i, (a, b) in enumerate(ordered, start=1):
        lit_of[a] = i
        lit_of[b] = -i
    clauses = []
    leftover = strategy.pairing.leftover
    for eno in range(board.edge_count):
        ids = board.edge_ids(eno)
        if leftover is not None and leftover in ids:
            continue
        lits = [lit_of[v] for v in ids if v != strategy.first_move]
        if len({abs(l) for l in lits}) != len(lits):
            continue  # edge holds a full pair; Maker can never own it
        clauses.append(lits)
    return CnfFormula(clauses, num_vars=len(ordered), allow_tautologies=False)
