"""Explicit isomorphisms between measure algebras and their L_log algebras.

A pairing matches the rows (weight groups) of two spaces and, separately,
their atoms by rank in decreasing-mass order. Inside a paired row the
source components are laid end to end in proportion to their source masses,
the target components in proportion to their target masses, and the row
coordinate is carried over unchanged. The Boolean isomorphism ``phi`` built
this way pushes the source measure forward to ``lambda`` with
``lambda(phi(e)) = mu(e)``; for probability passports that pushforward is the
measure ``gamma(q) = sum_n mu_n / nu_n * nu(q_n q)``.

The induced map on simple functions relabels cells and keeps coefficients,
so it is a *-homomorphism by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import AtomMismatch, RatioUnbounded, RowMismatch, SchemaError
from .logspace import SimpleFunction, equality_check, log_fnorm
from .measure import (
    ComponentRamp,
    Event,
    HomogeneousComponent,
    MeasureSpace,
    RNDerivative,
    normalize,
    rn_derivative,
)
from .numeric import Number, exact_sum, is_exact, to_float
from .passport import Passport, extract_passport, log_iso_decision, measure_iso_decision
from .sequences import EMPTY, FiniteList, Sequence, sort_descending

# ---------------------------------------------------------------------------
# rows of a space


def space_rows(space: MeasureSpace) -> list[tuple[int, tuple[str, ...]]] | None:
    """Components grouped by tau, ascending; None for a tau ramp (one component per row)."""
    if space.is_ramp:
        return None
    groups: dict[int, list[str]] = {}
    for c in space.components:
        groups.setdefault(c.tau, []).append(c.id)
    return [(tau, tuple(groups[tau])) for tau in sorted(groups)]


@dataclass(frozen=True)
class _AtomRanks:
    """Original index <-> rank in decreasing-mass order (identity past ``order``)."""

    order: tuple  # order[r - 1] is the original index of rank r

    @cached_property
    def _rank(self) -> dict:
        return {i: r for r, i in enumerate(self.order, 1)}

    def rank(self, index: int) -> int:
        return self._rank.get(index, index)

    def index(self, rank: int) -> int:
        return self.order[rank - 1] if rank <= len(self.order) else rank


def _atom_ranks(space: MeasureSpace) -> tuple[Sequence, _AtomRanks]:
    if space.atoms.length == 0:
        return EMPTY, _AtomRanks(())
    sorted_atoms, order = sort_descending(space.atoms)
    return sorted_atoms, _AtomRanks(order)


# ---------------------------------------------------------------------------
# pairings


@dataclass(frozen=True)
class ComponentMap:
    """Row pairs ``(from, to)`` (1-based) or None for the identity on tau ramps.

    Atoms are always matched rank to rank after sorting by decreasing mass.
    """

    row_pairs: tuple | None

    def __post_init__(self):
        if self.row_pairs is None:
            return
        pairs = tuple((int(a), int(b)) for a, b in self.row_pairs)
        object.__setattr__(self, "row_pairs", pairs)
        sources = [a for a, _ in pairs]
        targets = [b for _, b in pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise SchemaError("pairing is not a bijection")
        if any(a < 1 or b < 1 for a, b in pairs):
            raise SchemaError("row indices start at 1")

    @property
    def is_ramp_identity(self) -> bool:
        return self.row_pairs is None

    def inverse(self) -> "ComponentMap":
        if self.row_pairs is None:
            return self
        return ComponentMap(tuple(sorted((b, a) for a, b in self.row_pairs)))

    def target_row(self, source_row: int) -> int:
        if self.row_pairs is None:
            return source_row
        return dict(self.row_pairs)[source_row]


def _check_rows(taus1, taus2, pairing: ComponentMap) -> None:
    if pairing.row_pairs is None:
        return
    if sorted(a for a, _ in pairing.row_pairs) != list(range(1, len(taus1) + 1)):
        raise RowMismatch("pairing does not cover every source row", index=len(taus1))
    if sorted(b for _, b in pairing.row_pairs) != list(range(1, len(taus2) + 1)):
        raise RowMismatch("pairing does not cover every target row", index=len(taus2))
    for a, b in pairing.row_pairs:
        if taus1[a - 1] != taus2[b - 1]:
            raise RowMismatch(f"row {a} (tau {taus1[a - 1]}) paired with row {b} (tau {taus2[b - 1]})", index=a)


def build_pairing(p1: Passport, p2: Passport) -> ComponentMap:
    """Index-aligned pairing of two passports with the same upper row."""
    if p1.is_ramp != p2.is_ramp:
        raise RowMismatch("a tau ramp cannot be paired with finitely many rows", index=1)
    if p1.is_ramp:
        if p1.tau_base != p2.tau_base:
            raise RowMismatch("tau ramps differ", index=1)
        pairing = ComponentMap(None)
    else:
        for n, (a, b) in enumerate(zip(p1.taus, p2.taus), 1):
            if a != b:
                raise RowMismatch(f"tau {a} vs {b}", index=n)
        if len(p1.taus) != len(p2.taus):
            raise RowMismatch("different numbers of rows", index=min(len(p1.taus), len(p2.taus)) + 1)
        pairing = ComponentMap(tuple((n, n) for n in range(1, len(p1.taus) + 1)))
    if p1.atom_class() != p2.atom_class():
        raise AtomMismatch("atomic parts of different cardinality")
    return pairing


def pairing_from_json(obj, path: str = "$") -> ComponentMap:
    if obj == "identity":
        return ComponentMap(None)
    if not isinstance(obj, list):
        raise SchemaError("pairing must be a list of {from, to} or \"identity\"", path)
    pairs = []
    for i, item in enumerate(obj):
        where = f"{path}[{i}]"
        if not isinstance(item, dict) or set(item) != {"from", "to"}:
            raise SchemaError("pair must have exactly 'from' and 'to'", where)
        for key in ("from", "to"):
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise SchemaError("row index must be a positive integer", f"{where}.{key}")
        pairs.append((item["from"], item["to"]))
    return ComponentMap(tuple(pairs))


def pairing_to_json(pairing: ComponentMap):
    if pairing.row_pairs is None:
        return "identity"
    return [{"from": a, "to": b} for a, b in pairing.row_pairs]


# ---------------------------------------------------------------------------
# the Boolean isomorphism on events


@dataclass(frozen=True)
class _Layout:
    """Components of one row laid end to end on ``[0, 1)`` by mass share."""

    ids: tuple
    offsets: tuple  # offsets[k] is where component k starts
    widths: tuple

    @classmethod
    def of(cls, space: MeasureSpace, ids: tuple) -> "_Layout":
        masses = [space.component_mass(cid) for cid in ids]
        total = exact_sum(masses)
        widths = tuple(m / total for m in masses)
        offsets, acc = [], Fraction(0)
        for w in widths:
            offsets.append(acc)
            acc = acc + w
        return cls(tuple(ids), tuple(offsets), widths)

    def to_row(self, cid: str, lo, hi) -> tuple:
        k = self.ids.index(cid)
        return self.offsets[k] + self.widths[k] * lo, self.offsets[k] + self.widths[k] * hi

    def from_row(self, lo, hi) -> list[tuple]:
        """Split a row interval into ``(component, lo, hi)`` pieces."""
        out = []
        last = len(self.ids) - 1
        for k, cid in enumerate(self.ids):
            start = self.offsets[k]
            end = 1 if k == last else self.offsets[k + 1]
            a, b = max(lo, start), min(hi, end)
            if a < b:
                w = self.widths[k]
                out.append((cid, min(max((a - start) / w, 0), 1), min(max((b - start) / w, 0), 1)))
        return out


@dataclass(frozen=True)
class StarIso:
    """``phi`` from the source algebra onto the target algebra, and its induced ``Phi``."""

    source: MeasureSpace = field(repr=False)
    target: MeasureSpace = field(repr=False)
    pairing: ComponentMap

    def __post_init__(self):
        if self.source.is_ramp != self.target.is_ramp:
            raise RowMismatch("a tau ramp cannot be paired with finitely many rows", index=1)
        if self.source.is_ramp:
            if not self.pairing.is_ramp_identity:
                raise SchemaError("tau ramps are paired by the identity")
            if self.source.components.tau_base != self.target.components.tau_base:
                raise RowMismatch("tau ramps differ", index=1)
        else:
            if self.pairing.is_ramp_identity:
                n1, n2 = len(space_rows(self.source)), len(space_rows(self.target))
                if n1 != n2:
                    raise RowMismatch("different numbers of rows", index=min(n1, n2) + 1)
                object.__setattr__(self, "pairing", ComponentMap(tuple((n, n) for n in range(1, n1 + 1))))
            taus1 = [t for t, _ in space_rows(self.source)]
            taus2 = [t for t, _ in space_rows(self.target)]
            _check_rows(taus1, taus2, self.pairing)
        if self.source.atoms.length != self.target.atoms.length:
            raise AtomMismatch("atomic parts of different cardinality")

    # structure ----------------------------------------------------------

    @cached_property
    def _source_atoms(self):
        return _atom_ranks(self.source)

    @cached_property
    def _target_atoms(self):
        return _atom_ranks(self.target)

    @cached_property
    def _rows(self) -> dict:
        """Source component id -> (source layout, target layout)."""
        if self.source.is_ramp:
            return {}
        src, dst = space_rows(self.source), space_rows(self.target)
        out = {}
        for a, b in self.pairing.row_pairs:
            lay_src = _Layout.of(self.source, src[a - 1][1])
            lay_dst = _Layout.of(self.target, dst[b - 1][1])
            for cid in lay_src.ids:
                out[cid] = (lay_src, lay_dst)
        return out

    def atom_image(self, index: int) -> int:
        rank = self._source_atoms[1].rank(index)
        return self._target_atoms[1].index(rank)

    def _component_image(self, cid: str, lo, hi) -> list[tuple]:
        if self.source.is_ramp:
            return [(cid, lo, hi)]
        lay_src, lay_dst = self._rows[cid]
        return lay_dst.from_row(*lay_src.to_row(cid, lo, hi))

    def inverse(self) -> "StarIso":
        return StarIso(self.target, self.source, self.pairing.inverse())

    # action ----------------------------------------------------------------

    def apply_event(self, e: Event) -> Event:
        """``phi(e)``."""
        self.source.check_event(e)
        comps: dict[str, list] = {}
        for cid, ivs in e.components:
            for lo, hi in ivs:
                for tid, a, b in self._component_image(cid, lo, hi):
                    comps.setdefault(tid, []).append((a, b))
        return Event.make([self.atom_image(i) for i in e.atoms], comps)

    def apply(self, f: SimpleFunction) -> SimpleFunction:
        """``Phi(f)``: cells relabelled along ``phi``, coefficients unchanged."""
        if not f.is_finite:
            raise TypeError("Phi is represented on finite simple functions")
        cells = [(Event.atom(self.atom_image(i)), c) for i, c in f.atom_values]
        for cid, pieces in f.component_values:
            for lo, hi, c in pieces:
                parts = {tid: [(a, b)] for tid, a, b in self._component_image(cid, lo, hi)}
                for tid, ivs in parts.items():
                    cells.append((Event.component(tid, ivs), c))
        return SimpleFunction.from_cells(cells)

    __call__ = apply

    @cached_property
    def pushforward(self) -> MeasureSpace:
        """``lambda`` on the target algebra with ``lambda(phi(e)) = mu(e)``."""
        return _pushforward(self.target, self.pairing, row_masses(self.source), self._source_atoms[0])


def row_masses(space: MeasureSpace) -> Sequence:
    """Masses of the rows of ``space`` in ascending tau order."""
    if space.is_ramp:
        return space.components.masses
    rows = space_rows(space)
    if not rows:
        return EMPTY
    return FiniteList(tuple(exact_sum(space.component_mass(cid) for cid in ids) for _, ids in rows))


def _pushforward(target: MeasureSpace, pairing: ComponentMap, source_rows: Sequence, source_atoms: Sequence) -> MeasureSpace:
    """Target algebra carrying source row masses, split by target shares, and sorted source atoms."""
    atoms = _atoms_in_target_order(target, source_atoms)
    if target.is_ramp:
        return MeasureSpace(atoms, ComponentRamp(target.components.tau_base, source_rows))
    back = {b: a for a, b in pairing.row_pairs}
    new_mass = {}
    for b, (_, ids) in enumerate(space_rows(target), 1):
        lay = _Layout.of(target, ids)
        m = source_rows.term(back[b])
        for cid, w in zip(lay.ids, lay.widths):
            new_mass[cid] = m * w
    comps = tuple(HomogeneousComponent(c.id, c.tau, new_mass[c.id]) for c in target.components)
    return MeasureSpace(atoms, comps)


def _atoms_in_target_order(target: MeasureSpace, sorted_source: Sequence) -> Sequence:
    """Source atoms placed so the target atom of rank r gets the source atom of rank r."""
    if target.atoms.length == 0:
        return EMPTY
    order = _atom_ranks(target)[1].order
    if not order:
        return sorted_source
    rank_of = {i: r for r, i in enumerate(order, 1)}
    values = [sorted_source.term(rank_of[i]) for i in range(1, len(order) + 1)]
    if sorted_source.is_finite:
        values += [sorted_source.term(n) for n in range(len(order) + 1, sorted_source.length + 1)]
        return FiniteList(tuple(values))
    return sorted_source.with_head(values)


# ---------------------------------------------------------------------------
# the gluing measure


@dataclass(frozen=True)
class GammaMeasure:
    """``gamma`` on the target algebra: ``nu`` rescaled by ``mu_n / nu_n`` on row ``n``."""

    nu: MeasureSpace = field(repr=False)
    space: MeasureSpace = field(repr=False)

    @property
    def total(self) -> Number:
        return self.space.total_mass

    @cached_property
    def dgamma_dnu(self) -> RNDerivative:
        return rn_derivative(self.nu, self.space)

    @cached_property
    def dnu_dgamma(self) -> RNDerivative:
        return rn_derivative(self.space, self.nu)


def build_gamma(p_mu: Passport, p_nu: Passport, pairing: ComponentMap, nu_space: MeasureSpace) -> GammaMeasure:
    """``gamma(q) = sum_n mu_n / nu_n * nu(q_n q)`` over the target algebra.

    Row ``n`` of ``nu_space`` is rescaled by ``mu_n / nu_n``; the target atom
    of rank ``r`` receives the source atom mass of rank ``r``.
    """
    verdict = log_iso_decision(p_mu, p_nu)
    if not verdict.decision:
        raise RatioUnbounded(f"passports are not log-equivalent: {verdict.reason}")
    p_mu = p_mu.normalized()
    nu = normalize(nu_space)
    if not measure_iso_decision(extract_passport(nu), p_nu).decision:
        raise SchemaError("nu_space does not have passport p_nu")
    if not nu.is_ramp and pairing.is_ramp_identity:
        pairing = ComponentMap(tuple((n, n) for n in range(1, len(space_rows(nu)) + 1)))
    if not nu.is_ramp:
        _check_rows(list(p_mu.taus), [t for t, _ in space_rows(nu)], pairing)
    return GammaMeasure(nu, _pushforward(nu, pairing, p_mu.masses, p_mu.atoms))


# ---------------------------------------------------------------------------
# verification reports


@dataclass(frozen=True)
class Prop2Report:
    """``Phi(log(1 + |f|))`` against ``log(1 + Phi(|f|))``."""

    lhs: SimpleFunction
    rhs: SimpleFunction
    discrepancy: float

    @property
    def ok(self) -> bool:
        return self.discrepancy == 0


def verify_prop2(iso: StarIso, f: SimpleFunction) -> Prop2Report:
    lhs = iso.apply(f.log1p_abs())
    rhs = iso.apply(abs(f)).log1p_abs()
    return Prop2Report(lhs, rhs, lhs.max_abs_difference(rhs))


@dataclass(frozen=True)
class TransportReport:
    integral_source: object
    integral_target: object
    norm_source: float
    norm_target: float
    tolerance: float = 1e-9

    @property
    def integral_discrepancy(self) -> float:
        a, b = self.integral_source, self.integral_target
        if is_exact(a) and is_exact(b):
            return to_float(abs(a - b))
        return abs(_as_complex(a) - _as_complex(b))

    @property
    def norm_discrepancy(self) -> float:
        return abs(self.norm_source - self.norm_target)

    @property
    def ok(self) -> bool:
        return self.integral_discrepancy <= self.tolerance and self.norm_discrepancy <= self.tolerance


def _as_complex(x) -> complex:
    return complex(to_float(x)) if not isinstance(x, complex) else x


def verify_transport(
    iso: StarIso, f: SimpleFunction, mu_space: MeasureSpace, target_measure: MeasureSpace
) -> TransportReport:
    """``integral f d(mu) = integral Phi(f) d(lambda)`` and the same for the log norm."""
    g = iso.apply(f)
    return TransportReport(
        f.integral(mu_space),
        g.integral(target_measure),
        to_float(log_fnorm(f, mu_space).value),
        to_float(log_fnorm(g, target_measure).value),
    )


# ---------------------------------------------------------------------------
# decisions and end-to-end construction


def log_equivalent_decision(mu_space: MeasureSpace, nu_space: MeasureSpace, pairing: ComponentMap) -> bool:
    """Whether ``L_log(nu) = L_log(mu o phi^-1)`` for the ``phi`` given by ``pairing``."""
    iso = StarIso(mu_space, nu_space, pairing)
    return equality_check(nu_space, iso.pushforward).equal


@dataclass(frozen=True)
class BuiltIso:
    """Everything the constructive direction produces for one pair of spaces."""

    pairing: ComponentMap
    iso: StarIso = field(repr=False)
    gamma: GammaMeasure = field(repr=False)
    mu: MeasureSpace = field(repr=False)


def build_iso(mu_space: MeasureSpace, nu_space: MeasureSpace) -> BuiltIso:
    """Pairing, ``phi`` and ``gamma`` for two finite-mass spaces with log-equivalent passports.

    ``phi`` carries normalized ``mu`` onto ``gamma`` measure-preservingly.
    """
    mu, nu = normalize(mu_space), normalize(nu_space)
    p_mu, p_nu = extract_passport(mu), extract_passport(nu)
    pairing = build_pairing(p_mu, p_nu)
    gamma = build_gamma(p_mu, p_nu, pairing, nu)
    iso = StarIso(mu, nu, pairing)
    return BuiltIso(iso.pairing, iso, gamma, mu)
