"""
Multiplicity census: run every search the regime calls for, add deflated
Newton runs, deduplicate and count the positive solutions. When the count
falls short of the predicted one the well depth is doubled, up to
``settings.mu_ladder_cap``.
"""
from collections import OrderedDict

import numpy as np

from kirchwell import log, settings
from kirchwell.constants import build_report
from kirchwell.eigen import mu_pairs
from kirchwell.errors import GeometryError, SolverError
from kirchwell.solvers.base import SolveResult, operators
from kirchwell.solvers.geometry import check_geometry, crest_radius, find_e0
from kirchwell.solvers.minimize import ball_min, exterior_min
from kirchwell.solvers.mountain import mountain_pass
from kirchwell.solvers.newton import deflated_search, is_trivial


class Census(list):

    """Distinct solutions found for one problem, sorted by decreasing energy.

    :ivar regime: :class:`~kirchwell.constants.Regime` of the problem.
    :ivar float mu: Well depth of the last rung of the ladder.
    :ivar list ladder: Every well depth tried.
    :ivar dict geometry: Geometry report of the last rung.
    :ivar list notes: Searches that came back empty, with the reason.
    """

    def __init__(self, results=(), regime=None, mu=None, ladder=None,
                 geometry=None, notes=None, constants=None):
        super(Census, self).__init__(results)
        self.regime = regime
        self.mu = mu
        self.ladder = list(ladder or [])
        self.geometry = geometry
        self.notes = list(notes or [])
        self.constants = constants

    @property
    def count(self):
        return sum(1 for result in self if result.positive)

    @property
    def predicted(self):
        return 0 if self.regime is None else self.regime.predicted

    @property
    def signs(self):
        return ['+' if result.energy > 0 else '-'
                for result in self if result.positive]

    def to_dict(self):
        return OrderedDict([
            ('regime', None if self.regime is None else
             self.regime.to_dict()),
            ('predicted', self.predicted),
            ('count', self.count),
            ('signs', self.signs),
            ('mu', self.mu),
            ('ladder', self.ladder),
            ('geometry', self.geometry),
            ('notes', self.notes),
            ('solutions', [result.to_dict() for result in self]),
            ('constants', None if self.constants is None else
             self.constants.to_dict()),
        ])


def deduplicate(ops, results):
    """Drop trivial and repeated solutions; keep the first of each pair whose
    energies differ by at most 1e-6 and whose fields are 1e-3 close."""
    ordered = sorted(enumerate(results),
                     key=lambda item: (-item[1].energy, item[0]))
    kept = []
    for _, result in ordered:
        if is_trivial(result):
            continue
        duplicate = False
        for other in kept:
            if abs(result.energy - other.energy) <= \
                    settings.tolerances['energy_dedup'] and \
                    result.distance(ops, other) <= \
                    settings.tolerances['dedup'] * max(1.0, other.norm_mu):
                duplicate = True
                break
        if not duplicate:
            kept.append(result)
    return kept


def _below(ops, field, level):
    # Scale a far point until it lies below ``level`` (p > 4 only).
    for _ in range(40):
        if ops.energy(field).total < level:
            return field
        field = 2.0 * field
    return None


def _search(grid, spec, report, seed):
    ops = operators(grid, spec)
    regime = report.regime
    found = []
    notes = []
    geometry = None

    regime_radius = None
    if regime is not None and regime.radius is not None:
        regime_radius = report.values.get(regime.radius)
    trial_radius = regime_radius or \
        1e-3 * ops.norm_mu(mu_pairs(grid, spec)[0].field)

    try:
        e0 = find_e0(grid, spec, trial_radius, seed, ops)
    except GeometryError as error:
        notes.append(str(error))
        e0 = None

    crest = None
    if e0 is not None:
        crest = crest_radius(grid, spec, e0, ops=ops)
        radius = regime_radius or crest
        if radius and radius > 0:
            geometry = check_geometry(grid, spec, radius,
                                      regime.radius if regime_radius else
                                      'crest', seed, e0).to_dict()
            geometry['operational_radius'] = crest

    ball = None
    wants_ball = regime is not None and 'ball-min' in regime.searches
    if wants_ball or spec.lam > mu_pairs(grid, spec)[0].value:
        for rho in [value for value in (regime_radius, crest) if value]:
            try:
                ball = ball_min(grid, spec, rho, seed, ops)
                break
            except (GeometryError, SolverError) as error:
                notes.append(str(error))
        if ball is not None:
            found.append(ball)

    exterior = None
    if spec.p < 4 and e0 is not None:
        try:
            exterior = exterior_min(grid, spec, regime_radius or crest, e0,
                                    report.C_N_a_lambda, seed, ops)
            found.append(exterior)
            if exterior.extras.get('lower_bound_ok') is False:
                notes.append('exterior_min: energy {:.6g} below {:.6g}'
                             .format(exterior.energy,
                                     exterior.extras['lower_bound']))
        except (GeometryError, SolverError) as error:
            notes.append(str(error))

    if e0 is not None:
        start = ball if ball is not None and ball.energy < 0 else None
        level = 0.0 if start is None else start.energy
        if exterior is not None and exterior.energy < level:
            end = exterior.field
        else:
            end = _below(ops, e0, level)
        if end is not None:
            try:
                found.append(mountain_pass(grid, spec, end, start, ops=ops))
            except (GeometryError, SolverError) as error:
                notes.append(str(error))

    known = [SolveResult.from_field(ops, np.zeros(grid.size), 'refined', 0)]
    known.extend(found)
    for _ in range(3):
        try:
            extra = deflated_search(grid, spec, known, seed, ops=ops)
        except SolverError as error:
            notes.append(str(error))
            break
        if extra is None:
            break
        known.append(extra)
        found.append(extra)

    return deduplicate(ops, found), geometry, notes


def multiplicity_census(spec, lam=None, grid=None, seed=None, ladder=True):
    """Find and count the positive solutions at ``lam``.

    :param float lam: Overrides ``spec.lam`` when given.
    :param bool ladder: Double mu up to the cap while the count falls short
        of the prediction.
    :returns: :class:`Census`
    """
    grid = grid or spec.build_grid()
    seed = settings.default_seed if seed is None else seed
    if lam is not None:
        spec = spec.copy(lam=lam)
    report = build_report(grid, spec, seed)

    mus = [spec.mu]
    while ladder and mus[-1] * 2.0 <= settings.mu_ladder_cap:
        mus.append(mus[-1] * 2.0)

    tried = []
    census = None
    for mu in mus:
        current = spec if mu == spec.mu else spec.copy(mu=mu)
        tried.append(mu)
        results, geometry, notes = _search(grid, current, report, seed)
        census = Census(results, report.regime, mu, tried, geometry, notes,
                        report)
        log.info('multiplicity_census: mu={} found {} of {}'.format(
            mu, census.count, census.predicted))
        if census.count >= census.predicted:
            break
    log.info_json('multiplicity_census', census.to_dict())
    return census
