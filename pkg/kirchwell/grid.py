"""
Finite-difference discretization of the truncation box.

Two layouts are supported. Tensor grids cover ``(-L, L)^dim`` for
``dim`` in 1..3 with a uniform spacing; radial grids reduce radially
symmetric problems in ``R^N`` (``N >= 3``) to one dimension with the weight
``r^(N-1)``. In both cases a field is a 1-d numpy array holding one value per
interior node; boundary values are identically zero.

Every form is built from two objects: the diagonal of nodal quadrature
weights ``W`` and a symmetric stiffness matrix ``K`` with
``inner_dirichlet(u, v) = u.K.v``. The discrete ``-Delta`` is ``W^-1 K``, so
summation by parts holds exactly.
"""
import numpy as np
from scipy import sparse
from scipy.special import gamma

from kirchwell.errors import GridError, GridMismatchError, ProblemError


class GridSpec(object):

    """Shape of a grid.

    :param int dim: Tensor dimension (1, 2 or 3) or ambient dimension N >= 3
        for radial grids.
    :param float half_length: L; the box is (-L, L)^dim or the ball of
        radius L.
    :param int nodes: Nodes per axis including both boundary nodes (tensor)
        or from r=0 to r=L (radial). Must be odd and at least 9.
    :param str mode: ``tensor`` or ``radial``.
    """

    def __init__(self, dim, half_length, nodes, mode='tensor'):
        self.dim = int(dim)
        self.half_length = float(half_length)
        self.nodes = int(nodes)
        self.mode = mode

    @property
    def spacing(self):
        if self.mode == 'radial':
            return self.half_length / (self.nodes - 1)
        return 2.0 * self.half_length / (self.nodes - 1)

    @property
    def key(self):
        return '{}-{}-{:.12g}-{}'.format(
            self.mode, self.dim, self.half_length, self.nodes)

    def copy(self, **overrides):
        values = self.to_dict()
        values.update(overrides)
        return GridSpec(**values)

    def validate(self):
        """Raise :class:`GridError` unless the invariants hold.

        :returns: self
        """
        if self.mode not in ('tensor', 'radial'):
            raise GridError('unknown grid mode {!r}'.format(self.mode))
        if self.mode == 'tensor' and self.dim not in (1, 2, 3):
            raise GridError(
                'tensor grids support dim 1, 2 or 3 (got {})'.format(self.dim))
        if self.mode == 'radial' and self.dim < 3:
            raise GridError(
                'radial grids need N >= 3 (got {})'.format(self.dim))
        if self.nodes % 2 == 0:
            raise GridError(
                'nodes per axis must be odd so the origin is a node '
                '(got {})'.format(self.nodes))
        if self.nodes < 9:
            raise GridError(
                'nodes per axis must be at least 9 (got {})'.format(self.nodes))
        if not self.half_length > 0:
            raise GridError(
                'half length must be positive (got {})'.format(
                    self.half_length))
        return self

    def to_dict(self):
        return {
            'dim': self.dim,
            'half_length': self.half_length,
            'nodes': self.nodes,
            'mode': self.mode,
        }

    def __eq__(self, other):
        return isinstance(other, GridSpec) and self.key == other.key

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return 'GridSpec({})'.format(self.key)


class Grid(object):

    """A built grid. Immutable after :func:`build_grid` returns it.

    Attributes: ``spec``, ``id``, ``mode``, ``dim``, ``h``, ``size`` (interior
    node count), ``points`` (size x d coordinates; radial grids store the
    radius in a single column), ``radius`` (distance to the origin),
    ``weights``, ``stiffness`` (CSR) and ``envelope`` (a smooth positive
    profile vanishing on the boundary, used to shape random fields).
    """

    def __init__(self, spec, points, weights, stiffness, envelope):
        self.spec = spec
        self.id = spec.key
        self.mode = spec.mode
        self.dim = spec.dim
        self.h = spec.spacing
        self.points = points
        self.radius = np.sqrt(np.sum(points ** 2, axis=1))
        self.weights = weights
        self.stiffness = stiffness
        self.envelope = envelope
        self.size = weights.shape[0]
        for array in (self.points, self.radius, self.weights, self.envelope):
            array.setflags(write=False)

    def check(self, u, grid_id=None):
        """Return ``u`` as a float array after checking it lives on this grid.

        Bare arrays carry no grid identity, so only their length can be
        compared; pass the ``grid_id`` recorded with a stored field to also
        reject fields of another grid with the same node count.

        :raises GridMismatchError: when the length or the grid id does not
            match.
        """
        values = np.asarray(u, dtype=float)
        if values.ndim != 1 or values.shape[0] != self.size:
            raise GridMismatchError(
                'field of shape {} does not belong to grid {} '
                '({} interior nodes)'.format(values.shape, self.id, self.size))
        if grid_id is not None and grid_id != self.id:
            raise GridMismatchError(
                'field of grid {} does not belong to grid {}'.format(
                    grid_id, self.id))
        return values

    def embed(self, values, mask):
        """Extend values given on ``mask`` nodes by zero to the whole grid."""
        full = np.zeros(self.size)
        full[mask] = values
        return full

    def measure(self, mask):
        """Quadrature of the indicator of ``mask``."""
        return float(np.sum(self.weights[mask]))

    def lebesgue_norm(self, u, q):
        """Discrete L^q norm (``q`` may be ``inf``)."""
        values = self.check(u)
        if np.isinf(q):
            return float(np.max(np.abs(values))) if self.size else 0.0
        return float(np.dot(self.weights, np.abs(values) ** q)) ** (1.0 / q)


def unit_sphere_area(N):
    """Area of the unit sphere in R^N, 2 pi^(N/2) / Gamma(N/2)."""
    return 2.0 * np.pi ** (N / 2.0) / gamma(N / 2.0)


def build_grid(spec):
    """Build node coordinates, quadrature weights and the stiffness matrix.

    :param GridSpec spec:
    :returns: :class:`Grid`
    :raises GridError: for even or too small node counts and L <= 0.
    """
    spec.validate()
    if spec.mode == 'radial':
        return _build_radial(spec)
    return _build_tensor(spec)


def _build_tensor(spec):
    n, h, L, dim = spec.nodes, spec.spacing, spec.half_length, spec.dim
    m = n - 2
    axis = -L + h * np.arange(1, n - 1)

    second = sparse.diags(
        [-np.ones(m - 1), 2.0 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1],
        shape=(m, m)) / h ** 2
    eye = sparse.identity(m)
    laplacian = sparse.csr_matrix((m ** dim, m ** dim))
    for direction in range(dim):
        term = None
        for slot in range(dim):
            factor = second if slot == direction else eye
            term = factor if term is None else sparse.kron(term, factor)
        laplacian = laplacian + term

    mesh = np.meshgrid(*([axis] * dim), indexing='ij')
    points = np.column_stack([coordinate.ravel() for coordinate in mesh])
    weights = np.full(m ** dim, h ** dim)
    stiffness = sparse.csr_matrix(laplacian * h ** dim)
    envelope = np.prod(1.0 - (points / L) ** 2, axis=1)
    return Grid(spec, points, weights, stiffness, envelope)


def _build_radial(spec):
    n, h, L, N = spec.nodes, spec.spacing, spec.half_length, spec.dim
    omega = unit_sphere_area(N)
    m = n - 1
    r = h * np.arange(m)

    # Control volumes: node 0 owns the ball of radius h/2, the last interior
    # node also owns the half cell next to the Dirichlet node at r = L.
    outer = r + 0.5 * h
    outer[-1] = L
    inner = np.maximum(r - 0.5 * h, 0.0)
    weights = omega / N * (outer ** N - inner ** N)

    # Flux through the cell faces r_{j+1/2}; the face at r = L couples to the
    # zero boundary value, the origin has no face (u'(0) = 0).
    faces = omega * ((np.arange(m) + 0.5) * h) ** (N - 1) / h
    diagonal = faces.copy()
    diagonal[1:] += faces[:-1]
    stiffness = sparse.diags(
        [-faces[:-1], diagonal, -faces[:-1]], [-1, 0, 1], shape=(m, m),
        format='csr')

    points = r.reshape(-1, 1)
    envelope = 1.0 - (r / L) ** 2
    return Grid(spec, points, weights, stiffness, envelope)


def laplacian_apply(grid, u):
    """Discrete ``-Delta u``: central differences on tensor grids, the
    conservative form ``-r^(1-N) (r^(N-1) u')'`` on radial grids.

    :raises GridMismatchError:
    """
    values = grid.check(u)
    return grid.stiffness.dot(values) / grid.weights


def integrate(grid, w):
    """Quadrature: sum of weights times nodal values."""
    values = grid.check(w)
    return float(np.dot(grid.weights, values))


def inner_dirichlet(grid, u, v):
    """``integral grad u . grad v`` as the stiffness form ``u.K.v``."""
    left = grid.check(u)
    right = grid.check(v)
    return float(np.dot(left, grid.stiffness.dot(right)))


def inner_mu(grid, problem, u, v, mu):
    """``<u, v>_mu = integral (grad u . grad v + mu V u v)``.

    :param problem: A :class:`~kirchwell.problem.base.ProblemSpec`, used for
        its sampled potential.
    :raises ProblemError: for negative ``mu``.
    """
    if mu < 0:
        raise ProblemError('inner_mu needs mu >= 0 (got {})'.format(mu))
    left = grid.check(u)
    right = grid.check(v)
    potential = problem.nodal(grid).V
    return inner_dirichlet(grid, left, right) + mu * float(
        np.dot(grid.weights, potential * left * right))
