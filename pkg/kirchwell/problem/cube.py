"""
Tensor-grid canonical problem on the cube Omega = (-1, 1)^3.
"""
import numpy as np

from kirchwell.errors import ProblemError
from kirchwell.grid import GridSpec
from kirchwell.problem.base import ProblemSpec


class CubeP5(ProblemSpec):

    """TP-CUBE-P5: N = 3, p = 5, box (-2, 2)^3 with 33 nodes per axis,
    V = sum_i max(|x_i| - 1, 0)^2, c0 = 0.25.
    """

    __name__ = 'CubeP5'

    names = ('TP-CUBE-P5',)

    #: Half width of Omega.
    omega_half_width = 1.0

    defaults = {
        'N': 3, 'a': 1.0, 'p': 5.0, 'lam': 0.0, 'mu': 1000.0, 'c0': 0.25,
        'kappa': 1.0,
    }

    @classmethod
    def default_grid_spec(cls):
        return GridSpec(3, 2.0, 33, 'tensor')

    def V(self, points):
        excess = np.maximum(np.abs(points) - self.omega_half_width, 0.0)
        return np.sum(excess ** 2, axis=1)

    def omega(self, points):
        return np.all(np.abs(points) < self.omega_half_width, axis=1)

    def validate(self):
        ProblemSpec.validate(self)
        if self.grid_spec.mode != 'tensor':
            raise ProblemError('{} needs a tensor grid'.format(self.name))
        # The faces of Omega must be grid lines so the discrete H0^1(Omega)
        # is a subspace of the full grid.
        offset = (self.grid_spec.half_length - self.omega_half_width) / \
            self.grid_spec.spacing
        if abs(offset - round(offset)) > 1e-9:
            raise ProblemError(
                '{}: Omega faces are not grid aligned for h={}'.format(
                    self.name, self.grid_spec.spacing))
        return self
