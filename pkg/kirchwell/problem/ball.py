"""
Radial canonical problems on the unit ball of R^3.

All three share V = max(r - 1, 0)^2, f = exp(-r^2) and
g = exp(-r^2/4)(kappa - r^2) on the ball of radius 3. They differ in p and in
kappa: for p = 3 kappa sits well below (NEG) or above (POS) the threshold
where integral_Omega g phi1^p changes sign, which is close to 0.2 for this
f and Omega.
"""
import numpy as np

from kirchwell.errors import ProblemError
from kirchwell.grid import GridSpec
from kirchwell.problem.base import ProblemSpec


class Ball(ProblemSpec):

    __name__ = 'Ball'

    defaults = {
        'N': 3, 'a': 1.0, 'lam': 0.0, 'mu': 1000.0, 'c0': 0.25,
    }

    @classmethod
    def default_grid_spec(cls):
        return GridSpec(3, 3.0, 301, 'radial')

    def V(self, points):
        r = np.sqrt(np.sum(points ** 2, axis=1))
        return np.maximum(r - 1.0, 0.0) ** 2

    def omega(self, points):
        return np.sqrt(np.sum(points ** 2, axis=1)) < 1.0

    def validate(self):
        ProblemSpec.validate(self)
        if self.grid_spec.mode != 'radial':
            raise ProblemError('{} needs a radial grid'.format(self.name))
        return self


class BallP5(Ball):

    """TP-BALL-P5: superquartic, p = 5."""

    __name__ = 'BallP5'

    names = ('TP-BALL-P5',)

    defaults = dict(Ball.defaults, p=5.0, kappa=1.0)


class BallP3Neg(Ball):

    """TP-BALL-P3-NEG: p = 3 with integral_Omega g phi1^p < 0."""

    __name__ = 'BallP3Neg'

    names = ('TP-BALL-P3-NEG', 'TP-BALL-P3')

    defaults = dict(Ball.defaults, p=3.0, kappa=0.05, c_star=1.0,
                    R_star=1.5)


class BallP3Pos(Ball):

    """TP-BALL-P3-POS: p = 3 with integral_Omega g phi1^p > 0."""

    __name__ = 'BallP3Pos'

    names = ('TP-BALL-P3-POS',)

    defaults = dict(Ball.defaults, p=3.0, kappa=1.0, c_star=1.0,
                    R_star=1.5)
