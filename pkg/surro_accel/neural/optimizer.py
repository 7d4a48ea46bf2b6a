"""Adam with bias correction over Mlp parameters.

Moment buffers are aligned with Mlp.parameters() and updated in place.
"""

import numpy as np

from surro_accel.errors import ShapeError
from surro_accel.neural.mlp import Mlp
from surro_accel.neural.types import Gradients, OptimizerState


def init_optimizer(net: Mlp, learning_rate: float) -> OptimizerState:
    return OptimizerState(
        learning_rate=learning_rate,
        first_moment=[np.zeros_like(p) for p in net.parameters()],
        second_moment=[np.zeros_like(p) for p in net.parameters()],
    )


def optimizer_step(net: Mlp, grads: Gradients, opt: OptimizerState) -> None:
    """One bias-corrected Adam update of net's parameters, in place."""
    params = net.parameters()
    arrays = grads.arrays()
    if [p.shape for p in params] != [g.shape for g in arrays]:
        raise ShapeError("gradient shapes do not match the network parameters")

    opt.step += 1
    correction1 = 1.0 - opt.beta1**opt.step
    correction2 = 1.0 - opt.beta2**opt.step
    for param, grad, m, v in zip(
        params, arrays, opt.first_moment, opt.second_moment, strict=True
    ):
        m *= opt.beta1
        m += (1.0 - opt.beta1) * grad
        v *= opt.beta2
        v += (1.0 - opt.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        param -= opt.learning_rate * m_hat / (np.sqrt(v_hat) + opt.epsilon)
