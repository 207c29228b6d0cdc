use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// RMSProp in ascent form: `s = rho*s + (1-rho)*g^2`, `p += lr*g/(sqrt(s)+eps)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RmsProp<F> {
    pub learning_rate: F,
    pub decay: F,
    pub epsilon: F,
    square_avg: Vec<F>,
}

impl<F: Real> RmsProp<F> {
    pub fn new(size: usize, learning_rate: f64, decay: f64, epsilon: f64) -> Self {
        RmsProp {
            learning_rate: F::of(learning_rate),
            decay: F::of(decay),
            epsilon: F::of(epsilon),
            square_avg: vec![F::zero(); size],
        }
    }

    pub fn ascend(&mut self, params: &mut [F], grad: &[F]) {
        assert_eq!(params.len(), grad.len());
        assert_eq!(params.len(), self.square_avg.len());
        let one = F::one();
        for ((p, &g), s) in params.iter_mut().zip(grad).zip(self.square_avg.iter_mut()) {
            *s = self.decay * *s + (one - self.decay) * g * g;
            *p += self.learning_rate * g / (s.sqrt() + self.epsilon);
        }
    }
}
