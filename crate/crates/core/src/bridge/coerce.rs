use super::space::SpaceDim;
use crate::scalar::Real;

/// Map raw queue integers onto an action vector, one value per dimension.
///
/// `values` is padded with zeros (or truncated) to the number of dimensions.
pub fn coerce_action<F: Real>(values: &[i64], space: &[SpaceDim<F>], bins: usize) -> Vec<F> {
    space
        .iter()
        .enumerate()
        .map(|(k, dim)| coerce_one(values.get(k).copied().unwrap_or(0), dim, bins))
        .collect()
}

pub fn coerce_one<F: Real>(s: i64, dim: &SpaceDim<F>, bins: usize) -> F {
    let d = bins.max(2) as i64;
    let scaled = || F::of_i64(s) / F::of_i64(d - 1);
    match *dim {
        SpaceDim::Unbounded => scaled(),
        SpaceDim::HalfOpenAbove { low } => low + (scaled() - low).abs(),
        SpaceDim::HalfOpenBelow { high } => high - (high - scaled()).abs(),
        SpaceDim::Interval { low, high } => {
            let step = F::of_i64(s.rem_euclid(d)) / F::of_i64(d - 1);
            (low + step * (high - low)).max(low).min(high)
        }
        SpaceDim::FiniteDiscrete { count } => F::of_i64(s.rem_euclid(count.max(1) as i64)),
        SpaceDim::IntegerUnbounded => F::of_i64(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coercion_examples() {
        let interval = SpaceDim::<f64>::interval(-1.0, 1.0);
        assert_eq!(coerce_one(3, &interval, 5), 0.5);
        assert_eq!(coerce_one(0, &interval, 5), -1.0);
        assert_eq!(coerce_one(0, &SpaceDim::<f64>::interval(2.5, 7.0), 5), 2.5);
        assert_eq!(coerce_one(-8, &SpaceDim::HalfOpenAbove { low: 0.0f64 }, 5), 2.0);
        assert_eq!(coerce_one(7, &SpaceDim::<f64>::FiniteDiscrete { count: 6 }, 5), 1.0);
        assert_eq!(coerce_one(-1, &SpaceDim::<f64>::FiniteDiscrete { count: 6 }, 5), 5.0);
        assert_eq!(coerce_one(8, &SpaceDim::<f64>::Unbounded, 5), 2.0);
        assert_eq!(coerce_one(-9, &SpaceDim::<f64>::IntegerUnbounded, 5), -9.0);
        assert_eq!(coerce_one(9, &SpaceDim::HalfOpenBelow { high: 1.0f64 }, 5), -0.25);
    }

    #[test]
    fn interval_is_periodic_in_s() {
        let dim = SpaceDim::<f64>::interval(-1.0, 1.0);
        for s in -20..20 {
            assert_eq!(coerce_one(s, &dim, 5), coerce_one(s + 5, &dim, 5));
        }
        let one_period: Vec<f64> = (0..5).map(|s| coerce_one(s, &dim, 5)).collect();
        assert_eq!(one_period, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn vector_padding() {
        let space = [SpaceDim::<f64>::interval(-1.0, 1.0), SpaceDim::FiniteDiscrete { count: 3 }];
        assert_eq!(coerce_action(&[4], &space, 5), vec![1.0, 0.0]);
    }
}
