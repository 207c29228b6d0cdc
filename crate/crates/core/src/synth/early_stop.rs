use std::collections::VecDeque;

/// Exponential moving average of `history`, seeded with its first value.
pub fn ema_series(history: &[f64], decay: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(history.len());
    for &x in history {
        let next = match out.last() {
            Some(&prev) => decay * prev + (1.0 - decay) * x,
            None => x,
        };
        out.push(next);
    }
    out
}

/// Stop when the EMA of best-known quality is no higher than it was
/// `window` episodes earlier. Needs more than `window` points.
pub fn early_stop(history: &[f64], window: usize, decay: f64) -> bool {
    if window == 0 || history.len() <= window {
        return false;
    }
    let ema = ema_series(history, decay);
    let now = ema[ema.len() - 1];
    now <= ema[ema.len() - 1 - window]
}

/// Incremental form of [`early_stop`].
#[derive(Clone, Debug)]
pub struct EarlyStopper {
    window: usize,
    decay: f64,
    ema: Option<f64>,
    past: VecDeque<f64>,
}

impl EarlyStopper {
    pub fn new(window: usize, decay: f64) -> Self {
        EarlyStopper { window, decay, ema: None, past: VecDeque::with_capacity(window + 1) }
    }

    /// Record one episode; returns the stop decision after it.
    pub fn push(&mut self, best_quality: f64) -> bool {
        let ema = match self.ema {
            Some(prev) => self.decay * prev + (1.0 - self.decay) * best_quality,
            None => best_quality,
        };
        self.ema = Some(ema);
        self.past.push_back(ema);
        if self.window == 0 || self.past.len() <= self.window {
            return false;
        }
        if self.past.len() > self.window + 1 {
            self.past.pop_front();
        }
        ema <= self.past[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increasing_series_never_stops() {
        let h: Vec<f64> = (0..3000).map(|i| i as f64).collect();
        assert!(!early_stop(&h, 1000, 0.999));
    }

    #[test]
    fn constant_series_stops_after_window() {
        let h = vec![5.0; 1001];
        assert!(early_stop(&h, 1000, 0.999));
        assert!(!early_stop(&h[..1000], 1000, 0.999));
        let mut s = EarlyStopper::new(1000, 0.999);
        let first = (0..1001).position(|_| s.push(5.0));
        assert_eq!(first, Some(1000));
    }

    #[test]
    fn incremental_matches_batch() {
        let h: Vec<f64> = (0..400).map(|i| ((i as f64) / 30.0).sin().max(0.2) * 10.0).collect();
        let mut s = EarlyStopper::new(50, 0.9);
        for n in 1..=h.len() {
            assert_eq!(s.push(h[n - 1]), early_stop(&h[..n], 50, 0.9), "at {n}");
        }
    }
}
