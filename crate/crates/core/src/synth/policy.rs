//! Autoregressive LSTM policy over program symbols.
//!
//! Parameters live in one flat vector so that the optimizer and the
//! finite-difference checks can treat them uniformly. Layout, with
//! `G = 4 * hidden` gate units ordered input, forget, cell, output:
//!
//! | block | shape                      | storage                        |
//! |-------|----------------------------|--------------------------------|
//! | `wx`  | `G x (vocab + 1)`          | one contiguous column per input symbol (`vocab` is BOS) |
//! | `wh`  | `G x hidden`               | row-major                      |
//! | `b`   | `G`                        |                                |
//! | `wo`  | `vocab x hidden`           | row-major                      |
//! | `bo`  | `vocab`                    |                                |

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Offsets of each parameter block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub wx: usize,
    pub wh: usize,
    pub b: usize,
    pub wo: usize,
    pub bo: usize,
    pub total: usize,
}

impl Layout {
    pub fn new(vocab: usize, hidden: usize) -> Layout {
        let g = 4 * hidden;
        let wx = 0;
        let wh = wx + g * (vocab + 1);
        let b = wh + g * hidden;
        let wo = b + g;
        let bo = wo + vocab * hidden;
        Layout { wx, wh, b, wo, bo, total: bo + vocab }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Policy<F> {
    vocab: usize,
    hidden: usize,
    params: Vec<F>,
}

/// Recurrent state while sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmState<F> {
    h: Vec<F>,
    c: Vec<F>,
}

/// A sampled symbol sequence (EOS excluded) and its log-probability,
/// which always includes the closing EOS factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<F> {
    pub symbols: Vec<usize>,
    pub logprob: F,
}

#[inline]
fn sigmoid<F: Real>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

#[inline]
fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

/// In-place log-softmax.
fn log_softmax<F: Real>(z: &mut [F]) {
    let m = z.iter().copied().fold(F::neg_infinity(), F::max);
    let lse = m + z.iter().map(|&v| (v - m).exp()).sum::<F>().ln();
    for v in z.iter_mut() {
        *v -= lse;
    }
}

struct StepCache<F> {
    input: usize,
    h_prev: Vec<F>,
    c_prev: Vec<F>,
    // activated gates i, f, g, o
    gates: Vec<F>,
    tanh_c: Vec<F>,
    h: Vec<F>,
    logp: Vec<F>,
}

impl<F: Real> Policy<F> {
    /// Fresh policy: recurrent weights uniform in `+-1/sqrt(hidden)`, forget
    /// bias 1, output layer zero so the initial distribution is uniform.
    pub fn new<R: Rng + ?Sized>(vocab: usize, hidden: usize, rng: &mut R) -> Self {
        let l = Layout::new(vocab, hidden);
        let scale = 1.0 / (hidden.max(1) as f64).sqrt();
        let mut params = vec![F::zero(); l.total];
        for p in &mut params[l.wx..l.b] {
            *p = F::of(rng.gen_range(-scale..scale));
        }
        for p in &mut params[l.b + hidden..l.b + 2 * hidden] {
            *p = F::one();
        }
        Policy { vocab, hidden, params }
    }

    pub fn from_params(vocab: usize, hidden: usize, params: Vec<F>) -> Self {
        assert_eq!(params.len(), Layout::new(vocab, hidden).total, "parameter count does not match shape");
        Policy { vocab, hidden, params }
    }

    pub fn vocab(&self) -> usize {
        self.vocab
    }

    pub fn eos(&self) -> usize {
        self.vocab - 1
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.vocab, self.hidden)
    }

    pub fn params(&self) -> &[F] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [F] {
        &mut self.params
    }

    pub fn initial_state(&self) -> LstmState<F> {
        LstmState { h: vec![F::zero(); self.hidden], c: vec![F::zero(); self.hidden] }
    }

    /// Input index used before the first symbol.
    pub fn bos(&self) -> usize {
        self.vocab
    }

    /// One LSTM step; writes activated gates, new cell, `tanh(c)` and `h`.
    fn cell(&self, input: usize, h_prev: &[F], c_prev: &[F], gates: &mut [F], c: &mut [F], tanh_c: &mut [F], h: &mut [F]) {
        let hd = self.hidden;
        let g = 4 * hd;
        let l = self.layout();
        let p = &self.params;
        let col = &p[l.wx + input * g..l.wx + (input + 1) * g];
        for j in 0..g {
            let row = &p[l.wh + j * hd..l.wh + (j + 1) * hd];
            gates[j] = p[l.b + j] + col[j] + dot(row, h_prev);
        }
        for k in 0..hd {
            let i = sigmoid(gates[k]);
            let f = sigmoid(gates[hd + k]);
            let gg = gates[2 * hd + k].tanh();
            let o = sigmoid(gates[3 * hd + k]);
            gates[k] = i;
            gates[hd + k] = f;
            gates[2 * hd + k] = gg;
            gates[3 * hd + k] = o;
            c[k] = f * c_prev[k] + i * gg;
            tanh_c[k] = c[k].tanh();
            h[k] = o * tanh_c[k];
        }
    }

    fn logits(&self, h: &[F], out: &mut [F]) {
        let l = self.layout();
        let hd = self.hidden;
        for (y, z) in out.iter_mut().enumerate() {
            *z = self.params[l.bo + y] + dot(&self.params[l.wo + y * hd..l.wo + (y + 1) * hd], h);
        }
    }

    /// Feed `input` and return the next-symbol log-probabilities.
    pub fn advance(&self, state: &mut LstmState<F>, input: usize) -> Vec<F> {
        let hd = self.hidden;
        let mut gates = vec![F::zero(); 4 * hd];
        let mut c = vec![F::zero(); hd];
        let mut tanh_c = vec![F::zero(); hd];
        let mut h = vec![F::zero(); hd];
        self.cell(input, &state.h, &state.c, &mut gates, &mut c, &mut tanh_c, &mut h);
        state.h = h;
        state.c = c;
        let mut z = vec![F::zero(); self.vocab];
        self.logits(&state.h, &mut z);
        log_softmax(&mut z);
        z
    }

    /// Sample symbols until EOS or `max_len` symbols. When truncated, the EOS
    /// factor at the final position is still added to `logprob`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_len: usize) -> Sample<F> {
        let eos = self.eos();
        let mut state = self.initial_state();
        let mut input = self.bos();
        let mut symbols = Vec::new();
        let mut logprob = F::zero();
        loop {
            let logp = self.advance(&mut state, input);
            if symbols.len() >= max_len {
                logprob += logp[eos];
                break;
            }
            let y = sample_index(&logp, rng);
            logprob += logp[y];
            if y == eos {
                break;
            }
            symbols.push(y);
            input = y;
        }
        Sample { symbols, logprob }
    }

    /// Most likely symbol at every step (greedy decode).
    pub fn greedy(&self, max_len: usize) -> Vec<usize> {
        let mut state = self.initial_state();
        let mut input = self.bos();
        let mut symbols = Vec::new();
        while symbols.len() < max_len {
            let logp = self.advance(&mut state, input);
            let y = (0..self.vocab).fold(0, |best, j| if logp[j] > logp[best] { j } else { best });
            if y == self.eos() {
                break;
            }
            symbols.push(y);
            input = y;
        }
        symbols
    }

    fn forward(&self, symbols: &[usize]) -> Vec<StepCache<F>> {
        let hd = self.hidden;
        let mut caches: Vec<StepCache<F>> = Vec::with_capacity(symbols.len() + 1);
        let mut h_prev = vec![F::zero(); hd];
        let mut c_prev = vec![F::zero(); hd];
        for t in 0..=symbols.len() {
            let input = if t == 0 { self.bos() } else { symbols[t - 1] };
            let mut gates = vec![F::zero(); 4 * hd];
            let mut c = vec![F::zero(); hd];
            let mut tanh_c = vec![F::zero(); hd];
            let mut h = vec![F::zero(); hd];
            self.cell(input, &h_prev, &c_prev, &mut gates, &mut c, &mut tanh_c, &mut h);
            let mut logp = vec![F::zero(); self.vocab];
            self.logits(&h, &mut logp);
            log_softmax(&mut logp);
            caches.push(StepCache { input, h_prev, c_prev, gates, tanh_c, h: h.clone(), logp });
            h_prev = h;
            c_prev = c;
        }
        caches
    }

    /// Teacher-forced `log pi(symbols, EOS)`.
    pub fn score(&self, symbols: &[usize]) -> F {
        let eos = self.eos();
        self.forward(symbols)
            .iter()
            .enumerate()
            .map(|(t, c)| c.logp[if t < symbols.len() { symbols[t] } else { eos }])
            .sum()
    }

    /// Summed per-step entropy of the next-symbol distributions along `symbols` (EOS step included).
    pub fn entropy(&self, symbols: &[usize]) -> F {
        self.forward(symbols).iter().map(|c| entropy_of(&c.logp)).sum()
    }

    /// Add the gradient of `w_logprob * score(symbols) + w_entropy * entropy(symbols)` to `grad`.
    pub fn accumulate_gradient(&self, symbols: &[usize], w_logprob: F, w_entropy: F, grad: &mut [F]) {
        debug_assert_eq!(grad.len(), self.params.len());
        let hd = self.hidden;
        let g = 4 * hd;
        let l = self.layout();
        let p = &self.params;
        let caches = self.forward(symbols);
        let eos = self.eos();
        let mut dh_next = vec![F::zero(); hd];
        let mut dc_next = vec![F::zero(); hd];
        let mut dz = vec![F::zero(); self.vocab];
        let mut dh = vec![F::zero(); hd];
        let mut da = vec![F::zero(); g];
        for (t, cache) in caches.iter().enumerate().rev() {
            let target = if t < symbols.len() { symbols[t] } else { eos };
            let ent = entropy_of(&cache.logp);
            for (j, d) in dz.iter_mut().enumerate() {
                let pj = cache.logp[j].exp();
                let onehot = if j == target { F::one() } else { F::zero() };
                *d = w_logprob * (onehot - pj) - w_entropy * pj * (cache.logp[j] + ent);
            }
            dh.copy_from_slice(&dh_next);
            for (j, &d) in dz.iter().enumerate() {
                grad[l.bo + j] += d;
                let wo = &p[l.wo + j * hd..l.wo + (j + 1) * hd];
                let gwo = &mut grad[l.wo + j * hd..l.wo + (j + 1) * hd];
                for k in 0..hd {
                    gwo[k] += d * cache.h[k];
                    dh[k] += wo[k] * d;
                }
            }
            let gates = &cache.gates;
            for k in 0..hd {
                let (i, f, gg, o) = (gates[k], gates[hd + k], gates[2 * hd + k], gates[3 * hd + k]);
                let tc = cache.tanh_c[k];
                let d_o = dh[k] * tc;
                let dc = dc_next[k] + dh[k] * o * (F::one() - tc * tc);
                let di = dc * gg;
                let dg = dc * i;
                let df = dc * cache.c_prev[k];
                dc_next[k] = dc * f;
                da[k] = di * i * (F::one() - i);
                da[hd + k] = df * f * (F::one() - f);
                da[2 * hd + k] = dg * (F::one() - gg * gg);
                da[3 * hd + k] = d_o * o * (F::one() - o);
            }
            for v in dh_next.iter_mut() {
                *v = F::zero();
            }
            let col = l.wx + cache.input * g;
            for (j, &a) in da.iter().enumerate() {
                grad[l.b + j] += a;
                grad[col + j] += a;
                let row = l.wh + j * hd;
                for k in 0..hd {
                    grad[row + k] += a * cache.h_prev[k];
                    dh_next[k] += p[row + k] * a;
                }
            }
        }
    }
}

fn entropy_of<F: Real>(logp: &[F]) -> F {
    -logp.iter().map(|&lp| lp.exp() * lp).sum::<F>()
}

fn sample_index<F: Real, R: Rng + ?Sized>(logp: &[F], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (j, lp) in logp.iter().enumerate() {
        acc += lp.to_f64_lossy().exp();
        if u < acc {
            return j;
        }
    }
    logp.len() - 1
}
