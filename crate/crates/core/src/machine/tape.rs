use std::collections::HashMap;

const DENSE_NEG: i64 = 256;
const DENSE_LEN: usize = 4096;

/// Unbounded tape of integer cells addressed by any `i64`; unwritten cells read 0.
///
/// Addresses in `[-256, 3840)` live in a dense window; everything else spills
/// into a map.
#[derive(Clone, Debug)]
pub struct Tape {
    dense: Vec<i64>,
    sparse: HashMap<i64, i64>,
}

impl Default for Tape {
    fn default() -> Self {
        Tape::new()
    }
}

impl Tape {
    pub fn new() -> Self {
        Tape { dense: vec![0; DENSE_LEN], sparse: HashMap::new() }
    }

    #[inline]
    fn slot(addr: i64) -> Option<usize> {
        let i = addr.wrapping_add(DENSE_NEG);
        if (0..DENSE_LEN as i64).contains(&i) {
            Some(i as usize)
        } else {
            None
        }
    }

    #[inline]
    pub fn get(&self, addr: i64) -> i64 {
        match Tape::slot(addr) {
            Some(i) => self.dense[i],
            None => self.sparse.get(&addr).copied().unwrap_or(0),
        }
    }

    #[inline]
    pub fn cell_mut(&mut self, addr: i64) -> &mut i64 {
        match Tape::slot(addr) {
            Some(i) => &mut self.dense[i],
            None => self.sparse.entry(addr).or_insert(0),
        }
    }

    #[inline]
    pub fn set(&mut self, addr: i64, value: i64) {
        *self.cell_mut(addr) = value;
    }

    /// Addresses holding non-zero values, ascending.
    pub fn nonzero(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = self
            .dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (i as i64 - DENSE_NEG, *v))
            .chain(self.sparse.iter().filter(|(_, v)| **v != 0).map(|(a, v)| (*a, *v)))
            .collect();
        out.sort_unstable();
        out
    }
}
