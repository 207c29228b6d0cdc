use std::collections::VecDeque;

/// Pending actions. `S^1` is the top (front).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionQueue {
    items: VecDeque<i64>,
}

impl ActionQueue {
    pub fn new() -> Self {
        ActionQueue::default()
    }

    /// `.`
    #[inline]
    pub fn append_bottom(&mut self, v: i64) {
        self.items.push_back(v);
    }

    /// `!`
    #[inline]
    pub fn push_top(&mut self, v: i64) {
        self.items.push_front(v);
    }

    /// `S^k`, 1-indexed; 0 past the end.
    pub fn peek(&self, k: usize) -> i64 {
        if k == 0 {
            return 0;
        }
        self.items.get(k - 1).copied().unwrap_or(0)
    }

    /// Remove `S^1..S^n`, padding with zeros.
    pub fn pop_n(&mut self, n: usize) -> Vec<i64> {
        (0..n).map(|_| self.items.pop_front().unwrap_or(0)).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Top-to-bottom contents.
    pub fn iter(&self) -> impl Iterator<Item = &i64> {
        self.items.iter()
    }
}
