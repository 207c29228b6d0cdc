use serde::{Deserialize, Serialize};

/// One queue member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueueEntry {
    pub program: String,
    pub reward: f64,
}

/// Top-K programs by reward, unique by text.
///
/// Entries are kept sorted by reward descending, then shorter text, then
/// lexicographic text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorityQueue {
    capacity: usize,
    entries: Vec<QueueEntry>,
}

impl PriorityQueue {
    pub fn new(capacity: usize) -> Self {
        PriorityQueue { capacity, entries: Vec::with_capacity(capacity + 1) }
    }

    pub fn from_entries(capacity: usize, entries: Vec<QueueEntry>) -> Self {
        let mut q = PriorityQueue::new(capacity);
        for e in entries {
            q.insert(&e.program, e.reward);
        }
        q
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[QueueEntry] {
        &self.entries
    }

    pub fn best(&self) -> Option<&QueueEntry> {
        self.entries.first()
    }

    pub fn max_reward(&self) -> Option<f64> {
        self.best().map(|e| e.reward)
    }

    pub fn contains(&self, program: &str) -> bool {
        self.entries.iter().any(|e| e.program == program)
    }

    /// Insert or improve `program`. Returns whether the queue changed.
    /// A known program only has its reward raised, never lowered.
    pub fn insert(&mut self, program: &str, reward: f64) -> bool {
        if self.capacity == 0 || reward.is_nan() {
            return false;
        }
        if let Some(e) = self.entries.iter_mut().find(|e| e.program == program) {
            if reward <= e.reward {
                return false;
            }
            e.reward = reward;
        } else {
            if self.entries.len() == self.capacity {
                let worst = self.entries.last().expect("capacity > 0");
                if !before(program, reward, &worst.program, worst.reward) {
                    return false;
                }
                self.entries.pop();
            }
            self.entries.push(QueueEntry { program: program.to_string(), reward });
        }
        self.entries.sort_by(|a, b| {
            if before(&a.program, a.reward, &b.program, b.reward) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        true
    }
}

fn before(a: &str, ra: f64, b: &str, rb: f64) -> bool {
    ra > rb || (ra == rb && (a.len(), a) < (b.len(), b))
}
