use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnvError, EnvSpec, Environment, Transition};
use crate::bridge::SpaceDim;
use crate::scalar::Real;

pub const ROWS: usize = 5;
pub const COLS: usize = 5;
pub const STEP_LIMIT: usize = 200;
pub const STEP_REWARD: f64 = -1.0;
pub const DROPOFF_REWARD: f64 = 20.0;
pub const ILLEGAL_REWARD: f64 = -10.0;
pub const N_STATES: usize = 500;

/// The 5x5 map; `:` is passable, `|` is a wall.
pub const MAP: [&str; 7] = [
    "+---------+",
    "|R: | : :G|",
    "| : | : : |",
    "| : : : : |",
    "| | : | : |",
    "|Y| : |B: |",
    "+---------+",
];

/// R, G, Y, B as (row, col).
pub const LOCATIONS: [(usize, usize); 4] = [(0, 0), (0, 4), (4, 0), (4, 3)];

/// Passenger index meaning "in the taxi".
pub const IN_TAXI: usize = 4;

pub const SOUTH: usize = 0;
pub const NORTH: usize = 1;
pub const EAST: usize = 2;
pub const WEST: usize = 3;
pub const PICKUP: usize = 4;
pub const DROPOFF: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TaxiState {
    pub row: usize,
    pub col: usize,
    /// 0..4 for a waiting location, 4 when riding.
    pub passenger: usize,
    pub destination: usize,
}

impl TaxiState {
    pub fn encode(self) -> usize {
        ((self.row * COLS + self.col) * 5 + self.passenger) * 4 + self.destination
    }

    pub fn decode(mut code: usize) -> TaxiState {
        let destination = code % 4;
        code /= 4;
        let passenger = code % 5;
        code /= 5;
        let col = code % COLS;
        let row = code / COLS;
        TaxiState { row, col, passenger, destination }
    }

    /// Legal episode starts: passenger waiting somewhere other than the destination.
    pub fn is_start(self) -> bool {
        self.passenger < IN_TAXI && self.passenger != self.destination
    }
}

/// Grid taxi with four pickup/dropoff locations. Actions: south, north, east,
/// west, pickup, dropoff.
///
/// The packed state is exposed as a decoded 4-vector
/// `(row, col, passenger, destination)`.
#[derive(Clone, Debug)]
pub struct Taxi<F> {
    spec: EnvSpec<F>,
    state: TaxiState,
    started: bool,
    done: bool,
}

impl<F: Real> Default for Taxi<F> {
    fn default() -> Self {
        Taxi::new()
    }
}

/// True when moving east from `(row, col)` does not cross a wall.
pub fn can_move_east(row: usize, col: usize) -> bool {
    col + 1 < COLS && MAP[row + 1].as_bytes()[2 * col + 2] == b':'
}

/// True when moving west from `(row, col)` does not cross a wall.
pub fn can_move_west(row: usize, col: usize) -> bool {
    col > 0 && MAP[row + 1].as_bytes()[2 * col] == b':'
}

impl<F: Real> Taxi<F> {
    pub fn new() -> Self {
        let spec = EnvSpec {
            name: "Taxi-v3".into(),
            observation_space: vec![
                SpaceDim::FiniteDiscrete { count: ROWS as u64 },
                SpaceDim::FiniteDiscrete { count: COLS as u64 },
                SpaceDim::FiniteDiscrete { count: 5 },
                SpaceDim::FiniteDiscrete { count: 4 },
            ],
            action_space: vec![SpaceDim::FiniteDiscrete { count: 6 }],
            step_limit: STEP_LIMIT,
            min_return: F::of(ILLEGAL_REWARD * STEP_LIMIT as f64),
        };
        Taxi { spec, state: TaxiState::decode(0), started: false, done: false }
    }

    pub fn state(&self) -> TaxiState {
        self.state
    }

    pub fn set_state(&mut self, state: TaxiState) {
        self.state = state;
        self.started = true;
        self.done = false;
    }

    fn observation(&self) -> Vec<F> {
        let s = self.state;
        [s.row, s.col, s.passenger, s.destination].iter().map(|&v| F::of(v as f64)).collect()
    }

    /// Pure transition on a decoded state: `(next, reward, done)`.
    pub fn transition(s: TaxiState, action: usize) -> (TaxiState, f64, bool) {
        let mut next = s;
        let mut reward = STEP_REWARD;
        let mut done = false;
        let here = (s.row, s.col);
        match action {
            SOUTH => next.row = (s.row + 1).min(ROWS - 1),
            NORTH => next.row = s.row.saturating_sub(1),
            EAST if can_move_east(s.row, s.col) => next.col = s.col + 1,
            WEST if can_move_west(s.row, s.col) => next.col = s.col - 1,
            EAST | WEST => {}
            PICKUP => {
                if s.passenger < IN_TAXI && here == LOCATIONS[s.passenger] {
                    next.passenger = IN_TAXI;
                } else {
                    reward = ILLEGAL_REWARD;
                }
            }
            DROPOFF => {
                if s.passenger == IN_TAXI && here == LOCATIONS[s.destination] {
                    next.passenger = s.destination;
                    reward = DROPOFF_REWARD;
                    done = true;
                } else if s.passenger == IN_TAXI && LOCATIONS.contains(&here) {
                    next.passenger = LOCATIONS.iter().position(|&l| l == here).expect("checked");
                } else {
                    reward = ILLEGAL_REWARD;
                }
            }
            _ => unreachable!("taxi action out of range"),
        }
        (next, reward, done)
    }
}

impl<F: Real> Environment<F> for Taxi<F> {
    fn spec(&self) -> &EnvSpec<F> {
        &self.spec
    }

    fn reset(&mut self, seed: u64) -> Vec<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // 300 legal starts: 25 cells x 4 passenger spots x 3 other destinations
        let k = rng.gen_range(0..300usize);
        let cell = k / 12;
        let passenger = (k % 12) / 3;
        let mut destination = k % 3;
        if destination >= passenger {
            destination += 1;
        }
        self.state = TaxiState { row: cell / COLS, col: cell % COLS, passenger, destination };
        self.started = true;
        self.done = false;
        self.observation()
    }

    fn step(&mut self, action: &[F]) -> Result<Transition<F>, EnvError> {
        if !self.started {
            return Err(EnvError::NotReset);
        }
        if self.done {
            return Err(EnvError::SteppedAfterDone);
        }
        if action.len() != 1 {
            return Err(EnvError::ActionDimension { expected: 1, got: action.len() });
        }
        let a = action[0].round().to_i64().unwrap_or(0).rem_euclid(6) as usize;
        let (next, reward, done) = Taxi::<F>::transition(self.state, a);
        self.state = next;
        self.done = done;
        Ok(Transition { observation: self.observation(), reward: F::of(reward), done })
    }
}
