//! The BF++ virtual machine and the per-episode driver.

mod queue;
mod runner;
mod tape;

pub use queue::ActionQueue;
pub use runner::{run_episode, EpisodeResult, Limits, Termination, TraceRecord};
pub use tape::Tape;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lang::{Dialect, LoopMode, Program, Token};

/// Token executions allowed between two environment interactions.
pub const DEFAULT_OP_BUDGET: usize = 10_000;

/// Outcome of executing one token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Continue,
    /// The machine reached a comma (explicit or virtual) and waits for the environment.
    NeedEnvStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("operation budget of {0} tokens exhausted without reaching a comma")]
pub struct OpBudgetExhausted(pub usize);

/// Interpreter state for one episode.
///
/// `code_ptr == -1` is the virtual comma that precedes the program and that
/// the code pointer wraps to after the last token.
#[derive(Clone, Debug)]
pub struct Machine<'p> {
    program: &'p Program,
    loop_mode: LoopMode,
    tape: Tape,
    mem_ptr: i64,
    code_ptr: isize,
    queue: ActionQueue,
    rng: ChaCha8Rng,
    random_bins: i64,
    ops_since_comma: usize,
    op_budget: usize,
}

impl<'p> Machine<'p> {
    /// `random_bins` is the exclusive upper bound of values written by `@`.
    pub fn new(program: &'p Program, dialect: &Dialect, episode_seed: u64, random_bins: usize) -> Self {
        debug_assert!(program.fits(dialect));
        Machine {
            program,
            loop_mode: dialect.loop_mode,
            tape: Tape::new(),
            mem_ptr: 0,
            code_ptr: -1,
            queue: ActionQueue::new(),
            rng: ChaCha8Rng::seed_from_u64(episode_seed),
            random_bins: random_bins.max(1) as i64,
            ops_since_comma: 0,
            op_budget: DEFAULT_OP_BUDGET,
        }
    }

    pub fn with_op_budget(mut self, op_budget: usize) -> Self {
        self.op_budget = op_budget;
        self
    }

    pub fn code_ptr(&self) -> isize {
        self.code_ptr
    }

    pub fn mem_ptr(&self) -> i64 {
        self.mem_ptr
    }

    pub fn tape(&self) -> &Tape {
        &self.tape
    }

    pub fn queue(&self) -> &ActionQueue {
        &self.queue
    }

    pub fn active_cell(&self) -> i64 {
        self.tape.get(self.mem_ptr)
    }

    pub fn ops_since_comma(&self) -> usize {
        self.ops_since_comma
    }

    /// Pop the `n` entries used for one environment step.
    pub fn take_actions(&mut self, n: usize) -> Vec<i64> {
        self.queue.pop_n(n)
    }

    /// Finish the pending comma: write the observation at `p_T..`, reset the
    /// op counter and move past the comma.
    pub fn complete_comma(&mut self, observation: &[i64]) {
        for (k, &v) in observation.iter().enumerate() {
            self.tape.set(self.mem_ptr + k as i64, v);
        }
        self.ops_since_comma = 0;
        self.code_ptr += 1;
    }

    /// Execute the token at the code pointer.
    ///
    /// Reaching the end of the program wraps to the virtual comma and reports
    /// `NeedEnvStep` without executing anything; an explicit `,` reports
    /// `NeedEnvStep` and leaves the code pointer on it until
    /// [`complete_comma`](Self::complete_comma).
    pub fn exec_token(&mut self) -> Result<Exec, OpBudgetExhausted> {
        let pc = self.code_ptr;
        debug_assert!(pc >= 0, "exec_token called at the virtual comma");
        let pc = pc as usize;
        let tokens = self.program.tokens();
        if pc >= tokens.len() {
            self.code_ptr = -1;
            return Ok(Exec::NeedEnvStep);
        }
        if self.ops_since_comma >= self.op_budget {
            return Err(OpBudgetExhausted(self.op_budget));
        }
        self.ops_since_comma += 1;
        let mut next = pc + 1;
        match tokens[pc] {
            Token::Right => self.mem_ptr = self.mem_ptr.wrapping_add(1),
            Token::Left => self.mem_ptr = self.mem_ptr.wrapping_sub(1),
            Token::Inc => {
                let c = self.tape.cell_mut(self.mem_ptr);
                *c = c.saturating_add(1);
            }
            Token::Dec => {
                let c = self.tape.cell_mut(self.mem_ptr);
                *c = c.saturating_sub(1);
            }
            Token::Negate => {
                let c = self.tape.cell_mut(self.mem_ptr);
                *c = c.saturating_neg();
            }
            Token::Goto => self.mem_ptr = self.active_cell(),
            Token::Random => {
                let v = self.rng.gen_range(0..self.random_bins);
                self.tape.set(self.mem_ptr, v);
            }
            Token::Append => self.queue.append_bottom(self.active_cell()),
            Token::Push => self.queue.push_top(self.active_cell()),
            Token::Value(v) => self.tape.set(self.mem_ptr, v as i64),
            Token::Cell(c) => self.mem_ptr = c as i64,
            Token::LoopStart => {
                if !self.loop_mode.enters(self.active_cell()) {
                    next = self.program.jump_target(pc) + 1;
                }
            }
            Token::LoopEnd => {
                if self.loop_mode.enters(self.active_cell()) {
                    next = self.program.jump_target(pc) + 1;
                }
            }
            Token::Read => return Ok(Exec::NeedEnvStep),
        }
        self.code_ptr = next as isize;
        Ok(Exec::Continue)
    }

    /// Execute tokens until the next comma.
    pub fn run_to_comma(&mut self) -> Result<(), OpBudgetExhausted> {
        while self.exec_token()? == Exec::Continue {}
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn program(text: &str) -> Program {
        Program::parse(text, &Dialect::full()).unwrap()
    }

    fn started<'p>(p: &'p Program, obs: &[i64]) -> Machine<'p> {
        let mut m = Machine::new(p, &Dialect::full(), 0, 5);
        m.complete_comma(obs);
        m
    }

    #[test]
    fn starts_at_virtual_comma() {
        let p = program("+-");
        let m = Machine::new(&p, &Dialect::full(), 1, 5);
        assert_eq!(m.code_ptr(), -1);
        assert!(m.queue().is_empty());
        assert!(m.tape().nonzero().is_empty());
    }

    #[test]
    fn empty_program_wraps_immediately() {
        let p = Program::empty();
        let mut m = started(&p, &[]);
        for _ in 0..3 {
            assert_eq!(m.exec_token(), Ok(Exec::NeedEnvStep));
            assert_eq!(m.code_ptr(), -1);
            m.complete_comma(&[]);
        }
    }

    #[test]
    fn negate() {
        let p = program("~");
        let mut m = started(&p, &[3]);
        m.exec_token().unwrap();
        assert_eq!(m.active_cell(), -3);
    }

    #[test]
    fn negative_mode_skips_on_zero() {
        let p = program("[+]-");
        let mut m = started(&p, &[0]);
        m.exec_token().unwrap();
        assert_eq!(m.code_ptr(), 3);
    }

    #[test]
    fn loop_modes() {
        // counts how many times the body runs starting from `start`
        fn body_runs(mode: LoopMode, text: &str, start: i64) -> i64 {
            let d = Dialect::full().with_loop_mode(mode);
            let p = Program::parse(text, &d).unwrap();
            let mut m = Machine::new(&p, &d, 0, 5);
            m.complete_comma(&[start, 0]);
            m.run_to_comma().unwrap();
            m.tape().get(1)
        }
        // body: bump counter in cell 1, step the active cell toward the exit
        assert_eq!(body_runs(LoopMode::Negative, "[>+<+]", -3), 3);
        assert_eq!(body_runs(LoopMode::Negative, "[>+<+]", 0), 0);
        assert_eq!(body_runs(LoopMode::NonPositive, "[>+<+]", -3), 4);
        assert_eq!(body_runs(LoopMode::NonPositive, "[>+<+]", 1), 0);
        assert_eq!(body_runs(LoopMode::ClassicZero, "[>+<-]", 4), 4);
        assert_eq!(body_runs(LoopMode::ClassicZero, "[>+<-]", 0), 0);
    }

    #[test]
    fn queue_order_from_append_and_push() {
        let d = Dialect { shorthands: 6, ..Dialect::full() };
        let p = Program::parse("5.2!", &d).unwrap();
        let mut m = Machine::new(&p, &d, 0, 5);
        m.complete_comma(&[]);
        m.run_to_comma().unwrap();
        assert_eq!(m.queue().iter().copied().collect::<Vec<_>>(), vec![2, 5]);
    }

    #[test]
    fn goto_moves_memory_pointer() {
        let p = program("^");
        let mut m = started(&p, &[2]);
        m.exec_token().unwrap();
        assert_eq!(m.mem_ptr(), 2);
    }

    #[test]
    fn shorthands() {
        let p = program(">>3b4e");
        let mut m = started(&p, &[]);
        m.run_to_comma().unwrap();
        assert_eq!(m.mem_ptr(), 4);
        assert_eq!(m.tape().nonzero(), vec![(1, 4), (2, 3)]);
    }

    #[test]
    fn random_is_in_range_and_seeded() {
        let p = program("@>");
        let draws = |seed| {
            let mut m = Machine::new(&p, &Dialect::full(), seed, 5);
            m.complete_comma(&[]);
            m.run_to_comma().unwrap();
            (0..200)
                .map(|_| {
                    m.complete_comma(&[]);
                    m.run_to_comma().unwrap();
                    m.tape().get(m.mem_ptr() - 1)
                })
                .collect::<Vec<_>>()
        };
        let a = draws(11);
        assert_eq!(a, draws(11));
        assert!(a.iter().all(|v| (0..5).contains(v)));
        for v in 0..5 {
            assert!(a.contains(&v));
        }
    }

    #[test]
    fn explicit_comma_waits_then_continues() {
        let p = program("+,+");
        let mut m = started(&p, &[0]);
        assert_eq!(m.exec_token(), Ok(Exec::Continue));
        assert_eq!(m.exec_token(), Ok(Exec::NeedEnvStep));
        assert_eq!(m.code_ptr(), 1);
        m.complete_comma(&[7]);
        assert_eq!(m.exec_token(), Ok(Exec::Continue));
        assert_eq!(m.active_cell(), 8);
        assert_eq!(m.exec_token(), Ok(Exec::NeedEnvStep));
        assert_eq!(m.code_ptr(), -1);
    }

    #[test]
    fn op_budget() {
        let p = program("-[]");
        let mut m = Machine::new(&p, &Dialect::full(), 0, 5).with_op_budget(50);
        m.complete_comma(&[0]);
        assert_eq!(m.run_to_comma(), Err(OpBudgetExhausted(50)));
        assert_eq!(m.ops_since_comma(), 50);
    }
}
