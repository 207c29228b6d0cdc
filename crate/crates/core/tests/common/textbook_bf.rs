//! Textbook Brainfuck over `><+-[].,` with unbounded integer cells, a tape
//! infinite in both directions, `,` reading from an input stream and `.`
//! writing to an output stream; plus a lockstep comparison against the
//! BF++ machine in classic-zero loop mode.

use std::collections::HashMap;

use bfpp::machine::{Exec, Machine};
use bfpp::{Dialect, LoopMode, Program};
use rand::Rng;

pub struct Textbook {
    code: Vec<u8>,
    pub pc: usize,
    pub ptr: i64,
    pub tape: HashMap<i64, i64>,
    pub output: Vec<i64>,
}

impl Textbook {
    pub fn new(src: &str) -> Self {
        Textbook { code: src.bytes().collect(), pc: 0, ptr: 0, tape: HashMap::new(), output: Vec::new() }
    }

    pub fn halted(&self) -> bool {
        self.pc >= self.code.len()
    }

    fn cell(&self) -> i64 {
        self.tape.get(&self.ptr).copied().unwrap_or(0)
    }

    fn find_match(&self, from: usize, forward: bool) -> usize {
        let mut depth = 0i32;
        let mut i = from as isize;
        loop {
            match self.code[i as usize] {
                b'[' => depth += 1,
                b']' => depth -= 1,
                _ => {}
            }
            if depth == 0 {
                return i as usize;
            }
            i += if forward { 1 } else { -1 };
        }
    }

    /// Execute one instruction; `,` consumes from `input` (0 once exhausted).
    pub fn step(&mut self, input: &mut impl Iterator<Item = i64>) {
        let op = self.code[self.pc];
        let mut next = self.pc + 1;
        match op {
            b'>' => self.ptr += 1,
            b'<' => self.ptr -= 1,
            b'+' => *self.tape.entry(self.ptr).or_insert(0) += 1,
            b'-' => *self.tape.entry(self.ptr).or_insert(0) -= 1,
            b'.' => self.output.push(self.cell()),
            b',' => {
                let v = input.next().unwrap_or(0);
                self.tape.insert(self.ptr, v);
            }
            b'[' => {
                if self.cell() == 0 {
                    next = self.find_match(self.pc, true) + 1;
                }
            }
            b']' => {
                if self.cell() != 0 {
                    next = self.find_match(self.pc, false) + 1;
                }
            }
            _ => unreachable!("generator only emits the classic subset"),
        }
        self.pc = next;
    }

    pub fn nonzero(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self.tape.iter().filter(|(_, &x)| x != 0).map(|(&a, &x)| (a, x)).collect();
        v.sort_unstable();
        v
    }
}

/// Random balanced program over `><+-[].,`.
pub fn random_program<R: Rng>(rng: &mut R, max_len: usize) -> String {
    fn body<R: Rng>(rng: &mut R, budget: usize, depth: usize, out: &mut String) {
        let n = rng.gen_range(0..=budget);
        for _ in 0..n {
            if depth < 3 && rng.gen_bool(0.15) {
                out.push('[');
                body(rng, budget / 2, depth + 1, out);
                out.push(']');
            } else {
                out.push(['>', '<', '+', '+', '-', '-', '.', ','][rng.gen_range(0..8)]);
            }
        }
    }
    let mut s = String::new();
    body(rng, max_len, 0, &mut s);
    s
}

/// Run both interpreters side by side for up to `max_ops` instructions,
/// checking pointer, tape and output after every instruction. The machine's
/// action queue plays the output stream and each comma is fed the next input
/// byte. Stops when the textbook program halts (the BF++ machine then
/// reaches its wrap-around comma).
pub fn lockstep(src: &str, input: &[i64], max_ops: usize) -> Result<usize, String> {
    let dialect = Dialect::core().with_loop_mode(LoopMode::ClassicZero);
    let program = Program::parse(src, &dialect).map_err(|e| e.to_string())?;
    let mut machine = Machine::new(&program, &dialect, 0, 5).with_op_budget(usize::MAX);
    // initial observation is a zero written to cell 0, which leaves the tape unchanged
    machine.complete_comma(&[0]);
    let mut oracle = Textbook::new(src);
    let mut feed_oracle = input.iter().copied();
    let mut feed_machine = input.iter().copied();
    let mut ops = 0;
    while !oracle.halted() && ops < max_ops {
        let at_comma = src.as_bytes()[oracle.pc] == b',';
        oracle.step(&mut feed_oracle);
        match machine.exec_token().map_err(|e| e.to_string())? {
            Exec::NeedEnvStep if at_comma => machine.complete_comma(&[feed_machine.next().unwrap_or(0)]),
            Exec::Continue if !at_comma => {}
            other => return Err(format!("op {ops}: machine returned {other:?} at comma={at_comma}")),
        }
        ops += 1;
        let queue: Vec<i64> = machine.queue().iter().copied().collect();
        if machine.mem_ptr() != oracle.ptr
            || machine.code_ptr() != oracle.pc as isize
            || machine.tape().nonzero() != oracle.nonzero()
            || queue != oracle.output
        {
            return Err(format!(
                "{src:?} diverged after {ops} ops: ptr {} vs {}, pc {} vs {}, queue {queue:?} vs {:?}",
                machine.mem_ptr(),
                oracle.ptr,
                machine.code_ptr(),
                oracle.pc,
                oracle.output
            ));
        }
    }
    if oracle.halted() && machine.exec_token().map_err(|e| e.to_string())? != Exec::NeedEnvStep {
        return Err(format!("{src:?}: machine did not wrap at the end"));
    }
    Ok(ops)
}
