use bfpp::bridge::{bin_of, coerce_one, quantile_thresholds, static_thresholds, DimMode, Discretizer, SpaceDim};
use bfpp::machine::{run_episode, Limits, Termination};
use bfpp::{Dialect, EnvKind, IoBridge64, LoopMode, Program, Token, ValidationError};
use proptest::prelude::*;

const ALPHABET: &str = "><^@+~-[].,!01234abcde";

fn program_text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(ALPHABET.chars().collect::<Vec<_>>()), 0..40)
        .prop_map(|v| v.into_iter().collect())
}

fn balanced(text: &str) -> bool {
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn space_dim() -> impl Strategy<Value = SpaceDim<f64>> {
    prop_oneof![
        (-50.0..50.0f64, 0.01..50.0f64).prop_map(|(lo, w)| SpaceDim::Interval { low: lo, high: lo + w }),
        (-50.0..50.0f64).prop_map(|low| SpaceDim::HalfOpenAbove { low }),
        (-50.0..50.0f64).prop_map(|high| SpaceDim::HalfOpenBelow { high }),
        Just(SpaceDim::Unbounded),
        (1u64..20).prop_map(|count| SpaceDim::FiniteDiscrete { count }),
        Just(SpaceDim::IntegerUnbounded),
    ]
}

proptest! {
    #[test]
    fn parse_never_panics_and_accepts_exactly_balanced_text(text in "\\PC{0,40}") {
        let full = Dialect::full();
        match Program::parse(&text, &full) {
            Ok(p) => {
                prop_assert_eq!(p.render(), text.as_str());
                prop_assert!(balanced(&text));
            }
            Err(ValidationError::UnknownToken { pos, ch }) => {
                prop_assert_eq!(text.chars().nth(pos), Some(ch));
                prop_assert!(Token::from_char(ch).is_none());
            }
            Err(e) => prop_assert!(e.position() < text.chars().count()),
        }
    }

    #[test]
    fn bracket_pairs_are_mutual(text in program_text()) {
        if let Ok(p) = Program::parse(&text, &Dialect::full()) {
            for (i, t) in p.tokens().iter().enumerate() {
                if t.is_bracket() {
                    let j = p.matching_bracket(i).unwrap();
                    prop_assert_eq!(p.matching_bracket(j).unwrap(), i);
                    prop_assert!(p.tokens()[j].is_bracket() && p.tokens()[j] != *t);
                } else {
                    prop_assert!(p.matching_bracket(i).is_err());
                }
            }
        }
    }

    #[test]
    fn any_valid_program_finishes_an_episode(text in program_text(), seed in 0u64..1000, kind in 0usize..3) {
        let dialect = Dialect::full();
        if let Ok(p) = Program::parse(&text, &dialect) {
            let kind = EnvKind::ALL[kind];
            let mut env = kind.make::<f64>();
            let mut bridge = IoBridge64::new(&env.spec().observation_space.clone(), &env.spec().action_space.clone(), &Default::default()).unwrap();
            let limits = Limits { op_budget: 500, step_limit: None };
            let r = run_episode(&p, &dialect, env.as_mut(), &mut bridge, &limits, seed, true);
            let spec = env.spec();
            prop_assert!(r.steps <= spec.step_limit);
            prop_assert!(r.total_reward >= spec.min_return);
            if r.termination == Termination::StepLimit {
                prop_assert_eq!(r.steps, spec.step_limit);
            }
            for t in r.trace.unwrap() {
                prop_assert!(spec.action_space[0].contains(t.action[0]));
            }
        }
    }

    #[test]
    fn coercion_stays_in_space(s in any::<i64>(), dim in space_dim(), bins in 2usize..12) {
        let a = coerce_one(s, &dim, bins);
        prop_assert!(dim.contains(a), "{} -> {} outside {:?}", s, a, dim);
    }

    #[test]
    fn interval_coercion_is_periodic(s in -1_000_000i64..1_000_000, bins in 2usize..12) {
        let dim = SpaceDim::interval(-1.0, 1.0);
        prop_assert_eq!(coerce_one::<f64>(s, &dim, bins), coerce_one::<f64>(s + bins as i64, &dim, bins));
    }

    #[test]
    fn binning_is_monotone_and_in_range(
        mut sample in prop::collection::vec(-100.0..100.0f64, 1..300),
        a in -150.0..150.0f64,
        b in -150.0..150.0f64,
        bins in 2usize..10,
    ) {
        sample.sort_by(f64::total_cmp);
        let t = quantile_thresholds(&sample, bins);
        prop_assert_eq!(t.len(), bins - 1);
        prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(bin_of(&t, lo) <= bin_of(&t, hi));
        prop_assert!((0..bins as i64).contains(&bin_of(&t, hi)));
    }

    #[test]
    fn fluid_quantile_property(
        sample in prop::collection::vec(-1e3..1e3f64, 1..400),
        history in 1usize..200,
    ) {
        let mut d = Discretizer::new(&[SpaceDim::Unbounded], &[DimMode::Fluid], 5, history).unwrap();
        for &x in &sample {
            d.fluid_update(0, x);
        }
        let window: Vec<f64> = sample[sample.len().saturating_sub(history)..].to_vec();
        let m = window.len() as f64;
        prop_assert_eq!(d.buffered(0), window.len());
        for (w, tau) in d.thresholds(0).iter().enumerate() {
            let below = window.iter().filter(|&&x| x < *tau).count() as f64 / m;
            // distinct draws: exactly ceil(w m / d) - 1 values lie strictly below s_ceil(w m / d)
            let mut sorted = window.clone();
            sorted.sort_by(f64::total_cmp);
            sorted.dedup();
            if sorted.len() == window.len() {
                prop_assert!((below - (w + 1) as f64 / 5.0).abs() <= 1.0 / m + 1e-12);
            }
        }
    }

    #[test]
    fn static_thresholds_match_formula(low in -100.0..100.0f64, width in 0.001..100.0f64, bins in 2usize..12) {
        let t = static_thresholds(low, low + width, bins).unwrap();
        for (i, v) in t.iter().enumerate() {
            let w = (i + 1) as f64;
            prop_assert!((v - (low + width * w / bins as f64)).abs() <= 1e-9 * (1.0 + low.abs() + width));
        }
    }

    #[test]
    fn loop_modes_partition_cells(cell in any::<i64>()) {
        prop_assert_eq!(LoopMode::Negative.enters(cell), cell < 0);
        prop_assert_eq!(LoopMode::NonPositive.enters(cell), cell <= 0);
        prop_assert_eq!(LoopMode::ClassicZero.enters(cell), cell != 0);
    }
}
