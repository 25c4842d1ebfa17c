//! Seeded random propositional formulas.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

pub const DEFAULT_SEED: u64 = 0x5eed;

const ATOM_NAMES: [&str; 8] = ["P", "Q", "R", "S", "T", "U", "V", "W"];

/// A formula with exactly `connectives` occurrences of `∧ ∨ → ¬` over the
/// first `atoms` atom names (capped at 8). Leaves are `⊥` one time in ten.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, connectives: usize, atoms: usize) -> Formula {
    let atoms = atoms.clamp(1, ATOM_NAMES.len());
    if connectives == 0 {
        return if rng.gen_ratio(1, 10) {
            Formula::Bottom
        } else {
            Formula::prop(ATOM_NAMES[rng.gen_range(0..atoms)])
        };
    }
    let rest = connectives - 1;
    // Implication is drawn twice as often; it is what makes tautologies common.
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, rest, atoms)),
        op => {
            let left = rng.gen_range(0..=rest);
            let a = random_formula(rng, left, atoms);
            let b = random_formula(rng, rest - left, atoms);
            match op {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
    }
}

/// `count` formulas with up to `max_connectives` connectives each, reproducible from `seed`.
pub fn sample(seed: u64, count: usize, max_connectives: usize, atoms: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(0..=max_connectives);
            random_formula(&mut rng, n, atoms)
        })
        .collect()
}

/// Counts `∧ ∨ → ¬`, with `¬A` counted once rather than as `A → ⊥`.
pub fn connective_count(f: &Formula) -> usize {
    use Formula::*;
    if let Some(a) = f.as_negation() {
        return 1 + connective_count(a);
    }
    match f {
        Bottom | Atom(..) => 0,
        And(a, b) | Or(a, b) | Imp(a, b) => 1 + connective_count(a) + connective_count(b),
        Forall(_, a) | Exists(_, a) => 1 + connective_count(a),
    }
}
