//! Seeded random fronts and moves.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::front::{fronts, FrontDiagram, FrontEvent, Orientation};
use crate::rewrite::{applicable_moves, MoveInstance};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random walk on the strand count for `steps` events, closed off with `R 1`s,
/// with random orientations.
pub fn random_front<R: Rng>(rng: &mut R, steps: usize, max_strands: usize) -> FrontDiagram {
    let max_strands = max_strands.max(2);
    let mut events = Vec::new();
    let mut n = 0usize;
    for _ in 0..steps {
        let mut kinds = Vec::new();
        if n + 2 <= max_strands {
            kinds.push('L');
        }
        if n >= 2 {
            kinds.push('X');
            kinds.push('R');
        }
        match kinds.choose(rng).copied() {
            Some('L') => {
                events.push(FrontEvent::left(rng.gen_range(1..=n + 1)));
                n += 2;
            }
            Some('X') => events.push(FrontEvent::cross(rng.gen_range(1..n))),
            _ => {
                events.push(FrontEvent::right(rng.gen_range(1..n)));
                n -= 2;
            }
        }
    }
    while n > 0 {
        events.push(FrontEvent::right(1));
        n -= 2;
    }
    let mut f = FrontDiagram::new(events).expect("random walk stays valid");
    let orient = (0..f.component_count())
        .map(|_| if rng.gen_bool(0.5) { Orientation::Positive } else { Orientation::Negative })
        .collect();
    f.set_orientations(orient).expect("one sign per component");
    f
}

/// A single-component random front; falls back to the trivial knot after 200 draws.
pub fn random_knot<R: Rng>(rng: &mut R, steps: usize, max_strands: usize) -> FrontDiagram {
    for _ in 0..200 {
        let f = random_front(rng, steps, max_strands);
        if f.component_count() == 1 {
            return f;
        }
    }
    fronts::trivial()
}

/// A uniformly chosen applicable move, if any.
pub fn random_move<R: Rng>(rng: &mut R, f: &FrontDiagram) -> Option<MoveInstance> {
    applicable_moves(f).choose(rng).copied()
}
