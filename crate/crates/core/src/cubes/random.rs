//! Random configurations for tests and demos; all randomness comes from the
//! caller's generator.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{CubeConfig, ExactRational, GridWitness, LittleCube};

const STEPS: i64 = 8;

fn lerp(a: &ExactRational, b: &ExactRational, t: i64, of: i64) -> ExactRational {
    a + &((b - a) * ExactRational::new(t, of))
}

/// A random sub-box of `c`; with `strict` its closure lies in the interior.
fn sub_box<R: Rng + ?Sized>(rng: &mut R, c: &LittleCube, strict: bool) -> LittleCube {
    let (lo, hi) = if strict { (1, STEPS - 1) } else { (0, STEPS) };
    let intervals = c
        .intervals()
        .iter()
        .map(|(a, b)| {
            let x = rng.gen_range(lo..hi);
            let y = rng.gen_range(x + 1..=hi);
            (lerp(a, b, x, STEPS), lerp(a, b, y, STEPS))
        })
        .collect();
    LittleCube::new(intervals).expect("sub-box of a valid cube")
}

/// Cuts the unit cube into `n` boxes by repeated axis-parallel slicing.
pub fn guillotine<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> Vec<LittleCube> {
    let mut pieces = vec![LittleCube::unit(dim)];
    while pieces.len() < n {
        let idx = rng.gen_range(0..pieces.len());
        let piece = pieces.swap_remove(idx);
        let axis = rng.gen_range(0..dim);
        let (a, b) = piece.interval(axis).clone();
        let cut = lerp(&a, &b, rng.gen_range(1..STEPS), STEPS);
        let mut left = piece.intervals().to_vec();
        let mut right = left.clone();
        left[axis] = (a, cut.clone());
        right[axis] = (cut, b);
        pieces.push(LittleCube::new(left).expect("left half"));
        pieces.push(LittleCube::new(right).expect("right half"));
    }
    if n == 0 {
        pieces.clear();
    }
    pieces.shuffle(rng);
    pieces
}

/// A plain configuration of `n` cubes; each piece is shrunk with
/// probability 1/2, so touching cubes are common.
pub fn random_config<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> CubeConfig {
    let cubes = guillotine(rng, dim, n)
        .into_iter()
        .map(|c| if rng.gen_bool(0.5) { sub_box(rng, &c, false) } else { c })
        .collect();
    CubeConfig::plain(dim, cubes).expect("pieces of a partition")
}

/// A configuration whose closed cubes are pairwise disjoint and interior.
pub fn random_prime_config<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> CubeConfig {
    let cubes = guillotine(rng, dim, n)
        .into_iter()
        .map(|c| sub_box(rng, &c, true))
        .collect();
    CubeConfig::prime(dim, cubes).expect("strictly shrunk pieces")
}

/// A small configuration in `C_{k+ℓ}(n)` sampled inside the cells of a
/// random grid, together with that grid as a witness.
pub fn random_small_config<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    l: usize,
    n: usize,
) -> (CubeConfig, GridWitness) {
    let p = rng.gen_range(1..=n.max(1));
    let q = n.div_ceil(p).max(1) + rng.gen_range(0..=1);
    let f = random_prime_config(rng, k, p);
    let g = random_prime_config(rng, l, q);
    let mut cells: Vec<(usize, usize)> = (1..=p)
        .flat_map(|h| (1..=q).map(move |j| (h, j)))
        .collect();
    cells.shuffle(rng);
    cells.truncate(n);
    let witness = GridWitness {
        f,
        g,
        assignment: cells,
    };
    let cubes = witness
        .assignment
        .iter()
        .map(|&cell| sub_box(rng, &witness.cell(cell), true))
        .collect();
    let e = CubeConfig::plain(k + l, cubes).expect("cubes in distinct cells");
    (e, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::is_small;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_small_configs_are_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..6 {
            let (e, w) = random_small_config(&mut rng, 1, 2, n);
            assert_eq!(e.len(), n);
            assert!(is_small(&e, &w).unwrap());
        }
    }

    #[test]
    fn guillotine_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..8 {
            assert_eq!(random_config(&mut rng, 2, n).len(), n);
            assert!(random_prime_config(&mut rng, 3, n).is_prime());
        }
    }
}
