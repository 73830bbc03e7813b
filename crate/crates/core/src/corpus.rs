//! Deterministic pseudo-random corpora: lattice expressions (positive by
//! construction when asked), functionals inside a dual set, and finitely
//! supported probability measures. Everything is a pure function of the
//! ChaCha stream, so identical seeds give identical artifacts.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::expr::LatticeExpr;
use crate::geometry::{DualBallSet, Functional};
use crate::measure::{Atom, FiniteMeasure};
use crate::rat::Rat;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    rng.next_u64() % bound
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = pick(rng, 9) as i64 - 4;
    let den = 1 + pick(rng, 2) as i64;
    Rat::new(num, den)
}

fn positive_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(1 + pick(rng, 6) as i64, 1 + pick(rng, 2) as i64)
}

/// A nonzero generator vector with small rational entries.
pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..dim).map(|_| small_rat(rng)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// An arbitrary expression of the given depth.
pub fn random_expr(rng: &mut ChaCha8Rng, dim: usize, depth: usize) -> LatticeExpr {
    if depth == 0 {
        return LatticeExpr::gen(random_vector(rng, dim));
    }
    match pick(rng, 7) {
        0 => LatticeExpr::add(
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        1 => LatticeExpr::scale(small_rat(rng), random_expr(rng, dim, depth - 1)),
        2 => LatticeExpr::sup(
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        3 => LatticeExpr::inf(
            random_expr(rng, dim, depth - 1),
            random_expr(rng, dim, depth - 1),
        ),
        4 => LatticeExpr::abs(random_expr(rng, dim, depth - 1)),
        5 => LatticeExpr::neg(random_expr(rng, dim, depth - 1)),
        _ => LatticeExpr::gen(random_vector(rng, dim)),
    }
}

/// A pointwise-nonnegative expression, positive by construction.
pub fn random_positive_expr(rng: &mut ChaCha8Rng, dim: usize, depth: usize) -> LatticeExpr {
    if depth == 0 {
        return LatticeExpr::abs(LatticeExpr::gen(random_vector(rng, dim)));
    }
    match pick(rng, 5) {
        0 => LatticeExpr::add(
            random_positive_expr(rng, dim, depth - 1),
            random_positive_expr(rng, dim, depth - 1),
        ),
        1 => LatticeExpr::sup(
            random_positive_expr(rng, dim, depth - 1),
            random_positive_expr(rng, dim, depth - 1),
        ),
        2 => LatticeExpr::inf(
            random_positive_expr(rng, dim, depth - 1),
            random_positive_expr(rng, dim, depth - 1),
        ),
        3 => LatticeExpr::scale(positive_rat(rng), random_positive_expr(rng, dim, depth - 1)),
        _ => LatticeExpr::abs(random_expr(rng, dim, depth - 1)),
    }
}

/// A random point of K: a grid direction scaled to a random fraction of its
/// K-gauge. Falls back to rejection when a restriction polytope is present.
pub fn random_point_in_k(rng: &mut ChaCha8Rng, k: &DualBallSet) -> Result<Functional, Error> {
    let dim = k.base().dim();
    for _ in 0..500 {
        let raw: Vec<Rat> = (0..dim).map(|_| small_rat(rng)).collect();
        let shrink = Rat::new(1 + pick(rng, 8) as i64, 8);
        if k.restriction().is_none() {
            let gauge = k.base().dual_norm_exact(&Functional(raw.clone()))? / k.scale();
            if gauge.is_zero() {
                return Ok(Functional(vec![Rat::zero(); dim]));
            }
            let factor = &shrink / &gauge;
            return Ok(Functional(raw.iter().map(|c| c * &factor).collect()));
        }
        let candidate = Functional(
            raw.iter()
                .map(|c| c * &(&shrink * k.scale()) / Rat::integer(4))
                .collect(),
        );
        if k.contains(&candidate)? {
            return Ok(candidate);
        }
    }
    Ok(Functional(vec![Rat::zero(); dim]))
}

/// A finitely supported probability measure with the given number of atoms,
/// all inside K, weights summing to one.
pub fn random_measure(
    rng: &mut ChaCha8Rng,
    k: &DualBallSet,
    atoms: usize,
) -> Result<FiniteMeasure, Error> {
    assert!(atoms >= 1);
    let mut raw_weights: Vec<Rat> = (0..atoms)
        .map(|_| Rat::new(1 + pick(rng, 16) as i64, 1))
        .collect();
    let total = raw_weights
        .iter()
        .fold(Rat::zero(), |acc, w| acc + w);
    for w in raw_weights.iter_mut() {
        *w /= &total;
    }
    let mut out = Vec::with_capacity(atoms);
    for weight in raw_weights {
        out.push(Atom {
            point: random_point_in_k(rng, k)?,
            weight,
        });
    }
    let mu = FiniteMeasure::new(out);
    mu.validate(k)?;
    Ok(mu)
}

/// The deterministic positive-expression family emitted by the corpus
/// command: DSL strings, depth <= 4.
pub fn corpus_family(seed: u64, size: usize, dim: usize) -> Result<Vec<String>, Error> {
    if size == 0 {
        return Err(Error::Precondition("corpus size must be >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(size);
    for _ in 0..size {
        let depth = 1 + (pick(&mut rng, 3) as usize);
        out.push(random_positive_expr(&mut rng, dim, depth.min(4)).to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::fan::{is_nonneg, DEFAULT_PIECE_CAP};
    use crate::geometry::{BallKind, SpaceSpec};

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus_family(9, 8, 2).unwrap();
        let b = corpus_family(9, 8, 2).unwrap();
        assert_eq!(a, b);
        let c = corpus_family(10, 8, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn corpus_size_zero_rejected() {
        assert!(corpus_family(1, 0, 2).is_err());
    }

    #[test]
    fn corpus_members_parse_back_and_are_positive() {
        for src in corpus_family(3, 10, 2).unwrap() {
            let e = parse(&src).unwrap();
            assert_eq!(e.to_string(), src);
            assert!(is_nonneg(&e, DEFAULT_PIECE_CAP).unwrap(), "{src}");
        }
    }

    #[test]
    fn random_points_live_in_k() {
        let k = DualBallSet::full(SpaceSpec::new(3, BallKind::L1).unwrap());
        let mut rng = rng_from_seed(4);
        for _ in 0..50 {
            let p = random_point_in_k(&mut rng, &k).unwrap();
            assert!(k.contains(&p).unwrap());
        }
    }

    #[test]
    fn random_measures_validate() {
        let k = DualBallSet::full(SpaceSpec::new(2, BallKind::Linf).unwrap());
        let mut rng = rng_from_seed(8);
        for _ in 0..20 {
            let atoms = 1 + (rng.next_u64() % 4) as usize;
            let mu = random_measure(&mut rng, &k, atoms).unwrap();
            mu.validate(&k).unwrap();
        }
    }
}
