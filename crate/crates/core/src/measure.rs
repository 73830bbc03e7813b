//! Finitely supported probability measures on a dual set: exact integration,
//! the superlevel mass bound, the measure-driven decomposition into classes
//! `{f : ∫f dμ > 1/n}`, and the truncated null-generator demonstrator.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chain::SigmaBccDecomposition;
use crate::error::Error;
use crate::expr::LatticeExpr;
use crate::geometry::{BallKind, DualBallSet, Functional, SpaceSpec};
use crate::norm::{min_on_k, sup_norm_on_k};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Functional,
    pub weight: Rat,
}

/// A finitely supported probability measure with atoms inside K.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMeasure {
    pub atoms: Vec<Atom>,
}

impl FiniteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Self {
        FiniteMeasure { atoms }
    }

    /// Checks positivity, total mass one, and atom membership in K.
    pub fn validate(&self, k: &DualBallSet) -> Result<(), Error> {
        let mut total = Rat::zero();
        for (idx, atom) in self.atoms.iter().enumerate() {
            if !atom.weight.is_positive() {
                return Err(Error::Precondition(format!(
                    "atom {idx} has non-positive weight {}",
                    atom.weight
                )));
            }
            if !k.contains(&atom.point)? {
                return Err(Error::Precondition(format!(
                    "atom {idx} lies outside K"
                )));
            }
            total += &atom.weight;
        }
        if total != Rat::one() {
            return Err(Error::Precondition(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(())
    }
}

/// Exact integral `Σ weight · f(point)`.
pub fn integrate(f: &LatticeExpr, mu: &FiniteMeasure) -> Result<Rat, Error> {
    let mut total = Rat::zero();
    for atom in &mu.atoms {
        total += &(&atom.weight * &f.eval(atom.point.coords())?);
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuperlevelReport {
    /// ε = ∫ f dμ.
    pub integral: Rat,
    /// The superlevel threshold ε/2.
    pub threshold: Rat,
    /// μ{f >= ε/2}.
    pub superlevel_mass: Rat,
    /// ‖f‖∞ over K.
    pub sup_norm: Rat,
    /// The guaranteed lower bound (ε/2)/‖f‖∞ for the superlevel mass.
    pub mass_bound: Rat,
    pub pass: bool,
}

/// Quantitative superlevel inequality: with ε = ∫f dμ > 0 and
/// A = {f >= ε/2}, splitting the integral gives
/// ε <= ‖f‖∞·μ(A) + ε/2, hence μ(A) >= (ε/2)/‖f‖∞.
pub fn superlevel_bound_check(
    f: &LatticeExpr,
    mu: &FiniteMeasure,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<SuperlevelReport, Error> {
    mu.validate(k)?;
    if min_on_k(f, k, piece_cap)?.is_negative() {
        return Err(Error::Precondition("f is not positive on K".into()));
    }
    let integral = integrate(f, mu)?;
    if !integral.is_positive() {
        return Err(Error::Precondition(
            "the integral of f must be positive".into(),
        ));
    }
    let threshold = &integral / &Rat::integer(2);
    let mut superlevel_mass = Rat::zero();
    for atom in &mu.atoms {
        if f.eval(atom.point.coords())? >= threshold {
            superlevel_mass += &atom.weight;
        }
    }
    let sup_norm = sup_norm_on_k(f, k, piece_cap)?;
    let mass_bound = &threshold / &sup_norm;
    let pass = superlevel_mass >= mass_bound;
    Ok(SuperlevelReport {
        integral,
        threshold,
        superlevel_mass,
        sup_norm,
        mass_bound,
        pass,
    })
}

/// Measure-driven decomposition: each member lands in the least class
/// n >= 2 with ∫f dμ > 1/n. Members must be positive, nonzero in integral,
/// and sup-normalized (‖f‖∞ <= 1) so that n disjoint members of class n
/// would force ∫ Σ f_i > 1 against Σ f_i = sup f_i <= 1.
pub fn horn_tarski_classes(
    family: &[LatticeExpr],
    mu: &FiniteMeasure,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<SigmaBccDecomposition, Error> {
    mu.validate(k)?;
    let mut decomposition = SigmaBccDecomposition::default();
    for (idx, f) in family.iter().enumerate() {
        if min_on_k(f, k, piece_cap)?.is_negative() {
            return Err(Error::Precondition(format!(
                "member {idx} is not positive on K"
            )));
        }
        if sup_norm_on_k(f, k, piece_cap)? > Rat::one() {
            return Err(Error::Precondition(format!(
                "member {idx} is not sup-normalized on K"
            )));
        }
        let integral = integrate(f, mu)?;
        if !integral.is_positive() {
            return Err(Error::Precondition(format!(
                "member {idx} is null for the measure"
            )));
        }
        // Least n with integral > 1/n is floor(1/integral) + 1.
        let n_big = integral.recip().floor_int() + BigInt::from(1);
        let n: usize = n_big
            .try_into()
            .map_err(|_| Error::Resource("class index overflows".into()))?;
        let n = n.max(2);
        decomposition.classes.entry(n).or_default().push(f.clone());
    }
    Ok(decomposition)
}

/// Coordinate functions with zero integral on the truncated sequence space:
/// E is the gamma_size-dimensional sup-norm space, K its dual (l1) ball, and
/// the generators are f_γ(x) = |x_γ|. Returns the 1-based labels γ at which
/// every atom vanishes.
pub fn null_generators(
    gamma_size: usize,
    mu: &FiniteMeasure,
) -> Result<Vec<usize>, Error> {
    if gamma_size == 0 {
        return Err(Error::Precondition("gamma_size must be >= 1".into()));
    }
    let space = SpaceSpec::new(gamma_size, BallKind::Linf)?;
    let k = DualBallSet::full(space);
    mu.validate(&k)?;
    let mut nulls = Vec::new();
    for gamma in 0..gamma_size {
        let vanishes = mu
            .atoms
            .iter()
            .all(|atom| atom.point.coords()[gamma].is_zero());
        if vanishes {
            nulls.push(gamma + 1);
        }
    }
    Ok(nulls)
}

/// The coordinate generator f_γ = |δ_{e_γ}| (γ is 1-based).
pub fn coordinate_generator(gamma_size: usize, gamma: usize) -> Result<LatticeExpr, Error> {
    if gamma == 0 || gamma > gamma_size {
        return Err(Error::Precondition(format!(
            "gamma = {gamma} out of range 1..={gamma_size}"
        )));
    }
    let mut v = vec![Rat::zero(); gamma_size];
    v[gamma - 1] = Rat::one();
    Ok(LatticeExpr::abs(LatticeExpr::gen(v)))
}
