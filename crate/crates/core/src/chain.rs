//! Classification of positive functions into countable classes, the
//! interval-partition coloring on a classified family, the triple-witness
//! pipeline and the bounded-chain-condition verifier.
//!
//! A classified function carries a base point in (1/3)K where it is large, a
//! canonical set of test vectors, and a box radius δ certified by a Lipschitz
//! modulus so that f oscillates by less than ε/2 on the box neighborhood of
//! the base point. For a family sharing one class index, the coloring
//! records, digit by digit, which δ-interval of [-1,1] contains the pairing
//! of one member's base point with another member's test vector; a triple
//! witness of that coloring yields y* = x_i* - x_j* + x_k* at which both f_i
//! and f_k stay above ε/2.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr::LatticeExpr;
use crate::fan::lipschitz_box_bound;
use crate::geometry::{BallKind, DualBallSet, Functional, SpaceSpec};
use crate::norm::{disjoint, max_abs_on_k, min_on_k, sup_norm_on_k, Disjointness};
use crate::ramsey::{lemma22_witness, Coloring};
use crate::rat::{dot, Rat};

/// Shared index (n, δ, ε) of a decomposition class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIndex {
    pub n: usize,
    pub delta: Rat,
    pub eps: Rat,
}

impl ClassIndex {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 {
            return Err(Error::Precondition("index needs n >= 1".into()));
        }
        if !self.delta.is_positive() || self.delta > Rat::integer(2) {
            return Err(Error::Precondition("delta must lie in (0, 2]".into()));
        }
        if !self.eps.is_positive() {
            return Err(Error::Precondition("eps must be positive".into()));
        }
        Ok(())
    }
}

/// A positive function with its base point, test vectors and class index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifiedFunction {
    pub expr: LatticeExpr,
    pub x_base: Functional,
    pub test_vectors: Vec<Vec<Rat>>,
    pub index: ClassIndex,
}

impl ClassifiedFunction {
    /// Re-checks the three class invariants against K, exactly.
    pub fn validate(&self, k: &DualBallSet, piece_cap: usize) -> Result<(), Error> {
        self.index.validate()?;
        if self.test_vectors.len() != self.index.n {
            return Err(Error::Precondition(format!(
                "index says {} test vectors, got {}",
                self.index.n,
                self.test_vectors.len()
            )));
        }
        let third = k.scaled(&Rat::new(1, 3))?;
        if !third.contains(&self.x_base)? {
            return Err(Error::Precondition(
                "base point lies outside (1/3)K".into(),
            ));
        }
        let at_base = self.expr.eval(self.x_base.coords())?.abs();
        if at_base < self.index.eps {
            return Err(Error::Precondition(format!(
                "|f(x_base)| = {at_base} < eps = {}",
                self.index.eps
            )));
        }
        let modulus = lipschitz_box_bound(&self.expr, &self.test_vectors, piece_cap)?;
        let half_eps = &self.index.eps / &Rat::integer(2);
        if &modulus * &self.index.delta >= half_eps {
            return Err(Error::Precondition(format!(
                "oscillation certificate fails: L·delta = {} >= eps/2 = {half_eps}",
                &modulus * &self.index.delta
            )));
        }
        Ok(())
    }
}

/// m equal half-open intervals covering [-1, 1], the last one closed; the
/// diameter 2/m is strictly below delta for m = floor(2/delta) + 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPartition {
    m: usize,
}

impl IntervalPartition {
    pub fn for_delta(delta: &Rat) -> Result<Self, Error> {
        if !delta.is_positive() || *delta > Rat::integer(2) {
            return Err(Error::Precondition("delta must lie in (0, 2]".into()));
        }
        let m_big = (Rat::integer(2) / delta).floor_int() + BigInt::from(1);
        let m: usize = m_big
            .try_into()
            .map_err(|_| Error::Resource("interval count overflows".into()))?;
        if m > 1 << 20 {
            return Err(Error::Resource(format!("{m} intervals exceed the cap")));
        }
        let part = IntervalPartition { m };
        debug_assert!(part.diameter() < *delta);
        Ok(part)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn diameter(&self) -> Rat {
        Rat::new(2, self.m as i64)
    }

    /// Left endpoint of interval s (s = 0..=m gives all breakpoints).
    pub fn breakpoint(&self, s: usize) -> Rat {
        Rat::integer(-1) + Rat::new(2 * s as i64, self.m as i64)
    }

    /// Index of the interval containing v in [-1, 1].
    pub fn index_of(&self, v: &Rat) -> Result<usize, Error> {
        if *v < Rat::integer(-1) || *v > Rat::integer(1) {
            return Err(Error::Internal(format!(
                "pairing value {v} escapes [-1, 1]"
            )));
        }
        let scaled = (v + &Rat::one()) * Rat::new(self.m as i64, 2);
        let idx: usize = scaled
            .floor_int()
            .try_into()
            .map_err(|_| Error::Internal("interval index overflow".into()))?;
        Ok(idx.min(self.m - 1))
    }
}

/// Classifies f over K: the base point maximizes |f| over (1/3)K (first
/// canonical (piece, sign) slot attaining the max, optimizer refined to the
/// lexicographically least point of its face), ε is half the maximum rounded
/// down to denominator <= 10^6, the test vectors are the normalized standard
/// basis, and δ is the largest power of two passing the oscillation
/// certificate.
pub fn classify(
    f: &LatticeExpr,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<ClassifiedFunction, Error> {
    let dim = f.dim()?;
    if dim != k.base().dim() {
        return Err(Error::dim(k.base().dim(), dim));
    }
    if min_on_k(f, k, piece_cap)?.is_negative() {
        return Err(Error::Precondition("f is not positive on K".into()));
    }
    let third = k.scaled(&Rat::new(1, 3))?;
    let (max_abs, x_base) = max_abs_on_k(f, &third, piece_cap)?;
    if max_abs.is_zero() {
        return Err(Error::Precondition(
            "f vanishes identically on (1/3)K".into(),
        ));
    }
    let test_vectors = normalized_basis(k.base())?;
    let eps = {
        let half = &max_abs / &Rat::integer(2);
        let rounded = half.round_down_denom(&BigInt::from(1_000_000));
        if rounded.is_zero() {
            half
        } else {
            rounded
        }
    };
    let modulus = lipschitz_box_bound(f, &test_vectors, piece_cap)?;
    let delta = certified_delta(&modulus, &eps);
    let classified = ClassifiedFunction {
        expr: f.clone(),
        x_base,
        test_vectors,
        index: ClassIndex {
            n: dim,
            delta,
            eps,
        },
    };
    classified.validate(k, piece_cap)?;
    Ok(classified)
}

/// Largest delta = 2^t (t <= 1) with modulus·delta < eps/2.
pub fn certified_delta(modulus: &Rat, eps: &Rat) -> Rat {
    let half_eps = eps / &Rat::integer(2);
    let mut delta = Rat::integer(2);
    while modulus * &delta >= half_eps {
        delta = delta / Rat::integer(2);
    }
    delta
}

fn normalized_basis(spec: &SpaceSpec) -> Result<Vec<Vec<Rat>>, Error> {
    let dim = spec.dim();
    (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            let norm = match spec.ball() {
                // Basis vectors have unit norm in all three named balls.
                BallKind::L1 | BallKind::Linf | BallKind::L2 => Rat::one(),
                BallKind::Polytope(_) => spec.primal_norm_exact(&v)?,
            };
            if norm != Rat::one() {
                for c in v.iter_mut() {
                    *c /= &norm;
                }
            }
            Ok(v)
        })
        .collect()
}

/// Classifies several expressions and rebuilds them over one shared index:
/// ε is the least member ε, δ the largest power of two certified against the
/// largest Lipschitz modulus in the family.
pub fn classify_family(
    exprs: &[LatticeExpr],
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<Vec<ClassifiedFunction>, Error> {
    if exprs.is_empty() {
        return Err(Error::Precondition("empty family".into()));
    }
    let classified: Vec<ClassifiedFunction> = exprs
        .iter()
        .map(|f| classify(f, k, piece_cap))
        .collect::<Result<_, _>>()?;
    let eps = classified
        .iter()
        .map(|c| c.index.eps.clone())
        .min()
        .expect("nonempty");
    let mut modulus = Rat::zero();
    for c in &classified {
        modulus = modulus.max(lipschitz_box_bound(&c.expr, &c.test_vectors, piece_cap)?);
    }
    let delta = certified_delta(&modulus, &eps);
    let n = classified[0].index.n;
    let shared = ClassIndex { n, delta, eps };
    let family: Vec<ClassifiedFunction> = classified
        .into_iter()
        .map(|mut c| {
            c.index = shared.clone();
            c
        })
        .collect();
    for member in &family {
        member.validate(k, piece_cap)?;
    }
    Ok(family)
}

/// The interval-partition coloring: digit p of c(a, b) is the interval of
/// `<x_base(b), x_p(a)>`, digits combined in base m with p = 0 least
/// significant.
pub fn build_coloring(family: &[ClassifiedFunction], k: &DualBallSet) -> Result<Coloring, Error> {
    if family.len() < 2 {
        return Err(Error::Precondition(
            "coloring needs at least two members".into(),
        ));
    }
    let index = &family[0].index;
    for (t, member) in family.iter().enumerate() {
        member.validate(k, crate::fan::DEFAULT_PIECE_CAP)?;
        if member.index != *index {
            return Err(Error::Precondition(format!(
                "member {t} has a different class index"
            )));
        }
    }
    for a in 0..family.len() {
        for b in (a + 1)..family.len() {
            if family[a].x_base == family[b].x_base {
                return Err(Error::Precondition(format!(
                    "members {a} and {b} share the base point"
                )));
            }
        }
    }
    let partition = IntervalPartition::for_delta(&index.delta)?;
    let m = partition.m() as u64;
    let alphabet = m
        .checked_pow(index.n as u32)
        .ok_or_else(|| Error::Resource("coloring alphabet overflows".into()))?;
    let n_members = family.len();
    let mut pairs = Vec::with_capacity(n_members * (n_members - 1));
    for a in 0..n_members {
        for b in 0..n_members {
            if a == b {
                continue;
            }
            let mut color: u64 = 0;
            let mut base = 1u64;
            for p in 0..index.n {
                let pairing = dot(family[b].x_base.coords(), &family[a].test_vectors[p]);
                let digit = partition.index_of(&pairing)? as u64;
                color += digit * base;
                base *= m;
            }
            pairs.push((a, b, color));
        }
    }
    Coloring::new(n_members, alphabet, &pairs)
}

/// Exact verification data attached to a found triple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub in_k: bool,
    pub in_u_i: bool,
    pub in_u_k: bool,
    pub f_i_at_witness: Rat,
    pub f_k_at_witness: Rat,
    pub eps_half: Rat,
}

impl WitnessChecks {
    pub fn all_pass(&self) -> bool {
        self.in_k
            && self.in_u_i
            && self.in_u_k
            && self.f_i_at_witness.abs() > self.eps_half
            && self.f_k_at_witness.abs() > self.eps_half
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub ystar: Functional,
    pub checks: WitnessChecks,
}

/// Runs the full pipeline on a family sharing one index: coloring, triple
/// search, witness construction y* = x_i* - x_j* + x_k*, and the three exact
/// checks. The checks hold whenever a triple is returned; a failure is a
/// bug in the pipeline, not a property of the data.
pub fn witness_triple(
    family: &[ClassifiedFunction],
    k: &DualBallSet,
) -> Result<Option<WitnessTriple>, Error> {
    if family.len() < 3 {
        return Ok(None);
    }
    let coloring = build_coloring(family, k)?;
    let Some(triple) = lemma22_witness(&coloring) else {
        return Ok(None);
    };
    let (i, j, kk) = (triple.i, triple.j, triple.k);
    let ystar: Vec<Rat> = family[i]
        .x_base
        .coords()
        .iter()
        .zip(family[j].x_base.coords())
        .zip(family[kk].x_base.coords())
        .map(|((xi, xj), xk)| xi - xj + xk)
        .collect();
    let ystar = Functional(ystar);
    let index = &family[0].index;
    let in_k = k.contains(&ystar)?;
    let in_u = |t: usize| -> Result<bool, Error> {
        for p in 0..index.n {
            let d: Vec<Rat> = ystar
                .coords()
                .iter()
                .zip(family[t].x_base.coords())
                .map(|(y, x)| y - x)
                .collect();
            if dot(&d, &family[t].test_vectors[p]).abs() >= index.delta {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let checks = WitnessChecks {
        in_k,
        in_u_i: in_u(i)?,
        in_u_k: in_u(kk)?,
        f_i_at_witness: family[i].expr.eval(ystar.coords())?,
        f_k_at_witness: family[kk].expr.eval(ystar.coords())?,
        eps_half: &index.eps / &Rat::integer(2),
    };
    if !checks.all_pass() {
        return Err(Error::Internal(format!(
            "triple ({i},{j},{kk}) failed its exact checks: {checks:?}"
        )));
    }
    Ok(Some(WitnessTriple {
        i,
        j,
        k: kk,
        ystar,
        checks,
    }))
}

/// Countable decomposition of positive functions, class n listing functions
/// meant to contain no n pairwise-disjoint members.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SigmaBccDecomposition {
    pub classes: std::collections::BTreeMap<usize, Vec<LatticeExpr>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaBccViolation {
    pub class: usize,
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaBccReport {
    pub pass: bool,
    pub violation: Option<SigmaBccViolation>,
}

/// Checks, via the disjointness oracle, that every n-subset of class n
/// contains a non-disjoint pair; reports the lexicographically first
/// violating subset otherwise.
pub fn sigma_bcc_verify(
    decomposition: &SigmaBccDecomposition,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<SigmaBccReport, Error> {
    use itertools::Itertools;
    for (&n, members) in &decomposition.classes {
        if n < 2 {
            return Err(Error::Precondition("classes are indexed from 2".into()));
        }
        for (t, f) in members.iter().enumerate() {
            if min_on_k(f, k, piece_cap)?.is_negative() {
                return Err(Error::Precondition(format!(
                    "class {n} member {t} is not positive on K"
                )));
            }
            if sup_norm_on_k(f, k, piece_cap)?.is_zero() {
                return Err(Error::Precondition(format!(
                    "class {n} member {t} vanishes on K"
                )));
            }
        }
        if members.len() < n {
            continue;
        }
        // Pairwise disjointness matrix, computed in parallel deterministically.
        let pairs: Vec<(usize, usize)> = (0..members.len())
            .combinations(2)
            .map(|v| (v[0], v[1]))
            .collect();
        let flags: Vec<bool> = {
            use rayon::prelude::*;
            pairs
                .par_iter()
                .map(|&(p, q)| {
                    matches!(
                        disjoint(&members[p], &members[q], k, piece_cap),
                        Ok(Disjointness::Disjoint)
                    )
                })
                .collect()
        };
        let mut disjoint_pair = vec![vec![false; members.len()]; members.len()];
        for (&(p, q), &flag) in pairs.iter().zip(&flags) {
            disjoint_pair[p][q] = flag;
            disjoint_pair[q][p] = flag;
        }
        for subset in (0..members.len()).combinations(n) {
            let all_disjoint = subset
                .iter()
                .combinations(2)
                .all(|pq| disjoint_pair[*pq[0]][*pq[1]]);
            if all_disjoint {
                return Ok(SigmaBccReport {
                    pass: false,
                    violation: Some(SigmaBccViolation {
                        class: n,
                        subset,
                    }),
                });
            }
        }
    }
    Ok(SigmaBccReport {
        pass: true,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::fan::DEFAULT_PIECE_CAP;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn l1(dim: usize) -> SpaceSpec {
        SpaceSpec::new(dim, BallKind::L1).unwrap()
    }

    fn full_k(dim: usize) -> DualBallSet {
        DualBallSet::full(l1(dim))
    }

    #[test]
    fn classify_abs_generator_dim1() {
        // Over (1/3)K = [-1/3, 1/3]: the max of |x| is 1/3 at the canonical
        // slot x = +1/3; eps = 1/6; L = 1 forces delta < 1/12, so 1/16.
        let f = parse("abs(gen(1))").unwrap();
        let c = classify(&f, &full_k(1), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(c.x_base.coords(), &[r(1, 3)]);
        assert_eq!(c.index.eps, r(1, 6));
        assert_eq!(c.test_vectors, vec![vec![Rat::one()]]);
        assert_eq!(c.index.delta, r(1, 16));
        assert_eq!(c.index.n, 1);
    }

    #[test]
    fn classify_rejects_zero_function() {
        let f = LatticeExpr::zero(1);
        assert!(matches!(
            classify(&f, &full_k(1), DEFAULT_PIECE_CAP),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn classify_base_point_is_scale_invariant() {
        let f = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
        let k = full_k(2);
        let a = classify(&f, &k, DEFAULT_PIECE_CAP).unwrap();
        let b = classify(
            &LatticeExpr::scale(r(2, 1), f.clone()),
            &k,
            DEFAULT_PIECE_CAP,
        )
        .unwrap();
        assert_eq!(a.x_base, b.x_base);
    }

    #[test]
    fn classify_is_deterministic() {
        let f = parse("add(abs(gen(1,0)),abs(gen(1,-1)))").unwrap();
        let k = full_k(2);
        let a = classify(&f, &k, DEFAULT_PIECE_CAP).unwrap();
        let b = classify(&f, &k, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(a.x_base, b.x_base);
        assert_eq!(a.index, b.index);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn interval_partition_shape() {
        let p = IntervalPartition::for_delta(&r(1, 4)).unwrap();
        assert_eq!(p.m(), 9);
        assert!(p.diameter() < r(1, 4));
        assert_eq!(p.breakpoint(0), r(-1, 1));
        assert_eq!(p.breakpoint(9), r(1, 1));
        // 0.15 lands in interval 5 of 9.
        assert_eq!(p.index_of(&r(3, 20)).unwrap(), 5);
        assert_eq!(p.index_of(&r(1, 1)).unwrap(), 8);
        assert_eq!(p.index_of(&r(-1, 1)).unwrap(), 0);
        assert!(p.index_of(&r(3, 2)).is_err());
        let p = IntervalPartition::for_delta(&Rat::integer(2)).unwrap();
        assert_eq!(p.m(), 2);
    }

    fn family_with_bases(bases: &[Rat]) -> Vec<ClassifiedFunction> {
        // Copies of |gen(1)| classified by hand over distinct base points,
        // sharing eps = 1/10 and the certified delta.
        let f = parse("abs(gen(1))").unwrap();
        let eps = r(1, 10);
        let delta = certified_delta(&Rat::one(), &eps);
        bases
            .iter()
            .map(|b| ClassifiedFunction {
                expr: f.clone(),
                x_base: Functional(vec![b.clone()]),
                test_vectors: vec![vec![Rat::one()]],
                index: ClassIndex {
                    n: 1,
                    delta: delta.clone(),
                    eps: eps.clone(),
                },
            })
            .collect()
    }

    #[test]
    fn coloring_digit_matches_interval_lookup() {
        let family = family_with_bases(&[r(1, 10), r(3, 20)]);
        let k = full_k(1);
        let coloring = build_coloring(&family, &k).unwrap();
        let part = IntervalPartition::for_delta(&family[0].index.delta).unwrap();
        assert_eq!(
            coloring.get(0, 1),
            part.index_of(&r(3, 20)).unwrap() as u64
        );
        assert_eq!(
            coloring.get(1, 0),
            part.index_of(&r(1, 10)).unwrap() as u64
        );
    }

    #[test]
    fn coloring_rejects_duplicate_bases() {
        let family = family_with_bases(&[r(1, 10), r(1, 10)]);
        assert!(matches!(
            build_coloring(&family, &full_k(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn witness_triple_needs_three_members() {
        let family = family_with_bases(&[r(1, 10), r(3, 20)]);
        assert!(witness_triple(&family, &full_k(1)).unwrap().is_none());
    }

    #[test]
    fn witness_triple_on_clustered_bases() {
        // Bases inside one delta-interval make the coloring constant, so the
        // lexicographically first triple (0,1,2) appears and all checks pass.
        let delta = certified_delta(&Rat::one(), &r(1, 10));
        let step = &delta / &Rat::integer(100);
        let bases = [
            r(1, 5),
            r(1, 5) + step.clone(),
            r(1, 5) + &step * &Rat::integer(2),
        ];
        let family = family_with_bases(&bases);
        let k = full_k(1);
        let w = witness_triple(&family, &k).unwrap().expect("triple");
        assert_eq!((w.i, w.j, w.k), (0, 1, 2));
        assert!(w.checks.all_pass());
        // Cross-module: the two functions meet at y*, so the oracle agrees.
        match disjoint(
            &family[w.i].expr,
            &family[w.k].expr,
            &k,
            DEFAULT_PIECE_CAP,
        )
        .unwrap()
        {
            Disjointness::Witness(_) => {}
            Disjointness::Disjoint => panic!("oracle contradicts the triple"),
        }
    }

    #[test]
    fn witness_triple_spread_bases_dim1_pipeline() {
        let family = family_with_bases(&[r(1, 3), r(1, 4), r(1, 5)]);
        let k = full_k(1);
        // The bases land in distinct intervals here, so the pipeline may
        // return none; when it returns a triple the checks passed already.
        if let Some(w) = witness_triple(&family, &k).unwrap() {
            assert!(w.checks.all_pass());
        }
    }

    #[test]
    fn classify_family_shares_an_index() {
        let exprs = vec![
            parse("abs(gen(1,0))").unwrap(),
            parse("abs(gen(0,1))").unwrap(),
            parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap(),
        ];
        let k = full_k(2);
        let family = classify_family(&exprs, &k, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(family.len(), 3);
        let index = &family[0].index;
        for member in &family {
            assert_eq!(member.index, *index);
            member.validate(&k, DEFAULT_PIECE_CAP).unwrap();
        }
    }

    #[test]
    fn sigma_bcc_duplicate_member_passes() {
        let f = parse("abs(gen(1))").unwrap();
        let mut d = SigmaBccDecomposition::default();
        d.classes.insert(2, vec![f.clone(), f]);
        let report = sigma_bcc_verify(&d, &full_k(1), DEFAULT_PIECE_CAP).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn sigma_bcc_detects_disjoint_parts() {
        let pos = parse("sup(gen(1),gen(0))").unwrap();
        let neg = parse("sup(neg(gen(1)),gen(0))").unwrap();
        let mut d = SigmaBccDecomposition::default();
        d.classes.insert(2, vec![pos, neg]);
        let report = sigma_bcc_verify(&d, &full_k(1), DEFAULT_PIECE_CAP).unwrap();
        assert!(!report.pass);
        let v = report.violation.unwrap();
        assert_eq!(v.class, 2);
        assert_eq!(v.subset, vec![0, 1]);
    }
}
