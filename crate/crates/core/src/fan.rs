//! Conical subdivisions of E* on which lattice expressions are linear.
//!
//! The switching hyperplanes of an expression are the loci where a `Sup`,
//! `Inf` or `Abs` node changes branch; the arrangement of those hyperplanes
//! cuts E* into full-dimensional cones, one exact gradient per cone. Cells
//! are found by incremental splitting with an interior-point LP per
//! candidate sign pattern, so degenerate (lower-dimensional) cones never
//! appear. Pieces are sorted canonically by sign pattern, `+` before `-`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::expr::LatticeExpr;
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::rat::{dot, Rat};

/// Default cap on the number of full-dimensional pieces.
pub const DEFAULT_PIECE_CAP: usize = 100_000;

const GRADIENT_SET_CAP: usize = 4096;

#[derive(Clone, Debug)]
pub struct FanPiece {
    /// Sign of `<h_i, .>` on this cone, per arrangement hyperplane.
    pub signs: Vec<i8>,
    pub gradient: Vec<Rat>,
    /// A strictly interior point of the cone.
    pub interior: Vec<Rat>,
}

impl FanPiece {
    /// Halfspace normals n with `<n, x> >= 0` cutting out this cone.
    pub fn halfspaces<'a>(
        &'a self,
        hyperplanes: &'a [Vec<Rat>],
    ) -> impl Iterator<Item = Vec<Rat>> + 'a {
        self.signs.iter().zip(hyperplanes).map(|(&s, h)| {
            if s >= 0 {
                h.clone()
            } else {
                h.iter().map(|c| -c).collect()
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConeFan {
    pub dim: usize,
    pub hyperplanes: Vec<Vec<Rat>>,
    pub pieces: Vec<FanPiece>,
}

impl ConeFan {
    /// Index of the first canonical piece whose closed cone contains `x`.
    pub fn piece_containing(&self, x: &[Rat]) -> Option<usize> {
        self.pieces.iter().position(|piece| {
            piece
                .signs
                .iter()
                .zip(&self.hyperplanes)
                .all(|(&s, h)| {
                    let v = dot(h, x);
                    if s >= 0 {
                        !v.is_negative()
                    } else {
                        !v.is_positive()
                    }
                })
        })
    }

    /// Evaluation through the piecewise gradients.
    pub fn eval(&self, x: &[Rat]) -> Result<Rat, Error> {
        let idx = self
            .piece_containing(x)
            .ok_or_else(|| Error::Internal("fan does not cover the point".into()))?;
        Ok(dot(&self.pieces[idx].gradient, x))
    }
}

/// Canonical form of a hyperplane normal: primitive integer vector with
/// positive leading entry. Returns None for the zero vector.
pub fn canon_normal(v: &[Rat]) -> Option<Vec<Rat>> {
    if v.iter().all(|c| c.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    let lead_negative = ints
        .iter()
        .find(|i| !i.is_zero())
        .map(|i| i.is_negative())
        .unwrap_or(false);
    if lead_negative {
        gcd = -gcd;
    }
    for i in ints.iter_mut() {
        *i = &*i / &gcd;
    }
    Some(
        ints.into_iter()
            .map(|i| Rat::from_big(i, BigInt::one()))
            .collect(),
    )
}

fn gradient_set(
    e: &LatticeExpr,
    hyperplanes: &mut BTreeSet<Vec<Rat>>,
) -> Result<BTreeSet<Vec<Rat>>, Error> {
    let set = match e {
        LatticeExpr::Gen(v) => BTreeSet::from([v.clone()]),
        LatticeExpr::Add(l, r) => {
            let gl = gradient_set(l, hyperplanes)?;
            let gr = gradient_set(r, hyperplanes)?;
            let mut out = BTreeSet::new();
            for a in &gl {
                for b in &gr {
                    out.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
                }
            }
            out
        }
        LatticeExpr::Scale(c, child) => gradient_set(child, hyperplanes)?
            .into_iter()
            .map(|g| g.iter().map(|x| x * c).collect())
            .collect(),
        LatticeExpr::Neg(child) => gradient_set(child, hyperplanes)?
            .into_iter()
            .map(|g| g.iter().map(|x| -x).collect())
            .collect(),
        LatticeExpr::Sup(l, r) | LatticeExpr::Inf(l, r) => {
            let gl = gradient_set(l, hyperplanes)?;
            let gr = gradient_set(r, hyperplanes)?;
            for a in &gl {
                for b in &gr {
                    let diff: Vec<Rat> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    if let Some(h) = canon_normal(&diff) {
                        hyperplanes.insert(h);
                    }
                }
            }
            gl.union(&gr).cloned().collect()
        }
        LatticeExpr::Abs(child) => {
            let g = gradient_set(child, hyperplanes)?;
            for a in &g {
                if let Some(h) = canon_normal(a) {
                    hyperplanes.insert(h);
                }
            }
            let mut out = g.clone();
            for a in g {
                out.insert(a.iter().map(|x| -x).collect());
            }
            out
        }
    };
    if set.len() > GRADIENT_SET_CAP {
        return Err(Error::Resource(format!(
            "gradient set exceeds {GRADIENT_SET_CAP} members"
        )));
    }
    Ok(set)
}

/// The switching hyperplanes of an expression, canonical and sorted.
pub fn switching_hyperplanes(e: &LatticeExpr) -> Result<Vec<Vec<Rat>>, Error> {
    let mut set = BTreeSet::new();
    gradient_set(e, &mut set)?;
    Ok(set.into_iter().collect())
}

/// Gradient of `e` on the cell containing `point`, valid as long as `point`
/// avoids every switching hyperplane of a branching node actually in play.
pub(crate) fn gradient_at(e: &LatticeExpr, point: &[Rat]) -> Vec<Rat> {
    match e {
        LatticeExpr::Gen(v) => v.clone(),
        LatticeExpr::Add(l, r) => {
            let gl = gradient_at(l, point);
            let gr = gradient_at(r, point);
            gl.iter().zip(&gr).map(|(x, y)| x + y).collect()
        }
        LatticeExpr::Scale(c, child) => gradient_at(child, point)
            .iter()
            .map(|x| x * c)
            .collect(),
        LatticeExpr::Neg(child) => gradient_at(child, point).iter().map(|x| -x).collect(),
        LatticeExpr::Sup(l, r) => {
            if l.eval_unchecked(point) >= r.eval_unchecked(point) {
                gradient_at(l, point)
            } else {
                gradient_at(r, point)
            }
        }
        LatticeExpr::Inf(l, r) => {
            if l.eval_unchecked(point) <= r.eval_unchecked(point) {
                gradient_at(l, point)
            } else {
                gradient_at(r, point)
            }
        }
        LatticeExpr::Abs(child) => {
            if !child.eval_unchecked(point).is_negative() {
                gradient_at(child, point)
            } else {
                gradient_at(child, point).iter().map(|x| -x).collect()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub signs: Vec<i8>,
    pub interior: Vec<Rat>,
}

/// Full-dimensional cells of the central arrangement of `hyperplanes`.
pub fn arrangement(
    dim: usize,
    hyperplanes: &[Vec<Rat>],
    piece_cap: usize,
) -> Result<Vec<Cell>, Error> {
    let mut cells = vec![Cell {
        signs: Vec::new(),
        interior: vec![Rat::zero(); dim],
    }];
    for (idx, h) in hyperplanes.iter().enumerate() {
        let mut next = Vec::new();
        for cell in &cells {
            // The side already holding the interior point stays valid with
            // the same point; only the opposite side needs an LP.
            let at_interior = dot(h, &cell.interior);
            let known: &[i8] = if at_interior.is_positive() {
                &[1]
            } else if at_interior.is_negative() {
                &[-1]
            } else {
                &[]
            };
            for sign in [1i8, -1] {
                let mut signs = cell.signs.clone();
                signs.push(sign);
                if known.contains(&sign) {
                    next.push(Cell {
                        signs,
                        interior: cell.interior.clone(),
                    });
                } else if let Some(interior) =
                    interior_point(dim, &hyperplanes[..=idx], &signs)
                {
                    next.push(Cell { signs, interior });
                }
            }
        }
        if next.len() > piece_cap {
            return Err(Error::Resource(format!(
                "arrangement exceeds the piece cap of {piece_cap}"
            )));
        }
        cells = next;
    }
    cells.sort_by_key(|c| sign_key(&c.signs));
    Ok(cells)
}

fn sign_key(signs: &[i8]) -> Vec<u8> {
    signs.iter().map(|&s| if s >= 0 { 0 } else { 1 }).collect()
}

/// A point with positive margin against every signed hyperplane, or None if
/// the open cone is empty (the sign pattern is degenerate).
fn interior_point(dim: usize, hyperplanes: &[Vec<Rat>], signs: &[i8]) -> Option<Vec<Rat>> {
    // Variables: x (free, dim) then margin t; maximize t with t <= 1 and
    // |x_j| <= 1 to keep the cone section bounded.
    let mut lp = Lp::new(dim + 1);
    let mut objective = vec![Rat::zero(); dim + 1];
    objective[dim] = Rat::one();
    lp.set_objective(objective);
    for (h, &s) in hyperplanes.iter().zip(signs) {
        let mut row = Vec::with_capacity(dim + 1);
        for c in h {
            row.push(if s >= 0 { c.clone() } else { -c });
        }
        row.push(Rat::integer(-1));
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    for j in 0..dim {
        let mut row = vec![Rat::zero(); dim + 1];
        row[j] = Rat::one();
        lp.add(row.clone(), Cmp::Le, Rat::one());
        row[j] = Rat::integer(-1);
        lp.add(row, Cmp::Le, Rat::one());
    }
    let mut cap = vec![Rat::zero(); dim + 1];
    cap[dim] = Rat::one();
    lp.add(cap, Cmp::Le, Rat::one());
    match lp.solve().expect("interior LP is well-formed") {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(dim);
            Some(point)
        }
        _ => None,
    }
}

/// Normal form of an expression: one linear gradient per cone.
pub fn to_fan(e: &LatticeExpr, piece_cap: usize) -> Result<ConeFan, Error> {
    let dim = e.dim()?;
    let hyperplanes = switching_hyperplanes(e)?;
    let cells = arrangement(dim, &hyperplanes, piece_cap)?;
    let pieces = cells
        .into_iter()
        .map(|cell| FanPiece {
            gradient: gradient_at(e, &cell.interior),
            signs: cell.signs,
            interior: cell.interior,
        })
        .collect();
    Ok(ConeFan {
        dim,
        hyperplanes,
        pieces,
    })
}

/// A common refinement carrying one gradient per expression per cone.
#[derive(Clone, Debug)]
pub struct JointFan {
    pub dim: usize,
    pub hyperplanes: Vec<Vec<Rat>>,
    pub pieces: Vec<JointPiece>,
}

#[derive(Clone, Debug)]
pub struct JointPiece {
    pub signs: Vec<i8>,
    pub interior: Vec<Rat>,
    pub gradients: Vec<Vec<Rat>>,
}

impl JointPiece {
    pub fn halfspaces<'a>(
        &'a self,
        hyperplanes: &'a [Vec<Rat>],
    ) -> impl Iterator<Item = Vec<Rat>> + 'a {
        self.signs.iter().zip(hyperplanes).map(|(&s, h)| {
            if s >= 0 {
                h.clone()
            } else {
                h.iter().map(|c| -c).collect()
            }
        })
    }
}

pub fn joint_fan(exprs: &[&LatticeExpr], piece_cap: usize) -> Result<JointFan, Error> {
    let mut dim = None;
    for e in exprs {
        let d = e.dim()?;
        match dim {
            None => dim = Some(d),
            Some(prev) if prev == d => {}
            Some(prev) => return Err(Error::dim(prev, d)),
        }
    }
    let dim = dim.ok_or_else(|| Error::Precondition("no expressions given".into()))?;
    let mut set = BTreeSet::new();
    for e in exprs {
        for h in switching_hyperplanes(e)? {
            set.insert(h);
        }
    }
    let hyperplanes: Vec<Vec<Rat>> = set.into_iter().collect();
    let cells = arrangement(dim, &hyperplanes, piece_cap)?;
    let pieces = cells
        .into_iter()
        .map(|cell| JointPiece {
            gradients: exprs.iter().map(|e| gradient_at(e, &cell.interior)).collect(),
            signs: cell.signs,
            interior: cell.interior,
        })
        .collect();
    Ok(JointFan {
        dim,
        hyperplanes,
        pieces,
    })
}

/// Modulus L with `|f(y*) - f(x*)| <= L · max_p |<y* - x*, x_p>|` everywhere.
///
/// Per piece, the gradient is written in terms of the test vectors with the
/// l1-minimal coefficient vector; the worst piece gives L. A segment between
/// two functionals crosses pieces with aligned increments, so the per-piece
/// bound globalizes.
pub fn lipschitz_box_bound(
    e: &LatticeExpr,
    test_vectors: &[Vec<Rat>],
    piece_cap: usize,
) -> Result<Rat, Error> {
    let dim = e.dim()?;
    for v in test_vectors {
        if v.len() != dim {
            return Err(Error::dim(dim, v.len()));
        }
    }
    if crate::geometry::rank(test_vectors) < dim {
        return Err(Error::Degenerate(
            "test vectors do not span the space".into(),
        ));
    }
    let fan = to_fan(e, piece_cap)?;
    let mut best = Rat::zero();
    for piece in &fan.pieces {
        let n = test_vectors.len();
        // Variables: alpha (free, n) then u >= |alpha| (n); minimize sum u.
        let mut lp = Lp::new(2 * n);
        let mut objective = vec![Rat::zero(); 2 * n];
        for item in objective.iter_mut().skip(n) {
            *item = Rat::integer(-1);
        }
        lp.set_objective(objective);
        for j in n..2 * n {
            lp.set_nonneg(j);
        }
        for coord in 0..dim {
            let mut row = vec![Rat::zero(); 2 * n];
            for (p, tv) in test_vectors.iter().enumerate() {
                row[p] = tv[coord].clone();
            }
            lp.add(row, Cmp::Eq, piece.gradient[coord].clone());
        }
        for p in 0..n {
            let mut row = vec![Rat::zero(); 2 * n];
            row[p] = Rat::one();
            row[n + p] = Rat::integer(-1);
            lp.add(row.clone(), Cmp::Le, Rat::zero());
            row[p] = Rat::integer(-1);
            lp.add(row, Cmp::Le, Rat::zero());
        }
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => best = best.max(-value),
            LpOutcome::Infeasible => {
                return Err(Error::Degenerate(
                    "gradient outside the span of the test vectors".into(),
                ))
            }
            LpOutcome::Unbounded => {
                return Err(Error::Internal("l1 representation LP unbounded".into()))
            }
        }
    }
    Ok(best)
}

/// Pointwise order: true iff g <= f everywhere on E*.
///
/// By positive homogeneity it suffices to check on the unit cube; each piece
/// of the common refinement contributes one LP.
pub fn dominates(f: &LatticeExpr, g: &LatticeExpr, piece_cap: usize) -> Result<bool, Error> {
    let fan = joint_fan(&[f, g], piece_cap)?;
    for piece in &fan.pieces {
        let diff: Vec<Rat> = piece.gradients[1]
            .iter()
            .zip(&piece.gradients[0])
            .map(|(gg, gf)| gg - gf)
            .collect();
        if diff.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut lp = Lp::new(fan.dim);
        lp.set_objective(diff);
        for h in piece.halfspaces(&fan.hyperplanes) {
            lp.add(h, Cmp::Ge, Rat::zero());
        }
        for j in 0..fan.dim {
            let mut row = vec![Rat::zero(); fan.dim];
            row[j] = Rat::one();
            lp.add(row.clone(), Cmp::Le, Rat::one());
            row[j] = Rat::integer(-1);
            lp.add(row, Cmp::Le, Rat::one());
        }
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => {
                if value.is_positive() {
                    return Ok(false);
                }
            }
            other => {
                return Err(Error::Internal(format!(
                    "domination LP not optimal: {other:?}"
                )))
            }
        }
    }
    Ok(true)
}

/// True iff f >= 0 pointwise.
pub fn is_nonneg(f: &LatticeExpr, piece_cap: usize) -> Result<bool, Error> {
    dominates(f, &LatticeExpr::zero(f.dim()?), piece_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use rand_core::RngCore;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn random_point(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> Vec<Rat> {
        (0..dim)
            .map(|_| {
                let num = (rng.next_u64() % 33) as i64 - 16;
                let den = 1 + (rng.next_u64() % 8) as i64;
                Rat::new(num, den)
            })
            .collect()
    }

    #[test]
    fn generator_fan_is_single_piece() {
        let fan = to_fan(&parse("gen(2,3)").unwrap(), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(fan.pieces.len(), 1);
        assert!(fan.hyperplanes.is_empty());
        assert_eq!(fan.pieces[0].gradient, vec![r(2, 1), r(3, 1)]);
    }

    #[test]
    fn abs_fan_in_dim_one() {
        let fan = to_fan(&parse("abs(gen(1))").unwrap(), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(fan.pieces.len(), 2);
        assert_eq!(fan.hyperplanes, vec![vec![Rat::one()]]);
        // Canonical order puts the + side first.
        assert_eq!(fan.pieces[0].signs, vec![1]);
        assert_eq!(fan.pieces[0].gradient, vec![Rat::one()]);
        assert_eq!(fan.pieces[1].gradient, vec![r(-1, 1)]);
    }

    #[test]
    fn sup_of_generators_splits_on_difference() {
        let fan = to_fan(
            &parse("sup(gen(1,0),gen(0,1))").unwrap(),
            DEFAULT_PIECE_CAP,
        )
        .unwrap();
        assert_eq!(fan.pieces.len(), 2);
        assert_eq!(fan.hyperplanes, vec![vec![Rat::one(), r(-1, 1)]]);
    }

    #[test]
    fn fan_fidelity_at_random_points() {
        use rand_core::SeedableRng;
        let exprs = [
            "sup(gen(1,0),gen(0,1))",
            "sup(abs(gen(1,0)),abs(gen(0,1)))",
            "inf(add(gen(1,2),neg(gen(0,1))),scale(3/2,abs(gen(1,-1))))",
            "abs(add(gen(1,0),scale(-2,gen(0,1))))",
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for src in exprs {
            let e = parse(src).unwrap();
            let fan = to_fan(&e, DEFAULT_PIECE_CAP).unwrap();
            for _ in 0..1000 {
                let x = random_point(&mut rng, 2);
                assert_eq!(fan.eval(&x).unwrap(), e.eval(&x).unwrap(), "{src}");
            }
        }
    }

    #[test]
    fn every_point_lies_in_some_piece() {
        use rand_core::SeedableRng;
        let e = parse("sup(abs(gen(1,1)),abs(gen(1,-2)))").unwrap();
        let fan = to_fan(&e, DEFAULT_PIECE_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let x = random_point(&mut rng, 2);
            assert!(fan.piece_containing(&x).is_some());
        }
    }

    #[test]
    fn continuity_across_shared_boundaries() {
        // Both gradients evaluate equally on a boundary point of two cones.
        let e = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
        let fan = to_fan(&e, DEFAULT_PIECE_CAP).unwrap();
        let boundary = [
            vec![Rat::one(), Rat::one()],
            vec![Rat::one(), r(-1, 1)],
            vec![Rat::zero(), Rat::one()],
        ];
        for x in &boundary {
            let vals: BTreeSet<String> = fan
                .pieces
                .iter()
                .filter(|p| {
                    p.signs.iter().zip(&fan.hyperplanes).all(|(&s, h)| {
                        let v = dot(h, x);
                        if s >= 0 {
                            !v.is_negative()
                        } else {
                            !v.is_positive()
                        }
                    })
                })
                .map(|p| dot(&p.gradient, x).to_string())
                .collect();
            assert_eq!(vals.len(), 1, "pieces disagree at {x:?}");
        }
    }

    #[test]
    fn piece_cap_is_enforced() {
        let e = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
        assert!(matches!(to_fan(&e, 3), Err(Error::Resource(_))));
    }

    #[test]
    fn lipschitz_examples() {
        let one = vec![vec![Rat::one()]];
        assert_eq!(
            lipschitz_box_bound(&parse("abs(gen(1))").unwrap(), &one, DEFAULT_PIECE_CAP)
                .unwrap(),
            Rat::one()
        );
        assert_eq!(
            lipschitz_box_bound(
                &parse("scale(3,abs(gen(1)))").unwrap(),
                &one,
                DEFAULT_PIECE_CAP
            )
            .unwrap(),
            r(3, 1)
        );
        let basis2 = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
        ];
        assert_eq!(
            lipschitz_box_bound(
                &parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap(),
                &basis2,
                DEFAULT_PIECE_CAP
            )
            .unwrap(),
            Rat::one()
        );
    }

    #[test]
    fn lipschitz_soundness_random_pairs() {
        use rand_core::SeedableRng;
        let e = parse("sup(abs(gen(1,-1)),scale(2,abs(gen(1,1))))").unwrap();
        let basis = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
        ];
        let bound = lipschitz_box_bound(&e, &basis, DEFAULT_PIECE_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let x = random_point(&mut rng, 2);
            let y = random_point(&mut rng, 2);
            let lhs = (e.eval(&y).unwrap() - e.eval(&x).unwrap()).abs();
            let mut box_gap = Rat::zero();
            for tv in &basis {
                let d: Vec<Rat> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
                box_gap = box_gap.max(dot(&d, tv).abs());
            }
            assert!(lhs <= &bound * &box_gap);
        }
    }

    #[test]
    fn lipschitz_rejects_non_spanning_vectors() {
        let e = parse("abs(gen(1,0))").unwrap();
        let err = lipschitz_box_bound(
            &e,
            &[vec![Rat::one(), Rat::zero()]],
            DEFAULT_PIECE_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn dominates_lattice_facts() {
        let f = parse("add(gen(1,2),neg(abs(gen(0,1))))").unwrap();
        let abs_f = LatticeExpr::abs(f.clone());
        assert!(dominates(&abs_f, &f, DEFAULT_PIECE_CAP).unwrap());
        let e1 = parse("gen(1,0)").unwrap();
        let e2 = parse("gen(0,1)").unwrap();
        assert!(!dominates(&e1, &e2, DEFAULT_PIECE_CAP).unwrap());
        let sup = LatticeExpr::sup(e1.clone(), e2.clone());
        let inf = LatticeExpr::inf(e1, e2);
        assert!(dominates(&sup, &inf, DEFAULT_PIECE_CAP).unwrap());
    }

    #[test]
    fn canon_normal_examples() {
        assert_eq!(
            canon_normal(&[r(-2, 3), r(4, 3)]).unwrap(),
            vec![Rat::one(), r(-2, 1)]
        );
        assert_eq!(canon_normal(&[Rat::zero(), Rat::zero()]), None);
    }
}
