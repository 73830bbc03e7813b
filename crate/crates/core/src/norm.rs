//! The free-Banach-lattice norm, sup norms over dual sets, and the
//! disjointness oracle.
//!
//! The norm of a piecewise-linear f is
//! `sup_n sup { Σ|f(x_i*)| : sup_{x∈B_E} Σ|x_i*(x)| ≤ 1 }`.
//! Mapping each functional of a feasible tuple to the cone of the fan of f
//! containing it and to the sign of its f-value, two functionals sharing a
//! (cone, sign) slot merge by addition without changing the objective or
//! breaking feasibility. The supremum over all n therefore collapses to a
//! single exact LP with one vector variable per (cone, sign) slot; the
//! constraint absolute values are handled by epigraph variables. An
//! independent linearization over the refinement by the extreme-point
//! hyperplanes is kept for cross-validation.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr::LatticeExpr;
use crate::fan::{arrangement, canon_normal, joint_fan, switching_hyperplanes, to_fan};
use crate::geometry::{DualBallSet, Functional, SpaceSpec};
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::rat::{dot, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    ExactConeEnumeration,
    SamplingLowerBound,
}

/// A norm value together with the functionals attaining it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormCertificate {
    pub value: Rat,
    pub witnesses: Vec<Functional>,
    pub method: NormMethod,
}

impl NormCertificate {
    /// Re-checks the defining constraint and the objective, exactly.
    pub fn verify(&self, f: &LatticeExpr, spec: &SpaceSpec) -> Result<(), Error> {
        let mut total = Rat::zero();
        for w in &self.witnesses {
            total += &f.eval(w.coords())?.abs();
        }
        match self.method {
            NormMethod::ExactConeEnumeration => {
                if total != self.value {
                    return Err(Error::Internal(format!(
                        "certificate objective mismatch: {} vs {}",
                        total, self.value
                    )));
                }
            }
            NormMethod::SamplingLowerBound => {
                if total < self.value {
                    return Err(Error::Internal(
                        "sampling certificate overstates its tuple".into(),
                    ));
                }
            }
        }
        if spec.is_polyhedral() {
            for v in spec.ball_extreme_points()? {
                let mut s = Rat::zero();
                for w in &self.witnesses {
                    s += &dot(w.coords(), &v).abs();
                }
                if s > Rat::one() {
                    return Err(Error::Internal(format!(
                        "certificate constraint violated at extreme point {v:?}"
                    )));
                }
            }
        } else if !self.witnesses.is_empty() {
            // Euclidean ball: sup over B_2 of Σ|<x_i*, x>| is the largest
            // signed-sum norm, so compare squares exactly.
            let q = signed_sum_sq_max(
                &self
                    .witnesses
                    .iter()
                    .map(|w| w.coords().to_vec())
                    .collect::<Vec<_>>(),
            );
            if q > Rat::one() {
                return Err(Error::Internal(
                    "certificate constraint violated on the euclidean ball".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Polyhedral description of `scale·(B_{E*} ∩ restriction)` for LP assembly.
pub(crate) struct KPoly {
    pub dim: usize,
    /// Extreme points v of B_E; each contributes `<x, v> <= scale`. Empty
    /// when the l1 epigraph encoding is used instead.
    pub ball_points: Vec<Vec<Rat>>,
    /// The dual ball is the l1 ball (sup-norm primal): encode `‖x‖_1 <=
    /// scale` with epigraph variables rather than 2^dim extreme-point rows.
    pub l1_epigraph: bool,
    pub scale: Rat,
    /// Restriction vertices already multiplied by scale, hull-lifted in LPs.
    pub restriction: Option<Vec<Vec<Rat>>>,
}

pub(crate) fn k_poly(k: &DualBallSet) -> Result<KPoly, Error> {
    let l1_epigraph = matches!(k.base().ball(), crate::geometry::BallKind::Linf);
    let ball_points = if l1_epigraph {
        Vec::new()
    } else {
        k.base().ball_extreme_points()?
    };
    let restriction = k.restriction().map(|verts| {
        verts
            .iter()
            .map(|v| v.iter().map(|c| c * k.scale()).collect())
            .collect()
    });
    Ok(KPoly {
        dim: k.base().dim(),
        ball_points,
        l1_epigraph,
        scale: k.scale().clone(),
        restriction,
    })
}

/// Maximizes `<objective, x> (+ margin·t when requested)` over
/// `cone ∩ K`, where the cone is given by halfspace normals with
/// `<n, x> >= 0`. With `margins`, the objective is `t` subject to
/// `<m, x> >= t` for each margin vector. Returns (value, x).
fn max_over_cone_in_k(
    kp: &KPoly,
    halfspaces: &[Vec<Rat>],
    objective: Option<&[Rat]>,
    margins: &[Vec<Rat>],
) -> Result<(Rat, Vec<Rat>), Error> {
    let dim = kp.dim;
    let with_t = objective.is_none();
    let n_lambda = kp.restriction.as_ref().map_or(0, |r| r.len());
    let n_epi = if kp.l1_epigraph { dim } else { 0 };
    let n_vars = dim + usize::from(with_t) + n_lambda + n_epi;
    let t_col = dim;
    let lambda0 = dim + usize::from(with_t);
    let epi0 = lambda0 + n_lambda;

    let mut lp = Lp::new(n_vars);
    let mut obj = vec![Rat::zero(); n_vars];
    match objective {
        Some(o) => obj[..dim].clone_from_slice(o),
        None => obj[t_col] = Rat::one(),
    }
    lp.set_objective(obj);
    for j in lambda0..n_vars {
        lp.set_nonneg(j);
    }
    for h in halfspaces {
        let mut row = vec![Rat::zero(); n_vars];
        row[..dim].clone_from_slice(h);
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    for v in &kp.ball_points {
        let mut row = vec![Rat::zero(); n_vars];
        row[..dim].clone_from_slice(v);
        lp.add(row, Cmp::Le, kp.scale.clone());
    }
    if kp.l1_epigraph {
        // u_j >= |x_j| and sum u_j <= scale.
        for j in 0..dim {
            let mut row = vec![Rat::zero(); n_vars];
            row[j] = Rat::one();
            row[epi0 + j] = Rat::integer(-1);
            lp.add(row.clone(), Cmp::Le, Rat::zero());
            row[j] = Rat::integer(-1);
            lp.add(row, Cmp::Le, Rat::zero());
        }
        let mut row = vec![Rat::zero(); n_vars];
        for item in row.iter_mut().skip(epi0) {
            *item = Rat::one();
        }
        lp.add(row, Cmp::Le, kp.scale.clone());
    }
    if let Some(rest) = &kp.restriction {
        // x = Σ λ_j r_j, Σ λ_j = 1.
        for coord in 0..dim {
            let mut row = vec![Rat::zero(); n_vars];
            row[coord] = Rat::one();
            for (j, r) in rest.iter().enumerate() {
                row[lambda0 + j] = -&r[coord];
            }
            lp.add(row, Cmp::Eq, Rat::zero());
        }
        let mut row = vec![Rat::zero(); n_vars];
        for item in row.iter_mut().skip(lambda0).take(n_lambda) {
            *item = Rat::one();
        }
        lp.add(row, Cmp::Eq, Rat::one());
    }
    if with_t {
        for m in margins {
            let mut row = vec![Rat::zero(); n_vars];
            row[..dim].clone_from_slice(m);
            row[t_col] = Rat::integer(-1);
            lp.add(row, Cmp::Ge, Rat::zero());
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, mut point } => {
            point.truncate(dim);
            Ok((value, point))
        }
        other => Err(Error::Internal(format!(
            "cone/K optimization not optimal: {other:?}"
        ))),
    }
}

/// Exact max of |f| over K with a deterministic argmax: per (piece, sign)
/// slots in canonical order, the first slot attaining the global maximum
/// wins and its optimizer is refined to the lexicographically least point of
/// the optimal face.
pub fn max_abs_on_k(
    f: &LatticeExpr,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<(Rat, Functional), Error> {
    let fan = to_fan(f, piece_cap)?;
    let kp = k_poly(k)?;
    let mut slots: Vec<(usize, i8, Rat)> = Vec::new();
    for (idx, piece) in fan.pieces.iter().enumerate() {
        let halfspaces: Vec<Vec<Rat>> = piece.halfspaces(&fan.hyperplanes).collect();
        for sigma in [1i8, -1] {
            let objective: Vec<Rat> = piece
                .gradient
                .iter()
                .map(|c| if sigma > 0 { c.clone() } else { -c })
                .collect();
            let (value, _) = max_over_cone_in_k(&kp, &halfspaces, Some(&objective), &[])?;
            slots.push((idx, sigma, value));
        }
    }
    let best = slots
        .iter()
        .map(|(_, _, v)| v.clone())
        .max()
        .unwrap_or_else(Rat::zero);
    let Some((piece_idx, sigma, _)) = slots.into_iter().find(|(_, _, v)| *v == best) else {
        return Ok((Rat::zero(), Functional(vec![Rat::zero(); fan.dim])));
    };
    let piece = &fan.pieces[piece_idx];
    let halfspaces: Vec<Vec<Rat>> = piece.halfspaces(&fan.hyperplanes).collect();
    let objective: Vec<Rat> = piece
        .gradient
        .iter()
        .map(|c| if sigma > 0 { c.clone() } else { -c })
        .collect();
    let point = lex_min_argmax(&kp, &halfspaces, &objective, &best)?;
    Ok((best, Functional(point)))
}

/// Lexicographically least x in `cone ∩ K` with `<objective, x> = value`.
fn lex_min_argmax(
    kp: &KPoly,
    halfspaces: &[Vec<Rat>],
    objective: &[Rat],
    value: &Rat,
) -> Result<Vec<Rat>, Error> {
    let dim = kp.dim;
    let n_lambda = kp.restriction.as_ref().map_or(0, |r| r.len());
    let n_epi = if kp.l1_epigraph { dim } else { 0 };
    let n_vars = dim + n_lambda + n_epi;
    let epi0 = dim + n_lambda;
    let mut lp = Lp::new(n_vars);
    for j in dim..n_vars {
        lp.set_nonneg(j);
    }
    for h in halfspaces {
        let mut row = vec![Rat::zero(); n_vars];
        row[..dim].clone_from_slice(h);
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    for v in &kp.ball_points {
        let mut row = vec![Rat::zero(); n_vars];
        row[..dim].clone_from_slice(v);
        lp.add(row, Cmp::Le, kp.scale.clone());
    }
    if kp.l1_epigraph {
        for j in 0..dim {
            let mut row = vec![Rat::zero(); n_vars];
            row[j] = Rat::one();
            row[epi0 + j] = Rat::integer(-1);
            lp.add(row.clone(), Cmp::Le, Rat::zero());
            row[j] = Rat::integer(-1);
            lp.add(row, Cmp::Le, Rat::zero());
        }
        let mut row = vec![Rat::zero(); n_vars];
        for item in row.iter_mut().skip(epi0) {
            *item = Rat::one();
        }
        lp.add(row, Cmp::Le, kp.scale.clone());
    }
    if let Some(rest) = &kp.restriction {
        for coord in 0..dim {
            let mut row = vec![Rat::zero(); n_vars];
            row[coord] = Rat::one();
            for (j, r) in rest.iter().enumerate() {
                row[dim + j] = -&r[coord];
            }
            lp.add(row, Cmp::Eq, Rat::zero());
        }
        let mut row = vec![Rat::zero(); n_vars];
        for item in row.iter_mut().skip(dim).take(n_lambda) {
            *item = Rat::one();
        }
        lp.add(row, Cmp::Eq, Rat::one());
    }
    let mut pin = vec![Rat::zero(); n_vars];
    pin[..dim].clone_from_slice(objective);
    lp.add(pin, Cmp::Eq, value.clone());
    let mut point = vec![Rat::zero(); dim];
    for coord in 0..dim {
        let mut obj = vec![Rat::zero(); n_vars];
        obj[coord] = Rat::integer(-1);
        lp.set_objective(obj);
        match lp.solve()? {
            LpOutcome::Optimal { point: p, .. } => {
                point[coord] = p[coord].clone();
                let mut row = vec![Rat::zero(); n_vars];
                row[coord] = Rat::one();
                lp.add(row, Cmp::Eq, p[coord].clone());
            }
            other => {
                return Err(Error::Internal(format!(
                    "argmax refinement lost feasibility: {other:?}"
                )))
            }
        }
    }
    Ok(point)
}

/// Exact `max |f| over K` (the uniform norm on K).
pub fn sup_norm_on_k(
    f: &LatticeExpr,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<Rat, Error> {
    Ok(max_abs_on_k(f, k, piece_cap)?.0)
}

/// Exact `min f over K` (used for positivity preconditions).
pub fn min_on_k(f: &LatticeExpr, k: &DualBallSet, piece_cap: usize) -> Result<Rat, Error> {
    let fan = to_fan(f, piece_cap)?;
    let kp = k_poly(k)?;
    let mut best: Option<Rat> = None;
    for piece in &fan.pieces {
        let halfspaces: Vec<Vec<Rat>> = piece.halfspaces(&fan.hyperplanes).collect();
        let neg: Vec<Rat> = piece.gradient.iter().map(|c| -c).collect();
        let (value, _) = max_over_cone_in_k(&kp, &halfspaces, Some(&neg), &[])?;
        let min_here = -value;
        best = Some(match best {
            None => min_here,
            Some(b) => b.min(min_here),
        });
    }
    Ok(best.unwrap_or_else(Rat::zero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Disjointness {
    Disjoint,
    Witness(Functional),
}

/// Decides whether `min(f, g) = 0` everywhere on K for positive f, g; when
/// not, returns a point where both are strictly positive.
pub fn disjoint(
    f: &LatticeExpr,
    g: &LatticeExpr,
    k: &DualBallSet,
    piece_cap: usize,
) -> Result<Disjointness, Error> {
    if min_on_k(f, k, piece_cap)?.is_negative() {
        return Err(Error::Precondition("f is not positive on K".into()));
    }
    if min_on_k(g, k, piece_cap)?.is_negative() {
        return Err(Error::Precondition("g is not positive on K".into()));
    }
    let fan = joint_fan(&[f, g], piece_cap)?;
    let kp = k_poly(k)?;
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    for piece in &fan.pieces {
        let halfspaces: Vec<Vec<Rat>> = piece.halfspaces(&fan.hyperplanes).collect();
        let margins = [piece.gradients[0].clone(), piece.gradients[1].clone()];
        let (value, point) = max_over_cone_in_k(&kp, &halfspaces, None, &margins)?;
        let better = match &best {
            None => true,
            Some((b, _)) => value > *b,
        };
        if better {
            best = Some((value, point));
        }
    }
    match best {
        Some((t, point)) if t.is_positive() => Ok(Disjointness::Witness(Functional(point))),
        _ => Ok(Disjointness::Disjoint),
    }
}

/// The exact free-Banach-lattice norm with witnesses, via the single LP over
/// (cone, sign) slots of the fan of f.
pub fn fbl_norm_exact(
    f: &LatticeExpr,
    spec: &SpaceSpec,
    piece_cap: usize,
) -> Result<NormCertificate, Error> {
    if !spec.is_polyhedral() {
        return Err(Error::UnsupportedKind(
            "exact norm needs a polyhedral unit ball".into(),
        ));
    }
    let dim = f.dim()?;
    if dim != spec.dim() {
        return Err(Error::dim(spec.dim(), dim));
    }
    let fan = to_fan(f, piece_cap)?;
    let slots: Vec<(Vec<Vec<Rat>>, Vec<Rat>)> = fan
        .pieces
        .iter()
        .flat_map(|piece| {
            let halfspaces: Vec<Vec<Rat>> = piece.halfspaces(&fan.hyperplanes).collect();
            [1i8, -1].into_iter().filter_map(move |sigma| {
                if piece.gradient.iter().all(|c| c.is_zero()) {
                    return None;
                }
                let signed: Vec<Rat> = piece
                    .gradient
                    .iter()
                    .map(|c| if sigma > 0 { c.clone() } else { -c })
                    .collect();
                Some((halfspaces.clone(), signed))
            })
        })
        .collect();
    let cert = solve_slot_lp(f, spec, dim, &slots)?;
    cert.verify(f, spec)?;
    Ok(cert)
}

/// Independent exact route: linearize the constraint by refining the fan of f
/// with the hyperplanes of the extreme points, so each cell has fixed pairing
/// signs and no epigraph variables are needed.
pub fn fbl_norm_exact_refined(
    f: &LatticeExpr,
    spec: &SpaceSpec,
    piece_cap: usize,
) -> Result<NormCertificate, Error> {
    if !spec.is_polyhedral() {
        return Err(Error::UnsupportedKind(
            "exact norm needs a polyhedral unit ball".into(),
        ));
    }
    let dim = f.dim()?;
    if dim != spec.dim() {
        return Err(Error::dim(spec.dim(), dim));
    }
    let vplus = half_extreme_points(spec)?;
    let mut hyperplanes = std::collections::BTreeSet::new();
    for h in switching_hyperplanes(f)? {
        hyperplanes.insert(h);
    }
    for v in &vplus {
        if let Some(h) = canon_normal(v) {
            hyperplanes.insert(h);
        }
    }
    let hyperplanes: Vec<Vec<Rat>> = hyperplanes.into_iter().collect();
    let cells = arrangement(dim, &hyperplanes, piece_cap)?;

    // Variables: y_p per (cell, sign) slot with a nonzero gradient.
    struct Slot {
        halfspaces: Vec<Vec<Rat>>,
        signed_gradient: Vec<Rat>,
        pairing_signs: Vec<i8>,
    }
    let mut slots = Vec::new();
    for cell in &cells {
        let gradient = crate::fan::gradient_at(f, &cell.interior);
        if gradient.iter().all(|c| c.is_zero()) {
            continue;
        }
        let halfspaces: Vec<Vec<Rat>> = cell
            .signs
            .iter()
            .zip(&hyperplanes)
            .map(|(&s, h)| {
                if s >= 0 {
                    h.clone()
                } else {
                    h.iter().map(|c| -c).collect()
                }
            })
            .collect();
        let pairing_signs: Vec<i8> = vplus
            .iter()
            .map(|v| if dot(&cell.interior, v).is_negative() { -1 } else { 1 })
            .collect();
        for sigma in [1i8, -1] {
            let signed: Vec<Rat> = gradient
                .iter()
                .map(|c| if sigma > 0 { c.clone() } else { -c })
                .collect();
            slots.push(Slot {
                halfspaces: halfspaces.clone(),
                signed_gradient: signed,
                pairing_signs: pairing_signs.clone(),
            });
        }
    }

    let n_slots = slots.len();
    let n_vars = n_slots * dim;
    let mut lp = Lp::new(n_vars);
    let mut objective = vec![Rat::zero(); n_vars];
    for (p, slot) in slots.iter().enumerate() {
        objective[p * dim..(p + 1) * dim].clone_from_slice(&slot.signed_gradient);
    }
    lp.set_objective(objective);
    for (p, slot) in slots.iter().enumerate() {
        for h in &slot.halfspaces {
            let mut row = vec![Rat::zero(); n_vars];
            row[p * dim..(p + 1) * dim].clone_from_slice(h);
            lp.add(row, Cmp::Ge, Rat::zero());
        }
        let mut row = vec![Rat::zero(); n_vars];
        row[p * dim..(p + 1) * dim].clone_from_slice(&slot.signed_gradient);
        lp.add(row, Cmp::Ge, Rat::zero());
    }
    for (vi, v) in vplus.iter().enumerate() {
        let mut row = vec![Rat::zero(); n_vars];
        for (p, slot) in slots.iter().enumerate() {
            let s = slot.pairing_signs[vi];
            for (c, coeff) in v.iter().enumerate() {
                row[p * dim + c] = if s > 0 { coeff.clone() } else { -coeff };
            }
        }
        lp.add(row, Cmp::Le, Rat::one());
    }
    let (value, point) = match lp.solve()? {
        LpOutcome::Optimal { value, point } => (value, point),
        other => return Err(Error::Internal(format!("refined norm LP: {other:?}"))),
    };
    let mut witnesses = Vec::new();
    for p in 0..n_slots {
        let y = point[p * dim..(p + 1) * dim].to_vec();
        if y.iter().any(|c| !c.is_zero()) {
            witnesses.push(Functional(y));
        }
    }
    let cert = NormCertificate {
        value,
        witnesses,
        method: NormMethod::ExactConeEnumeration,
    };
    cert.verify(f, spec)?;
    Ok(cert)
}

fn half_extreme_points(spec: &SpaceSpec) -> Result<Vec<Vec<Rat>>, Error> {
    let mut vplus: Vec<Vec<Rat>> = Vec::new();
    for v in spec.ball_extreme_points()? {
        let neg: Vec<Rat> = v.iter().map(|c| -c).collect();
        if !vplus.contains(&neg) && !vplus.contains(&v) {
            vplus.push(v);
        }
    }
    Ok(vplus)
}

fn solve_slot_lp(
    f: &LatticeExpr,
    spec: &SpaceSpec,
    dim: usize,
    slots: &[(Vec<Vec<Rat>>, Vec<Rat>)],
) -> Result<NormCertificate, Error> {
    if slots.is_empty() {
        return Ok(NormCertificate {
            value: Rat::zero(),
            witnesses: Vec::new(),
            method: NormMethod::ExactConeEnumeration,
        });
    }
    let _ = f;
    let vplus = half_extreme_points(spec)?;
    let n_slots = slots.len();
    let y_vars = n_slots * dim;
    let s_vars = n_slots * vplus.len();
    let n_vars = y_vars + s_vars;
    let s_col = |p: usize, vi: usize| y_vars + p * vplus.len() + vi;

    let mut lp = Lp::new(n_vars);
    let mut objective = vec![Rat::zero(); n_vars];
    for (p, (_, signed)) in slots.iter().enumerate() {
        objective[p * dim..(p + 1) * dim].clone_from_slice(signed);
    }
    lp.set_objective(objective);
    for j in y_vars..n_vars {
        lp.set_nonneg(j);
    }
    for (p, (halfspaces, signed)) in slots.iter().enumerate() {
        for h in halfspaces {
            let mut row = vec![Rat::zero(); n_vars];
            row[p * dim..(p + 1) * dim].clone_from_slice(h);
            lp.add(row, Cmp::Ge, Rat::zero());
        }
        let mut row = vec![Rat::zero(); n_vars];
        row[p * dim..(p + 1) * dim].clone_from_slice(signed);
        lp.add(row, Cmp::Ge, Rat::zero());
        for (vi, v) in vplus.iter().enumerate() {
            // |<y_p, v>| <= s_{p,v}
            let mut row = vec![Rat::zero(); n_vars];
            row[p * dim..(p + 1) * dim].clone_from_slice(v);
            row[s_col(p, vi)] = Rat::integer(-1);
            lp.add(row.clone(), Cmp::Le, Rat::zero());
            for c in 0..dim {
                row[p * dim + c] = -&row[p * dim + c];
            }
            lp.add(row, Cmp::Le, Rat::zero());
        }
    }
    for vi in 0..vplus.len() {
        let mut row = vec![Rat::zero(); n_vars];
        for p in 0..n_slots {
            row[s_col(p, vi)] = Rat::one();
        }
        lp.add(row, Cmp::Le, Rat::one());
    }
    let (value, point) = match lp.solve()? {
        LpOutcome::Optimal { value, point } => (value, point),
        other => return Err(Error::Internal(format!("norm LP: {other:?}"))),
    };
    let mut witnesses = Vec::new();
    for p in 0..n_slots {
        let y = point[p * dim..(p + 1) * dim].to_vec();
        if y.iter().any(|c| !c.is_zero()) {
            witnesses.push(Functional(y));
        }
    }
    Ok(NormCertificate {
        value,
        witnesses,
        method: NormMethod::ExactConeEnumeration,
    })
}

/// max over sign patterns of ‖Σ σ_i x_i‖², the square of
/// `sup_{x ∈ B_2} Σ|<x_i, x>|`.
fn signed_sum_sq_max(tuple: &[Vec<Rat>]) -> Rat {
    if tuple.is_empty() {
        return Rat::zero();
    }
    let dim = tuple[0].len();
    let mut best = Rat::zero();
    // The first sign is fixed by symmetry.
    for mask in 0u64..(1 << (tuple.len() - 1)) {
        let mut sum = vec![Rat::zero(); dim];
        for (i, x) in tuple.iter().enumerate() {
            let neg = i > 0 && (mask >> (i - 1)) & 1 == 1;
            for (c, coord) in x.iter().enumerate() {
                if neg {
                    sum[c] -= coord;
                } else {
                    sum[c] += coord;
                }
            }
        }
        let sq = sum.iter().fold(Rat::zero(), |acc, c| acc + &(c * c));
        best = best.max(sq);
    }
    best
}

/// Exact feasibility normalizer: the largest M with
/// `sup_{x∈B_E} Σ|<x_i*, x>| = M`, polyhedral case.
fn feasibility_max(spec: &SpaceSpec, tuple: &[Vec<Rat>]) -> Result<Rat, Error> {
    let mut best = Rat::zero();
    for v in spec.ball_extreme_points()? {
        let mut s = Rat::zero();
        for x in tuple {
            s += &dot(x, &v).abs();
        }
        best = best.max(s);
    }
    Ok(best)
}

/// Rational r with r² ≥ q, within 2^-16 of the true square root from above.
fn sqrt_upper(q: &Rat) -> Rat {
    if q.is_zero() {
        return Rat::zero();
    }
    let shift: u32 = 32;
    let scaled = q * &Rat::pow2(2 * shift as i32);
    let root = scaled.floor_int().sqrt() + 1;
    Rat::from_big(root, num_bigint::BigInt::from(1)) * Rat::pow2(-(shift as i32))
}

struct Sampler<'a> {
    f: &'a LatticeExpr,
    spec: &'a SpaceSpec,
    remaining: u64,
    best: Option<(Rat, Vec<Vec<Rat>>)>,
}

impl<'a> Sampler<'a> {
    /// Normalizes a raw tuple onto the feasible set, scores it, and keeps it
    /// if it improves the incumbent. Returns false once the budget is spent.
    fn consider(&mut self, raw: &[Vec<Rat>]) -> Result<bool, Error> {
        if self.remaining == 0 {
            return Ok(false);
        }
        self.remaining -= 1;
        let scale = if self.spec.is_polyhedral() {
            let m = feasibility_max(self.spec, raw)?;
            if m.is_zero() {
                return Ok(true);
            }
            m.recip()
        } else {
            let q = signed_sum_sq_max(raw);
            if q.is_zero() {
                return Ok(true);
            }
            sqrt_upper(&q).recip()
        };
        let tuple: Vec<Vec<Rat>> = raw
            .iter()
            .map(|x| x.iter().map(|c| c * &scale).collect())
            .collect();
        let mut value = Rat::zero();
        for x in &tuple {
            value += &self.f.eval(x)?.abs();
        }
        let better = match &self.best {
            None => true,
            Some((b, _)) => value > *b,
        };
        if better {
            self.best = Some((value, tuple));
        }
        Ok(true)
    }
}

/// Deterministic sampling lower bound for the norm: random feasible tuples
/// plus injected candidate directions, improved by coordinate ascent; the
/// best tuple is re-certified feasible exactly before return.
pub fn fbl_norm_sample(
    f: &LatticeExpr,
    spec: &SpaceSpec,
    budget: u64,
    seed: u64,
) -> Result<NormCertificate, Error> {
    use rand_core::{RngCore, SeedableRng};
    let dim = f.dim()?;
    if dim != spec.dim() {
        return Err(Error::dim(spec.dim(), dim));
    }
    let mut sampler = Sampler {
        f,
        spec,
        remaining: budget,
        best: None,
    };

    // Injected deterministic candidates: coordinate directions and (small
    // dimension) sign vectors, singly and in pairs.
    let mut directions: Vec<Vec<Rat>> = Vec::new();
    for i in 0..dim {
        for sign in [1i64, -1] {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::integer(sign);
            directions.push(v);
        }
    }
    if dim <= 6 {
        for mask in 0u64..(1 << dim) {
            let v: Vec<Rat> = (0..dim)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Rat::integer(-1)
                    } else {
                        Rat::one()
                    }
                })
                .collect();
            if !directions.contains(&v) {
                directions.push(v);
            }
        }
    }
    let mut alive = true;
    for d in &directions {
        if !sampler.consider(std::slice::from_ref(d))? {
            alive = false;
            break;
        }
    }
    if alive {
        'pairs: for i in 0..directions.len() {
            for j in (i + 1)..directions.len() {
                let pair = [directions[i].clone(), directions[j].clone()];
                if !sampler.consider(&pair)? {
                    alive = false;
                    break 'pairs;
                }
            }
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let rand_rat = |rng: &mut rand_chacha::ChaCha8Rng| {
        Rat::new((rng.next_u64() % 33) as i64 - 16, 8)
    };
    while alive && sampler.remaining > 0 {
        let n = 1 + (rng.next_u64() % 3) as usize;
        let mut tuple: Vec<Vec<Rat>> = (0..n)
            .map(|_| (0..dim).map(|_| rand_rat(&mut rng)).collect())
            .collect();
        if !sampler.consider(&tuple)? {
            break;
        }
        // Coordinate ascent around the start.
        let steps = [Rat::one(), Rat::new(1, 2), Rat::new(1, 8)];
        'ascent: for _sweep in 0..2 {
            for i in 0..tuple.len() {
                for c in 0..dim {
                    for step in &steps {
                        for dir in [1i64, -1] {
                            let mut cand = tuple.clone();
                            cand[i][c] = &cand[i][c] + &(step * &Rat::integer(dir));
                            let before = sampler.best.as_ref().map(|(v, _)| v.clone());
                            if !sampler.consider(&cand)? {
                                alive = false;
                                break 'ascent;
                            }
                            let improved = match (&before, &sampler.best) {
                                (Some(b), Some((now, _))) => now > b,
                                (None, Some(_)) => true,
                                _ => false,
                            };
                            if improved {
                                tuple = cand;
                            }
                        }
                    }
                }
            }
        }
    }

    let cert = match sampler.best {
        None => NormCertificate {
            value: Rat::zero(),
            witnesses: Vec::new(),
            method: NormMethod::SamplingLowerBound,
        },
        Some((value, tuple)) => NormCertificate {
            value,
            witnesses: tuple.into_iter().map(Functional).collect(),
            method: NormMethod::SamplingLowerBound,
        },
    };
    cert.verify(f, spec)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::fan::DEFAULT_PIECE_CAP;
    use crate::geometry::BallKind;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn l1(dim: usize) -> SpaceSpec {
        SpaceSpec::new(dim, BallKind::L1).unwrap()
    }

    fn linf(dim: usize) -> SpaceSpec {
        SpaceSpec::new(dim, BallKind::Linf).unwrap()
    }

    /// One-dimensional oracle: the norm equals max(|f(1)|, |f(-1)|).
    fn dim1_norm_oracle(f: &LatticeExpr) -> Rat {
        let up = f.eval(&[Rat::one()]).unwrap().abs();
        let down = f.eval(&[r(-1, 1)]).unwrap().abs();
        up.max(down)
    }

    #[test]
    fn generator_norm_is_primal_norm() {
        let cases = [
            (l1(2), vec![r(1, 1), r(-2, 3)]),
            (l1(3), vec![r(1, 2), r(3, 4), r(-1, 1)]),
            (linf(2), vec![r(5, 7), r(2, 1)]),
        ];
        for (spec, x) in cases {
            let f = LatticeExpr::Gen(x.clone());
            let cert = fbl_norm_exact(&f, &spec, DEFAULT_PIECE_CAP).unwrap();
            assert_eq!(cert.value, spec.primal_norm_exact(&x).unwrap());
        }
    }

    #[test]
    fn abs_generator_dim1() {
        let f = parse("abs(gen(1))").unwrap();
        let cert = fbl_norm_exact(&f, &l1(1), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(cert.value, Rat::one());
        assert_eq!(cert.value, dim1_norm_oracle(&f));
    }

    #[test]
    fn dim1_oracle_on_assorted_expressions() {
        let cases = [
            "abs(gen(1))",
            "sup(gen(1),gen(-2))",
            "sup(gen(3),scale(2,abs(gen(1))))",
            "inf(abs(gen(2)),abs(gen(3)))",
            "add(abs(gen(1)),sup(gen(1),gen(0)))",
        ];
        for src in cases {
            let f = parse(src).unwrap();
            let cert = fbl_norm_exact(&f, &l1(1), DEFAULT_PIECE_CAP).unwrap();
            assert_eq!(cert.value, dim1_norm_oracle(&f), "{src}");
        }
    }

    #[test]
    fn sup_of_coordinate_abs_has_norm_two() {
        // Upper bound 2: summing the two constraint rows at e1 and e2.
        // Lower bound 2: the tuple (1,0),(0,1) is feasible and scores 2.
        let f = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
        let cert = fbl_norm_exact(&f, &l1(2), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(cert.value, r(2, 1));
        cert.verify(&f, &l1(2)).unwrap();
    }

    #[test]
    fn exact_routes_agree() {
        let cases = [
            ("abs(gen(1,1))", l1(2)),
            ("sup(gen(1,0),gen(0,1))", l1(2)),
            ("sup(abs(gen(1,0)),abs(gen(0,1)))", l1(2)),
            ("add(abs(gen(1,0)),abs(gen(1,-1)))", linf(2)),
            ("inf(abs(gen(1,0)),abs(gen(0,1)))", l1(2)),
            ("sup(gen(2),neg(gen(1)))", l1(1)),
        ];
        for (src, spec) in cases {
            let f = parse(src).unwrap();
            let a = fbl_norm_exact(&f, &spec, DEFAULT_PIECE_CAP).unwrap();
            let b = fbl_norm_exact_refined(&f, &spec, DEFAULT_PIECE_CAP).unwrap();
            assert_eq!(a.value, b.value, "{src}");
        }
    }

    #[test]
    fn norm_of_abs_equals_norm() {
        let f = parse("sup(gen(1,0),scale(-2,gen(0,1)))").unwrap();
        let abs_f = LatticeExpr::abs(f.clone());
        let a = fbl_norm_exact(&f, &l1(2), DEFAULT_PIECE_CAP).unwrap();
        let b = fbl_norm_exact(&abs_f, &l1(2), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn norm_dominates_sup_norm_on_dual_ball() {
        let f = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
        let spec = l1(2);
        let k = DualBallSet::full(spec.clone());
        let sup = sup_norm_on_k(&f, &k, DEFAULT_PIECE_CAP).unwrap();
        let cert = fbl_norm_exact(&f, &spec, DEFAULT_PIECE_CAP).unwrap();
        assert!(cert.value >= sup);
    }

    #[test]
    fn zero_expression() {
        let f = LatticeExpr::zero(2);
        let cert = fbl_norm_exact(&f, &l1(2), DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(cert.value, Rat::zero());
        assert!(cert.witnesses.is_empty());
        let k = DualBallSet::full(l1(2));
        assert_eq!(sup_norm_on_k(&f, &k, DEFAULT_PIECE_CAP).unwrap(), Rat::zero());
    }

    #[test]
    fn l2_exact_rejected() {
        let f = parse("abs(gen(1,0,0))").unwrap();
        let spec = SpaceSpec::new(3, BallKind::L2).unwrap();
        assert!(matches!(
            fbl_norm_exact(&f, &spec, DEFAULT_PIECE_CAP),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn sup_norm_examples() {
        let k1 = DualBallSet::full(l1(1));
        assert_eq!(
            sup_norm_on_k(&parse("abs(gen(1))").unwrap(), &k1, DEFAULT_PIECE_CAP).unwrap(),
            Rat::one()
        );
        let k2 = DualBallSet::full(l1(2));
        assert_eq!(
            sup_norm_on_k(
                &parse("sup(gen(1,0),gen(0,1))").unwrap(),
                &k2,
                DEFAULT_PIECE_CAP
            )
            .unwrap(),
            Rat::one()
        );
    }

    #[test]
    fn disjoint_positive_and_negative_parts() {
        let f = parse("sup(gen(1),gen(0))").unwrap();
        let g = parse("sup(neg(gen(1)),gen(0))").unwrap();
        let k = DualBallSet::full(l1(1));
        assert_eq!(
            disjoint(&f, &g, &k, DEFAULT_PIECE_CAP).unwrap(),
            Disjointness::Disjoint
        );
    }

    #[test]
    fn disjoint_finds_witness_for_coordinate_abs() {
        let f = parse("abs(gen(1,0))").unwrap();
        let g = parse("abs(gen(0,1))").unwrap();
        let k = DualBallSet::full(l1(2));
        match disjoint(&f, &g, &k, DEFAULT_PIECE_CAP).unwrap() {
            Disjointness::Witness(w) => {
                assert!(f.eval(w.coords()).unwrap().is_positive());
                assert!(g.eval(w.coords()).unwrap().is_positive());
            }
            Disjointness::Disjoint => panic!("expected a witness"),
        }
    }

    #[test]
    fn disjoint_self_meet() {
        let f = parse("abs(gen(1,0))").unwrap();
        let k = DualBallSet::full(l1(2));
        assert!(matches!(
            disjoint(&f, &f, &k, DEFAULT_PIECE_CAP).unwrap(),
            Disjointness::Witness(_)
        ));
    }

    #[test]
    fn disjoint_rejects_non_positive_input() {
        let f = parse("gen(1)").unwrap();
        let g = parse("abs(gen(1))").unwrap();
        let k = DualBallSet::full(l1(1));
        assert!(matches!(
            disjoint(&f, &g, &k, DEFAULT_PIECE_CAP),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sampling_is_a_lower_bound_and_deterministic() {
        let f = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
        let spec = l1(2);
        let exact = fbl_norm_exact(&f, &spec, DEFAULT_PIECE_CAP).unwrap();
        let a = fbl_norm_sample(&f, &spec, 500, 42).unwrap();
        let b = fbl_norm_sample(&f, &spec, 500, 42).unwrap();
        assert!(a.value <= exact.value);
        assert_eq!(a.value, b.value);
        assert_eq!(a.witnesses, b.witnesses);
        let json_a = serde_json::to_string(&a).unwrap();
        let json_b = serde_json::to_string(&b).unwrap();
        assert_eq!(json_a, json_b);
    }

    #[test]
    fn sampling_budget_zero() {
        let f = parse("abs(gen(1))").unwrap();
        let cert = fbl_norm_sample(&f, &l1(1), 0, 1).unwrap();
        assert_eq!(cert.value, Rat::zero());
        assert!(cert.witnesses.is_empty());
    }

    #[test]
    fn sampling_close_to_exact_for_generators() {
        let xs = [vec![r(1, 1), r(-2, 3)], vec![r(3, 5), r(1, 2)]];
        for x in xs {
            let f = LatticeExpr::Gen(x);
            let exact = fbl_norm_exact(&f, &l1(2), DEFAULT_PIECE_CAP).unwrap();
            let sample = fbl_norm_sample(&f, &l1(2), 1000, 7).unwrap();
            assert!(sample.value <= exact.value);
            assert!(
                &sample.value * &r(100, 99) >= exact.value,
                "sample {} vs exact {}",
                sample.value,
                exact.value
            );
        }
    }

    #[test]
    fn sampling_works_on_l2() {
        let spec = SpaceSpec::new(2, BallKind::L2).unwrap();
        let f = parse("abs(gen(1,0))").unwrap();
        let cert = fbl_norm_sample(&f, &spec, 300, 3).unwrap();
        cert.verify(&f, &spec).unwrap();
        // ‖delta_e1‖ = ‖e1‖_2 = 1; the sample stays at or below.
        assert!(cert.value <= Rat::one());
        assert!(cert.value >= r(9, 10));
    }

    #[test]
    fn max_abs_argmax_is_deterministic_and_scale_invariant() {
        let f = parse("abs(gen(1))").unwrap();
        let k = DualBallSet::new(l1(1), r(1, 3), None).unwrap();
        let (v1, p1) = max_abs_on_k(&f, &k, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(v1, r(1, 3));
        assert_eq!(p1.coords(), &[r(1, 3)]);
        let scaled = LatticeExpr::scale(r(2, 1), f.clone());
        let (v2, p2) = max_abs_on_k(&scaled, &k, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(v2, r(2, 3));
        assert_eq!(p2, p1);
    }
}
