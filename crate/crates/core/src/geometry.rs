//! Finite-dimensional normed spaces, their dual balls, and membership tests.
//!
//! A [`SpaceSpec`] fixes the primal space E through its unit ball; the dual
//! ball and its scalings live in [`DualBallSet`]. All polyhedral computations
//! are exact; the Euclidean ball is carried in floating point with tolerance
//! [`L2_TOL`] and is rejected by the exact-only operations.

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::Error;
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::rat::{dot, Rat};

/// Tolerance for floating-point (L2) norm comparisons.
pub const L2_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallKind {
    L1,
    Linf,
    L2,
    Polytope(Vec<Vec<Rat>>),
}

impl BallKind {
    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, BallKind::L2)
    }

    fn name(&self) -> &'static str {
        match self {
            BallKind::L1 => "l1",
            BallKind::Linf => "linf",
            BallKind::L2 => "l2",
            BallKind::Polytope(_) => "polytope",
        }
    }
}

/// A finite-dimensional normed space given by its unit ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    dim: usize,
    ball: BallKind,
}

/// A point of E* in the coordinate basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional(pub Vec<Rat>);

impl Functional {
    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Either an exact rational norm value or a floating approximation (L2).
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    Exact(Rat),
    Approx(f64),
}

impl NormValue {
    pub fn expect_exact(self) -> Result<Rat, Error> {
        match self {
            NormValue::Exact(v) => Ok(v),
            NormValue::Approx(_) => Err(Error::UnsupportedKind(
                "exact value requested for a floating (l2) norm".into(),
            )),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(v) => v.to_f64(),
            NormValue::Approx(v) => *v,
        }
    }
}

impl SpaceSpec {
    pub fn new(dim: usize, ball: BallKind) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::Precondition("dim must be >= 1".into()));
        }
        if let BallKind::Polytope(vertices) = &ball {
            if vertices.is_empty() {
                return Err(Error::Precondition("polytope needs vertices".into()));
            }
            for v in vertices {
                if v.len() != dim {
                    return Err(Error::dim(dim, v.len()));
                }
                let neg: Vec<Rat> = v.iter().map(|c| -c).collect();
                if !vertices.contains(&neg) {
                    return Err(Error::Precondition(format!(
                        "polytope vertex list is not symmetric: missing -{v:?}"
                    )));
                }
            }
            if rank(vertices) < dim {
                return Err(Error::Precondition(
                    "polytope vertices do not span the space".into(),
                ));
            }
        }
        Ok(SpaceSpec { dim, ball })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ball(&self) -> &BallKind {
        &self.ball
    }

    pub fn is_polyhedral(&self) -> bool {
        self.ball.is_polyhedral()
    }

    fn check_dim(&self, len: usize) -> Result<(), Error> {
        if len != self.dim {
            return Err(Error::dim(self.dim, len));
        }
        Ok(())
    }

    /// The norm of E evaluated at `x`; exact for polyhedral kinds.
    pub fn primal_norm(&self, x: &[Rat]) -> Result<NormValue, Error> {
        self.check_dim(x.len())?;
        match &self.ball {
            BallKind::L1 => Ok(NormValue::Exact(
                x.iter().fold(Rat::zero(), |acc, c| acc + c.abs()),
            )),
            BallKind::Linf => Ok(NormValue::Exact(
                x.iter().fold(Rat::zero(), |acc, c| acc.max(c.abs())),
            )),
            BallKind::L2 => {
                let sq = x.iter().fold(Rat::zero(), |acc, c| acc + &(c * c));
                Ok(NormValue::Approx(sq.to_f64().sqrt()))
            }
            BallKind::Polytope(vertices) => {
                Ok(NormValue::Exact(gauge(vertices, x)?))
            }
        }
    }

    pub fn primal_norm_exact(&self, x: &[Rat]) -> Result<Rat, Error> {
        self.primal_norm(x)?.expect_exact()
    }

    /// sup over B_E of <xstar, .>; for polyhedral kinds the max over extreme
    /// points, exact.
    pub fn dual_norm(&self, xstar: &Functional) -> Result<NormValue, Error> {
        self.check_dim(xstar.dim())?;
        match &self.ball {
            BallKind::L1 => Ok(NormValue::Exact(
                xstar.0.iter().fold(Rat::zero(), |acc, c| acc.max(c.abs())),
            )),
            BallKind::Linf => Ok(NormValue::Exact(
                xstar.0.iter().fold(Rat::zero(), |acc, c| acc + c.abs()),
            )),
            BallKind::L2 => {
                let sq = xstar.0.iter().fold(Rat::zero(), |acc, c| acc + &(c * c));
                Ok(NormValue::Approx(sq.to_f64().sqrt()))
            }
            BallKind::Polytope(_) => {
                let mut best = Rat::zero();
                for v in self.ball_extreme_points()? {
                    best = best.max(dot(&xstar.0, &v).abs());
                }
                Ok(NormValue::Exact(best))
            }
        }
    }

    pub fn dual_norm_exact(&self, xstar: &Functional) -> Result<Rat, Error> {
        self.dual_norm(xstar)?.expect_exact()
    }

    /// Extreme points of B_E for polyhedral kinds.
    pub fn ball_extreme_points(&self) -> Result<Vec<Vec<Rat>>, Error> {
        match &self.ball {
            BallKind::L1 => {
                let mut pts = Vec::with_capacity(2 * self.dim);
                for i in 0..self.dim {
                    for sign in [1i64, -1] {
                        let mut v = vec![Rat::zero(); self.dim];
                        v[i] = Rat::integer(sign);
                        pts.push(v);
                    }
                }
                Ok(pts)
            }
            BallKind::Linf => {
                let mut pts = Vec::with_capacity(1 << self.dim);
                for mask in 0u64..(1 << self.dim) {
                    let v: Vec<Rat> = (0..self.dim)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                Rat::integer(-1)
                            } else {
                                Rat::one()
                            }
                        })
                        .collect();
                    pts.push(v);
                }
                Ok(pts)
            }
            BallKind::L2 => Err(Error::UnsupportedKind(
                "l2 ball has no finite extreme point list".into(),
            )),
            BallKind::Polytope(vertices) => {
                let mut unique: Vec<Vec<Rat>> = Vec::new();
                for v in vertices {
                    if !unique.contains(v) {
                        unique.push(v.clone());
                    }
                }
                let mut extreme = Vec::new();
                for (i, v) in unique.iter().enumerate() {
                    let others: Vec<Vec<Rat>> = unique
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, w)| w.clone())
                        .collect();
                    if others.is_empty() || !in_hull(&others, v)? {
                        extreme.push(v.clone());
                    }
                }
                Ok(extreme)
            }
        }
    }
}

/// `scale * (B_{E*} ∩ restriction)`, the sets written K and (1/3)K.
#[derive(Clone, Debug)]
pub struct DualBallSet {
    base: SpaceSpec,
    scale: Rat,
    restriction: Option<Vec<Vec<Rat>>>,
}

impl DualBallSet {
    pub fn full(base: SpaceSpec) -> Self {
        DualBallSet {
            base,
            scale: Rat::one(),
            restriction: None,
        }
    }

    pub fn new(
        base: SpaceSpec,
        scale: Rat,
        restriction: Option<Vec<Vec<Rat>>>,
    ) -> Result<Self, Error> {
        if !scale.is_positive() {
            return Err(Error::Precondition("scale must be positive".into()));
        }
        if let Some(vertices) = &restriction {
            if vertices.is_empty() {
                return Err(Error::Precondition("empty restriction polytope".into()));
            }
            for v in vertices {
                if v.len() != base.dim() {
                    return Err(Error::dim(base.dim(), v.len()));
                }
                let neg: Vec<Rat> = v.iter().map(|c| -c).collect();
                if !vertices.contains(&neg) {
                    return Err(Error::Precondition(
                        "restriction polytope is not symmetric".into(),
                    ));
                }
                // Vertex membership in the dual unit ball.
                let nrm = base.dual_norm(&Functional(v.clone()))?;
                let inside = match nrm {
                    NormValue::Exact(r) => r <= Rat::one(),
                    NormValue::Approx(f) => f <= 1.0 + L2_TOL,
                };
                if !inside {
                    return Err(Error::Precondition(
                        "restriction vertex lies outside the dual unit ball".into(),
                    ));
                }
            }
        }
        Ok(DualBallSet {
            base,
            scale,
            restriction,
        })
    }

    pub fn base(&self) -> &SpaceSpec {
        &self.base
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn restriction(&self) -> Option<&Vec<Vec<Rat>>> {
        self.restriction.as_ref()
    }

    /// The same set shrunk by a positive factor (e.g. 1/3 for (1/3)K).
    pub fn scaled(&self, factor: &Rat) -> Result<Self, Error> {
        if !factor.is_positive() {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        Ok(DualBallSet {
            base: self.base.clone(),
            scale: &self.scale * factor,
            restriction: self.restriction.clone(),
        })
    }

    /// Membership `xstar ∈ scale·(B_{E*} ∩ restriction)`, exact for all kinds
    /// (the L2 test compares squares of rationals).
    pub fn contains(&self, xstar: &Functional) -> Result<bool, Error> {
        if xstar.dim() != self.base.dim() {
            return Err(Error::dim(self.base.dim(), xstar.dim()));
        }
        let scaled: Vec<Rat> = xstar.0.iter().map(|c| c / &self.scale).collect();
        let in_ball = match self.base.ball() {
            BallKind::L2 => {
                let sq = scaled.iter().fold(Rat::zero(), |acc, c| acc + &(c * c));
                sq <= Rat::one()
            }
            _ => self.base.dual_norm_exact(&Functional(scaled.clone()))? <= Rat::one(),
        };
        if !in_ball {
            return Ok(false);
        }
        match &self.restriction {
            None => Ok(true),
            Some(vertices) => in_hull(vertices, &scaled),
        }
    }
}

/// Gauge of the absolutely convex hull of `vertices` at `x`:
/// min { sum mu_j : mu >= 0, sum mu_j v_j = x }.
pub fn gauge(vertices: &[Vec<Rat>], x: &[Rat]) -> Result<Rat, Error> {
    let dim = x.len();
    let n = vertices.len();
    let mut lp = Lp::new(n);
    lp.set_objective(vec![Rat::integer(-1); n]);
    for j in 0..n {
        lp.set_nonneg(j);
    }
    for coord in 0..dim {
        let coeffs: Vec<Rat> = vertices.iter().map(|v| v[coord].clone()).collect();
        lp.add(coeffs, Cmp::Eq, x[coord].clone());
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        LpOutcome::Infeasible => Err(Error::Degenerate(
            "point outside the span of the polytope".into(),
        )),
        LpOutcome::Unbounded => Err(Error::Internal("gauge LP unbounded".into())),
    }
}

/// Exact membership of `x` in conv(vertices).
pub fn in_hull(vertices: &[Vec<Rat>], x: &[Rat]) -> Result<bool, Error> {
    let dim = x.len();
    let n = vertices.len();
    let mut lp = Lp::new(n);
    lp.set_objective(vec![Rat::zero(); n]);
    for j in 0..n {
        lp.set_nonneg(j);
    }
    for coord in 0..dim {
        let coeffs: Vec<Rat> = vertices.iter().map(|v| v[coord].clone()).collect();
        lp.add(coeffs, Cmp::Eq, x[coord].clone());
    }
    lp.add(vec![Rat::one(); n], Cmp::Eq, Rat::one());
    Ok(matches!(lp.solve()?, LpOutcome::Optimal { .. }))
}

/// Rank of a rational matrix given by rows.
#[allow(clippy::needless_range_loop)]
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= &delta;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("dim", &self.dim)?;
        match &self.ball {
            BallKind::Polytope(vertices) => {
                let mut inner = std::collections::BTreeMap::new();
                inner.insert("polytope", vertices);
                map.serialize_entry("ball", &inner)?;
            }
            other => map.serialize_entry("ball", other.name())?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SpecVisitor;

        #[derive(Deserialize)]
        #[serde(untagged)]
        enum BallRepr {
            Name(String),
            Polytope {
                polytope: Vec<Vec<Rat>>,
            },
        }

        impl<'de> Visitor<'de> for SpecVisitor {
            type Value = SpaceSpec;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a space spec map with dim and ball")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<SpaceSpec, A::Error> {
                let mut dim: Option<usize> = None;
                let mut ball: Option<BallRepr> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "dim" => dim = Some(map.next_value()?),
                        "ball" => ball = Some(map.next_value()?),
                        other => {
                            return Err(de::Error::unknown_field(other, &["dim", "ball"]))
                        }
                    }
                }
                let dim = dim.ok_or_else(|| de::Error::missing_field("dim"))?;
                let ball = match ball.ok_or_else(|| de::Error::missing_field("ball"))? {
                    BallRepr::Name(name) => match name.as_str() {
                        "l1" => BallKind::L1,
                        "linf" => BallKind::Linf,
                        "l2" => BallKind::L2,
                        other => {
                            return Err(de::Error::custom(format!(
                                "unknown ball kind {other:?}"
                            )))
                        }
                    },
                    BallRepr::Polytope { polytope } => BallKind::Polytope(polytope),
                };
                SpaceSpec::new(dim, ball).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_map(SpecVisitor)
    }
}
