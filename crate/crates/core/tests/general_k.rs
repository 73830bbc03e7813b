//! The pipeline over general absolutely convex dual sets and polytope unit
//! balls: restricted K = scale·(B_{E*} ∩ conv R) flows through sup norms,
//! disjointness, classification and the witness triple, and a polytope ball
//! that coincides with a named ball must reproduce its numbers exactly.

use fbl_core::chain::{
    certified_delta, classify, witness_triple, ClassIndex, ClassifiedFunction,
};
use fbl_core::corpus::{random_expr, rng_from_seed};
use fbl_core::expr::{parse, LatticeExpr};
use fbl_core::fan::{to_fan, DEFAULT_PIECE_CAP};
use fbl_core::geometry::{BallKind, DualBallSet, Functional, SpaceSpec};
use fbl_core::norm::{
    disjoint, fbl_norm_exact, max_abs_on_k, min_on_k, sup_norm_on_k, Disjointness,
};
use fbl_core::rat::Rat;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn l1(dim: usize) -> SpaceSpec {
    SpaceSpec::new(dim, BallKind::L1).unwrap()
}

/// The diamond conv(±e1, ±e2) as a restriction inside the dual (sup-norm)
/// ball of l1(2).
fn diamond_k() -> DualBallSet {
    let diamond = vec![
        vec![r(1, 1), r(0, 1)],
        vec![r(-1, 1), r(0, 1)],
        vec![r(0, 1), r(1, 1)],
        vec![r(0, 1), r(-1, 1)],
    ];
    DualBallSet::new(l1(2), Rat::one(), Some(diamond)).unwrap()
}

#[test]
fn sup_norm_respects_the_restriction() {
    // max(|x1|, |x2|) is 1 on the square but still 1 on the diamond (at a
    // vertex); x1 + x2 tops at 2 on the square and 1 on the diamond.
    let k_square = DualBallSet::full(l1(2));
    let k_diamond = diamond_k();
    let f = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
    assert_eq!(sup_norm_on_k(&f, &k_square, DEFAULT_PIECE_CAP).unwrap(), r(1, 1));
    assert_eq!(sup_norm_on_k(&f, &k_diamond, DEFAULT_PIECE_CAP).unwrap(), r(1, 1));
    let g = parse("gen(1,1)").unwrap();
    assert_eq!(sup_norm_on_k(&g, &k_square, DEFAULT_PIECE_CAP).unwrap(), r(2, 1));
    assert_eq!(sup_norm_on_k(&g, &k_diamond, DEFAULT_PIECE_CAP).unwrap(), r(1, 1));
}

#[test]
fn min_and_membership_agree_on_the_restriction() {
    let k = diamond_k();
    let f = parse("add(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
    assert!(!min_on_k(&f, &k, DEFAULT_PIECE_CAP).unwrap().is_negative());
    assert!(k.contains(&Functional(vec![r(1, 2), r(1, 2)])).unwrap());
    assert!(!k.contains(&Functional(vec![r(3, 4), r(3, 4)])).unwrap());
}

#[test]
fn disjointness_changes_with_the_dual_set() {
    // Positive parts of x1+x2 and -(x1+x2) meet nowhere; x1-part and
    // x2-part meet inside the diamond at (1/2, 1/2).
    let k = diamond_k();
    let f = parse("sup(gen(1,1),gen(0,0))").unwrap();
    let g = parse("sup(neg(gen(1,1)),gen(0,0))").unwrap();
    assert_eq!(
        disjoint(&f, &g, &k, DEFAULT_PIECE_CAP).unwrap(),
        Disjointness::Disjoint
    );
    let a = parse("sup(gen(1,0),gen(0,0))").unwrap();
    let b = parse("sup(gen(0,1),gen(0,0))").unwrap();
    match disjoint(&a, &b, &k, DEFAULT_PIECE_CAP).unwrap() {
        Disjointness::Witness(w) => {
            assert!(k.contains(&w).unwrap());
            assert!(a.eval(w.coords()).unwrap().is_positive());
            assert!(b.eval(w.coords()).unwrap().is_positive());
        }
        Disjointness::Disjoint => panic!("coordinate parts meet on the diamond"),
    }
}

#[test]
fn classify_over_a_restricted_dual_set() {
    // Over (1/3)(square ∩ diamond) = diamond/3 the max of |x1| is 1/3,
    // first attained at (1/3, 0) in canonical slot order.
    let k = diamond_k();
    let f = parse("abs(gen(1,0))").unwrap();
    let c = classify(&f, &k, DEFAULT_PIECE_CAP).unwrap();
    assert_eq!(c.x_base.coords(), &[r(1, 3), r(0, 1)]);
    assert_eq!(c.index.eps, r(1, 6));
    assert_eq!(c.index.delta, r(1, 16));
    let third = k.scaled(&r(1, 3)).unwrap();
    assert!(third.contains(&c.x_base).unwrap());
}

#[test]
fn witness_triple_over_a_restricted_dual_set() {
    // Clustered bases along e1 inside the diamond/3; the membership check
    // y* in K now includes the restriction hull.
    let k = diamond_k();
    let f = parse("abs(gen(1,0))").unwrap();
    let eps = r(1, 20);
    let delta = certified_delta(&Rat::one(), &eps);
    let eta = &delta / &Rat::integer(1000);
    let bases: Vec<Functional> = (0..4)
        .map(|t| {
            let factor = Rat::one() - &eta * &Rat::integer(t);
            Functional(vec![r(1, 5) * factor, r(0, 1)])
        })
        .collect();
    let basis = vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]];
    let index = ClassIndex {
        n: 2,
        delta,
        eps,
    };
    let family: Vec<ClassifiedFunction> = bases
        .into_iter()
        .map(|x_base| ClassifiedFunction {
            expr: f.clone(),
            x_base,
            test_vectors: basis.clone(),
            index: index.clone(),
        })
        .collect();
    for member in &family {
        member.validate(&k, DEFAULT_PIECE_CAP).unwrap();
    }
    let w = witness_triple(&family, &k).unwrap().expect("triple");
    assert!(w.checks.in_k);
    assert!(w.checks.all_pass());
    assert!(k.contains(&w.ystar).unwrap());
}

#[test]
fn cross_polytope_ball_reproduces_l1_norms() {
    // The polytope with vertices ±e1, ±e2 is the l1 ball, so the whole
    // pipeline must agree with the named l1 space, exactly.
    let cross = SpaceSpec::new(
        2,
        BallKind::Polytope(vec![
            vec![r(1, 1), r(0, 1)],
            vec![r(-1, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(0, 1), r(-1, 1)],
        ]),
    )
    .unwrap();
    let named = l1(2);
    let mut rng = rng_from_seed(301);
    let mut checked = 0;
    while checked < 8 {
        let f = random_expr(&mut rng, 2, 1);
        if to_fan(&f, 200).is_err() {
            continue;
        }
        let a = fbl_norm_exact(&f, &cross, DEFAULT_PIECE_CAP).unwrap();
        let b = fbl_norm_exact(&f, &named, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(a.value, b.value, "polytope and l1 disagree on {f}");
        checked += 1;
    }
    let ka = DualBallSet::full(cross);
    let kb = DualBallSet::full(named);
    let f = parse("sup(abs(gen(1,0)),abs(gen(0,1)))").unwrap();
    assert_eq!(
        sup_norm_on_k(&f, &ka, DEFAULT_PIECE_CAP).unwrap(),
        sup_norm_on_k(&f, &kb, DEFAULT_PIECE_CAP).unwrap()
    );
}

#[test]
fn hexagon_ball_isometry_and_dual_consistency() {
    // A symmetric hexagon that is neither an l1 nor a sup-norm ball: the
    // generator norm must equal the gauge, and pairings with extreme points
    // must attain the dual norm.
    let hexagon = SpaceSpec::new(
        2,
        BallKind::Polytope(vec![
            vec![r(1, 1), r(0, 1)],
            vec![r(-1, 1), r(0, 1)],
            vec![r(1, 2), r(1, 1)],
            vec![r(-1, 2), r(-1, 1)],
            vec![r(-1, 2), r(1, 1)],
            vec![r(1, 2), r(-1, 1)],
        ]),
    )
    .unwrap();
    assert_eq!(hexagon.ball_extreme_points().unwrap().len(), 6);
    let mut rng = rng_from_seed(302);
    for _ in 0..12 {
        let x: Vec<Rat> = (0..2)
            .map(|_| {
                use rand_core::RngCore;
                Rat::new((rng.next_u64() % 17) as i64 - 8, 1 + (rng.next_u64() % 4) as i64)
            })
            .collect();
        let f = LatticeExpr::Gen(x.clone());
        let cert = fbl_norm_exact(&f, &hexagon, DEFAULT_PIECE_CAP).unwrap();
        assert_eq!(cert.value, hexagon.primal_norm_exact(&x).unwrap());
        let xstar = Functional(x);
        let dual = hexagon.dual_norm_exact(&xstar).unwrap();
        let mut attained = false;
        for v in hexagon.ball_extreme_points().unwrap() {
            let pairing = fbl_core::rat::dot(xstar.coords(), &v);
            assert!(pairing <= dual);
            if pairing == dual {
                attained = true;
            }
        }
        assert!(attained);
    }
}

#[test]
fn scaled_polytope_ball_normalizes_test_vectors() {
    // Vertices ±2e_i: basis vectors have gauge 1/2, so classify scales its
    // test vectors to 2e_i, which lie on the ball boundary.
    let spec = SpaceSpec::new(
        2,
        BallKind::Polytope(vec![
            vec![r(2, 1), r(0, 1)],
            vec![r(-2, 1), r(0, 1)],
            vec![r(0, 1), r(2, 1)],
            vec![r(0, 1), r(-2, 1)],
        ]),
    )
    .unwrap();
    assert_eq!(
        spec.primal_norm_exact(&[r(1, 1), r(0, 1)]).unwrap(),
        r(1, 2)
    );
    let k = DualBallSet::full(spec);
    let f = parse("abs(gen(1,0))").unwrap();
    let c = classify(&f, &k, DEFAULT_PIECE_CAP).unwrap();
    assert_eq!(
        c.test_vectors,
        vec![vec![r(2, 1), r(0, 1)], vec![r(0, 1), r(2, 1)]]
    );
    // Dual ball is half the square: |x1| <= 1/2 on it, (1/3)K tops at 1/6.
    let (max_abs, base) = max_abs_on_k(&f, &k.scaled(&r(1, 3)).unwrap(), DEFAULT_PIECE_CAP).unwrap();
    assert_eq!(max_abs, r(1, 6));
    assert_eq!(base.coords()[0], r(1, 6));
    assert_eq!(c.index.eps, r(1, 12));
}
