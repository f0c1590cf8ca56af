//! Seeded generators shared by the integration tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sme_core::scalars::{int, rat, Constants, Rational, Scalar};
use sme_core::sme::{Block, Cut, Hull, InitialSegment, Position, SlotVector, Tail};

pub fn constant(name: &str) -> Scalar {
    Constants::builtin().scalar(name).expect("builtin constant")
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..10), rng.gen_range(1..5))
}

/// A coordinate value: zero, a small rational, or a rational combination of
/// one or two builtin constants.
pub fn scalar(rng: &mut ChaCha8Rng) -> Scalar {
    match rng.gen_range(0..8) {
        0 | 1 => Scalar::zero(),
        2 | 3 => Scalar::from_rational(small_rational(rng)),
        4 => constant("sqrt2"),
        5 => constant("sqrt3"),
        6 => &Scalar::from_int(1) + &constant("sqrt2"),
        _ => {
            let names = ["sqrt2", "sqrt3", "sqrt5", "cbrt2", "cbrt4"];
            let a = constant(names.choose(rng).unwrap()).scale(&small_rational(rng));
            let b = constant(names.choose(rng).unwrap()).scale(&small_rational(rng));
            &(&a + &b) + &Scalar::from_rational(small_rational(rng))
        }
    }
}

pub fn nonzero_marker(rng: &mut ChaCha8Rng) -> Scalar {
    let v = [-2i64, -1, 1, 2].choose(rng).copied().unwrap();
    if rng.gen_bool(0.2) {
        Scalar::from_rational(rat(v, 3))
    } else {
        Scalar::from_int(v)
    }
}

/// Every initial segment of a single-block finite hull.
pub fn fin_segments(hull: &Hull) -> Vec<InitialSegment> {
    let n = hull.index().single_fin().expect("single FIN block");
    (0..=n).map(|k| hull.index().segment(0, Cut::Count(k)).unwrap()).collect()
}

/// An element of Q^n with an optional marker.
pub fn fin_element(rng: &mut ChaCha8Rng, hull: &Hull, marker_p: f64) -> SlotVector {
    let n = hull.index().single_fin().expect("single FIN block");
    let u = SlotVector::dense((0..n).map(|_| scalar(rng)));
    if rng.gen_bool(marker_p) {
        let s = *fin_segments(hull).choose(rng).unwrap();
        u.with_marker(s, nonzero_marker(rng))
    } else {
        u
    }
}

pub fn mixed_hull() -> Hull {
    Hull::hahn(vec![Block::Fin(2), Block::Omega, Block::OmegaOpp]).unwrap()
}

/// Segments of the mixed hull FIN(2),OMEGA,OMEGA_OPP up to small offsets.
pub fn mixed_segments(hull: &Hull) -> Vec<InitialSegment> {
    let ix = hull.index();
    let mut out = vec![ix.empty(), ix.whole()];
    out.extend((1..2).map(|k| ix.segment(0, Cut::Count(k)).unwrap()));
    out.extend((0..4).map(|k| ix.segment(1, Cut::Count(k)).unwrap()));
    out.push(ix.segment(2, Cut::Empty).unwrap());
    out.extend((1..4).map(|k| ix.segment(2, Cut::Cofinite(k)).unwrap()));
    out
}

/// An element of the Hahn sum over FIN(2),OMEGA,OMEGA_OPP with optional
/// tail in the OMEGA block and optional marker.
pub fn mixed_element(rng: &mut ChaCha8Rng, hull: &Hull, marker_p: f64) -> SlotVector {
    let mut coords = Vec::new();
    for _ in 0..rng.gen_range(0..5) {
        let p = match rng.gen_range(0..3) {
            0 => Position::new(0, rng.gen_range(0..2)),
            1 => Position::new(1, rng.gen_range(0..5)),
            _ => Position::new(2, rng.gen_range(0..5)),
        };
        coords.push((p, scalar(rng)));
    }
    let tail = rng.gen_bool(0.25).then(|| Tail { block: 1, start: rng.gen_range(0..5), value: scalar(rng) });
    let u = SlotVector::new(coords, tail, None);
    if rng.gen_bool(marker_p) {
        let s = *mixed_segments(hull).choose(rng).unwrap();
        u.with_marker(s, nonzero_marker(rng))
    } else {
        u
    }
}

pub fn element(rng: &mut ChaCha8Rng, hull: &Hull, marker_p: f64) -> SlotVector {
    if hull.index().single_fin().is_some() {
        fin_element(rng, hull, marker_p)
    } else {
        mixed_element(rng, hull, marker_p)
    }
}

/// Integer-coefficient helper for rational vectors.
pub fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}
