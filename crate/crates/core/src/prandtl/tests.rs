use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalar::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn surface(caps: [usize; 2], f: impl FnMut(&[usize]) -> Rational) -> SeriesK<Rational> {
    SeriesK::from_fn(SeriesK::<Rational>::axis_labels(&SURFACE_AXES), caps.to_vec(), f)
}

fn random_inputs(rng: &mut ChaCha8Rng, caps: [usize; 3]) -> (ExternalFlow<Rational>, WallSlope<Rational>) {
    let need = level_demand(caps).unwrap();
    let mut small = |_: &[usize]| q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
    let u = ExternalFlow::new(surface(need.external, &mut small)).unwrap();
    let w = WallSlope::new(surface(need.wall, &mut small)).unwrap();
    (u, w)
}

#[test]
fn a2_examples() {
    let nu = q(1, 3);
    let constant = ExternalFlow::new(surface([3, 3], |i| if i == [0, 0] { q(5, 1) } else { q(0, 1) })).unwrap();
    assert!(a2_from_external(&constant, &nu).unwrap().is_zero());
    let linear = ExternalFlow::new(surface([3, 3], |i| if i == [1, 0] { q(1, 1) } else { q(0, 1) })).unwrap();
    let a2 = a2_from_external(&linear, &nu).unwrap();
    assert_eq!(a2.caps(), &[2, 2]);
    assert_eq!(a2.at(&[0, 0]), &q(0, 1));
    assert_eq!(a2.at(&[1, 0]), &q(-3, 2));
    assert_eq!(a2_from_external(&linear, &q(0, 1)), Err(PrandtlError::ZeroViscosity));
}

#[test]
fn a3_examples() {
    let nu = q(2, 5);
    let wall = WallSlope::new(surface([2, 2], |i| if i == [0, 1] { q(12, 5) } else { q(0, 1) })).unwrap();
    let a3 = a3_from_wall(&wall, &nu).unwrap();
    assert_eq!(a3.at(&[0, 0]), &q(1, 1));
    assert_eq!(a3.data().iter().filter(|v| **v != q(0, 1)).count(), 1);
    let steady = WallSlope::new(surface([2, 2], |i| if i[1] == 0 { q(3, 1) } else { q(0, 1) })).unwrap();
    assert!(a3_from_wall(&steady, &nu).unwrap().is_zero());
}

#[test]
fn b_from_a_relation() {
    let axes = SeriesK::<Rational>::axis_labels(&AXES);
    let a = SeriesK::from_fn(axes, vec![3, 3, 2], |i| if i[1] == 0 { q(0, 1) } else { q((i[0] + 2 * i[1] + i[2]) as i64, 3) });
    let b = b_from_a(&a).unwrap();
    assert_eq!(b.caps(), &[2, 4, 2]);
    for i in 0..=2 {
        for k in 0..=2 {
            assert_eq!(b.at(&[i, 0, k]), &q(0, 1));
            assert_eq!(b.at(&[i, 1, k]), &q(0, 1));
            assert_eq!(b.at(&[i, 2, k]), &(q(-((i + 1) as i64), 2) * a.at(&[i + 1, 1, k])));
        }
    }
    assert!(b_from_a(&a.map(|_| q(0, 1))).unwrap().is_zero());
}

#[test]
fn trivial_constructions_are_zero() {
    let caps = [2, 6, 2];
    let need = level_demand(caps).unwrap();
    let zero_wall = WallSlope::new(surface(need.wall, |_| q(0, 1))).unwrap();
    for c in [0, 3] {
        let u = ExternalFlow::new(surface(need.external, |i| if i == [0, 0] { q(c, 1) } else { q(0, 1) })).unwrap();
        let bl = construct(&u, &zero_wall, q(1, 2), q(1, 1), caps).unwrap();
        assert!(bl.a.is_zero() && bl.b.is_zero());
        assert_eq!(verify(&bl, &u).unwrap().verdict(), Verdict::Pass);
    }
}

#[test]
fn randomized_constructions_have_exact_zero_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2 {
        let caps = [3, 8, 3];
        let (u, w) = random_inputs(&mut rng, caps);
        let bl = construct(&u, &w, q(rng.gen_range(1..=5), rng.gen_range(1..=5)), q(1, 1), caps).unwrap();
        let report = verify(&bl, &u).unwrap();
        assert_eq!(report.verdict(), Verdict::Pass);
        assert!(report.momentum.exact_zero && report.continuity.exact_zero);
        assert_eq!(report.momentum.trustworthy_order.bounds(), vec![Some(2), Some(6), Some(2)]);
        // no slip
        for i in 0..=3 {
            for k in 0..=3 {
                assert_eq!(bl.a.at(&[i, 0, k]), &q(0, 1));
                assert_eq!(bl.b.at(&[i, 0, k]), &q(0, 1));
                assert_eq!(bl.b.at(&[i, 1, k]), &q(0, 1));
            }
        }
        assert_eq!(bl.a.eval(&[q(1, 3), q(0, 1), q(-2, 7)]), q(0, 1));
    }
}

#[test]
fn perturbed_coefficient_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let caps = [2, 6, 2];
    let (u, w) = random_inputs(&mut rng, caps);
    let mut bl = construct(&u, &w, q(1, 2), q(1, 1), caps).unwrap();
    let v = bl.a.at(&[1, 4, 1]).clone() + q(1, 1000);
    bl.a.set(&[1, 4, 1], v).unwrap();
    assert_eq!(verify(&bl, &u).unwrap().momentum.verdict(), Verdict::Fail);
}

/// Eq. (46) coefficient extraction through the engine: with level 4 set to
/// zero, the `y^2` residual coefficient equals `12 nu A_{i,4,k}`.
#[test]
fn level_four_matches_engine_extraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let caps = [2, 4, 2];
    let (u, w) = random_inputs(&mut rng, caps);
    let nu = q(3, 7);
    let bl = construct(&u, &w, nu.clone(), q(1, 1), caps).unwrap();
    let mut a = bl.a.clone();
    for idx in a.indices().collect::<Vec<_>>() {
        if idx[1] == 4 {
            a.set(&idx, q(0, 1)).unwrap();
        }
    }
    let mut params = BTreeMap::new();
    params.insert(NU.to_string(), nu.clone());
    let stripped = BoundaryLayerSeries { a, ..bl.clone() };
    let r = residual::evaluate(&builtins::prandtl(), &params, &bindings(&stripped, &u)).unwrap();
    let res = r.residual.unwrap();
    for i in 0..=1 {
        for k in 0..=1 {
            let expected = res.at(&[i, 2, k]).clone() / (nu.clone() * q(12, 1));
            assert_eq!(bl.a.at(&[i, 4, k]), &expected, "({i}, 4, {k})");
        }
    }
}

/// Literal transcription of the `A_{i,j'+2,k}` form before re-indexing.
fn a_shifted_form(i: usize, jp: usize, k: usize, t: &LevelTable<Rational>, nu: &Rational) -> Rational {
    let g = |i, j, k| t.get(i, j, k).unwrap();
    let mut acc = g(i, jp, k + 1) * q(k as i64 + 1, 1);
    for p in 0..=i {
        for qq in 1..jp {
            for r in 0..=k {
                acc += q((i - p + 1) as i64, 1) * g(p, qq, r) * g(i - p + 1, jp - qq, k - r);
            }
        }
        for qq in 2..=jp {
            for r in 0..=k {
                acc -= q(((p + 1) * (jp - qq + 1)) as i64, qq as i64) * g(p + 1, qq - 1, r) * g(i - p, jp - qq + 1, k - r);
            }
        }
    }
    acc / (nu.clone() * q(((jp + 1) * (jp + 2)) as i64, 1))
}

/// The same before substituting `B` through continuity.
fn a_with_b(i: usize, jp: usize, k: usize, t: &LevelTable<Rational>, b: &SeriesK<Rational>, nu: &Rational) -> Rational {
    let g = |i, j, k| t.get(i, j, k).unwrap();
    let mut acc = g(i, jp, k + 1) * q(k as i64 + 1, 1);
    for p in 0..=i {
        for qq in 1..jp {
            for r in 0..=k {
                acc += q((i - p + 1) as i64, 1) * g(p, qq, r) * g(i - p + 1, jp - qq, k - r);
            }
        }
        for qq in 1..=jp {
            for r in 0..=k {
                acc += b.at(&[p, qq, r]).clone() * g(i - p, jp - qq + 1, k - r) * q((jp - qq + 1) as i64, 1);
            }
        }
    }
    acc / (nu.clone() * q(((jp + 1) * (jp + 2)) as i64, 1))
}

#[test]
fn recurrence_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let nu = q(2, 3);
    let caps = [3, 6, 3];
    let levels: Vec<SeriesK<Rational>> = (0..7).map(|_| surface([5, 5], |_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3)))).collect();
    let table = LevelTable::from_levels(levels);
    let axes = SeriesK::<Rational>::axis_labels(&AXES);
    let wide = SeriesK::from_fn(axes, vec![4, 6, 4], |i| table.get(i[0], i[1], i[2]).unwrap());
    let b = b_from_a(&wide).unwrap();
    for j in 4..=caps[1] {
        for i in 0..=2 {
            for k in 0..=2 {
                let general = a_general(i, j, k, &table, &nu).unwrap();
                assert_eq!(general, a_shifted_form(i, j - 2, k, &table, &nu));
                assert_eq!(general, a_with_b(i, j - 2, k, &table, &b, &nu));
            }
        }
    }
    let empty = LevelTable::from_levels(vec![surface([0, 0], |_| q(0, 1))]);
    assert!(matches!(a_general(0, 4, 0, &empty, &nu), Err(PrandtlError::MissingCoefficient { .. })));
    let zeros = LevelTable::from_levels((0..3).map(|_| surface([3, 3], |_| q(0, 1))).collect());
    assert_eq!(a_general(1, 4, 1, &zeros, &nu).unwrap(), q(0, 1));
}

#[test]
fn time_erosion_staircase() {
    for kw in 2..6 {
        let ext = level_extents([6, kw], [7, kw + 1], 9);
        for (n, e) in ext.iter().enumerate() {
            let j = n + 1;
            assert_eq!(e[1], kw as i64 - ((j as i64 - 1) / 2), "level {j}");
        }
    }
}

#[test]
fn demand_and_extents_are_consistent() {
    for caps in [[0, 1, 0], [1, 3, 1], [3, 8, 3], [2, 5, 4], [4, 2, 0]] {
        let need = level_demand(caps).unwrap();
        let ext = level_extents(need.wall, need.external, caps[1]);
        for (d, e) in need.levels.iter().zip(&ext) {
            assert!(e[0] >= d[0] as i64 && e[1] >= d[1] as i64, "{caps:?}: {d:?} vs {e:?}");
        }
    }
}

#[test]
fn short_inputs_report_required_caps() {
    let caps = [2, 6, 2];
    let need = level_demand(caps).unwrap();
    let w = WallSlope::new(surface(need.wall, |_| q(1, 1))).unwrap();
    let short = ExternalFlow::new(surface([need.external[0] - 1, need.external[1]], |_| q(1, 1))).unwrap();
    match construct(&short, &w, q(1, 1), q(1, 1), caps) {
        Err(PrandtlError::CapsInsufficient { required_external, .. }) => assert_eq!(required_external, need.external),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(construct(&short, &w, q(1, 1), q(1, 1), [2, 0, 2]), Err(PrandtlError::EmptyProfile));
}

fn float_case(j: usize) -> (BoundaryLayerSeries<f64>, ExternalFlow<f64>) {
    let caps = [2, j, 2];
    let need = level_demand(caps).unwrap();
    let axes = SeriesK::<f64>::axis_labels(&SURFACE_AXES);
    let u = SeriesK::from_fn(axes.clone(), need.external.to_vec(), |i| match (i[0], i[1]) {
        (0, 0) => 1.0,
        (1, 0) => 0.5,
        (0, 1) => -0.25,
        _ => 0.0,
    });
    let w = SeriesK::from_fn(axes, need.wall.to_vec(), |i| match (i[0], i[1]) {
        (0, 0) => 0.8,
        (1, 0) => -0.3,
        (0, 1) => 0.2,
        _ => 0.0,
    });
    let u = ExternalFlow::new(u).unwrap();
    let bl = construct(&u, &WallSlope::new(w).unwrap(), 0.5, 1.0, caps).unwrap();
    (bl, u)
}

#[test]
fn residual_shrinks_as_the_profile_lengthens() {
    let sups: Vec<f64> = [4, 6, 8]
        .iter()
        .map(|&j| {
            let (bl, u) = float_case(j);
            truncation_residual_sup(&bl, &u, [0.2, 0.5, 0.2], 5).unwrap()
        })
        .collect();
    assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
}

#[test]
fn shear_profile_and_brackets() {
    let (bl, _) = float_case(4);
    let shear = wall_shear_profile(&bl);
    assert_eq!(shear.caps(), &[2, 2]);
    assert_eq!(shear.at(&[1, 0]), &-0.3);
    assert_eq!(shear.at(&[0, 1]), &0.2);
    // 0.8 - 0.3 x vanishes at x = 8/3 when t = 0.
    let xs: Vec<f64> = (0..=10).map(|n| n as f64 * 0.5).collect();
    let br = shear_sign_changes(&shear, 0.0, &xs);
    assert_eq!(br.len(), 1);
    assert_eq!((br[0].lo, br[0].hi), (2.5, 3.0));
    assert!((br[0].root - 8.0 / 3.0).abs() < 1e-12);
    let zero = bl.a.map(|_| 0.0);
    let still = BoundaryLayerSeries { a: zero, ..bl };
    assert!(wall_shear_profile(&still).is_zero());
}

#[test]
fn matcher_reduces_the_mismatch() {
    let caps = [1, 4, 1];
    let need = level_demand(caps).unwrap();
    let axes = SeriesK::<f64>::axis_labels(&SURFACE_AXES);
    let u = ExternalFlow::new(SeriesK::from_fn(axes.clone(), need.external.to_vec(), |i| if i == [0, 0] { 1.0 } else if i == [1, 0] { 0.2 } else { 0.0 })).unwrap();
    let start = WallSlope::new(SeriesK::zeros(axes, vec![0, 0])).unwrap();
    let opts = MatchOptions::new(0.5, vec![0.0, 0.1, 0.2], vec![0.0, 0.1]);
    let initial = {
        let bl = construct(&u, &WallSlope::new(start.series().zero_extend(&need.wall)).unwrap(), 1.0, 1.0, caps).unwrap();
        let mut s = 0.0;
        for &x in &opts.xs {
            for &t in &opts.ts {
                s += (bl.a.eval(&[x, 0.5, t]) - u.series().eval(&[x, t])).powi(2);
            }
        }
        (s / 6.0).sqrt()
    };
    let fit = match_wall_slope(&u, &start, 1.0, caps, &opts).unwrap();
    assert!(fit.rms_mismatch < 0.1 * initial, "{} vs {initial}", fit.rms_mismatch);
}
