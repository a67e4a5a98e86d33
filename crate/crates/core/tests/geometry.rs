use pde_thickness::geometry::{
    build_grid, classify_cells, fitted_grid, geometric_thickness_oracle, oracle_grid, signed_distance, CellLabel,
};
use pde_thickness::io::read_csv;
use pde_thickness::shape::{PeriodicBoundary, ShapeSpec};
use pde_thickness::Error;
use proptest::prelude::*;

#[test]
fn grid_counts() {
    let g = build_grid(&[(0.0, 1.0), (0.0, 2.0)], &[10, 20], false).unwrap();
    assert_eq!((g.node_count(), g.cell_count()), (11 * 21, 200));
    let g = build_grid(&[(0.0, 1.0), (0.0, 2.0)], &[10, 20], true).unwrap();
    assert_eq!(g.node_count(), 10 * 21);
    assert_eq!(g.node_index(10, 3), g.node_index(0, 3));
    let g = build_grid(&[(-1.0, 2.0)], &[12], false).unwrap();
    assert_eq!((g.node_count(), g.h()), (13, 0.25));
}

#[test]
fn grid_errors() {
    assert!(matches!(
        build_grid(&[(0.0, 1.0), (0.0, 2.0)], &[10, 10], false),
        Err(Error::AnisotropicSpacing { .. })
    ));
    assert!(matches!(build_grid(&[(1.0, 1.0)], &[8], false), Err(Error::DegenerateBox(_))));
    assert!(matches!(build_grid(&[(0.0, 1.0)], &[3], false), Err(Error::UnderResolved(_))));
}

#[test]
fn fitted_grids_put_interfaces_on_nodes() {
    let a = 0.01;
    for s in [
        ShapeSpec::interval_whole(0.25, 1.5).unwrap(),
        ShapeSpec::interval_general(0.0, 1.0, -0.6, 2.2).unwrap(),
        ShapeSpec::annulus_whole(0.5, 2.0).unwrap(),
    ] {
        let g = fitted_grid(&s, a, 30).unwrap();
        assert!(g.nodal_index_x(s.f_l()).is_ok() && g.nodal_index_x(s.f_r()).is_ok());
        assert!((g.h() - s.thickness() / 30.0).abs() < 1e-15);
    }
    let s = ShapeSpec::interval_general(0.0, 1.0, -0.7, 2.3).unwrap();
    assert!(matches!(fitted_grid(&s, a, 32), Err(Error::NonNodalInterface { .. })));
    let s = ShapeSpec::band_whole(0.0, 1.0, 1.0).unwrap();
    let g = fitted_grid(&s, a, 16).unwrap();
    assert!(g.periodic_x() && g.nodal_index_y(0.0).is_ok() && g.nodal_index_y(1.0).is_ok());
    assert!((g.extent(0) - 1.0).abs() < 1e-14);
}

#[test]
fn interval_classification() {
    let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
    let g = build_grid(&[(-1.0, 2.0)], &[12], false).unwrap();
    let c = classify_cells(&g, &s).unwrap();
    assert_eq!(c.count(CellLabel::Shape), 4);
    assert_eq!(c.count(CellLabel::Void), 8);
    assert_eq!(c.chi(5), 1.0);
    assert_eq!(c.chi(0), 0.0);
}

#[test]
fn square_annulus_has_outside_cells() {
    let s = ShapeSpec::annulus_general(1.0, 2.0, 2.5).unwrap();
    let g = build_grid(&[(-3.0, 3.0), (-3.0, 3.0)], &[60, 60], false).unwrap();
    let c = classify_cells(&g, &s).unwrap();
    assert_eq!(c.count(CellLabel::Outside), 3600 - 2500);
    let small = build_grid(&[(-2.0, 2.0), (-2.0, 2.0)], &[40, 40], false).unwrap();
    assert!(matches!(classify_cells(&small, &s), Err(Error::Coverage(_))));
}

#[test]
fn oracle_matches_constant_thickness() {
    for (s, cells, tol) in [
        (ShapeSpec::interval_whole(0.0, 1.0).unwrap(), 100, 0.02),
        (ShapeSpec::band_whole(0.0, 1.0, 1.0).unwrap(), 20, 0.1),
        (ShapeSpec::annulus_whole(1.0, 2.0).unwrap(), 50, 0.04),
    ] {
        let g = oracle_grid(&s, cells).unwrap();
        let f = geometric_thickness_oracle(&g, &s).unwrap();
        assert!(f.max_deviation(1.0) <= tol, "{:?}", s.family());
        let again = geometric_thickness_oracle(&g, &s).unwrap();
        assert_eq!(f, again);
    }
}

#[test]
fn oracle_sees_a_wavy_band_thin_out() {
    let s = ShapeSpec::band_general(
        0.0,
        1.0,
        PeriodicBoundary::cosine(1.0, -0.5, 0.1),
        PeriodicBoundary::constant(1.0, 1.5),
    )
    .unwrap();
    let f = geometric_thickness_oracle(&oracle_grid(&s, 40).unwrap(), &s).unwrap();
    assert!(f.max_deviation(1.0) <= 2.0 / 40.0);
}

#[test]
fn oracle_is_capped() {
    let s = ShapeSpec::interval_whole(0.0, 1.0).unwrap();
    let g = build_grid(&[(-1.0, 2.0), (0.0, 3.0)], &[1100, 1100], false).unwrap();
    assert!(matches!(geometric_thickness_oracle(&g, &s), Err(Error::OracleTooLarge(_))));
}

#[test]
fn oracle_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let s = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
    let f = geometric_thickness_oracle(&oracle_grid(&s, 8).unwrap(), &s).unwrap();
    f.write_csv(&path).unwrap();
    let (header, rows) = read_csv(&path).unwrap();
    assert_eq!(header, ["x", "y", "thickness"]);
    let masked: Vec<f64> = f.values.iter().zip(&f.mask).filter(|(_, m)| **m).map(|(v, _)| *v).collect();
    assert_eq!(rows.iter().map(|r| r[2]).collect::<Vec<_>>(), masked);
}

proptest! {
    #[test]
    fn signed_distance_sign_matches_membership(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let ann = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
        let d = signed_distance(&ann, &[x, y]);
        let r = x.hypot(y);
        prop_assert!((d - (r - 1.0).min(2.0 - r)).abs() < 1e-14);
        if d > 1e-12 { prop_assert!(ann.contains(&[x, y])); }
        if d < -1e-12 { prop_assert!(!ann.contains(&[x, y])); }
    }

    #[test]
    fn signed_distance_is_one_lipschitz(x in -2.0f64..3.0, dx in -0.5f64..0.5) {
        let s = ShapeSpec::interval_whole(0.0, 1.0).unwrap();
        let d = (signed_distance(&s, &[x + dx]) - signed_distance(&s, &[x])).abs();
        prop_assert!(d <= dx.abs() + 1e-15);
    }
}
