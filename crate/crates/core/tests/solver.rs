use pde_thickness::analytic;
use pde_thickness::geometry::{build_grid, fitted_grid};
use pde_thickness::shape::{PeriodicBoundary, ShapeSpec};
use pde_thickness::solver::{self, CsrMatrix, SparseSystem};
use pde_thickness::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn wavy_band() -> ShapeSpec {
    ShapeSpec::band_general(
        0.0,
        1.0,
        PeriodicBoundary::cosine(1.0, -0.5, 0.1),
        PeriodicBoundary::constant(1.0, 1.5),
    )
    .unwrap()
}

fn systems() -> Vec<(&'static str, SparseSystem)> {
    let a = 0.04;
    let shapes = [
        ("interval-general", ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap()),
        ("interval-whole", ShapeSpec::interval_whole(0.0, 1.0).unwrap()),
        ("annulus-whole", ShapeSpec::annulus_whole(1.0, 2.0).unwrap()),
        ("band-whole", ShapeSpec::band_whole(0.0, 1.0, 0.5).unwrap()),
        ("band-general", wavy_band()),
        ("annulus-general", ShapeSpec::annulus_general(1.0, 2.0, 2.5).unwrap()),
    ];
    shapes
        .into_iter()
        .map(|(name, s)| (name, solver::assemble(&fitted_grid(&s, a, 16).unwrap(), &s, a).unwrap()))
        .collect()
}

#[test]
fn assembled_systems_are_symmetric_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, sys) in systems() {
        assert_eq!(sys.matrix.asymmetry(), 0.0, "{name}");
        assert!(sys.matrix.triplets().all(|(i, j, _)| i < sys.n && j < sys.n));
        for _ in 0..10 {
            let x: Vec<f64> = (0..sys.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(sys.matrix.quadratic_form(&x) > 0.0, "{name}");
        }
    }
}

#[test]
fn interval_rhs_is_two_point_functional() {
    let g = build_grid(&[(-1.0, 2.0)], &[12], false).unwrap();
    let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
    let sys = solver::assemble_1d(&g, &s, 0.04).unwrap();
    let nz: Vec<(usize, f64)> = sys.rhs.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    assert_eq!(nz, vec![(4, -1.0), (8, 1.0)]);
    let coarse = build_grid(&[(-1.0, 2.0)], &[6], false).unwrap();
    assert!(matches!(solver::assemble_1d(&coarse, &s, 0.04), Err(Error::UnderResolved(_))));
}

#[test]
fn radial_rhs_is_weighted_by_radius() {
    let s = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
    let g = fitted_grid(&s, 0.04, 8).unwrap();
    let sys = solver::assemble_radial(&g, &s, 0.04).unwrap();
    let nz: Vec<(usize, f64)> = sys.rhs.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    let (il, ir) = (g.nodal_index_x(1.0).unwrap(), g.nodal_index_x(2.0).unwrap());
    assert_eq!(nz, vec![(il, -1.0), (ir, 2.0)]);
}

#[test]
fn plane_rhs_symmetries() {
    let s = ShapeSpec::band_whole(0.0, 1.0, 0.5).unwrap();
    let g = fitted_grid(&s, 0.04, 16).unwrap();
    let sys = solver::assemble_2d(&g, &s, 0.04).unwrap();
    let nn = g.node_count();
    assert!(sys.rhs[..nn].iter().all(|v| *v == 0.0));

    let s = ShapeSpec::annulus_general(1.0, 2.0, 2.5).unwrap();
    let g = fitted_grid(&s, 0.04, 16).unwrap();
    let sys = solver::assemble_2d(&g, &s, 0.04).unwrap();
    let nn = g.node_count();
    let (sx, sy): (f64, f64) = (sys.rhs[..nn].iter().sum(), sys.rhs[nn..].iter().sum());
    assert!(sx.abs() < 1e-12 && sy.abs() < 1e-12);
}

#[test]
fn non_nodal_interface_is_rejected() {
    let g = build_grid(&[(-1.0, 2.0)], &[7], false).unwrap();
    let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
    assert!(matches!(solver::assemble_1d(&g, &s, 0.04), Err(Error::NonNodalInterface { .. })));
}

#[test]
fn coverage_is_checked() {
    let g = build_grid(&[(0.0, 1.0)], &[8], false).unwrap();
    let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
    assert!(solver::assemble_1d(&g, &s, 0.04).is_err());
}

#[test]
fn solutions_vanish_on_dirichlet_nodes_and_are_deterministic() {
    for (name, sys) in systems() {
        let f1 = solver::solve_spd(&sys, 1e-10).unwrap();
        let f2 = solver::solve_spd(&sys, 1e-10).unwrap();
        assert_eq!(f1.components, f2.components, "{name}");
        assert_eq!(f1.outcome.iterations, f2.outcome.iterations);
        assert!(f1.outcome.relative_residual <= 1e-10);
        let nn = f1.grid.node_count();
        for (c, comp) in f1.components.iter().enumerate() {
            for (k, v) in comp.iter().enumerate() {
                assert!(v.is_finite());
                if sys.dirichlet_mask[c * nn + k] {
                    assert_eq!(*v, 0.0, "{name}");
                }
            }
        }
    }
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let (_, sys) = systems().swap_remove(4);
    let r = solver::solve_spd_capped(&sys, 1e-12, 3);
    assert!(matches!(r, Err(Error::NotConverged { iterations: 3, .. })));
}

#[test]
fn interval_solve_converges_at_second_order() {
    let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
    let exact = analytic::solve(&s, 0.04).unwrap();
    let err = |cells: usize| {
        let g = fitted_grid(&s, 0.04, cells).unwrap();
        let f = solver::solve_spd(&solver::assemble_1d(&g, &s, 0.04).unwrap(), 1e-12).unwrap();
        (0..g.node_count())
            .map(|k| (f.components[0][k] - exact.profile(g.node_coord(k, 0)[0]).unwrap()).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(64), err(128));
    let order = (e1 / e2).log2();
    assert!((1.8..2.2).contains(&order), "order {order}");
}

#[test]
fn radial_p_star_is_close_to_closed_form() {
    let s = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
    let g = fitted_grid(&s, 0.04, 256).unwrap();
    let f = solver::solve_spd(&solver::assemble_radial(&g, &s, 0.04).unwrap(), 1e-10).unwrap();
    let p = solver::radial_p_star(&f, &s).unwrap();
    let exact = analytic::annulus_whole(1.0, 2.0, 0.04).unwrap().p_star;
    assert!((p - exact).abs() / exact < 1e-4);
}

#[test]
fn probe_respects_boundary_data() {
    let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
    let g = fitted_grid(&s, 0.04, 16).unwrap();
    let mut data = vec![0.0; g.node_count()];
    data[0] = 1.0;
    *data.last_mut().unwrap() = -2.0;
    let f = solver::homogeneous_boundary_probe(&g, &s, 0.04, &[data], 1e-12).unwrap();
    assert_eq!(f.components[0][0], 1.0);
    assert_eq!(*f.components[0].last().unwrap(), -2.0);
    assert!(f.components[0].iter().all(|v| v.abs() <= 2.0 + 1e-10));
    assert!(solver::homogeneous_boundary_probe(&g, &s, 0.04, &[vec![0.0; 3]], 1e-12).is_err());
}

#[test]
fn csr_sums_duplicates_and_dumps_one_based() {
    let m = CsrMatrix::from_triplets(2, vec![(1, 1, 2.0), (0, 0, 1.0), (1, 1, 0.5), (0, 1, -1.0), (1, 0, -1.0)]);
    assert_eq!(m.nnz(), 4);
    assert_eq!(m.get(1, 1), 2.5);
    assert_eq!(m.diagonal(), vec![1.0, 2.5]);
    assert_eq!(m.matvec(&[1.0, 1.0]), vec![0.0, 1.5]);
    assert!(m.dump().starts_with("1 1 1.0000000000000000e0\n1 2 -1.0000000000000000e0\n"));
}

fn tridiagonal(diag: &[f64], off: f64) -> CsrMatrix {
    let n = diag.len();
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, diag[i]));
        if i + 1 < n {
            t.push((i, i + 1, off));
            t.push((i + 1, i, off));
        }
    }
    CsrMatrix::from_triplets(n, t)
}

proptest! {
    #[test]
    fn pcg_solves_diagonally_dominant_systems(
        diag in prop::collection::vec(2.5f64..10.0, 5..200),
        off in -1.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let m = tridiagonal(&diag, off);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<f64> = (0..diag.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (x, out) = solver::pcg(&m, &b, 1e-12, 10 * diag.len()).unwrap();
        let r: Vec<f64> = m.matvec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        prop_assert!(solver::norm(&r) <= 1e-11 * solver::norm(&b).max(1e-300));
        prop_assert!(out.relative_residual <= 1e-12);
    }

    #[test]
    fn dot_is_symmetric_and_matches_naive(v in prop::collection::vec(-1.0f64..1.0, 0..10000)) {
        let w: Vec<f64> = v.iter().rev().copied().collect();
        let naive: f64 = v.iter().zip(&w).map(|(p, q)| p * q).sum();
        prop_assert_eq!(solver::dot(&v, &w), solver::dot(&w, &v));
        prop_assert!((solver::dot(&v, &w) - naive).abs() <= 1e-12 * v.len().max(1) as f64);
    }
}
