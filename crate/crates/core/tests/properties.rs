//! Property tests over seeded random instances.

use helperrate::entropy::{
    classical_conditional, classical_mutual, entropy_bits, holevo, shannon, von_neumann, Distribution,
};
use helperrate::linalg::random::{
    random_density, random_distribution, random_hermitian, random_povm, random_unitary,
};
use helperrate::linalg::{conjugate_std, eig_hermitian, kron, partial_trace, psd_sqrt, purify};
use helperrate::measurement::{induced_joint, rate_point_qhelper};
use helperrate::oracles::{grid_search_chelper, grid_search_qubit_povm, GridSpec};
use helperrate::regions::{
    accessible_information, rate_point_chelper, trace_boundary_chelper, trace_boundary_qhelper,
    SweepConfig,
};
use helperrate::sources::catalog::{diagonal_pair, zero_plus};
use helperrate::{CQSource, ClassicalJoint, ComplexMatrix, DensityMatrix, Povm, RatePoint, TestChannel, Witness};
use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

fn random_cq(d: usize, n: usize, seed: u64) -> CQSource {
    let states = (0..n)
        .map(|k| random_density(d, seed.wrapping_mul(31).wrapping_add(k as u64)).unwrap())
        .collect();
    CQSource::new(random_distribution(n, seed ^ 0x5eed), states).unwrap()
}

fn random_joint(nx: usize, ny: usize, seed: u64) -> ClassicalJoint {
    ClassicalJoint::new(nx, ny, random_distribution(nx * ny, seed)).unwrap()
}

fn diag_embedding(joint: &[f64]) -> DensityMatrix {
    DensityMatrix::from_diag(joint).unwrap()
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), d in 2usize..=16) {
        let m = random_hermitian(d, seed);
        let e = eig_hermitian(&m).unwrap();
        let back = e.apply(|x| x);
        prop_assert!(back.max_abs_diff(&m) <= 1e-9);
    }

    #[test]
    fn subadditivity(seed in any::<u64>(), da in 2usize..=3, db in 2usize..=3) {
        let rho = random_density(da * db, seed).unwrap();
        let a = DensityMatrix::new(partial_trace(rho.matrix(), &[da, db], &[0]).unwrap()).unwrap();
        let b = DensityMatrix::new(partial_trace(rho.matrix(), &[da, db], &[1]).unwrap()).unwrap();
        let (hab, ha, hb) = (von_neumann(&rho).unwrap(), von_neumann(&a).unwrap(), von_neumann(&b).unwrap());
        prop_assert!(hab <= ha + hb + 1e-9);
    }
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn psd_sqrt_squares_back(seed in any::<u64>(), d in 2usize..=8) {
        let m = random_density(d, seed).unwrap().into_matrix();
        let s = psd_sqrt(&m).unwrap();
        prop_assert!((&s * &s).max_abs_diff(&m) <= 1e-8);
    }

    #[test]
    fn psd_sqrt_fixes_projectors(seed in any::<u64>(), d in 2usize..=6, rank in 1usize..=5) {
        let u = random_unitary(d, seed).unwrap();
        let rank = rank.min(d);
        let mut p = ComplexMatrix::square_zeros(d);
        for k in 0..rank {
            p.add_scaled(&ComplexMatrix::outer(&u.column(k)), 1.0);
        }
        prop_assert!(psd_sqrt(&p).unwrap().max_abs_diff(&p) <= 1e-8);
    }

    #[test]
    fn partial_trace_order_is_irrelevant(seed in any::<u64>()) {
        let dims = [2, 3, 2];
        let rho = random_density(12, seed).unwrap().into_matrix();
        let a = partial_trace(&partial_trace(&rho, &dims, &[0, 1]).unwrap(), &[2, 3], &[1]).unwrap();
        let b = partial_trace(&partial_trace(&rho, &dims, &[1, 2]).unwrap(), &[3, 2], &[0]).unwrap();
        let direct = partial_trace(&rho, &dims, &[1]).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-10);
        prop_assert!(a.max_abs_diff(&direct) <= 1e-10);
    }

    #[test]
    fn conjugation_is_an_involution(seed in any::<u64>(), d in 1usize..=8) {
        let m = random_hermitian(d, seed);
        prop_assert_eq!(conjugate_std(&conjugate_std(&m)), m);
    }

    #[test]
    fn purification_round_trips(seed in any::<u64>(), d in 1usize..=8) {
        let rho = random_density(d, seed).unwrap();
        let psi = purify(rho.matrix()).unwrap();
        prop_assert!(psi.reduced(&[0]).unwrap().max_abs_diff(rho.matrix()) <= 1e-9);
    }

    #[test]
    fn shannon_matches_diagonal_entropy(seed in any::<u64>(), n in 1usize..=12) {
        let p = random_distribution(n, seed);
        let h = shannon(&Distribution::new(p.clone()).unwrap());
        prop_assert!((h - von_neumann(&DensityMatrix::from_diag(&p).unwrap()).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn chain_rule_on_embedded_joints(seed in any::<u64>(), nx in 1usize..=4, nu in 1usize..=4) {
        let j = random_distribution(nx * nu, seed);
        let rho = diag_embedding(&j);
        let hxu = von_neumann(&rho).unwrap();
        let u = partial_trace(rho.matrix(), &[nx, nu], &[1]).unwrap();
        let hu = von_neumann(&DensityMatrix::new(u).unwrap()).unwrap();
        let px: Vec<f64> = (0..nx).map(|x| (0..nu).map(|k| j[x * nu + k]).sum()).collect();
        let cond = classical_conditional(&j, nx, nu);
        prop_assert!((cond - (hxu - hu)).abs() <= 1e-9);
        prop_assert!((cond + classical_mutual(&j, nx, nu) - entropy_bits(&px)).abs() <= 1e-9);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 2usize..=6) {
        let rho = random_density(d, seed).unwrap();
        let u = random_unitary(d, seed ^ 1).unwrap();
        let rotated = DensityMatrix::new((&(&u * rho.matrix()) * &u.adjoint()).hermitian_part()).unwrap();
        let conj = DensityMatrix::new(conjugate_std(rho.matrix())).unwrap();
        let h = von_neumann(&rho).unwrap();
        prop_assert!((von_neumann(&rotated).unwrap() - h).abs() <= 1e-9);
        prop_assert!((von_neumann(&conj).unwrap() - h).abs() <= 1e-9);
    }

    #[test]
    fn helper_marginal_is_affine(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let src = random_cq(2, 3, seed);
        let q = random_distribution(3, seed ^ 7);
        let mix: Vec<f64> = src.p().iter().zip(&q).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let at = |p: Vec<f64>| CQSource::new(p, src.states().to_vec()).unwrap().helper_marginal().into_matrix();
        let mut expect = at(src.p().to_vec()).scale(t);
        expect.add_scaled(&at(q), 1.0 - t);
        prop_assert!(at(mix).max_abs_diff(&expect) <= 1e-12);
    }

    #[test]
    fn commuting_reduction_preserves_marginals(seed in any::<u64>(), d in 2usize..=3, n in 1usize..=3) {
        // rotate random diagonal states into a shared random basis
        let u = random_unitary(d, seed).unwrap();
        let states: Vec<DensityMatrix> = (0..n)
            .map(|k| {
                let diag = ComplexMatrix::from_diag(&random_distribution(d, seed ^ (k as u64 + 3)));
                DensityMatrix::new((&(&u * &diag) * &u.adjoint()).hermitian_part()).unwrap()
            })
            .collect();
        let src = CQSource::new(random_distribution(n, seed ^ 99), states).unwrap();
        let j = src.commuting_reduction().expect("shared eigenbasis");
        for (x, px) in j.x_marginal().iter().zip(src.p()) {
            prop_assert!((px - x).abs() <= 1e-10);
        }
        let hb = von_neumann(&src.helper_marginal()).unwrap();
        prop_assert!((entropy_bits(&j.y_marginal()) - hb).abs() <= 1e-9);
    }

    #[test]
    fn trivial_povm_reveals_nothing(seed in any::<u64>(), d in 2usize..=3, outcomes in 1usize..=4) {
        let src = random_cq(d, 2, seed);
        let p = rate_point_qhelper(&src, &Povm::uninformative(d, outcomes)).unwrap();
        prop_assert!(p.r2.abs() <= 1e-10);
    }

    #[test]
    fn holevo_caps_induced_information(seed in any::<u64>(), d in 2usize..=3, k in 2usize..=6) {
        let src = random_cq(d, 3, seed);
        let povm = random_povm(d, k, seed ^ 42).unwrap();
        let j = induced_joint(&src, &povm).unwrap().joint;
        let i = classical_mutual(j.probs(), j.nx(), j.ny());
        prop_assert!(i <= holevo(&src.ensemble()).unwrap() + 1e-9);
    }
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn accessible_information_sandwich(seed in any::<u64>(), n in 2usize..=3) {
        let src = random_cq(2, n, seed);
        let j = induced_joint(&src, &Povm::computational(2)).unwrap().joint;
        let computational = classical_mutual(j.probs(), j.nx(), j.ny());
        let (i_acc, _) = accessible_information(&src, 2, seed).unwrap();
        let chi = holevo(&src.ensemble()).unwrap();
        prop_assert!(computational <= i_acc + 1e-9, "{} > {}", computational, i_acc);
        prop_assert!(i_acc <= chi + 1e-9, "{} > {}", i_acc, chi);
    }
}

fn quick_cfg(seed: u64) -> SweepConfig {
    let mut cfg = SweepConfig {
        restarts: 2,
        mu_grid: vec![0.0, 0.2, 0.7, 1.5, 4.0, 1e6],
        refine_rounds: 1,
        ..SweepConfig::with_seed(seed)
    };
    cfg.search.evaluations = 300;
    cfg
}

fn assert_monotone(samples: &[RatePoint]) {
    let mut by_mu: Vec<&RatePoint> = samples.iter().collect();
    by_mu.sort_by(|a, b| a.mu.partial_cmp(&b.mu).unwrap());
    for w in by_mu.windows(2) {
        assert!(
            w[1].r1 <= w[0].r1 + 1e-9,
            "R1 rose from {} to {} between mu {:?} and {:?}",
            w[0].r1,
            w[1].r1,
            w[0].mu,
            w[1].mu
        );
    }
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn chelper_points_recompute_and_scalarization_is_monotone(seed in any::<u64>(), nx in 2usize..=3, ny in 2usize..=3) {
        let joint = random_joint(nx, ny, seed);
        let curve = trace_boundary_chelper(&joint, &quick_cfg(seed)).unwrap();
        for p in curve.samples.iter().chain(&curve.points) {
            let Witness::TestChannel(t) = &p.witness else { panic!("wrong witness") };
            let q = rate_point_chelper(&joint, t).unwrap();
            prop_assert!((q.r1 - p.r1).abs() <= 1e-9 && (q.r2 - p.r2).abs() <= 1e-9);
        }
        assert_monotone(&curve.samples);
    }

    #[test]
    fn qhelper_points_recompute_and_keep_the_endpoint(seed in any::<u64>()) {
        let src = random_cq(2, 2, seed);
        let curve = trace_boundary_qhelper(&src, &quick_cfg(seed)).unwrap();
        for p in curve.samples.iter().chain(&curve.points) {
            let Witness::Povm(m) = &p.witness else { panic!("wrong witness") };
            let q = rate_point_qhelper(&src, m).unwrap();
            prop_assert!((q.r1 - p.r1).abs() <= 1e-9 && (q.r2 - p.r2).abs() <= 1e-9);
        }
        let hx = entropy_bits(src.p());
        prop_assert!(curve.points.iter().any(|p| (p.r1 - hx).abs() <= 1e-6 && p.r2.abs() <= 1e-6));
        assert_monotone(&curve.samples);
    }
}

#[test]
fn commuting_diagonal_povm_matches_classical() {
    let src = diagonal_pair();
    let joint = src.commuting_reduction().unwrap();
    for seed in 0..20u64 {
        // a diagonal POVM is a test channel on the shared eigenbasis
        let k = 2 + (seed as usize % 3);
        let cols: Vec<Vec<f64>> = (0..2).map(|y| random_distribution(k, seed * 2 + y)).collect();
        let els: Vec<ComplexMatrix> =
            (0..k).map(|u| ComplexMatrix::from_diag(&[cols[0][u], cols[1][u]])).collect();
        let probs: Vec<f64> = (0..k).flat_map(|u| [cols[0][u], cols[1][u]]).collect();
        let q = rate_point_qhelper(&src, &Povm::new(els).unwrap()).unwrap();
        let c = rate_point_chelper(&joint, &TestChannel::new(k, 2, probs).unwrap()).unwrap();
        assert!((q.r1 - c.r1).abs() <= 1e-9 && (q.r2 - c.r2).abs() <= 1e-9, "{q:?} vs {c:?}");
    }
}

#[test]
fn oracle_witnesses_recompute_exactly() {
    let src = zero_plus();
    let o = grid_search_qubit_povm(&src, &GridSpec::default()).unwrap();
    for p in &o.points {
        let Witness::Povm(m) = &p.witness else { panic!("wrong witness") };
        let q = rate_point_qhelper(&src, m).unwrap();
        assert!((q.r1 - p.r1).abs() <= 1e-12 && (q.r2 - p.r2).abs() <= 1e-12);
    }
    let joint = ClassicalJoint::dsbs(0.1);
    let o = grid_search_chelper(&joint, &GridSpec::default()).unwrap();
    for p in &o.points {
        let Witness::TestChannel(t) = &p.witness else { panic!("wrong witness") };
        let q = rate_point_chelper(&joint, t).unwrap();
        assert!((q.r1 - p.r1).abs() <= 1e-12 && (q.r2 - p.r2).abs() <= 1e-12);
    }
}

#[test]
fn kron_of_products_is_uncorrelated() {
    let a = random_density(2, 1).unwrap();
    let b = random_density(3, 2).unwrap();
    let ab = DensityMatrix::new(kron(a.matrix(), b.matrix()).unwrap()).unwrap();
    let i = helperrate::entropy::mutual_info(&ab, &[2, 3], &[0]).unwrap();
    assert!(i.abs() <= 1e-9);
}
