mod common;

use common::*;
use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use symppt::combx::{binomial, ExactRational};
use symppt::linalg::{eigenvalues, hermitian_defect};
use symppt::symstate::{
    coherent_state, dicke_decomposition, dicke_decomposition_by_label, embed_bipartite, ghz_state, rho_p, DickeBasis,
    PureSymmetricState, SymmetricDensityMatrix,
};
use symppt::Bipartition;

#[test]
fn decomposition_matches_full_tensor_grouping() {
    let mut cases = 0;
    for d in 2..=6u32 {
        for n in 2..=13u32 {
            if (d as usize).pow(n) > 10_000 {
                continue;
            }
            for bip in Bipartition::all(n, d) {
                let overlaps = split_overlaps_full(&bip);
                for (label_idx, label) in DickeBasis::new(n, d).labels().iter().enumerate() {
                    let mut expect: Vec<f64> = overlaps.column(label_idx).iter().copied().collect();
                    for s in dicke_decomposition(&bip, label_idx).unwrap() {
                        let idx = bip.index(s.a, s.b);
                        assert!((s.coefficient.to_f64() - expect[idx]).abs() < 1e-12, "d={d} N={n} {label:?}");
                        expect[idx] = 0.0;
                    }
                    assert!(expect.iter().all(|x| x.abs() < 1e-12), "missing term for d={d} N={n} {label:?}");
                }
                cases += 1;
            }
        }
    }
    assert!(cases > 20);
}

#[test]
fn qutrit_example_label() {
    let bip = Bipartition::new(4, 2, 3).unwrap();
    let splits = dicke_decomposition_by_label(&bip, &[2, 1, 1]).unwrap();
    let basis = product_basis_full(&bip);
    let whole = dicke_full(4, 3, &[2, 1, 1]);
    for s in &splits {
        let expect = dot(&basis[bip.index(s.a, s.b)], &whole);
        assert!((s.coefficient.to_f64() - expect).abs() < 1e-14);
    }
    let total: ExactRational = splits.iter().map(|s| s.coefficient.square()).sum();
    assert_eq!(total, ExactRational::one());
    assert!(dicke_decomposition_by_label(&bip, &[2, 2, 1]).is_err());
}

#[test]
fn decomposition_weights_sum_to_one_exactly() {
    for (n, d) in [(8u32, 2u32), (12, 2), (5, 3), (6, 4), (4, 5)] {
        for bip in Bipartition::all(n, d) {
            for label in 0..DickeBasis::new(n, d).len() {
                let total: ExactRational =
                    dicke_decomposition(&bip, label).unwrap().iter().map(|s| s.coefficient.square()).sum();
                assert_eq!(total, ExactRational::one());
            }
        }
    }
}

#[test]
fn embedding_preserves_trace_hermiticity_and_positivity() {
    let mut rng = rng(7);
    for n in 2..=14u32 {
        for bip in Bipartition::all(n, 2) {
            let rho = random_density(n, 2, &mut rng);
            let op = embed_bipartite(&rho, &bip).unwrap();
            assert!((op.trace() - 1.0).abs() < 1e-12);
            assert!(hermitian_defect(op.matrix()) < 1e-12);
            let lowest = eigenvalues(op.matrix()).unwrap()[0];
            assert!(lowest >= -1e-10, "N={n} k={} min eig {lowest}", bip.k());
        }
    }
}

#[test]
fn embedding_of_pure_state_has_rank_one() {
    let mut rng = rng(11);
    for n in 2..=12u32 {
        for bip in Bipartition::all(n, 2) {
            let psi = random_pure(n, 2, &mut rng);
            let op = embed_bipartite(&psi.projector(), &bip).unwrap();
            let ev = eigenvalues(op.matrix()).unwrap();
            let second = ev[ev.len() - 2];
            assert!(second.abs() <= 1e-10);
            assert!((ev[ev.len() - 1] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn embedding_of_maximally_mixed_state_matches_full_space() {
    // before transposition: project 1_sym/(N+1) from the 2^N space directly
    for (n, k) in [(5u32, 2u32), (4, 1), (6, 3)] {
        let bip = Bipartition::qubits(n, k).unwrap();
        let basis = product_basis_full(&bip);
        let whole: Vec<Vec<f64>> =
            DickeBasis::new(n, 2).labels().iter().map(|l| dicke_full(n as usize, 2, l)).collect();
        let expect = DMatrix::from_fn(basis.len(), basis.len(), |r, s| {
            whole.iter().map(|w| dot(&basis[r], w) * dot(w, &basis[s])).sum::<f64>() / f64::from(n + 1)
        });
        let op = embed_bipartite(&SymmetricDensityMatrix::<f64>::maximally_mixed(n, 2), &bip).unwrap();
        let expect = expect.map(|x| C::new(x, 0.0));
        assert!(max_abs_diff(op.matrix(), &expect) < 1e-14);
    }
}

#[test]
fn embedding_on_qudits() {
    let mut rng = rng(3);
    for (n, d) in [(4u32, 3u32), (3, 4), (5, 3)] {
        for bip in Bipartition::all(n, d) {
            let rho = random_density(n, d, &mut rng);
            let op = embed_bipartite(&rho, &bip).unwrap();
            assert!((op.trace() - 1.0).abs() < 1e-12);
            assert!(eigenvalues(op.matrix()).unwrap()[0] >= -1e-10);
        }
    }
}

#[test]
fn embedding_rejects_mismatched_bipartition() {
    let rho = SymmetricDensityMatrix::<f64>::maximally_mixed(5, 2);
    assert!(embed_bipartite(&rho, &Bipartition::qubits(6, 2).unwrap()).is_err());
    assert!(embed_bipartite(&rho, &Bipartition::new(5, 2, 3).unwrap()).is_err());
}

#[test]
fn coherent_states_follow_the_binomial_distribution() {
    let mut rng = rng(5);
    for _ in 0..200 {
        let n = rand::Rng::random_range(&mut rng, 1..=20u32);
        let theta: f64 = rand::Rng::random_range(&mut rng, -7.0..7.0);
        let phi: f64 = rand::Rng::random_range(&mut rng, -7.0..7.0);
        let psi = coherent_state(n, theta, phi);
        let (s, c) = (theta / 2.0).sin_cos();
        let mut total = 0.0;
        for (alpha, z) in psi.amplitudes().iter().enumerate() {
            let expect = binomial(u64::from(n), alpha as i64).to_f64().unwrap()
                * c.powi(2 * (n as i32 - alpha as i32))
                * s.powi(2 * alpha as i32);
            assert!((z.norm_sqr() - expect).abs() < 1e-12);
            total += z.norm_sqr();
        }
        assert!((total - 1.0).abs() < 1e-12);
        assert!(PureSymmetricState::new(n, 2, psi.amplitudes().to_vec()).is_ok());
    }
}

#[test]
fn rho_p_two_level_spectrum() {
    let p = 30.0 / 31.0;
    let rho = rho_p(5, p, &ghz_state::<f64>(5).unwrap()).unwrap();
    let ev = eigenvalues(rho.matrix()).unwrap();
    for &x in &ev[..5] {
        assert!((x - p / 6.0).abs() < 1e-14);
    }
    assert!((ev[5] - 6.0 / 31.0).abs() < 1e-14);
    assert!((ev[5] - (1.0 - 5.0 * p / 6.0)).abs() < 1e-14);

    let mut rng = rng(9);
    for n in 2..=10u32 {
        let p: f64 = rand::Rng::random_range(&mut rng, 0.0..1.0);
        let rho = rho_p(n, p, &random_pure(n, 2, &mut rng)).unwrap();
        let ev = eigenvalues(rho.matrix()).unwrap();
        let nf = f64::from(n);
        assert!(ev[..n as usize].iter().all(|x| (x - p / (nf + 1.0)).abs() < 1e-13));
        assert!((ev[n as usize] - (1.0 - nf * p / (nf + 1.0))).abs() < 1e-13);
    }
}
